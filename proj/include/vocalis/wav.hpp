// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"

namespace vocalis::wav {

// Raw decoded stream before mono mixdown: interleaved normalized samples.
struct DecodedAudio {
    std::vector<double> interleaved;
    int channels = 0;
    int sample_rate = 0;
};

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace detail

inline DecodedAudio decode(const std::vector<unsigned char>& bytes, const std::string& origin) {
    using namespace detail;
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        raise(errc::unsupported_format, origin + ": not a RIFF/WAVE stream");

    std::uint16_t format_tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    bool have_fmt = false;
    std::size_t data_offset = 0;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        char id[5] = {0};
        std::memcpy(id, bytes.data() + pos, 4);
        std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
        std::size_t body = pos + 8;
        if (std::memcmp(id, "fmt ", 4) == 0 && body + 16 <= bytes.size()) {
            format_tag = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            sample_rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            if (format_tag == 0xFFFE && chunk_size >= 40 && body + 26 <= bytes.size()) {
                // WAVE_FORMAT_EXTENSIBLE: the real format lives in the GUID.
                format_tag = read_u16(bytes.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_offset = body;
            data_size = chunk_size;
            if (data_offset + data_size > bytes.size()) data_size = bytes.size() - data_offset;
            break;
        }
        pos = body + chunk_size + (chunk_size & 1); // chunks are word-aligned
    }

    if (!have_fmt || data_offset == 0)
        raise(errc::unsupported_format, origin + ": missing fmt or data chunk");
    if (channels == 0 || sample_rate == 0)
        raise(errc::unsupported_format, origin + ": invalid channel count or sample rate");

    bool is_float = format_tag == 3;
    if (!is_float && format_tag != 1)
        raise(errc::unsupported_format, origin + ": unsupported WAV format tag " + std::to_string(format_tag));
    if (is_float && bits != 32)
        raise(errc::unsupported_format, origin + ": only 32-bit float WAV is supported");
    if (!is_float && bits != 16 && bits != 24 && bits != 32)
        raise(errc::unsupported_format, origin + ": unsupported PCM bit depth " + std::to_string(bits));

    std::size_t bytes_per_sample = bits / 8;
    std::size_t total = data_size / bytes_per_sample;
    total -= total % channels;
    if (total == 0) raise(errc::empty_audio, origin + ": no audio samples");

    DecodedAudio out;
    out.channels = channels;
    out.sample_rate = static_cast<int>(sample_rate);
    out.interleaved.resize(total);

    const unsigned char* p = bytes.data() + data_offset;
    if (is_float) {
        for (std::size_t i = 0; i < total; ++i) {
            float v;
            std::memcpy(&v, p + i * 4, 4);
            if (!std::isfinite(v)) raise(errc::decode_failure, origin + ": non-finite sample");
            // Float streams may exceed full scale; normalize to the same
            // [-1, 1] contract the integer paths guarantee.
            out.interleaved[i] = std::clamp(static_cast<double>(v), -1.0, 1.0);
        }
    } else if (bits == 16) {
        for (std::size_t i = 0; i < total; ++i) {
            auto v = static_cast<std::int16_t>(read_u16(p + i * 2));
            out.interleaved[i] = static_cast<double>(v) / 32768.0;
        }
    } else if (bits == 24) {
        for (std::size_t i = 0; i < total; ++i) {
            const unsigned char* q = p + i * 3;
            std::int32_t v = q[0] | (q[1] << 8) | (q[2] << 16);
            if (v & 0x800000) v |= ~0xFFFFFF; // sign extend
            out.interleaved[i] = static_cast<double>(v) / 8388608.0;
        }
    } else { // 32-bit PCM
        for (std::size_t i = 0; i < total; ++i) {
            auto v = static_cast<std::int32_t>(read_u32(p + i * 4));
            out.interleaved[i] = static_cast<double>(v) / 2147483648.0;
        }
    }
    return out;
}

inline DecodedAudio decode_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::file_not_found, path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return decode(bytes, path.string());
}

enum class SampleFormat { pcm16, pcm24, pcm32, float32 };

/// Minimal WAV writer. Interleaved input in [-1, 1]; values are clipped to
/// full scale on the way out.
inline void write(const std::filesystem::path& path, const std::vector<double>& interleaved,
                  int channels, int sample_rate, SampleFormat fmt = SampleFormat::pcm16) {
    std::vector<unsigned char> body;
    auto clip = [](double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); };
    int bits = 16;
    std::uint16_t tag = 1;
    switch (fmt) {
        case SampleFormat::pcm16:
            bits = 16;
            body.reserve(interleaved.size() * 2);
            for (double s : interleaved) {
                double v = clip(s) * 32768.0;
                if (v > 32767.0) v = 32767.0;
                auto q = static_cast<std::int16_t>(std::lrint(v));
                body.push_back(static_cast<unsigned char>(q & 0xFF));
                body.push_back(static_cast<unsigned char>((q >> 8) & 0xFF));
            }
            break;
        case SampleFormat::pcm24:
            bits = 24;
            for (double s : interleaved) {
                double v = clip(s) * 8388608.0;
                if (v > 8388607.0) v = 8388607.0;
                auto q = static_cast<std::int32_t>(std::lrint(v));
                body.push_back(static_cast<unsigned char>(q & 0xFF));
                body.push_back(static_cast<unsigned char>((q >> 8) & 0xFF));
                body.push_back(static_cast<unsigned char>((q >> 16) & 0xFF));
            }
            break;
        case SampleFormat::pcm32:
            bits = 32;
            for (double s : interleaved) {
                double v = clip(s) * 2147483648.0;
                if (v > 2147483647.0) v = 2147483647.0;
                auto q = static_cast<std::int32_t>(std::llrint(v));
                for (int b = 0; b < 4; ++b)
                    body.push_back(static_cast<unsigned char>((q >> (8 * b)) & 0xFF));
            }
            break;
        case SampleFormat::float32:
            bits = 32;
            tag = 3;
            for (double s : interleaved) {
                float f = static_cast<float>(s);
                unsigned char buf[4];
                std::memcpy(buf, &f, 4);
                body.insert(body.end(), buf, buf + 4);
            }
            break;
    }

    std::uint32_t byte_rate = static_cast<std::uint32_t>(sample_rate) * channels * (bits / 8);
    std::uint16_t block_align = static_cast<std::uint16_t>(channels * (bits / 8));
    std::uint32_t data_size = static_cast<std::uint32_t>(body.size());
    std::uint32_t riff_size = 36 + data_size;

    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io_error, "cannot open for writing: " + path.string());
    auto put_u32 = [&](std::uint32_t v) {
        for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xFF));
    };
    auto put_u16 = [&](std::uint16_t v) {
        out.put(static_cast<char>(v & 0xFF));
        out.put(static_cast<char>((v >> 8) & 0xFF));
    };
    out.write("RIFF", 4);
    put_u32(riff_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(tag);
    put_u16(static_cast<std::uint16_t>(channels));
    put_u32(static_cast<std::uint32_t>(sample_rate));
    put_u32(byte_rate);
    put_u16(block_align);
    put_u16(static_cast<std::uint16_t>(bits));
    out.write("data", 4);
    put_u32(data_size);
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    if (!out) raise(errc::io_error, "short write: " + path.string());
}

} // namespace vocalis::wav
