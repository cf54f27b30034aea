// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Native FLAC stream decoder covering the streams this library ingests:
// 8/16/24/32-bit PCM, 1-8 channels, constant/verbatim/fixed/LPC subframes,
// RICE and RICE2 residual partitions, and all stereo decorrelation modes.
// Frame CRCs are parsed but not verified.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/wav.hpp"

namespace vocalis::flac {

namespace detail {

class BitReader {
public:
    BitReader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

    bool eof() const { return byte_ >= size_; }
    std::size_t byte_position() const { return byte_; }

    std::uint64_t bits(unsigned count) {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < count; ++i) {
            if (byte_ >= size_) raise(errc::decode_failure, "FLAC: unexpected end of stream");
            v = (v << 1) | ((data_[byte_] >> (7 - bit_)) & 1u);
            if (++bit_ == 8) {
                bit_ = 0;
                ++byte_;
            }
        }
        return v;
    }

    std::int64_t signed_bits(unsigned count) {
        std::uint64_t v = bits(count);
        if (count > 0 && (v & (std::uint64_t{1} << (count - 1))))
            v |= ~((std::uint64_t{1} << count) - 1);
        return static_cast<std::int64_t>(v);
    }

    std::uint64_t unary() {
        std::uint64_t q = 0;
        while (bits(1) == 0) ++q;
        return q;
    }

    void align_to_byte() {
        if (bit_ != 0) {
            bit_ = 0;
            ++byte_;
        }
    }

    void seek_byte(std::size_t pos) {
        byte_ = pos;
        bit_ = 0;
    }

private:
    const unsigned char* data_;
    std::size_t size_;
    std::size_t byte_ = 0;
    unsigned bit_ = 0;
};

struct StreamInfo {
    unsigned sample_rate = 0;
    unsigned channels = 0;
    unsigned bits_per_sample = 0;
    std::uint64_t total_samples = 0;
};

inline std::uint64_t read_utf8_number(BitReader& br) {
    std::uint64_t first = br.bits(8);
    if ((first & 0x80) == 0) return first;
    unsigned extra = 0;
    std::uint64_t mask = 0x40;
    while (first & mask) {
        ++extra;
        mask >>= 1;
    }
    if (extra == 0 || extra > 6) raise(errc::decode_failure, "FLAC: bad UTF-8 coded number");
    std::uint64_t v = first & (mask - 1);
    for (unsigned i = 0; i < extra; ++i) {
        std::uint64_t b = br.bits(8);
        if ((b & 0xC0) != 0x80) raise(errc::decode_failure, "FLAC: bad UTF-8 continuation");
        v = (v << 6) | (b & 0x3F);
    }
    return v;
}

inline void decode_residual(BitReader& br, unsigned block_size, unsigned predictor_order,
                            std::vector<std::int64_t>& out) {
    unsigned method = static_cast<unsigned>(br.bits(2));
    if (method > 1) raise(errc::decode_failure, "FLAC: reserved residual coding method");
    unsigned param_bits = method == 0 ? 4 : 5;
    unsigned escape = method == 0 ? 0xF : 0x1F;
    unsigned partition_order = static_cast<unsigned>(br.bits(4));
    unsigned partitions = 1u << partition_order;
    if (block_size % partitions != 0)
        raise(errc::decode_failure, "FLAC: block size not divisible by partition count");
    unsigned part_len = block_size >> partition_order;
    if (part_len < predictor_order)
        raise(errc::decode_failure, "FLAC: partition shorter than predictor order");

    for (unsigned p = 0; p < partitions; ++p) {
        unsigned count = part_len - (p == 0 ? predictor_order : 0);
        unsigned param = static_cast<unsigned>(br.bits(param_bits));
        if (param == escape) {
            unsigned raw_bits = static_cast<unsigned>(br.bits(5));
            for (unsigned i = 0; i < count; ++i)
                out.push_back(raw_bits == 0 ? 0 : br.signed_bits(raw_bits));
        } else {
            for (unsigned i = 0; i < count; ++i) {
                std::uint64_t quotient = br.unary();
                std::uint64_t remainder = param == 0 ? 0 : br.bits(param);
                std::uint64_t folded = (quotient << param) | remainder;
                out.push_back(static_cast<std::int64_t>(folded >> 1) ^
                              -static_cast<std::int64_t>(folded & 1));
            }
        }
    }
}

// Fixed predictor coefficients for orders 0-4.
inline void restore_fixed(std::vector<std::int64_t>& x, unsigned order) {
    for (std::size_t i = order; i < x.size(); ++i) {
        switch (order) {
            case 0: break;
            case 1: x[i] += x[i - 1]; break;
            case 2: x[i] += 2 * x[i - 1] - x[i - 2]; break;
            case 3: x[i] += 3 * x[i - 1] - 3 * x[i - 2] + x[i - 3]; break;
            case 4: x[i] += 4 * x[i - 1] - 6 * x[i - 2] + 4 * x[i - 3] - x[i - 4]; break;
            default: raise(errc::decode_failure, "FLAC: bad fixed order");
        }
    }
}

inline std::vector<std::int64_t> decode_subframe(BitReader& br, unsigned block_size, unsigned bps) {
    if (br.bits(1) != 0) raise(errc::decode_failure, "FLAC: bad subframe padding bit");
    unsigned type = static_cast<unsigned>(br.bits(6));
    unsigned wasted = 0;
    if (br.bits(1) == 1) wasted = static_cast<unsigned>(br.unary()) + 1;
    unsigned eff_bps = bps - wasted;

    std::vector<std::int64_t> x;
    x.reserve(block_size);

    if (type == 0) { // CONSTANT
        std::int64_t v = br.signed_bits(eff_bps);
        x.assign(block_size, v);
    } else if (type == 1) { // VERBATIM
        for (unsigned i = 0; i < block_size; ++i) x.push_back(br.signed_bits(eff_bps));
    } else if (type >= 8 && type <= 12) { // FIXED
        unsigned order = type - 8;
        for (unsigned i = 0; i < order; ++i) x.push_back(br.signed_bits(eff_bps));
        decode_residual(br, block_size, order, x);
        restore_fixed(x, order);
    } else if (type >= 32) { // LPC
        unsigned order = (type & 31) + 1;
        for (unsigned i = 0; i < order; ++i) x.push_back(br.signed_bits(eff_bps));
        unsigned precision = static_cast<unsigned>(br.bits(4));
        if (precision == 0xF) raise(errc::decode_failure, "FLAC: invalid LPC precision");
        ++precision;
        int shift = static_cast<int>(br.signed_bits(5));
        if (shift < 0) raise(errc::decode_failure, "FLAC: negative LPC shift");
        std::vector<std::int64_t> coeffs(order);
        for (unsigned i = 0; i < order; ++i) coeffs[i] = br.signed_bits(precision);
        decode_residual(br, block_size, order, x);
        for (std::size_t i = order; i < x.size(); ++i) {
            std::int64_t acc = 0;
            for (unsigned j = 0; j < order; ++j) acc += coeffs[j] * x[i - 1 - j];
            x[i] += acc >> shift;
        }
    } else {
        raise(errc::decode_failure, "FLAC: reserved subframe type");
    }

    if (wasted > 0)
        for (auto& v : x) v <<= wasted;
    return x;
}

} // namespace detail

inline wav::DecodedAudio decode(const std::vector<unsigned char>& bytes, const std::string& origin) {
    using namespace detail;
    if (bytes.size() < 42 || std::memcmp(bytes.data(), "fLaC", 4) != 0)
        raise(errc::unsupported_format, origin + ": not a FLAC stream");

    BitReader br(bytes.data(), bytes.size());
    br.seek_byte(4);

    StreamInfo info;
    bool last = false;
    bool have_info = false;
    while (!last) {
        last = br.bits(1) != 0;
        unsigned type = static_cast<unsigned>(br.bits(7));
        unsigned length = static_cast<unsigned>(br.bits(24));
        if (type == 0) {
            br.bits(16); // min block size
            br.bits(16); // max block size
            br.bits(24); // min frame size
            br.bits(24); // max frame size
            info.sample_rate = static_cast<unsigned>(br.bits(20));
            info.channels = static_cast<unsigned>(br.bits(3)) + 1;
            info.bits_per_sample = static_cast<unsigned>(br.bits(5)) + 1;
            info.total_samples = br.bits(36);
            br.seek_byte(br.byte_position() + 16); // md5
            have_info = true;
        } else {
            br.seek_byte(br.byte_position() + length);
        }
    }
    if (!have_info || info.sample_rate == 0)
        raise(errc::unsupported_format, origin + ": missing STREAMINFO");
    if (info.bits_per_sample < 8 || info.bits_per_sample > 32)
        raise(errc::unsupported_format,
              origin + ": unsupported bit depth " + std::to_string(info.bits_per_sample));

    const unsigned channels = info.channels;
    std::vector<std::vector<std::int64_t>> pcm(channels);

    static const unsigned kRateTable[12] = {0,     88200, 176400, 192000, 8000,  16000,
                                            22050, 24000, 32000,  44100,  48000, 96000};

    while (!br.eof()) {
        std::size_t frame_start = br.byte_position();
        if (bytes.size() - frame_start < 2) break;

        unsigned sync = static_cast<unsigned>(br.bits(14));
        if (sync != 0x3FFE)
            raise(errc::decode_failure, origin + ": lost frame sync");
        br.bits(1); // reserved
        br.bits(1); // blocking strategy
        unsigned bs_code = static_cast<unsigned>(br.bits(4));
        unsigned sr_code = static_cast<unsigned>(br.bits(4));
        unsigned ch_code = static_cast<unsigned>(br.bits(4));
        unsigned ss_code = static_cast<unsigned>(br.bits(3));
        br.bits(1); // reserved

        read_utf8_number(br); // frame or first-sample number

        unsigned block_size = 0;
        switch (bs_code) {
            case 0: raise(errc::decode_failure, origin + ": reserved block size code");
            case 1: block_size = 192; break;
            case 6: block_size = static_cast<unsigned>(br.bits(8)) + 1; break;
            case 7: block_size = static_cast<unsigned>(br.bits(16)) + 1; break;
            default:
                block_size = bs_code <= 5 ? 576u << (bs_code - 2) : 256u << (bs_code - 8);
        }

        if (sr_code == 12) br.bits(8);
        else if (sr_code == 13 || sr_code == 14) br.bits(16);
        else if (sr_code == 15) raise(errc::decode_failure, origin + ": invalid sample rate code");
        (void)kRateTable;

        unsigned bps = info.bits_per_sample;
        switch (ss_code) {
            case 0: break;
            case 1: bps = 8; break;
            case 2: bps = 12; break;
            case 4: bps = 16; break;
            case 5: bps = 20; break;
            case 6: bps = 24; break;
            case 7: bps = 32; break;
            default: raise(errc::decode_failure, origin + ": reserved sample size code");
        }

        br.bits(8); // CRC-8 of the header (not verified)

        std::vector<std::vector<std::int64_t>> sub;
        if (ch_code <= 7) {
            unsigned n = ch_code + 1;
            if (n != channels) raise(errc::decode_failure, origin + ": channel count mismatch");
            for (unsigned c = 0; c < n; ++c) sub.push_back(decode_subframe(br, block_size, bps));
        } else if (ch_code <= 10) {
            if (channels != 2) raise(errc::decode_failure, origin + ": stereo mode on non-stereo stream");
            // One of the pair carries the side channel at bps + 1.
            unsigned bps0 = bps + (ch_code == 9 ? 1 : 0);
            unsigned bps1 = bps + (ch_code == 8 || ch_code == 10 ? 1 : 0);
            sub.push_back(decode_subframe(br, block_size, bps0));
            sub.push_back(decode_subframe(br, block_size, bps1));
            for (unsigned i = 0; i < block_size; ++i) {
                std::int64_t a = sub[0][i], b = sub[1][i];
                if (ch_code == 8) { // left/side
                    sub[1][i] = a - b;
                } else if (ch_code == 9) { // side/right
                    sub[0][i] = a + b;
                } else { // mid/side
                    std::int64_t mid = (a << 1) | (b & 1);
                    sub[0][i] = (mid + b) >> 1;
                    sub[1][i] = (mid - b) >> 1;
                }
            }
        } else {
            raise(errc::decode_failure, origin + ": reserved channel assignment");
        }

        br.align_to_byte();
        br.bits(16); // frame CRC-16 (not verified)

        for (unsigned c = 0; c < channels; ++c)
            pcm[c].insert(pcm[c].end(), sub[c].begin(), sub[c].end());

        if (info.total_samples > 0 && pcm[0].size() >= info.total_samples) break;
    }

    std::size_t total = pcm[0].size();
    if (info.total_samples > 0 && total > info.total_samples) total = info.total_samples;
    if (total == 0) raise(errc::empty_audio, origin + ": no audio samples");

    const double scale = static_cast<double>(std::uint64_t{1} << (info.bits_per_sample - 1));
    wav::DecodedAudio out;
    out.channels = static_cast<int>(channels);
    out.sample_rate = static_cast<int>(info.sample_rate);
    out.interleaved.resize(total * channels);
    for (std::size_t i = 0; i < total; ++i)
        for (unsigned c = 0; c < channels; ++c)
            out.interleaved[i * channels + c] = static_cast<double>(pcm[c][i]) / scale;
    return out;
}

inline wav::DecodedAudio decode_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::file_not_found, path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return decode(bytes, path.string());
}

} // namespace vocalis::flac
