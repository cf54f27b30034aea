// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/flac.hpp"
#include "vocalis/resample.hpp"
#include "vocalis/wav.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

inline std::string lowercase_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

inline bool is_audio_extension(const std::filesystem::path& path) {
    std::string ext = lowercase_extension(path);
    return ext == ".wav" || ext == ".flac";
}

/// Decode a WAV or FLAC file to a mono Waveform. Multi-channel inputs are
/// averaged to mono. No resampling happens unless target_sample_rate is set.
inline Waveform load_audio(const std::filesystem::path& path,
                           std::optional<int> target_sample_rate = std::nullopt) {
    if (!std::filesystem::exists(path)) raise(errc::file_not_found, path.string());

    std::string ext = lowercase_extension(path);
    wav::DecodedAudio decoded;
    if (ext == ".flac") {
        decoded = flac::decode_file(path);
    } else if (ext == ".wav") {
        decoded = wav::decode_file(path);
    } else {
        raise(errc::unsupported_format, path.string() + ": unrecognized extension");
    }

    Waveform w;
    w.sample_rate = decoded.sample_rate;
    const auto channels = static_cast<std::size_t>(decoded.channels);
    const std::size_t frames = decoded.interleaved.size() / channels;
    if (frames == 0) raise(errc::empty_audio, path.string());
    w.samples.resize(frames);
    if (channels == 1) {
        w.samples = std::move(decoded.interleaved);
    } else {
        for (std::size_t i = 0; i < frames; ++i) {
            double acc = 0.0;
            for (std::size_t c = 0; c < channels; ++c) acc += decoded.interleaved[i * channels + c];
            w.samples[i] = acc / static_cast<double>(channels);
        }
    }

    if (target_sample_rate && *target_sample_rate != w.sample_rate)
        w = resample(w, *target_sample_rate);
    return w;
}

} // namespace vocalis
