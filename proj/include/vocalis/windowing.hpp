// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/fft.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

enum class WindowKind { hann, hamming, rectangular };

/// Window values of the given length. Hann and Hamming use the symmetric
/// (L-1 denominator) form; rectangular is all ones.
inline std::vector<double> window_values(WindowKind kind, std::size_t length) {
    if (length == 0) raise(errc::bad_parameter, "window length must be positive");
    std::vector<double> w(length, 1.0);
    if (kind == WindowKind::rectangular || length == 1) return w;
    double denom = static_cast<double>(length - 1);
    for (std::size_t n = 0; n < length; ++n) {
        double c = std::cos(2.0 * kPi * static_cast<double>(n) / denom);
        if (kind == WindowKind::hann)
            w[n] = 0.5 * (1.0 - c);
        else
            w[n] = 0.54 - 0.46 * c;
    }
    return w;
}

/// Elementwise product of a frame with the chosen window.
inline std::vector<double> apply_window(std::span<const double> frame, WindowKind kind) {
    if (frame.empty()) raise(errc::bad_parameter, "cannot window an empty frame");
    std::vector<double> out(frame.begin(), frame.end());
    if (kind == WindowKind::rectangular) return out;
    std::vector<double> w = window_values(kind, frame.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[i];
    return out;
}

/// Equal-length sliding windows over a waveform. Frames are contiguous copies;
/// there is no zero padding and any trailing remainder is dropped.
struct FrameSequence {
    std::vector<std::vector<double>> frames;
    int frame_length = 0;
    int hop_length = 0;
    int sample_rate = 0;
};

inline std::size_t frame_count_for(std::size_t n, std::size_t frame_length, std::size_t hop_length) {
    if (n < frame_length) return 0;
    return (n - frame_length) / hop_length + 1;
}

inline FrameSequence frame_signal(const Waveform& w, double frame_length_s, double hop_length_s) {
    if (frame_length_s <= 0.0 || hop_length_s <= 0.0)
        raise(errc::bad_parameter, "frame and hop lengths must be positive");
    auto frame_length = static_cast<std::size_t>(std::lround(frame_length_s * w.sample_rate));
    auto hop_length = static_cast<std::size_t>(std::lround(hop_length_s * w.sample_rate));
    if (frame_length == 0 || hop_length == 0)
        raise(errc::bad_parameter, "frame and hop lengths must be at least one sample");
    if (w.samples.size() < frame_length)
        raise(errc::signal_too_short, "signal shorter than one analysis frame");

    FrameSequence seq;
    seq.frame_length = static_cast<int>(frame_length);
    seq.hop_length = static_cast<int>(hop_length);
    seq.sample_rate = w.sample_rate;
    std::size_t count = frame_count_for(w.samples.size(), frame_length, hop_length);
    seq.frames.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        auto begin = w.samples.begin() + static_cast<std::ptrdiff_t>(f * hop_length);
        seq.frames.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(frame_length));
    }
    return seq;
}

/// Default analysis framing used by all frame-based components unless a
/// component overrides it: 25 ms windows, 10 ms hop.
inline constexpr double kDefaultFrameS = 0.025;
inline constexpr double kDefaultHopS = 0.010;

} // namespace vocalis
