// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/fft.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

namespace detail {

inline double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    double px = kPi * x;
    return std::sin(px) / px;
}

} // namespace detail

/// Band-limited resampling with a Hann-windowed sinc kernel (24 zero
/// crossings per side, cutoff at the lower of the two Nyquist rates).
/// Output length is round(n * to_rate / from_rate).
inline std::vector<double> resample(const std::vector<double>& x, int from_rate, int to_rate) {
    if (from_rate <= 0 || to_rate <= 0) raise(errc::bad_parameter, "sample rates must be positive");
    if (from_rate == to_rate) return x;
    if (x.empty()) return {};

    const double ratio = static_cast<double>(from_rate) / to_rate;
    const double cutoff = to_rate < from_rate ? static_cast<double>(to_rate) / from_rate : 1.0;
    const int half_taps = 24;
    const double half_width = half_taps / cutoff;
    const auto out_len = static_cast<std::size_t>(std::llround(
        static_cast<double>(x.size()) * to_rate / from_rate));

    std::vector<double> out(out_len, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t i = 0; i < out_len; ++i) {
        double center = static_cast<double>(i) * ratio;
        auto j0 = static_cast<std::ptrdiff_t>(std::ceil(center - half_width));
        auto j1 = static_cast<std::ptrdiff_t>(std::floor(center + half_width));
        if (j0 < 0) j0 = 0;
        if (j1 >= n) j1 = n - 1;
        double acc = 0.0;
        for (std::ptrdiff_t j = j0; j <= j1; ++j) {
            double u = (static_cast<double>(j) - center) * cutoff;
            double w = 0.5 * (1.0 + std::cos(kPi * u / half_taps)); // Hann taper over the kernel span
            acc += x[static_cast<std::size_t>(j)] * detail::sinc(u) * w;
        }
        out[i] = acc * cutoff;
    }
    return out;
}

inline Waveform resample(const Waveform& w, int to_rate) {
    Waveform out;
    out.samples = resample(w.samples, w.sample_rate, to_rate);
    out.sample_rate = to_rate;
    return out;
}

} // namespace vocalis
