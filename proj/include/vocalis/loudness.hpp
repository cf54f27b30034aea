// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// ITU-R BS.1770-4 integrated loudness. The two K-weighting biquads are
// derived from the analog prototypes at the input sample rate (parameters
// from Mansbridge, Finn & Reiss, AES 132nd Convention, 2012), so any rate
// reproduces the coefficients the standard tabulates for 48 kHz.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/fft.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

struct LoudnessResult {
    double integrated_lufs = kMissing;        // gated per BS.1770-4
    std::vector<double> windowed_lufs;        // ungated 400 ms blocks, 75% overlap
    double variation_db = kMissing;           // population SD of windowed_lufs
};

namespace detail {

struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;
    double z1 = 0.0, z2 = 0.0;

    double process(double x) {
        // Transposed direct form II.
        double y = b0 * x + z1;
        z1 = b1 * x - a1 * y + z2;
        z2 = b2 * x - a2 * y;
        return y;
    }
};

inline Biquad k_weighting_shelf(double fs) {
    const double db = 3.999843853973347;
    const double f0 = 1681.974450955533;
    const double q = 0.7071752369554196;
    const double k = std::tan(kPi * f0 / fs);
    const double vh = std::pow(10.0, db / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / q + k * k;

    Biquad f;
    f.b0 = (vh + vb * k / q + k * k) / a0;
    f.b1 = 2.0 * (k * k - vh) / a0;
    f.b2 = (vh - vb * k / q + k * k) / a0;
    f.a1 = 2.0 * (k * k - 1.0) / a0;
    f.a2 = (1.0 - k / q + k * k) / a0;
    return f;
}

inline Biquad k_weighting_highpass(double fs) {
    const double f0 = 38.13547087602444;
    const double q = 0.5003270373238773;
    const double k = std::tan(kPi * f0 / fs);
    const double a0 = 1.0 + k / q + k * k;

    Biquad f;
    f.b0 = 1.0;
    f.b1 = -2.0;
    f.b2 = 1.0;
    f.a1 = 2.0 * (k * k - 1.0) / a0;
    f.a2 = (1.0 - k / q + k * k) / a0;
    return f;
}

} // namespace detail

/// Integrated loudness with the -70 LUFS absolute gate and -10 LU relative
/// gate, plus the ungated 400 ms windowed loudness series and its SD.
/// Returns missing integrated loudness when every block is gated out
/// (digital silence).
inline LoudnessResult loudness(const Waveform& w) {
    const double fs = w.sample_rate;
    const auto block = static_cast<std::size_t>(std::lround(0.400 * fs));
    const auto step = static_cast<std::size_t>(std::lround(0.100 * fs));
    if (w.samples.size() < block)
        raise(errc::too_short_for_loudness, "need at least 400 ms of audio");

    detail::Biquad shelf = detail::k_weighting_shelf(fs);
    detail::Biquad highpass = detail::k_weighting_highpass(fs);
    std::vector<double> filtered(w.samples.size());
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        filtered[i] = highpass.process(shelf.process(w.samples[i]));

    std::vector<double> prefix(filtered.size() + 1, 0.0);
    for (std::size_t i = 0; i < filtered.size(); ++i)
        prefix[i + 1] = prefix[i] + filtered[i] * filtered[i];

    const std::size_t n_blocks = (filtered.size() - block) / step + 1;
    std::vector<double> mean_square(n_blocks);
    LoudnessResult result;
    result.windowed_lufs.reserve(n_blocks);
    for (std::size_t j = 0; j < n_blocks; ++j) {
        double z = (prefix[j * step + block] - prefix[j * step]) / static_cast<double>(block);
        mean_square[j] = z;
        result.windowed_lufs.push_back(-0.691 + 10.0 * std::log10(z + 1e-30));
    }

    // Absolute gate at -70 LUFS.
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n_blocks; ++j)
        if (result.windowed_lufs[j] > -70.0) {
            sum += mean_square[j];
            ++count;
        }
    if (count > 0) {
        // Relative gate 10 LU below the absolute-gated level.
        const double gamma_r = -0.691 + 10.0 * std::log10(sum / static_cast<double>(count)) - 10.0;
        sum = 0.0;
        count = 0;
        for (std::size_t j = 0; j < n_blocks; ++j)
            if (result.windowed_lufs[j] > -70.0 && result.windowed_lufs[j] > gamma_r) {
                sum += mean_square[j];
                ++count;
            }
        if (count > 0)
            result.integrated_lufs = -0.691 + 10.0 * std::log10(sum / static_cast<double>(count));
    }

    double mean = 0.0;
    for (double v : result.windowed_lufs) mean += v;
    mean /= static_cast<double>(result.windowed_lufs.size());
    double var = 0.0;
    for (double v : result.windowed_lufs) var += (v - mean) * (v - mean);
    result.variation_db = std::sqrt(var / static_cast<double>(result.windowed_lufs.size()));
    return result;
}

} // namespace vocalis
