// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"

namespace vocalis {

/// Missing-value marker used throughout the library. Features that cannot be
/// computed (insufficient voicing, too few cycles, ...) carry this value and
/// the CSV layer serializes it as an empty cell.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Floor applied before every log (and inside spectral flatness) so silent
/// input stays finite.
inline constexpr double kLogEps = 1e-10;

/// Immutable mono audio buffer. Samples are full-scale normalized to
/// [-1, 1]; sample_rate is in Hz.
struct Waveform {
    std::vector<double> samples;
    int sample_rate = 0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

/// A uniformly sampled sequence of frame-level values. dims == 1 for scalar
/// series (RMS, F0, ...), dims > 1 for vector series (MFCCs, formant tracks).
/// Storage is frame-major: value(frame, dim) = data[frame * dims + dim].
/// Missing entries are kMissing.
struct TimeSeries {
    std::size_t dims = 1;
    std::vector<double> data;
    int hop_length = 0;   // samples between frames; 0 for per-sample series
    int sample_rate = 0;

    std::size_t frame_count() const { return dims == 0 ? 0 : data.size() / dims; }

    double& at(std::size_t frame, std::size_t dim) { return data[frame * dims + dim]; }
    double at(std::size_t frame, std::size_t dim) const { return data[frame * dims + dim]; }

    /// Extract one dimension as a flat vector (frame order).
    std::vector<double> dimension(std::size_t dim) const {
        std::vector<double> out;
        out.reserve(frame_count());
        for (std::size_t f = 0; f < frame_count(); ++f) out.push_back(at(f, dim));
        return out;
    }

    static TimeSeries from_values(std::vector<double> values, int hop, int rate) {
        TimeSeries t;
        t.dims = 1;
        t.data = std::move(values);
        t.hop_length = hop;
        t.sample_rate = rate;
        return t;
    }
};

/// A single named scalar value with optional units, e.g. integrated loudness.
struct ScalarFeature {
    std::string name;
    double value = kMissing;
    std::string units;
};

} // namespace vocalis
