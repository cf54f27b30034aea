// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// The functionals layer: reduce 1-D or 2-D time series to named scalars.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

/// Canonical statistic catalog. Output order always follows this list,
/// filtered by the caller's selection, independent of selection order.
inline const std::vector<std::string>& statistic_catalog() {
    static const std::vector<std::string> names = {
        "mean",          "std",
        "skewness",      "kurtosis",
        "min",           "max",
        "range",         "first_quartile",
        "median",        "third_quartile",
        "iqr",           "slope",
        "intercept",     "mean_abs_first_diff",
        "std_first_diff", "mean_abs_second_diff",
        "std_second_diff"};
    return names;
}

inline bool is_known_statistic(const std::string& name) {
    const auto& cat = statistic_catalog();
    return std::find(cat.begin(), cat.end(), name) != cat.end();
}

struct StatisticSet {
    std::vector<std::string> names; // dimension-major, statistic-minor
    std::vector<double> values;     // kMissing where undefined
};

namespace detail {

/// Linear interpolation between closest ranks on a sorted copy.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = (static_cast<double>(n) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct SeriesStats {
    std::array<double, 17> values;
};

/// All 17 statistics of one compacted (missing-free) series.
inline SeriesStats compute_series_stats(const std::vector<double>& x) {
    SeriesStats out;
    out.values.fill(kMissing);
    const std::size_t n = x.size();
    if (n == 0) return out;

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    double min_v = x[0], max_v = x[0];
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());

    out.values[0] = mean;
    out.values[1] = std::sqrt(m2);
    if (m2 > 0.0) {
        out.values[2] = m3 / std::pow(m2, 1.5);
        out.values[3] = m4 / (m2 * m2) - 3.0;
    }
    out.values[4] = min_v;
    out.values[5] = max_v;
    out.values[6] = max_v - min_v;
    out.values[7] = quantile_sorted(sorted, 0.25);
    out.values[8] = quantile_sorted(sorted, 0.50);
    out.values[9] = quantile_sorted(sorted, 0.75);
    out.values[10] = out.values[9] - out.values[7];

    if (n >= 2) {
        // Least-squares line against the frame index 0..n-1.
        const double nn = static_cast<double>(n);
        const double sum_t = nn * (nn - 1.0) / 2.0;
        const double sum_t2 = nn * (nn - 1.0) * (2.0 * nn - 1.0) / 6.0;
        double sum_ty = 0.0, sum_y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum_ty += static_cast<double>(i) * x[i];
            sum_y += x[i];
        }
        const double denom = nn * sum_t2 - sum_t * sum_t;
        const double slope = (nn * sum_ty - sum_t * sum_y) / denom;
        out.values[11] = slope;
        out.values[12] = (sum_y - slope * sum_t) / nn;

        double abs_acc = 0.0, diff_mean = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double d = x[i + 1] - x[i];
            abs_acc += std::abs(d);
            diff_mean += d;
        }
        const double dn = static_cast<double>(n - 1);
        out.values[13] = abs_acc / dn;
        diff_mean /= dn;
        double var = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double d = x[i + 1] - x[i] - diff_mean;
            var += d * d;
        }
        out.values[14] = std::sqrt(var / dn);
    }

    if (n >= 3) {
        double abs_acc = 0.0, diff_mean = 0.0;
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const double d = x[i + 2] - 2.0 * x[i + 1] + x[i];
            abs_acc += std::abs(d);
            diff_mean += d;
        }
        const double dn = static_cast<double>(n - 2);
        out.values[15] = abs_acc / dn;
        diff_mean /= dn;
        double var = 0.0;
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const double d = x[i + 2] - 2.0 * x[i + 1] + x[i] - diff_mean;
            var += d * d;
        }
        out.values[16] = std::sqrt(var / dn);
    }
    return out;
}

} // namespace detail

/// Reduce a time series to named scalars. Missing entries are removed per
/// dimension before computing; an empty selection means the full catalog.
/// Names are "<stat>" for 1-D input and "<dim>.<stat>" for 2-D input,
/// ordered dimension-major.
inline StatisticSet apply_statistics(const TimeSeries& t,
                                     const std::vector<std::string>& which = {}) {
    std::vector<std::size_t> selected;
    const auto& catalog = statistic_catalog();
    if (which.empty()) {
        for (std::size_t i = 0; i < catalog.size(); ++i) selected.push_back(i);
    } else {
        for (const auto& name : which)
            if (!is_known_statistic(name)) raise(errc::unknown_statistic, name);
        for (std::size_t i = 0; i < catalog.size(); ++i)
            if (std::find(which.begin(), which.end(), catalog[i]) != which.end())
                selected.push_back(i);
    }

    StatisticSet out;
    out.names.reserve(t.dims * selected.size());
    out.values.reserve(t.dims * selected.size());
    for (std::size_t dim = 0; dim < t.dims; ++dim) {
        std::vector<double> x;
        x.reserve(t.frame_count());
        for (std::size_t f = 0; f < t.frame_count(); ++f) {
            const double v = t.at(f, dim);
            if (!is_missing(v)) x.push_back(v);
        }
        detail::SeriesStats stats = detail::compute_series_stats(x);
        for (std::size_t idx : selected) {
            out.names.push_back(t.dims == 1 ? catalog[idx]
                                            : std::to_string(dim) + "." + catalog[idx]);
            out.values.push_back(stats.values[idx]);
        }
    }
    return out;
}

/// Identity reduction: the pipeline uses this to emit raw per-frame series.
inline TimeSeries passthrough(const TimeSeries& t) { return t; }

} // namespace vocalis
