// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "vocalis/errors.hpp"

namespace vocalis {

/// Fractional ranks with ties receiving the average of their rank range.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

/// Spearman's rank correlation: Pearson correlation of average-tied ranks.
inline double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) raise(errc::length_mismatch, "sequences differ in length");
    if (a.size() < 2) raise(errc::degenerate_input, "need at least 2 observations");
    auto constant = [](const std::vector<double>& v) {
        for (double x : v)
            if (x != v[0]) return false;
        return true;
    };
    if (constant(a) || constant(b)) raise(errc::degenerate_input, "constant sequence has no ranks");

    const std::vector<double> ra = average_ranks(a);
    const std::vector<double> rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0; // ranks always average to this

    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = ra[i] - mean;
        const double y = rb[i] - mean;
        num += x * y;
        da += x * x;
        db += y * y;
    }
    return num / std::sqrt(da * db);
}

} // namespace vocalis
