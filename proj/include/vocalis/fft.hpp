// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "vocalis/errors.hpp"

namespace vocalis {

inline constexpr double kPi = 3.14159265358979323846;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Radix-2 Cooley-Tukey FFT with cached twiddle factors and bit-reversal
/// table. One plan per transform size; reuse across frames.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        if (!is_power_of_two(n)) raise(errc::bad_parameter, "FFT size must be a power of two");
        bitrev_.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            bitrev_[i] = r;
        }
        twiddle_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
            twiddle_[k] = {std::cos(ang), std::sin(ang)};
        }
    }

    std::size_t size() const { return n_; }

    /// In-place forward transform.
    void forward(std::vector<std::complex<double>>& x) const { transform(x, false); }

    /// In-place inverse transform (includes the 1/n scaling).
    void inverse(std::vector<std::complex<double>>& x) const {
        transform(x, true);
        for (auto& v : x) v /= static_cast<double>(n_);
    }

    /// Forward transform of a real signal; returns the n/2 + 1 non-redundant bins.
    std::vector<std::complex<double>> real_forward(const std::vector<double>& x) const {
        std::vector<std::complex<double>> buf(n_);
        for (std::size_t i = 0; i < n_ && i < x.size(); ++i) buf[i] = x[i];
        forward(buf);
        buf.resize(n_ / 2 + 1);
        return buf;
    }

private:
    void transform(std::vector<std::complex<double>>& x, bool invert) const {
        if (x.size() != n_) raise(errc::length_mismatch, "FFT buffer size does not match plan");
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t j = bitrev_[i];
            if (i < j) std::swap(x[i], x[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            std::size_t half = len / 2;
            std::size_t step = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    std::complex<double> w = twiddle_[k * step];
                    if (invert) w = std::conj(w);
                    std::complex<double> a = x[start + k];
                    std::complex<double> b = x[start + k + half] * w;
                    x[start + k] = a + b;
                    x[start + k + half] = a - b;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;
};

} // namespace vocalis
