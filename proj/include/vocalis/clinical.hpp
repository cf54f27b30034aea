// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Voice-quality features from the clinical literature: glottal cycle
// extraction, jitter/shimmer variants, pitch period entropy, detrended
// fluctuation analysis, HNR, linear prediction (coefficients, line spectral
// frequencies, formants) and amplitude statistics.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/prosody.hpp"
#include "vocalis/waveform.hpp"
#include "vocalis/windowing.hpp"

namespace vocalis {

// ---------------------------------------------------------------------------
// Glottal cycle extraction
// ---------------------------------------------------------------------------

/// Ordered glottal cycle periods (seconds) with one peak amplitude per cycle.
struct PeriodSequence {
    std::vector<double> periods_s;
    std::vector<double> amplitudes;
};

namespace detail {

/// Parabolic sub-sample refinement of a waveform peak. Returns {position, value}.
inline std::pair<double, double> refine_waveform_peak(const std::vector<double>& x,
                                                      std::ptrdiff_t k, double sign) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    double pos = static_cast<double>(k);
    double val = sign * x[static_cast<std::size_t>(k)];
    if (k <= 0 || k + 1 >= n) return {pos, val};
    const double y0 = sign * x[static_cast<std::size_t>(k - 1)];
    const double y1 = val;
    const double y2 = sign * x[static_cast<std::size_t>(k + 1)];
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-30) return {pos, val};
    double delta = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    return {pos + delta, y1 - 0.25 * (y0 - y2) * delta};
}

} // namespace detail

/// F0-guided peak picking within voiced regions. Cycle candidates whose
/// period ratio against the previous kept cycle falls outside (0.5, 2) are
/// discarded as gross tracking errors.
inline PeriodSequence extract_periods(const Waveform& w, const F0Contour& c) {
    if (c.voiced_count() < 3) raise(errc::insufficient_voicing, "need at least 3 voiced frames");

    const double fs = w.sample_rate;
    const auto hop = static_cast<std::size_t>(c.hop_length);
    const auto n = static_cast<std::ptrdiff_t>(w.samples.size());

    PeriodSequence seq;

    std::size_t f = 0;
    const std::size_t frames = c.values.size();
    while (f < frames) {
        if (!c.voiced_mask[f]) {
            ++f;
            continue;
        }
        std::size_t run_end = f;
        while (run_end + 1 < frames && c.voiced_mask[run_end + 1]) ++run_end;

        // Runs this short are voicing onsets/offsets; their cycles are not
        // reliable enough for perturbation measures.
        if (run_end - f + 1 < 4) {
            f = run_end + 1;
            continue;
        }

        const auto region_begin = static_cast<std::ptrdiff_t>(f * hop);
        auto region_end = static_cast<std::ptrdiff_t>((run_end + 1) * hop) +
                          static_cast<std::ptrdiff_t>(std::lround(kDefaultFrameS * fs));
        region_end = std::min(region_end, n);

        // Peak polarity: follow the dominant extreme of the region.
        double max_v = 0.0, min_v = 0.0;
        for (std::ptrdiff_t i = region_begin; i < region_end; ++i) {
            max_v = std::max(max_v, w.samples[static_cast<std::size_t>(i)]);
            min_v = std::min(min_v, w.samples[static_cast<std::size_t>(i)]);
        }
        const double sign = (-min_v > max_v) ? -1.0 : 1.0;

        auto f0_at = [&](double sample_pos) {
            auto idx = static_cast<std::size_t>(std::max(0.0, sample_pos)) / hop;
            idx = std::min(idx, frames - 1);
            if (c.voiced_mask[idx]) return c.values[idx];
            // fall back to the nearest voiced frame of this run
            return c.values[std::clamp(idx, f, run_end)];
        };

        // Anchor at the strongest peak of the region and walk outward in both
        // directions, one predicted period at a time.
        std::ptrdiff_t anchor = region_begin;
        for (std::ptrdiff_t i = region_begin; i < region_end; ++i)
            if (sign * w.samples[static_cast<std::size_t>(i)] >
                sign * w.samples[static_cast<std::size_t>(anchor)])
                anchor = i;
        auto [anchor_pos, anchor_amp] = detail::refine_waveform_peak(w.samples, anchor, sign);
        if (anchor_amp <= 0.0) {
            f = run_end + 1;
            continue;
        }

        auto walk = [&](double direction) {
            std::vector<std::pair<double, double>> peaks; // position, amplitude
            double prev_pos = anchor_pos;
            double prev_amp = anchor_amp;
            int misses = 0;
            while (true) {
                const double period = fs / f0_at(prev_pos);
                const double predicted = prev_pos + direction * period;
                const double near = prev_pos + direction * 0.75 * period;
                const double far = prev_pos + direction * (1.30 + misses) * period;
                const double win_lo = std::min(near, far);
                const double win_hi = std::max(near, far);
                if (win_lo <= static_cast<double>(region_begin) ||
                    win_hi >= static_cast<double>(region_end - 1))
                    break;

                // Among the window's local maxima, prefer the one nearest the
                // F0-predicted spacing; bare amplitude argmax flips between
                // competing intra-cycle peaks and inflates the perturbation
                // measures.
                const auto lo = static_cast<std::ptrdiff_t>(std::ceil(win_lo));
                const auto hi = static_cast<std::ptrdiff_t>(std::floor(win_hi));
                const double spread = 0.12 * period;
                std::ptrdiff_t peak = -1;
                double best_score = -1.0;
                std::ptrdiff_t arg_max = lo;
                for (std::ptrdiff_t i = lo; i <= hi; ++i) {
                    const double v = sign * w.samples[static_cast<std::size_t>(i)];
                    if (v > sign * w.samples[static_cast<std::size_t>(arg_max)]) arg_max = i;
                    if (v <= 0.0) continue;
                    const double left = sign * w.samples[static_cast<std::size_t>(i - 1)];
                    const double right = sign * w.samples[static_cast<std::size_t>(i + 1)];
                    if (v < left || v <= right) continue; // not a local maximum
                    const double d = (static_cast<double>(i) - predicted) / spread;
                    const double score = v * std::exp(-0.5 * d * d);
                    if (score > best_score) {
                        best_score = score;
                        peak = i;
                    }
                }
                if (peak < 0) peak = arg_max;
                auto [pos, amp] = detail::refine_waveform_peak(w.samples, peak, sign);

                // Credibility gate: a real cycle peak cannot collapse relative
                // to its neighbor; otherwise widen the search and retry.
                if (amp < 0.15 * prev_amp) {
                    if (++misses > 3) break;
                    continue;
                }
                peaks.emplace_back(pos, amp);
                prev_pos = pos;
                prev_amp = amp;
                misses = 0;
            }
            return peaks;
        };

        std::vector<std::pair<double, double>> chain = walk(-1.0);
        std::reverse(chain.begin(), chain.end());
        chain.emplace_back(anchor_pos, anchor_amp);
        {
            auto forward = walk(1.0);
            chain.insert(chain.end(), forward.begin(), forward.end());
        }

        // Boundary cycles sit against voicing onsets/offsets and carry the
        // worst peak estimates; drop one from each end of longer chains.
        if (chain.size() > 6) {
            chain.erase(chain.begin());
            chain.pop_back();
        }

        // Periods between consecutive peaks; the gross-error guard compares
        // against the previous kept cycle.
        double last_kept_period = 0.0;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const double period_found = chain[i + 1].first - chain[i].first;
            const double period_s = period_found / fs;
            const bool keep = last_kept_period <= 0.0 ||
                              (period_s / last_kept_period > 0.5 &&
                               period_s / last_kept_period < 2.0);
            if (keep) {
                seq.periods_s.push_back(period_s);
                seq.amplitudes.push_back(chain[i].second);
                last_kept_period = period_s;
            }
        }
        f = run_end + 1;
    }

    if (seq.periods_s.empty()) raise(errc::insufficient_voicing, "no usable glottal cycles");
    return seq;
}

// ---------------------------------------------------------------------------
// Jitter and shimmer
// ---------------------------------------------------------------------------

struct JitterSet {
    double local = kMissing;
    double local_absolute_s = kMissing;
    double rap = kMissing;
    double ppq5 = kMissing;
    double ddp = kMissing;
};

struct ShimmerSet {
    double local = kMissing;
    double local_db = kMissing;
    double apq3 = kMissing;
    double apq5 = kMissing;
    double apq11 = kMissing;
};

namespace detail {

/// Mean absolute deviation of each value from the centered K-point mean,
/// normalized by the global mean. Returns missing when too few values.
inline double quotient_perturbation(const std::vector<double>& v, std::size_t k, double mean) {
    const std::size_t half = k / 2;
    if (v.size() < k) return kMissing;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = half; i + half < v.size(); ++i) {
        double local_mean = 0.0;
        for (std::size_t j = i - half; j <= i + half; ++j) local_mean += v[j];
        local_mean /= static_cast<double>(k);
        acc += std::abs(v[i] - local_mean);
        ++count;
    }
    return acc / static_cast<double>(count) / mean;
}

} // namespace detail

/// Jitter variants over the cycle periods. Requires at least 5 cycles
/// (PPQ5 needs a centered 5-point window).
inline JitterSet jitters(const PeriodSequence& p) {
    const auto& t = p.periods_s;
    const std::size_t n = t.size();
    if (n < 5) raise(errc::too_few_periods, "jitter needs at least 5 cycles");

    double mean = 0.0;
    for (double v : t) mean += v;
    mean /= static_cast<double>(n);

    JitterSet j;
    double abs_diff = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) abs_diff += std::abs(t[i + 1] - t[i]);
    j.local_absolute_s = abs_diff / static_cast<double>(n - 1);
    j.local = j.local_absolute_s / mean;
    j.rap = detail::quotient_perturbation(t, 3, mean);
    j.ppq5 = detail::quotient_perturbation(t, 5, mean);

    double ddp_acc = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        ddp_acc += std::abs((t[i + 1] - t[i]) - (t[i] - t[i - 1]));
    j.ddp = ddp_acc / static_cast<double>(n - 2) / mean;
    return j;
}

/// Shimmer variants over the cycle peak amplitudes. APQ variants degrade to
/// missing when the sequence is too short for their window.
inline ShimmerSet shimmers(const PeriodSequence& p) {
    const auto& a = p.amplitudes;
    const std::size_t n = a.size();
    if (n < 2) raise(errc::too_few_periods, "shimmer needs at least 2 cycles");

    double mean = 0.0;
    for (double v : a) mean += v;
    mean /= static_cast<double>(n);

    ShimmerSet s;
    double abs_diff = 0.0, db_diff = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        abs_diff += std::abs(a[i + 1] - a[i]);
        db_diff += std::abs(20.0 * std::log10(a[i + 1] / a[i]));
    }
    s.local = abs_diff / static_cast<double>(n - 1) / mean;
    s.local_db = db_diff / static_cast<double>(n - 1);
    s.apq3 = detail::quotient_perturbation(a, 3, mean);
    s.apq5 = detail::quotient_perturbation(a, 5, mean);
    s.apq11 = detail::quotient_perturbation(a, 11, mean);
    return s;
}

// ---------------------------------------------------------------------------
// Pitch period entropy
// ---------------------------------------------------------------------------

namespace detail {

/// Shannon entropy (nats) of a fixed-bin histogram, normalized by ln(bins).
/// Out-of-range values are clamped into the edge bins.
inline double normalized_histogram_entropy(const std::vector<double>& values, int bins, double lo,
                                           double hi) {
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
        b = std::clamp(b, 0, bins - 1);
        counts[static_cast<std::size_t>(b)] += 1.0;
    }
    const double total = static_cast<double>(values.size());
    double h = 0.0;
    for (double cnt : counts) {
        if (cnt <= 0.0) continue;
        double p = cnt / total;
        h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(bins));
}

} // namespace detail

struct PpeOptions {
    double reference_hz = 10.0;  // semitone transform reference
    int bins = 30;
    double range_semitones = 1.5; // histogram spans [-range, +range]
};

/// Pitch period entropy: voiced F0 on a semitone scale, whitened by a
/// 2nd-order linear predictor; entropy of the residual histogram normalized
/// by ln(bins).
inline double pitch_period_entropy(const F0Contour& c, const PpeOptions& opt = {}) {
    std::vector<double> semitones;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (c.voiced_mask[i]) semitones.push_back(12.0 * std::log2(c.values[i] / opt.reference_hz));
    if (semitones.size() < 30)
        raise(errc::insufficient_voicing, "pitch period entropy needs >= 30 voiced frames");

    double mean = 0.0;
    for (double v : semitones) mean += v;
    mean /= static_cast<double>(semitones.size());
    for (double& v : semitones) v -= mean;

    // Order-2 autocorrelation linear predictor.
    const std::size_t n = semitones.size();
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r0 += semitones[i] * semitones[i];
    for (std::size_t i = 1; i < n; ++i) r1 += semitones[i] * semitones[i - 1];
    for (std::size_t i = 2; i < n; ++i) r2 += semitones[i] * semitones[i - 2];

    std::vector<double> residuals;
    if (r0 < 1e-12) {
        // Perfectly flat contour: residuals are all zero.
        residuals.assign(n - 2, 0.0);
    } else {
        const double k1 = r1 / r0;
        double a1 = -k1;
        double e = r0 * (1.0 - k1 * k1);
        double a2 = 0.0;
        if (e > 1e-12) {
            const double k2 = (r2 + a1 * r1) / e;
            a2 = -k2;
            a1 = a1 - k2 * a1;
        }
        residuals.reserve(n - 2);
        for (std::size_t i = 2; i < n; ++i)
            residuals.push_back(semitones[i] + a1 * semitones[i - 1] + a2 * semitones[i - 2]);
    }

    return detail::normalized_histogram_entropy(residuals, opt.bins, -opt.range_semitones,
                                                opt.range_semitones);
}

// ---------------------------------------------------------------------------
// Detrended fluctuation analysis
// ---------------------------------------------------------------------------

/// Log-spaced unique integer box sizes from 4 up to max_box (clamped to n/4).
inline std::vector<std::size_t> default_dfa_box_sizes(std::size_t n, std::size_t max_box = 0,
                                                      int count = 16) {
    std::vector<std::size_t> sizes;
    if (n < 16) return sizes;
    if (max_box == 0 || max_box > n / 4) max_box = n / 4;
    const double lo = std::log(4.0);
    const double hi = std::log(static_cast<double>(max_box));
    for (int i = 0; i < count; ++i) {
        auto s = static_cast<std::size_t>(
            std::lround(std::exp(lo + (hi - lo) * static_cast<double>(i) / (count - 1))));
        if (sizes.empty() || s > sizes.back()) sizes.push_back(s);
    }
    return sizes;
}

/// DFA-1 scaling exponent: integrate the mean-removed signal, detrend each
/// box with a least-squares line, and fit log F(n) against log n. The
/// default boxes span 4 samples to 10 ms: the sub-pitch-period scale where
/// the turbulent-noise scaling of speech lives. Beyond that scale the
/// profile of a bounded signal saturates and the fit would flatten toward 0.
inline double dfa(const Waveform& w, std::vector<std::size_t> box_sizes = {}) {
    const std::size_t n = w.samples.size();
    if (box_sizes.empty()) {
        std::size_t cap = 0;
        if (w.sample_rate > 0)
            cap = std::max<std::size_t>(
                16, static_cast<std::size_t>(std::lround(0.010 * w.sample_rate)));
        box_sizes = default_dfa_box_sizes(n, cap);
    }
    if (box_sizes.size() < 2 || n < 4 * box_sizes.back())
        raise(errc::signal_too_short, "DFA needs at least 4 * max box size samples");

    double mean = 0.0;
    for (double v : w.samples) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> profile(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += w.samples[i] - mean;
        profile[i] = acc;
    }

    std::vector<double> log_n, log_f;
    for (std::size_t box : box_sizes) {
        const std::size_t n_boxes = n / box;
        if (n_boxes == 0) continue;
        const double bl = static_cast<double>(box);
        const double sum_t = bl * (bl - 1.0) / 2.0;
        const double sum_t2 = bl * (bl - 1.0) * (2.0 * bl - 1.0) / 6.0;
        const double denom = bl * sum_t2 - sum_t * sum_t;

        double sse = 0.0;
        for (std::size_t b = 0; b < n_boxes; ++b) {
            const double* y = profile.data() + b * box;
            double sum_y = 0.0, sum_ty = 0.0;
            for (std::size_t t = 0; t < box; ++t) {
                sum_y += y[t];
                sum_ty += static_cast<double>(t) * y[t];
            }
            const double slope = (bl * sum_ty - sum_t * sum_y) / denom;
            const double intercept = (sum_y - slope * sum_t) / bl;
            for (std::size_t t = 0; t < box; ++t) {
                const double r = y[t] - (intercept + slope * static_cast<double>(t));
                sse += r * r;
            }
        }
        const double fluct = std::sqrt(sse / (static_cast<double>(n_boxes) * bl));
        log_n.push_back(std::log(bl));
        log_f.push_back(std::log(fluct + 1e-300));
    }

    // Least-squares slope of log F against log n.
    const auto m = static_cast<double>(log_n.size());
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sx += log_n[i];
        sy += log_f[i];
        sxy += log_n[i] * log_f[i];
        sxx += log_n[i] * log_n[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Harmonics-to-noise ratio
// ---------------------------------------------------------------------------

/// Mean over voiced frames of 10*log10(r / (1 - r)) where r is the peak
/// normalized autocorrelation in the pitch lag range, clamped so a noiseless
/// tone saturates near 60 dB.
inline double hnr(const Waveform& w, const F0Contour& c, const F0TrackerOptions& opt = {}) {
    if (c.voiced_count() == 0) raise(errc::no_voiced_frames, "HNR needs voiced frames");

    const double fs = w.sample_rate;
    const int lag_min = std::max(2, static_cast<int>(std::floor(fs / opt.f0_max)));
    const int lag_max = static_cast<int>(std::ceil(fs / opt.f0_min));
    const int m = static_cast<int>(std::lround(opt.frame_s * fs));

    std::vector<double> cum2(w.samples.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.samples.size(); ++i)
        cum2[i + 1] = cum2[i] + w.samples[i] * w.samples[i];

    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t f = 0; f < c.values.size(); ++f) {
        if (!c.voiced_mask[f]) continue;
        const std::size_t start = f * static_cast<std::size_t>(c.hop_length);
        if (start + static_cast<std::size_t>(m + lag_max) > w.samples.size()) break;
        const double e0 = cum2[start + static_cast<std::size_t>(m)] - cum2[start];
        if (e0 <= 0.0) continue;

        double best = 0.0;
        for (int k = lag_min; k <= lag_max; ++k) {
            const double ek = cum2[start + static_cast<std::size_t>(m + k)] -
                              cum2[start + static_cast<std::size_t>(k)];
            if (ek <= 0.0) continue;
            double dot = 0.0;
            const double* a = w.samples.data() + start;
            const double* b = a + k;
            for (int j = 0; j < m; ++j) dot += a[j] * b[j];
            best = std::max(best, dot / std::sqrt(e0 * ek));
        }
        const double r = std::clamp(best, 1e-6, 1.0 - 1e-6);
        acc += 10.0 * std::log10(r / (1.0 - r));
        ++count;
    }
    if (count == 0) raise(errc::no_voiced_frames, "no voiced frame fit in the signal");
    return acc / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Linear prediction: coefficients, LSFs, formants
// ---------------------------------------------------------------------------

struct LpcResult {
    std::vector<double> coefficients; // a[0] = 1, length order + 1
    double error = 0.0;               // final prediction error energy
};

/// Autocorrelation-method linear prediction solved by Levinson-Durbin.
inline LpcResult lpc_from_autocorrelation(const std::vector<double>& r, int order) {
    LpcResult res;
    res.coefficients.assign(static_cast<std::size_t>(order) + 1, 0.0);
    res.coefficients[0] = 1.0;
    double e = r[0];
    if (e <= 0.0) raise(errc::degenerate_signal, "zero autocorrelation");

    std::vector<double> prev(res.coefficients);
    for (int i = 1; i <= order; ++i) {
        double k = -r[static_cast<std::size_t>(i)];
        for (int j = 1; j < i; ++j) k -= prev[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(i - j)];
        k /= e;
        k = std::clamp(k, -0.999999, 0.999999);

        res.coefficients[static_cast<std::size_t>(i)] = k;
        for (int j = 1; j < i; ++j)
            res.coefficients[static_cast<std::size_t>(j)] =
                prev[static_cast<std::size_t>(j)] + k * prev[static_cast<std::size_t>(i - j)];
        e *= 1.0 - k * k;
        prev = res.coefficients;
    }
    res.error = e;
    return res;
}

inline LpcResult lpc(const std::vector<double>& samples, int order) {
    if (order < 1) raise(errc::bad_parameter, "LPC order must be >= 1");
    if (samples.size() <= static_cast<std::size_t>(order))
        raise(errc::signal_too_short, "need more samples than the LPC order");
    std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
        double acc = 0.0;
        for (std::size_t i = static_cast<std::size_t>(k); i < samples.size(); ++i)
            acc += samples[i] * samples[i - static_cast<std::size_t>(k)];
        r[static_cast<std::size_t>(k)] = acc;
    }
    return lpc_from_autocorrelation(r, order);
}

inline LpcResult lpc(const Waveform& w, int order) { return lpc(w.samples, order); }

namespace detail {

/// Roots in (0, pi) of a symmetric polynomial reduced to a cosine series:
/// g(w) = c[m] + sum_k 2*c[m-k) cos(k w). Grid scan plus bisection.
inline std::vector<double> symmetric_poly_root_angles(const std::vector<double>& c) {
    // c has odd length 2m+1 and is symmetric; use the first m+1 entries.
    const std::size_t m = (c.size() - 1) / 2;
    auto g = [&](double omega) {
        double v = c[m];
        for (std::size_t k = 1; k <= m; ++k) v += 2.0 * c[m - k] * std::cos(static_cast<double>(k) * omega);
        return v;
    };

    std::vector<double> roots;
    const int grid = 4096;
    double prev_omega = 1e-9;
    double prev_val = g(prev_omega);
    for (int i = 1; i <= grid; ++i) {
        const double omega = kPi * static_cast<double>(i) / grid;
        const double val = g(omega);
        if ((prev_val <= 0.0) != (val <= 0.0)) {
            double lo = prev_omega, hi = omega;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((g(lo) <= 0.0) != (g(mid) <= 0.0))
                    hi = mid;
                else
                    lo = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_omega = omega;
        prev_val = val;
    }
    return roots;
}

} // namespace detail

/// Line spectral frequencies: root angles of the symmetric/antisymmetric
/// split polynomials of A(z), sorted ascending in (0, pi).
inline std::vector<double> lsf(const std::vector<double>& a) {
    const std::size_t p = a.size() - 1;
    if (p < 1) raise(errc::bad_parameter, "LSF needs at least order 1");

    // P(z) = A(z) + z^-(p+1) A(1/z), Q(z) = A(z) - z^-(p+1) A(1/z)
    std::vector<double> sym(p + 2), asym(p + 2);
    for (std::size_t i = 0; i <= p + 1; ++i) {
        const double ai = i <= p ? a[i] : 0.0;
        const double aj = (p + 1 - i) <= p ? a[p + 1 - i] : 0.0;
        sym[i] = ai + aj;
        asym[i] = ai - aj;
    }

    // Deflate the fixed roots: Q always has z = 1; P has z = -1 for even p.
    auto deflate = [](const std::vector<double>& poly, double root) {
        std::vector<double> out(poly.size() - 1);
        double carry = 0.0;
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
            out[i] = poly[i] + carry;
            carry = out[i] * root;
        }
        return out;
    };

    std::vector<double> sym_red = sym;
    std::vector<double> asym_red = deflate(asym, 1.0);
    if (p % 2 == 0) {
        sym_red = deflate(sym, -1.0);
    } else {
        asym_red = deflate(asym_red, -1.0);
    }

    std::vector<double> roots = detail::symmetric_poly_root_angles(sym_red);
    std::vector<double> roots_q = detail::symmetric_poly_root_angles(asym_red);
    roots.insert(roots.end(), roots_q.begin(), roots_q.end());
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace detail {

/// Durand-Kerner simultaneous root iteration for a monic real polynomial
/// given as z^p + c[1] z^(p-1) + ... + c[p].
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
    const std::size_t p = coeffs.size() - 1;
    std::vector<std::complex<double>> roots(p);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        acc *= seed;
        roots[i] = acc;
    }

    auto eval = [&](std::complex<double> z) {
        std::complex<double> v(1.0, 0.0);
        for (std::size_t i = 1; i <= p; ++i) v = v * z + coeffs[i];
        return v;
    };

    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < p; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (std::abs(denom) < 1e-300) continue;
            const std::complex<double> step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < 1e-13) break;
    }
    return roots;
}

} // namespace detail

/// Whole-signal formant estimates (median over frames) plus sliding tracks
/// and their first differences. Frames where a slot does not resolve carry
/// missing values.
struct FormantSet {
    double f1 = kMissing, f2 = kMissing, f3 = kMissing, f4 = kMissing;
    TimeSeries tracks; // dims = 4
    TimeSeries deltas; // dims = 4, first differences of the tracks
};

struct FormantOptions {
    double frame_s = kDefaultFrameS;
    double hop_s = kDefaultHopS;
    double pre_emphasis = 0.97;
    double min_freq_hz = 90.0;
    double max_bandwidth_hz = 400.0;
};

inline FormantSet formants(const Waveform& w, const FormantOptions& opt = {}) {
    if (w.sample_rate < 8000) raise(errc::bad_parameter, "formant analysis needs >= 8 kHz");

    Waveform pre;
    pre.sample_rate = w.sample_rate;
    pre.samples.resize(w.samples.size());
    pre.samples[0] = w.samples[0];
    for (std::size_t i = 1; i < w.samples.size(); ++i)
        pre.samples[i] = w.samples[i] - opt.pre_emphasis * w.samples[i - 1];

    FrameSequence seq = frame_signal(pre, opt.frame_s, opt.hop_s);
    const double fs = w.sample_rate;
    const int order = 2 + static_cast<int>(std::lround(fs / 1000.0));

    FormantSet set;
    set.tracks.dims = 4;
    set.tracks.hop_length = seq.hop_length;
    set.tracks.sample_rate = w.sample_rate;
    set.tracks.data.assign(seq.frames.size() * 4, kMissing);

    std::vector<std::vector<double>> resolved(4);
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        auto frame = apply_window(seq.frames[f], WindowKind::hann);
        LpcResult lp;
        try {
            lp = lpc(frame, order);
        } catch (const Error&) {
            continue; // silent frame: leave the slots missing
        }

        auto roots = detail::polynomial_roots(lp.coefficients);
        std::vector<double> freqs;
        for (const auto& root : roots) {
            if (root.imag() <= 0.0) continue;
            const double radius = std::abs(root);
            if (radius >= 1.0 || radius <= 0.0) continue;
            const double freq = std::atan2(root.imag(), root.real()) * fs / (2.0 * kPi);
            const double bandwidth = -(fs / kPi) * std::log(radius);
            if (freq > opt.min_freq_hz && bandwidth < opt.max_bandwidth_hz) freqs.push_back(freq);
        }
        std::sort(freqs.begin(), freqs.end());
        for (std::size_t k = 0; k < 4 && k < freqs.size(); ++k) {
            set.tracks.at(f, k) = freqs[k];
            resolved[k].push_back(freqs[k]);
        }
    }

    auto median_of = [](std::vector<double>& v) {
        if (v.empty()) return kMissing;
        std::sort(v.begin(), v.end());
        const std::size_t mid = v.size() / 2;
        return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    };
    set.f1 = median_of(resolved[0]);
    set.f2 = median_of(resolved[1]);
    set.f3 = median_of(resolved[2]);
    set.f4 = median_of(resolved[3]);

    set.deltas.dims = 4;
    set.deltas.hop_length = set.tracks.hop_length;
    set.deltas.sample_rate = w.sample_rate;
    const std::size_t frames = set.tracks.frame_count();
    if (frames > 1) {
        set.deltas.data.assign((frames - 1) * 4, kMissing);
        for (std::size_t f = 0; f + 1 < frames; ++f)
            for (std::size_t k = 0; k < 4; ++k) {
                const double a = set.tracks.at(f, k);
                const double b = set.tracks.at(f + 1, k);
                if (!is_missing(a) && !is_missing(b)) set.deltas.at(f, k) = b - a;
            }
    }
    return set;
}

// ---------------------------------------------------------------------------
// Amplitude statistics
// ---------------------------------------------------------------------------

/// Shannon entropy of the normalized per-sample energy distribution
/// s_i = x_i^2 / sum(x^2). Grows with signal length.
inline double amplitude_shannon_entropy(const Waveform& w) {
    double total = 0.0;
    for (double v : w.samples) total += v * v;
    if (total <= 0.0) raise(errc::degenerate_signal, "all-zero signal");
    double h = 0.0;
    for (double v : w.samples) {
        const double s = v * v / total;
        if (s > 0.0) h -= s * std::log(s);
    }
    return h;
}

/// Per-frame excess kurtosis of the raw samples; near-constant frames are missing.
inline TimeSeries sliding_amplitude_kurtosis(const Waveform& w, double frame_s = kDefaultFrameS,
                                             double hop_s = kDefaultHopS) {
    FrameSequence seq = frame_signal(w, frame_s, hop_s);
    std::vector<double> out;
    out.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) {
        const auto n = static_cast<double>(frame.size());
        double mean = 0.0;
        for (double v : frame) mean += v;
        mean /= n;
        double m2 = 0.0, m4 = 0.0;
        for (double v : frame) {
            const double d = v - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m4 /= n;
        out.push_back(m2 > 1e-24 ? m4 / (m2 * m2) - 3.0 : kMissing);
    }
    return TimeSeries::from_values(std::move(out), seq.hop_length, w.sample_rate);
}

} // namespace vocalis
