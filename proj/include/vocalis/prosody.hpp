// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Fundamental-frequency tracking (normalized cross-correlation candidates
// with dynamic-programming smoothing) and the classical frame-level
// intensity/energy/zero-crossing features.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/waveform.hpp"
#include "vocalis/windowing.hpp"

namespace vocalis {

/// Per-frame F0 in Hz; 0 marks unvoiced frames.
struct F0Contour {
    std::vector<double> values;
    std::vector<bool> voiced_mask;
    int hop_length = 0;
    int sample_rate = 0;

    std::size_t voiced_count() const {
        std::size_t n = 0;
        for (bool v : voiced_mask)
            if (v) ++n;
        return n;
    }
};

struct F0TrackerOptions {
    double f0_min = 60.0;
    double f0_max = 500.0;
    double frame_s = kDefaultFrameS;
    double hop_s = kDefaultHopS;
    double voicing_threshold = 0.3;  // frames below this peak NCCF are always unvoiced
    double silence_db = 60.0;        // frames this far below the max frame RMS are unvoiced
    double octave_cost = 0.5;        // transition cost per octave of F0 jump
    double lag_bias = 0.02;          // mild preference for shorter lags (higher F0)
    double voicing_bias = 0.05;      // unvoiced local cost = bias + frame's best NCCF
    double voicing_switch_cost = 0.2;  // transition cost between voiced and unvoiced
    int max_candidates = 5;
};

namespace detail {

struct F0Candidate {
    double lag = 0.0;   // refined, fractional samples
    double nccf = 0.0;
};

/// Parabolic refinement of a discrete peak at index k given neighbors.
inline void refine_peak(const std::vector<double>& y, int k, double& pos, double& val) {
    pos = static_cast<double>(k);
    val = y[static_cast<std::size_t>(k)];
    if (k <= 0 || k + 1 >= static_cast<int>(y.size())) return;
    const double y0 = y[static_cast<std::size_t>(k - 1)];
    const double y1 = y[static_cast<std::size_t>(k)];
    const double y2 = y[static_cast<std::size_t>(k + 1)];
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-30) return;
    double delta = 0.5 * (y0 - y2) / denom;
    if (delta > 0.5) delta = 0.5;
    if (delta < -0.5) delta = -0.5;
    pos = k + delta;
    val = y1 - 0.25 * (y0 - y2) * delta;
}

} // namespace detail

/// RAPT-style pitch tracking: per-frame NCCF peaks within the lag range
/// [fs/f0_max, fs/f0_min], hard voicing/silence gates, and Viterbi smoothing
/// that penalizes octave jumps inside each voiced run.
inline F0Contour track_f0(const Waveform& w, const F0TrackerOptions& opt = {}) {
    if (!(opt.f0_min < opt.f0_max && opt.f0_max < w.sample_rate / 2.0))
        raise(errc::bad_parameter, "need f0_min < f0_max < sample_rate/2");

    const double fs = w.sample_rate;
    const int lag_min = std::max(2, static_cast<int>(std::floor(fs / opt.f0_max)));
    const int lag_max = static_cast<int>(std::ceil(fs / opt.f0_min));
    const int m = static_cast<int>(std::lround(opt.frame_s * fs));
    const int hop = static_cast<int>(std::lround(opt.hop_s * fs));
    const int span = m + lag_max;

    const auto n = static_cast<std::ptrdiff_t>(w.samples.size());
    if (n < span) raise(errc::signal_too_short, "signal shorter than one pitch analysis window");
    const std::size_t frames = static_cast<std::size_t>((n - span) / hop) + 1;

    // Prefix sums of x and x^2 for O(1) energy terms.
    std::vector<double> cum(w.samples.size() + 1, 0.0), cum2(w.samples.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        cum[i + 1] = cum[i] + w.samples[i];
        cum2[i + 1] = cum2[i] + w.samples[i] * w.samples[i];
    }
    auto energy = [&](std::size_t begin, std::size_t count) {
        return cum2[begin + count] - cum2[begin];
    };

    // Frame RMS for the silence gate.
    std::vector<double> frame_rms(frames);
    double max_rms = 0.0;
    for (std::size_t f = 0; f < frames; ++f) {
        double e = energy(f * static_cast<std::size_t>(hop), static_cast<std::size_t>(m));
        frame_rms[f] = std::sqrt(e / m);
        max_rms = std::max(max_rms, frame_rms[f]);
    }
    const double silence_floor = max_rms * std::pow(10.0, -opt.silence_db / 20.0);

    std::vector<std::vector<detail::F0Candidate>> candidates(frames);
    std::vector<double> nccf(static_cast<std::size_t>(lag_max) + 1, 0.0);

    for (std::size_t f = 0; f < frames; ++f) {
        if (frame_rms[f] <= silence_floor || frame_rms[f] == 0.0) continue;
        const std::size_t start = f * static_cast<std::size_t>(hop);
        const double e0 = energy(start, static_cast<std::size_t>(m));
        if (e0 <= 0.0) continue;

        for (int k = lag_min; k <= lag_max; ++k) {
            const double ek = energy(start + static_cast<std::size_t>(k), static_cast<std::size_t>(m));
            if (ek <= 0.0) {
                nccf[static_cast<std::size_t>(k)] = 0.0;
                continue;
            }
            double acc = 0.0;
            const double* a = w.samples.data() + start;
            const double* b = a + k;
            for (int j = 0; j < m; ++j) acc += a[j] * b[j];
            nccf[static_cast<std::size_t>(k)] = acc / std::sqrt(e0 * ek);
        }

        // Local maxima above the voicing threshold.
        std::vector<detail::F0Candidate> cands;
        for (int k = lag_min + 1; k < lag_max; ++k) {
            const double v = nccf[static_cast<std::size_t>(k)];
            if (v >= nccf[static_cast<std::size_t>(k - 1)] && v > nccf[static_cast<std::size_t>(k + 1)] &&
                v >= opt.voicing_threshold) {
                double pos, val;
                detail::refine_peak(nccf, k, pos, val);
                cands.push_back({pos, std::min(val, 1.0)});
            }
        }
        if (cands.empty()) continue;
        std::sort(cands.begin(), cands.end(),
                  [](const auto& a, const auto& b) { return a.nccf > b.nccf; });
        if (static_cast<int>(cands.size()) > opt.max_candidates)
            cands.resize(static_cast<std::size_t>(opt.max_candidates));
        candidates[f] = std::move(cands);
    }

    F0Contour contour;
    contour.hop_length = hop;
    contour.sample_rate = w.sample_rate;
    contour.values.assign(frames, 0.0);
    contour.voiced_mask.assign(frames, false);

    // Global Viterbi over voiced candidates plus an explicit unvoiced state.
    // State index 0 is unvoiced; 1..k are this frame's candidates. Frames
    // that failed the hard gates carry only the unvoiced state. The unvoiced
    // cost rises with the frame's best NCCF so strongly periodic frames
    // prefer a voiced label even at poor SNR, while weakly correlated
    // fricative frames fall back to unvoiced.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(frames);
    std::vector<std::vector<int>> back(frames);
    for (std::size_t t = 0; t < frames; ++t) {
        const auto& cs = candidates[t];
        cost[t].assign(cs.size() + 1, kInf);
        back[t].assign(cs.size() + 1, -1);

        double best_nccf = 0.0;
        for (const auto& cand : cs) best_nccf = std::max(best_nccf, cand.nccf);
        auto local = [&](std::size_t state) {
            if (state == 0) return cs.empty() ? 0.0 : opt.voicing_bias + best_nccf;
            const auto& cand = cs[state - 1];
            return (1.0 - cand.nccf) + opt.lag_bias * cand.lag / lag_max;
        };

        if (t == 0) {
            for (std::size_t s = 0; s < cost[t].size(); ++s) cost[t][s] = local(s);
            continue;
        }
        const auto& prev = candidates[t - 1];
        for (std::size_t s = 0; s < cost[t].size(); ++s) {
            double best = kInf;
            int best_prev = -1;
            for (std::size_t p = 0; p < cost[t - 1].size(); ++p) {
                double transition;
                if (p == 0 && s == 0) transition = 0.0;
                else if (p == 0 || s == 0) transition = opt.voicing_switch_cost;
                else
                    transition = opt.octave_cost *
                                 std::abs(std::log2(prev[p - 1].lag / cs[s - 1].lag));
                const double total = cost[t - 1][p] + transition;
                if (total < best) {
                    best = total;
                    best_prev = static_cast<int>(p);
                }
            }
            cost[t][s] = best + local(s);
            back[t][s] = best_prev;
        }
    }

    int state = 0;
    for (std::size_t s = 1; s < cost[frames - 1].size(); ++s)
        if (cost[frames - 1][s] < cost[frames - 1][static_cast<std::size_t>(state)])
            state = static_cast<int>(s);
    for (std::size_t t = frames; t-- > 0;) {
        if (state > 0) {
            const auto& cand = candidates[t][static_cast<std::size_t>(state) - 1];
            contour.values[t] = fs / cand.lag;
            contour.voiced_mask[t] = true;
        }
        state = back[t][static_cast<std::size_t>(state)];
    }
    return contour;
}

struct F0Statistics {
    double mean = kMissing;
    double sd = kMissing;
};

/// Mean and population SD over voiced frames only.
inline F0Statistics f0_statistics(const F0Contour& c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (c.voiced_mask[i]) {
            sum += c.values[i];
            ++n;
        }
    if (n == 0) raise(errc::no_voiced_frames, "contour has no voiced frames");
    F0Statistics st;
    st.mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (c.voiced_mask[i]) {
            double dev = c.values[i] - st.mean;
            var += dev * dev;
        }
    st.sd = std::sqrt(var / static_cast<double>(n));
    return st;
}

// ---------------------------------------------------------------------------
// Frame-level energy features
// ---------------------------------------------------------------------------

/// Per-frame mean of squared amplitude (frame power).
inline TimeSeries intensity(const Waveform& w, double frame_s = kDefaultFrameS,
                            double hop_s = kDefaultHopS) {
    FrameSequence seq = frame_signal(w, frame_s, hop_s);
    std::vector<double> out;
    out.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) {
        double acc = 0.0;
        for (double v : frame) acc += v * v;
        out.push_back(acc / static_cast<double>(frame.size()));
    }
    return TimeSeries::from_values(std::move(out), seq.hop_length, w.sample_rate);
}

/// Population SD of the frame-power series.
inline double intensity_sd(const Waveform& w, double frame_s = kDefaultFrameS,
                           double hop_s = kDefaultHopS) {
    TimeSeries t = intensity(w, frame_s, hop_s);
    double mean = 0.0;
    for (double v : t.data) mean += v;
    mean /= static_cast<double>(t.data.size());
    double var = 0.0;
    for (double v : t.data) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(t.data.size()));
}

/// Per-frame sqrt(mean(x^2)).
inline TimeSeries rms(const Waveform& w, double frame_s = kDefaultFrameS,
                      double hop_s = kDefaultHopS) {
    TimeSeries t = intensity(w, frame_s, hop_s);
    for (double& v : t.data) v = std::sqrt(v);
    return t;
}

/// ln(sum(x^2)/N + eps) over the whole signal.
inline double log_energy(const Waveform& w) {
    if (w.samples.empty()) raise(errc::empty_audio, "empty waveform");
    double acc = 0.0;
    for (double v : w.samples) acc += v * v;
    return std::log(acc / static_cast<double>(w.samples.size()) + kLogEps);
}

/// Per-frame ln(mean(x^2) + eps).
inline TimeSeries sliding_log_energy(const Waveform& w, double frame_s = kDefaultFrameS,
                                     double hop_s = kDefaultHopS) {
    TimeSeries t = intensity(w, frame_s, hop_s);
    for (double& v : t.data) v = std::log(v + kLogEps);
    return t;
}

struct ZeroCrossings {
    std::size_t count = 0;
    double rate = 0.0; // count / (N - 1)
};

/// Sign changes between consecutive samples; zero counts as positive.
inline ZeroCrossings zero_crossings(const Waveform& w) {
    if (w.samples.empty()) raise(errc::empty_audio, "empty waveform");
    ZeroCrossings z;
    for (std::size_t i = 1; i < w.samples.size(); ++i) {
        bool a = w.samples[i - 1] >= 0.0;
        bool b = w.samples[i] >= 0.0;
        if (a != b) ++z.count;
    }
    z.rate = w.samples.size() > 1
                 ? static_cast<double>(z.count) / static_cast<double>(w.samples.size() - 1)
                 : 0.0;
    return z;
}

/// Per-frame zero-crossing rate.
inline TimeSeries sliding_zcr(const Waveform& w, double frame_s = kDefaultFrameS,
                              double hop_s = kDefaultHopS) {
    FrameSequence seq = frame_signal(w, frame_s, hop_s);
    std::vector<double> out;
    out.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) {
        std::size_t count = 0;
        for (std::size_t i = 1; i < frame.size(); ++i) {
            bool a = frame[i - 1] >= 0.0;
            bool b = frame[i] >= 0.0;
            if (a != b) ++count;
        }
        out.push_back(static_cast<double>(count) / static_cast<double>(frame.size() - 1));
    }
    return TimeSeries::from_values(std::move(out), seq.hop_length, w.sample_rate);
}

/// Per-frame peak |x| divided by frame RMS; silent frames yield a missing value.
inline TimeSeries crest_factor(const Waveform& w, double frame_s = kDefaultFrameS,
                               double hop_s = kDefaultHopS) {
    FrameSequence seq = frame_signal(w, frame_s, hop_s);
    std::vector<double> out;
    out.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) {
        double peak = 0.0, acc = 0.0;
        for (double v : frame) {
            peak = std::max(peak, std::abs(v));
            acc += v * v;
        }
        double r = std::sqrt(acc / static_cast<double>(frame.size()));
        out.push_back(r > 0.0 ? peak / r : kMissing);
    }
    return TimeSeries::from_values(std::move(out), seq.hop_length, w.sample_rate);
}

} // namespace vocalis
