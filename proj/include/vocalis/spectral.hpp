// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Time-frequency representations and frame-level spectral descriptors.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "vocalis/errors.hpp"
#include "vocalis/fft.hpp"
#include "vocalis/waveform.hpp"
#include "vocalis/windowing.hpp"

namespace vocalis {

/// Frames x bins magnitude (or log-power) matrix with bin frequencies in Hz.
/// Storage is frame-major: value(frame, bin) = values[frame * bins + bin].
struct Spectrogram {
    std::size_t bins = 0;
    std::vector<double> values;
    std::vector<double> bin_frequencies;
    int hop_length = 0;
    int sample_rate = 0;

    std::size_t frame_count() const { return bins == 0 ? 0 : values.size() / bins; }
    double& at(std::size_t frame, std::size_t bin) { return values[frame * bins + bin]; }
    double at(std::size_t frame, std::size_t bin) const { return values[frame * bins + bin]; }
};

// Spectral defaults: 512-point FFT (32 ms at 16 kHz) with a 10 ms hop.
inline constexpr int kDefaultNfft = 512;
inline constexpr double kDefaultFftHopS = 0.010;

/// Magnitude STFT: Hann-windowed (by default) DFT magnitudes, one-sided.
inline Spectrogram stft_magnitude(const Waveform& w, int n_fft = kDefaultNfft, int hop = 0,
                                  WindowKind window = WindowKind::hann) {
    if (n_fft < 2 || !is_power_of_two(static_cast<std::size_t>(n_fft)))
        raise(errc::bad_parameter, "n_fft must be a power of two >= 2");
    if (hop <= 0) hop = std::max(1, static_cast<int>(std::lround(kDefaultFftHopS * w.sample_rate)));
    if (w.samples.size() < static_cast<std::size_t>(n_fft))
        raise(errc::signal_too_short, "signal shorter than one FFT frame");

    const std::size_t bins = static_cast<std::size_t>(n_fft) / 2 + 1;
    const std::size_t frames = frame_count_for(w.samples.size(), n_fft, hop);
    std::vector<double> win = window_values(window, static_cast<std::size_t>(n_fft));
    FftPlan plan(static_cast<std::size_t>(n_fft));

    Spectrogram s;
    s.bins = bins;
    s.hop_length = hop;
    s.sample_rate = w.sample_rate;
    s.values.resize(frames * bins);
    s.bin_frequencies.resize(bins);
    for (std::size_t k = 0; k < bins; ++k)
        s.bin_frequencies[k] = static_cast<double>(k) * w.sample_rate / n_fft;

    std::vector<double> frame(static_cast<std::size_t>(n_fft));
    for (std::size_t f = 0; f < frames; ++f) {
        const double* src = w.samples.data() + f * static_cast<std::size_t>(hop);
        for (int i = 0; i < n_fft; ++i) frame[static_cast<std::size_t>(i)] = src[i] * win[static_cast<std::size_t>(i)];
        auto spec = plan.real_forward(frame);
        for (std::size_t k = 0; k < bins; ++k) s.at(f, k) = std::abs(spec[k]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Mel filterbank (Slaney scale, area-normalized triangles) and MFCCs
// ---------------------------------------------------------------------------

namespace melscale {

inline double hz_to_mel(double hz) {
    // Slaney: linear below 1 kHz, logarithmic above.
    constexpr double f_sp = 200.0 / 3.0;
    constexpr double min_log_hz = 1000.0;
    const double min_log_mel = min_log_hz / f_sp;
    const double logstep = std::log(6.4) / 27.0;
    if (hz < min_log_hz) return hz / f_sp;
    return min_log_mel + std::log(hz / min_log_hz) / logstep;
}

inline double mel_to_hz(double mel) {
    constexpr double f_sp = 200.0 / 3.0;
    constexpr double min_log_hz = 1000.0;
    const double min_log_mel = min_log_hz / f_sp;
    const double logstep = std::log(6.4) / 27.0;
    if (mel < min_log_mel) return mel * f_sp;
    return min_log_hz * std::exp(logstep * (mel - min_log_mel));
}

} // namespace melscale

/// Triangular mel filterbank as an n_mels x bins weight matrix (row-major).
/// Triangles are area-normalized (each filter scaled by 2 / bandwidth).
inline std::vector<double> mel_filterbank(int n_mels, int n_fft, int sample_rate, double fmin,
                                          double fmax) {
    if (n_mels < 2) raise(errc::bad_parameter, "n_mels must be >= 2");
    if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0 + 1e-9))
        raise(errc::invalid_band, "mel band must satisfy 0 <= fmin < fmax <= Nyquist");

    const std::size_t bins = static_cast<std::size_t>(n_fft) / 2 + 1;
    std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
    const double mel_lo = melscale::hz_to_mel(fmin);
    const double mel_hi = melscale::hz_to_mel(fmax);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = melscale::mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                                    (n_mels + 1));

    std::vector<double> fb(static_cast<std::size_t>(n_mels) * bins, 0.0);
    for (int m = 0; m < n_mels; ++m) {
        const double left = edges[static_cast<std::size_t>(m)];
        const double center = edges[static_cast<std::size_t>(m) + 1];
        const double right = edges[static_cast<std::size_t>(m) + 2];
        const double norm = 2.0 / (right - left);
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / n_fft;
            double v = 0.0;
            if (f > left && f < right)
                v = f <= center ? (f - left) / (center - left) : (right - f) / (right - center);
            fb[static_cast<std::size_t>(m) * bins + k] = v * norm;
        }
    }
    return fb;
}

/// ln(mel-filterbank power + eps).
inline Spectrogram log_mel_spectrogram(const Waveform& w, int n_fft = kDefaultNfft, int hop = 0,
                                       int n_mels = 40, double fmin = 0.0, double fmax = -1.0) {
    if (fmax < 0.0) fmax = w.sample_rate / 2.0;
    Spectrogram stft = stft_magnitude(w, n_fft, hop);
    std::vector<double> fb = mel_filterbank(n_mels, n_fft, w.sample_rate, fmin, fmax);

    Spectrogram mel;
    mel.bins = static_cast<std::size_t>(n_mels);
    mel.hop_length = stft.hop_length;
    mel.sample_rate = stft.sample_rate;
    mel.values.resize(stft.frame_count() * mel.bins);
    mel.bin_frequencies.resize(mel.bins);
    {
        // Band centers for reference.
        const double mel_lo = melscale::hz_to_mel(fmin);
        const double mel_hi = melscale::hz_to_mel(fmax);
        for (int m = 0; m < n_mels; ++m)
            mel.bin_frequencies[static_cast<std::size_t>(m)] =
                melscale::mel_to_hz(mel_lo + (mel_hi - mel_lo) * (m + 1.0) / (n_mels + 1));
    }

    for (std::size_t f = 0; f < stft.frame_count(); ++f) {
        for (int m = 0; m < n_mels; ++m) {
            double acc = 0.0;
            const double* row = fb.data() + static_cast<std::size_t>(m) * stft.bins;
            for (std::size_t k = 0; k < stft.bins; ++k) {
                double mag = stft.at(f, k);
                acc += row[k] * mag * mag;
            }
            mel.at(f, static_cast<std::size_t>(m)) = std::log(acc + kLogEps);
        }
    }
    return mel;
}

/// Orthonormal DCT-II of each log-mel frame, truncated to n_mfcc coefficients.
inline TimeSeries mfcc(const Waveform& w, int n_mfcc = 13, int n_fft = kDefaultNfft, int hop = 0,
                       int n_mels = 40) {
    if (n_mfcc < 1 || n_mfcc > n_mels)
        raise(errc::bad_parameter, "n_mfcc must satisfy 1 <= n_mfcc <= n_mels");
    Spectrogram mel = log_mel_spectrogram(w, n_fft, hop, n_mels);

    const std::size_t n = static_cast<std::size_t>(n_mels);
    std::vector<double> dct(static_cast<std::size_t>(n_mfcc) * n);
    for (int k = 0; k < n_mfcc; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                                    : std::sqrt(2.0 / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            dct[static_cast<std::size_t>(k) * n + i] =
                scale * std::cos(kPi * k * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
    }

    TimeSeries out;
    out.dims = static_cast<std::size_t>(n_mfcc);
    out.hop_length = mel.hop_length;
    out.sample_rate = mel.sample_rate;
    out.data.resize(mel.frame_count() * out.dims);
    for (std::size_t f = 0; f < mel.frame_count(); ++f) {
        for (int k = 0; k < n_mfcc; ++k) {
            double acc = 0.0;
            const double* row = dct.data() + static_cast<std::size_t>(k) * n;
            for (std::size_t i = 0; i < n; ++i) acc += row[i] * mel.at(f, i);
            out.at(f, static_cast<std::size_t>(k)) = acc;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bark spectrogram
// ---------------------------------------------------------------------------

/// Zwicker critical band edges in Hz (24 bands, 25 edges).
inline const std::vector<double>& bark_band_edges() {
    static const std::vector<double> edges = {
        20,   100,  200,  300,  400,  510,  630,  770,  920,  1080, 1270, 1480, 1720,
        2000, 2320, 2700, 3150, 3700, 4400, 5300, 6400, 7700, 9500, 12000, 15500};
    return edges;
}

/// Number of Bark bands whose upper edge lies at or below Nyquist.
inline int usable_bark_bands(int sample_rate) {
    const auto& edges = bark_band_edges();
    const double nyquist = sample_rate / 2.0;
    int count = 0;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b)
        if (edges[b + 1] <= nyquist) ++count;
    return count;
}

/// Power aggregated into the 24 Zwicker critical bands, truncated at Nyquist.
/// All 24 bands are always emitted; bands above Nyquist stay zero.
inline Spectrogram bark_spectrogram(const Waveform& w, int n_fft = kDefaultNfft, int hop = 0) {
    Spectrogram stft = stft_magnitude(w, n_fft, hop);
    const auto& edges = bark_band_edges();
    const std::size_t n_bands = edges.size() - 1;

    Spectrogram bark;
    bark.bins = n_bands;
    bark.hop_length = stft.hop_length;
    bark.sample_rate = stft.sample_rate;
    bark.values.assign(stft.frame_count() * n_bands, 0.0);
    bark.bin_frequencies.resize(n_bands);
    for (std::size_t b = 0; b < n_bands; ++b)
        bark.bin_frequencies[b] = 0.5 * (edges[b] + edges[b + 1]);

    // Precompute bin -> band assignment (band containing the bin frequency).
    std::vector<int> band_of(stft.bins, -1);
    for (std::size_t k = 0; k < stft.bins; ++k) {
        double f = stft.bin_frequencies[k];
        for (std::size_t b = 0; b < n_bands; ++b)
            if (f >= edges[b] && f < edges[b + 1]) {
                band_of[k] = static_cast<int>(b);
                break;
            }
    }

    for (std::size_t f = 0; f < stft.frame_count(); ++f)
        for (std::size_t k = 0; k < stft.bins; ++k)
            if (band_of[k] >= 0) {
                double mag = stft.at(f, k);
                bark.at(f, static_cast<std::size_t>(band_of[k])) += mag * mag;
            }
    return bark;
}

// ---------------------------------------------------------------------------
// Chromagram
// ---------------------------------------------------------------------------

/// Per-frame STFT energy folded onto 12 pitch classes (A440 reference,
/// class 0 = A). Frames are L2-normalized; all-zero frames stay zero.
inline TimeSeries chromagram_stft(const Waveform& w, int n_fft = kDefaultNfft, int hop = 0,
                                  int n_chroma = 12) {
    if (n_chroma != 12) raise(errc::bad_parameter, "n_chroma must be 12");
    Spectrogram stft = stft_magnitude(w, n_fft, hop);

    std::vector<int> class_of(stft.bins, -1);
    for (std::size_t k = 1; k < stft.bins; ++k) {
        double semis = 12.0 * std::log2(stft.bin_frequencies[k] / 440.0);
        int cls = static_cast<int>(std::lround(semis)) % 12;
        if (cls < 0) cls += 12;
        class_of[k] = cls;
    }

    TimeSeries out;
    out.dims = 12;
    out.hop_length = stft.hop_length;
    out.sample_rate = stft.sample_rate;
    out.data.assign(stft.frame_count() * 12, 0.0);
    for (std::size_t f = 0; f < stft.frame_count(); ++f) {
        for (std::size_t k = 1; k < stft.bins; ++k) {
            double mag = stft.at(f, k);
            out.at(f, static_cast<std::size_t>(class_of[k])) += mag * mag;
        }
        double norm = 0.0;
        for (int c = 0; c < 12; ++c) norm += out.at(f, static_cast<std::size_t>(c)) * out.at(f, static_cast<std::size_t>(c));
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (int c = 0; c < 12; ++c) out.at(f, static_cast<std::size_t>(c)) /= norm;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Morlet continuous wavelet transform
// ---------------------------------------------------------------------------

/// Real Morlet wavelet samples at the given scale: pi^(-1/4) cos(w0 u) exp(-u^2/2)
/// scaled by 1/sqrt(s), evaluated over min(10*s, n_limit) points centered at 0.
inline std::vector<double> morlet_wavelet(double scale, std::size_t n_limit,
                                          double omega0 = 5.0) {
    auto m = static_cast<std::size_t>(std::min<double>(std::ceil(10.0 * scale),
                                                       static_cast<double>(n_limit)));
    if (m == 0) m = 1;
    std::vector<double> psi(m);
    const double norm = std::pow(kPi, -0.25) / std::sqrt(scale);
    for (std::size_t i = 0; i < m; ++i) {
        double u = (static_cast<double>(i) - (static_cast<double>(m) - 1.0) / 2.0) / scale;
        psi[i] = norm * std::cos(omega0 * u) * std::exp(-0.5 * u * u);
    }
    return psi;
}

/// Default CWT scales: 32 logarithmically spaced widths in [1, 256] samples.
inline std::vector<double> default_cwt_widths() {
    std::vector<double> widths(32);
    for (std::size_t i = 0; i < widths.size(); ++i)
        widths[i] = std::pow(2.0, 8.0 * static_cast<double>(i) / (widths.size() - 1));
    return widths;
}

/// "Same"-mode convolution of the signal with a real Morlet wavelet per scale:
/// one output row per width, each of input length. Runs in the frequency
/// domain (one signal FFT shared across scales).
inline TimeSeries morlet_cwt(const Waveform& w, const std::vector<double>& widths) {
    if (widths.empty()) raise(errc::bad_parameter, "widths must be non-empty");
    for (double s : widths)
        if (!(s > 0.0)) raise(errc::bad_parameter, "widths must be positive");
    if (w.samples.empty()) raise(errc::signal_too_short, "empty signal");

    const std::size_t n = w.samples.size();
    std::size_t max_kernel = 1;
    for (double s : widths) {
        auto m = static_cast<std::size_t>(std::min<double>(std::ceil(10.0 * s),
                                                           static_cast<double>(n)));
        max_kernel = std::max(max_kernel, std::max<std::size_t>(m, 1));
    }
    std::size_t conv_size = 1;
    while (conv_size < n + max_kernel - 1) conv_size <<= 1;

    FftPlan plan(conv_size);
    std::vector<std::complex<double>> signal_fft(conv_size);
    for (std::size_t i = 0; i < n; ++i) signal_fft[i] = w.samples[i];
    plan.forward(signal_fft);

    TimeSeries out;
    out.dims = widths.size();
    out.hop_length = 1;
    out.sample_rate = w.sample_rate;
    out.data.assign(n * widths.size(), 0.0);

    std::vector<std::complex<double>> buf(conv_size);
    for (std::size_t s = 0; s < widths.size(); ++s) {
        std::vector<double> psi = morlet_wavelet(widths[s], n);
        std::fill(buf.begin(), buf.end(), std::complex<double>{0.0, 0.0});
        for (std::size_t i = 0; i < psi.size(); ++i) buf[i] = psi[i];
        plan.forward(buf);
        for (std::size_t k = 0; k < conv_size; ++k) buf[k] *= signal_fft[k];
        plan.inverse(buf);
        // Full convolution starts at index 0; "same" alignment keeps the n
        // samples centered on the kernel midpoint.
        const std::size_t half = (psi.size() - 1) / 2;
        for (std::size_t i = 0; i < n; ++i) out.at(i, s) = buf[half + i].real();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Frame-level spectral descriptors
// ---------------------------------------------------------------------------

struct SpectralDescriptors {
    std::vector<double> slope;
    std::vector<double> flux;
    std::vector<double> entropy;
    std::vector<double> centroid;
    std::vector<double> spread;
    std::vector<double> skewness;
    std::vector<double> kurtosis;
    std::vector<double> flatness;
    std::vector<double> rolloff;
};

/// The nine frame-level descriptors of the magnitude spectrum. Silent frames
/// yield deterministic degenerate values: centroid/spread/skewness/kurtosis/
/// slope/entropy/rolloff = 0 and flatness = 1.
inline SpectralDescriptors spectral_descriptors(const Spectrogram& s,
                                                double rolloff_fraction = 0.85) {
    const std::size_t frames = s.frame_count();
    const std::size_t bins = s.bins;
    if (frames == 0 || bins == 0) raise(errc::bad_parameter, "empty spectrogram");

    SpectralDescriptors d;
    auto init = [&](std::vector<double>& v) { v.assign(frames, 0.0); };
    init(d.slope);
    init(d.flux);
    init(d.entropy);
    init(d.centroid);
    init(d.spread);
    init(d.skewness);
    init(d.kurtosis);
    init(d.flatness);
    init(d.rolloff);

    const std::vector<double>& f = s.bin_frequencies;
    double f_mean = 0.0;
    for (double v : f) f_mean += v;
    f_mean /= static_cast<double>(bins);
    double f_var = 0.0;
    for (double v : f) f_var += (v - f_mean) * (v - f_mean);

    std::vector<double> prev_norm(bins, 0.0);
    std::vector<double> cur_norm(bins, 0.0);

    for (std::size_t t = 0; t < frames; ++t) {
        const double* S = s.values.data() + t * bins;
        double total = 0.0;
        for (std::size_t k = 0; k < bins; ++k) total += S[k];

        // L1-normalized magnitude frame for flux (zero frames stay zero).
        for (std::size_t k = 0; k < bins; ++k) cur_norm[k] = total > 0.0 ? S[k] / total : 0.0;
        if (t > 0) {
            double acc = 0.0;
            for (std::size_t k = 0; k < bins; ++k) {
                double diff = cur_norm[k] - prev_norm[k];
                acc += diff * diff;
            }
            d.flux[t] = std::sqrt(acc);
        }
        std::swap(prev_norm, cur_norm);

        if (total <= 0.0) {
            d.flatness[t] = 1.0;
            continue; // remaining descriptors keep their degenerate zeros
        }

        // Moments of the magnitude-weighted frequency distribution.
        double mu = 0.0;
        for (std::size_t k = 0; k < bins; ++k) mu += f[k] * S[k];
        mu /= total;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (std::size_t k = 0; k < bins; ++k) {
            double dev = f[k] - mu;
            double wgt = S[k] / total;
            m2 += wgt * dev * dev;
            m3 += wgt * dev * dev * dev;
            m4 += wgt * dev * dev * dev * dev;
        }
        d.centroid[t] = mu;
        d.spread[t] = std::sqrt(m2);
        if (m2 > kLogEps) {
            d.skewness[t] = m3 / std::pow(m2, 1.5);
            d.kurtosis[t] = m4 / (m2 * m2) - 3.0;
        }

        // Least-squares slope of S(f) against f.
        double s_mean = total / static_cast<double>(bins);
        double cov = 0.0;
        for (std::size_t k = 0; k < bins; ++k) cov += (f[k] - f_mean) * (S[k] - s_mean);
        d.slope[t] = cov / f_var;

        // Shannon entropy (nats) of the L1-normalized power spectrum.
        double power_total = 0.0;
        for (std::size_t k = 0; k < bins; ++k) power_total += S[k] * S[k];
        double h = 0.0;
        if (power_total > 0.0) {
            for (std::size_t k = 0; k < bins; ++k) {
                double p = S[k] * S[k] / power_total;
                if (p > 0.0) h -= p * std::log(p);
            }
        }
        d.entropy[t] = h;

        // Flatness: geometric over arithmetic mean of the eps-floored power.
        double log_acc = 0.0, arith = 0.0;
        for (std::size_t k = 0; k < bins; ++k) {
            double p = S[k] * S[k] + kLogEps;
            log_acc += std::log(p);
            arith += p;
        }
        d.flatness[t] = std::exp(log_acc / static_cast<double>(bins)) /
                        (arith / static_cast<double>(bins));

        // Rolloff: smallest frequency below which rolloff_fraction of the
        // total magnitude lies.
        double cum = 0.0;
        for (std::size_t k = 0; k < bins; ++k) {
            cum += S[k];
            if (cum >= rolloff_fraction * total) {
                d.rolloff[t] = f[k];
                break;
            }
        }
    }
    return d;
}

} // namespace vocalis
