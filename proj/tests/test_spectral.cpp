// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "vocalis/spectral.hpp"

#include "testutil.hpp"

using namespace vocalis;

TEST_CASE("STFT of a 1 kHz tone peaks at bin 64 for n_fft 1024 at 16 kHz", "[spectral]") {
    auto w = testutil::sine(1000.0, 0.8, 1.0, 16000);
    Spectrogram s = stft_magnitude(w, 1024, 160);
    REQUIRE(s.bins == 513);
    for (std::size_t f = 0; f < s.frame_count(); ++f) {
        std::size_t argmax = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < s.bins; ++k)
            if (s.at(f, k) > best) {
                best = s.at(f, k);
                argmax = k;
            }
        REQUIRE(argmax == 64);
    }
}

TEST_CASE("STFT of silence is all zero", "[spectral]") {
    auto w = testutil::silence(0.5, 16000);
    Spectrogram s = stft_magnitude(w, 512, 160);
    for (double v : s.values) REQUIRE(v == 0.0);
}

TEST_CASE("Parseval: one-sided spectrum energy equals windowed frame energy", "[spectral][property]") {
    auto w = testutil::white_noise(0.3, 0.3, 16000, 555);
    const int n_fft = 512;
    Spectrogram s = stft_magnitude(w, n_fft, 160);
    auto win = window_values(WindowKind::hann, n_fft);

    for (std::size_t f = 0; f < s.frame_count(); ++f) {
        double time_energy = 0.0;
        for (int i = 0; i < n_fft; ++i) {
            double v = w.samples[f * 160 + static_cast<std::size_t>(i)] * win[static_cast<std::size_t>(i)];
            time_energy += v * v;
        }
        double spec_energy = s.at(f, 0) * s.at(f, 0) + s.at(f, s.bins - 1) * s.at(f, s.bins - 1);
        for (std::size_t k = 1; k + 1 < s.bins; ++k) spec_energy += 2.0 * s.at(f, k) * s.at(f, k);
        spec_energy /= n_fft;
        REQUIRE(spec_energy == Approx(time_energy).epsilon(1e-6));
    }
}

TEST_CASE("log mel spectrogram of silence is ln(eps) everywhere", "[spectral]") {
    auto w = testutil::silence(0.5, 16000);
    Spectrogram mel = log_mel_spectrogram(w, 512, 160, 40);
    for (double v : mel.values) REQUIRE(v == Approx(std::log(kLogEps)).epsilon(1e-12));
}

TEST_CASE("log mel spectrogram of a 1 kHz tone peaks at the band containing 1 kHz",
          "[spectral]") {
    auto w = testutil::sine(1000.0, 0.8, 1.0, 16000);
    const int n_mels = 40;
    Spectrogram mel = log_mel_spectrogram(w, 512, 160, n_mels);

    // Oracle: locate the band whose center is nearest 1 kHz from the filter
    // edge construction itself.
    const double lo = melscale::hz_to_mel(0.0);
    const double hi = melscale::hz_to_mel(8000.0);
    int expected = -1;
    for (int m = 0; m < n_mels; ++m) {
        double left = melscale::mel_to_hz(lo + (hi - lo) * m / (n_mels + 1.0));
        double right = melscale::mel_to_hz(lo + (hi - lo) * (m + 2.0) / (n_mels + 1.0));
        if (1000.0 > left && 1000.0 < right) {
            expected = m;
            break;
        }
    }
    REQUIRE(expected >= 0);

    for (std::size_t f = 0; f < mel.frame_count(); ++f) {
        std::size_t argmax = 0;
        double best = mel.at(f, 0);
        for (std::size_t k = 1; k < mel.bins; ++k)
            if (mel.at(f, k) > best) {
                best = mel.at(f, k);
                argmax = k;
            }
        // The peak band may be either triangle overlapping 1 kHz.
        REQUIRE(std::abs(static_cast<int>(argmax) - expected) <= 1);
    }
}

TEST_CASE("mel filterbank rows respond to a flat power spectrum", "[spectral]") {
    const int n_fft = 512;
    auto fb = mel_filterbank(40, n_fft, 16000, 0.0, 8000.0);
    const std::size_t bins = n_fft / 2 + 1;
    for (int m = 0; m < 40; ++m) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < bins; ++k) row_sum += fb[static_cast<std::size_t>(m) * bins + k];
        REQUIRE(row_sum > 0.0);
    }
}

TEST_CASE("mel filterbank validates the frequency band", "[spectral]") {
    CHECK_THROWS_AS(mel_filterbank(40, 512, 16000, 5000.0, 4000.0), Error);
    CHECK_THROWS_AS(mel_filterbank(40, 512, 16000, 0.0, 9000.0), Error);
    CHECK_THROWS_AS(mel_filterbank(1, 512, 16000, 0.0, 8000.0), Error);
}

TEST_CASE("MFCC of silence concentrates in coefficient 0", "[spectral]") {
    auto w = testutil::silence(0.5, 16000);
    const int n_mels = 40;
    TimeSeries m = mfcc(w, 13, 512, 160, n_mels);
    const double expected_c0 = std::log(kLogEps) * std::sqrt(static_cast<double>(n_mels));
    for (std::size_t f = 0; f < m.frame_count(); ++f) {
        REQUIRE(m.at(f, 0) == Approx(expected_c0).epsilon(1e-9));
        for (std::size_t k = 1; k < m.dims; ++k) REQUIRE(m.at(f, k) == Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("MFCC frame-to-frame variance vanishes for a steady tone", "[spectral]") {
    // 1 kHz at 16 kHz: the 160-sample hop spans exactly 10 periods, so every
    // analysis frame sees identical samples.
    auto w = testutil::sine(1000.0, 0.5, 1.0, 16000);
    TimeSeries m = mfcc(w, 13, 512, 160, 40);
    for (std::size_t k = 0; k < m.dims; ++k) {
        double mean = 0.0;
        for (std::size_t f = 0; f < m.frame_count(); ++f) mean += m.at(f, k);
        mean /= static_cast<double>(m.frame_count());
        double var = 0.0;
        for (std::size_t f = 0; f < m.frame_count(); ++f) {
            double dev = m.at(f, k) - mean;
            var += dev * dev;
        }
        var /= static_cast<double>(m.frame_count());
        REQUIRE(var < 1e-12);
    }
}

TEST_CASE("orthonormal DCT-II matches a direct O(n^2) evaluation", "[spectral][oracle]") {
    // Feed a known log-mel-like vector through the mfcc path indirectly by
    // checking the transform matrix contract: reconstruct mfcc output from a
    // naive DCT of the log mel spectrogram.
    auto w = testutil::white_noise(0.3, 0.2, 16000, 31);
    const int n_mels = 24;
    const int n_mfcc = 24;
    Spectrogram mel = log_mel_spectrogram(w, 512, 160, n_mels);
    TimeSeries m = mfcc(w, n_mfcc, 512, 160, n_mels);

    REQUIRE(m.frame_count() == mel.frame_count());
    for (std::size_t f = 0; f < mel.frame_count(); ++f) {
        for (int k = 0; k < n_mfcc; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n_mels; ++i)
                acc += mel.at(f, static_cast<std::size_t>(i)) *
                       std::cos(kPi * k * (2.0 * i + 1.0) / (2.0 * n_mels));
            acc *= k == 0 ? std::sqrt(1.0 / n_mels) : std::sqrt(2.0 / n_mels);
            REQUIRE(m.at(f, static_cast<std::size_t>(k)) == Approx(acc).margin(1e-9));
        }
    }
}

TEST_CASE("global gain moves only MFCC coefficient 0", "[spectral][property]") {
    auto w = testutil::white_noise(0.2, 0.3, 16000, 77);
    auto scaled = w;
    for (auto& s : scaled.samples) s *= 0.25;

    TimeSeries a = mfcc(w, 13, 512, 160, 40);
    TimeSeries b = mfcc(scaled, 13, 512, 160, 40);
    REQUIRE(a.frame_count() == b.frame_count());
    for (std::size_t f = 0; f < a.frame_count(); ++f) {
        REQUIRE(a.at(f, 0) != Approx(b.at(f, 0)).margin(1e-6));
        for (std::size_t k = 1; k < a.dims; ++k)
            REQUIRE(a.at(f, k) == Approx(b.at(f, k)).margin(1e-6));
    }
}

TEST_CASE("bark spectrogram concentrates a 1 kHz tone in band 8", "[spectral]") {
    // Zwicker edges: band 8 spans 920-1080 Hz, which contains 1 kHz.
    auto w = testutil::sine(1000.0, 0.8, 1.0, 16000);
    Spectrogram bark = bark_spectrogram(w, 512, 160);
    REQUIRE(bark.bins == 24);
    for (std::size_t f = 0; f < bark.frame_count(); ++f) {
        std::size_t argmax = 0;
        double best = -1.0;
        for (std::size_t b = 0; b < bark.bins; ++b)
            if (bark.at(f, b) > best) {
                best = bark.at(f, b);
                argmax = b;
            }
        REQUIRE(argmax == 8);
    }
}

TEST_CASE("bark spectrogram of silence is all zero", "[spectral]") {
    auto w = testutil::silence(0.3, 16000);
    Spectrogram bark = bark_spectrogram(w, 512, 160);
    for (double v : bark.values) REQUIRE(v == 0.0);
}

TEST_CASE("21 usable bark bands at 16 kHz", "[spectral]") {
    REQUIRE(usable_bark_bands(16000) == 21);
    REQUIRE(usable_bark_bands(44100) == 24);
}

TEST_CASE("chroma: A440 dominates and octaves fold together", "[spectral]") {
    auto a4 = testutil::sine(440.0, 0.8, 0.5, 16000);
    auto a5 = testutil::sine(880.0, 0.8, 0.5, 16000);
    TimeSeries c4 = chromagram_stft(a4, 2048, 512);
    TimeSeries c5 = chromagram_stft(a5, 2048, 512);

    auto argmax_class = [](const TimeSeries& c, std::size_t f) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < 12; ++k)
            if (c.at(f, k) > c.at(f, best)) best = k;
        return best;
    };
    for (std::size_t f = 0; f < c4.frame_count(); ++f) REQUIRE(argmax_class(c4, f) == 0);
    for (std::size_t f = 0; f < c5.frame_count(); ++f) REQUIRE(argmax_class(c5, f) == 0);
}

TEST_CASE("chroma of silence stays zero", "[spectral]") {
    auto w = testutil::silence(0.3, 16000);
    TimeSeries c = chromagram_stft(w, 2048, 512);
    for (double v : c.data) REQUIRE(v == 0.0);
}

TEST_CASE("morlet CWT basics", "[spectral]") {
    SECTION("zero signal gives zero output") {
        auto w = testutil::silence(0.05, 16000);
        TimeSeries t = morlet_cwt(w, {4.0, 16.0});
        for (double v : t.data) REQUIRE(v == 0.0);
    }

    SECTION("linearity: doubling the input doubles the output") {
        auto w = testutil::white_noise(0.2, 0.05, 16000, 8);
        auto w2 = w;
        for (auto& s : w2.samples) s *= 2.0;
        TimeSeries a = morlet_cwt(w, {8.0});
        TimeSeries b = morlet_cwt(w2, {8.0});
        for (std::size_t i = 0; i < a.data.size(); ++i)
            REQUIRE(b.data[i] == Approx(2.0 * a.data[i]).margin(1e-12));
    }

    SECTION("matches a direct time-domain convolution oracle") {
        auto w = testutil::white_noise(0.5, 0.04, 16000, 99); // 640 samples
        const std::vector<double> widths = {3.0, 17.5, 40.0};
        TimeSeries fast = morlet_cwt(w, widths);

        const std::size_t n = w.samples.size();
        for (std::size_t s = 0; s < widths.size(); ++s) {
            std::vector<double> psi = morlet_wavelet(widths[s], n);
            const auto m = static_cast<std::ptrdiff_t>(psi.size());
            const auto half = (m - 1) / 2;
            for (std::size_t i = 0; i < n; i += 7) {
                double acc = 0.0;
                for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
                    const auto k = static_cast<std::ptrdiff_t>(i) - j + half;
                    if (k >= 0 && k < m) acc += w.samples[static_cast<std::size_t>(j)] *
                                                 psi[static_cast<std::size_t>(k)];
                }
                REQUIRE(fast.at(i, s) == Approx(acc).margin(1e-10));
            }
        }
    }

    SECTION("impulse response equals the time-reversed wavelet") {
        Waveform w;
        w.sample_rate = 16000;
        w.samples.assign(801, 0.0);
        const std::size_t t0 = 400;
        w.samples[t0] = 1.0;

        const double scale = 12.0;
        TimeSeries t = morlet_cwt(w, {scale});
        std::vector<double> psi = morlet_wavelet(scale, w.samples.size());
        const auto half = (static_cast<std::ptrdiff_t>(psi.size()) - 1) / 2;
        for (std::size_t i = 0; i < w.samples.size(); ++i) {
            auto idx = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(t0) + half;
            double reversed = 0.0;
            if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(psi.size()))
                reversed = psi[psi.size() - 1 - static_cast<std::size_t>(idx)];
            REQUIRE(t.at(i, 0) == Approx(reversed).margin(1e-12));
        }
    }
}

TEST_CASE("descriptors of a pure 1 kHz tone", "[spectral]") {
    auto w = testutil::sine(1000.0, 0.8, 1.0, 16000);
    Spectrogram s = stft_magnitude(w, 512, 160);
    SpectralDescriptors d = spectral_descriptors(s);

    const double bin_width = 16000.0 / 512.0;
    for (std::size_t f = 0; f < s.frame_count(); ++f) {
        REQUIRE(d.centroid[f] == Approx(1000.0).margin(bin_width));
        REQUIRE(d.rolloff[f] == Approx(1000.0).margin(bin_width + 1e-9));
        REQUIRE(d.spread[f] < 100.0);
        REQUIRE(d.flatness[f] < 0.01);
    }
}

TEST_CASE("descriptors of an exactly flat spectrum follow uniform identities", "[spectral]") {
    Spectrogram s;
    s.bins = 64;
    s.sample_rate = 16000;
    s.hop_length = 160;
    s.values.assign(3 * 64, 0.5);
    s.bin_frequencies.resize(64);
    for (std::size_t k = 0; k < 64; ++k) s.bin_frequencies[k] = static_cast<double>(k) * 125.0;

    SpectralDescriptors d = spectral_descriptors(s);
    double f_mean = 0.0;
    for (double v : s.bin_frequencies) f_mean += v;
    f_mean /= 64.0;

    for (std::size_t f = 0; f < 3; ++f) {
        REQUIRE(d.entropy[f] == Approx(std::log(64.0)).epsilon(1e-9));
        REQUIRE(d.flatness[f] == Approx(1.0).epsilon(1e-9));
        REQUIRE(d.centroid[f] == Approx(f_mean).epsilon(1e-12));
        REQUIRE(d.slope[f] == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("silent frames produce the documented degenerate descriptor values", "[spectral]") {
    auto w = testutil::silence(0.5, 16000);
    Spectrogram s = stft_magnitude(w, 512, 160);
    SpectralDescriptors d = spectral_descriptors(s);
    for (std::size_t f = 0; f < s.frame_count(); ++f) {
        REQUIRE(d.centroid[f] == 0.0);
        REQUIRE(d.spread[f] == 0.0);
        REQUIRE(d.skewness[f] == 0.0);
        REQUIRE(d.kurtosis[f] == 0.0);
        REQUIRE(d.slope[f] == 0.0);
        REQUIRE(d.entropy[f] == 0.0);
        REQUIRE(d.flatness[f] == 1.0);
        REQUIRE(d.rolloff[f] == 0.0);
        REQUIRE(d.flux[f] == 0.0);
    }
}

TEST_CASE("flatness separates noise from tones over random seeds", "[spectral][montecarlo]") {
    double noise_flatness_sum = 0.0;
    int noise_frames = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto w = testutil::white_noise(0.3, 0.2, 16000, seed);
        Spectrogram s = stft_magnitude(w, 512, 160);
        SpectralDescriptors d = spectral_descriptors(s);
        for (double v : d.flatness) {
            noise_flatness_sum += v;
            ++noise_frames;
        }
    }
    REQUIRE(noise_flatness_sum / noise_frames > 0.4);

    auto tone = testutil::sine(1000.0, 0.8, 0.5, 16000);
    SpectralDescriptors d = spectral_descriptors(stft_magnitude(tone, 512, 160));
    for (double v : d.flatness) REQUIRE(v < 0.01);
}

TEST_CASE("descriptor ranges hold on arbitrary input", "[spectral][property]") {
    auto w = testutil::white_noise(0.4, 0.4, 16000, 2024);
    for (std::size_t i = 0; i < w.samples.size(); i += 3) w.samples[i] *= 0.01;
    Spectrogram s = stft_magnitude(w, 512, 160);
    SpectralDescriptors d = spectral_descriptors(s);
    const double nyquist = 8000.0;
    const double max_entropy = std::log(static_cast<double>(s.bins));
    for (std::size_t f = 0; f < s.frame_count(); ++f) {
        REQUIRE(d.centroid[f] >= 0.0);
        REQUIRE(d.centroid[f] <= nyquist);
        REQUIRE(d.rolloff[f] >= 0.0);
        REQUIRE(d.rolloff[f] <= nyquist);
        REQUIRE(d.spread[f] >= 0.0);
        REQUIRE(d.flatness[f] > 0.0);
        REQUIRE(d.flatness[f] <= 1.0 + 1e-12);
        REQUIRE(d.entropy[f] >= 0.0);
        REQUIRE(d.entropy[f] <= max_entropy + 1e-9);
        REQUIRE(d.flux[f] >= 0.0);
    }
}

TEST_CASE("flux is zero for a stationary tone aligned to the hop", "[spectral][property]") {
    auto w = testutil::sine(1000.0, 0.5, 0.5, 16000); // 160-sample hop = 10 periods
    Spectrogram s = stft_magnitude(w, 512, 160);
    SpectralDescriptors d = spectral_descriptors(s);
    for (double v : d.flux) REQUIRE(v == Approx(0.0).margin(1e-9));
}
