// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#include <catch2/catch.hpp>

#include <cmath>

#include "vocalis/prosody.hpp"

#include "testutil.hpp"

using namespace vocalis;

TEST_CASE("pure tones track within 2 Hz across the speech range", "[prosody][f0]") {
    for (double freq : {80.0, 120.0, 220.0, 330.0, 440.0}) {
        auto w = testutil::sine(freq, 0.5, 2.0, 16000);
        F0Contour c = track_f0(w);
        REQUIRE(c.values.size() > 100);

        std::size_t voiced = 0, accurate = 0;
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            if (!c.voiced_mask[i]) continue;
            ++voiced;
            if (std::abs(c.values[i] - freq) <= 2.0) ++accurate;
        }
        INFO("freq " << freq);
        REQUIRE(voiced == c.values.size()); // clean tone: every frame voiced
        REQUIRE(static_cast<double>(accurate) / static_cast<double>(voiced) >= 0.95);
    }
}

TEST_CASE("220 Hz sine: every frame voiced at 220 +/- 2 Hz", "[prosody][f0]") {
    auto w = testutil::sine(220.0, 0.5, 2.0, 16000);
    F0Contour c = track_f0(w);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        REQUIRE(c.voiced_mask[i]);
        REQUIRE(c.values[i] == Approx(220.0).margin(2.0));
    }
}

TEST_CASE("silence yields no voiced frames", "[prosody][f0]") {
    auto w = testutil::silence(1.0, 16000);
    F0Contour c = track_f0(w);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        REQUIRE_FALSE(c.voiced_mask[i]);
        REQUIRE(c.values[i] == 0.0);
    }
}

TEST_CASE("white noise stays mostly unvoiced", "[prosody][f0]") {
    auto w = testutil::white_noise(0.3, 2.0, 16000, 11);
    F0Contour c = track_f0(w);
    REQUIRE(static_cast<double>(c.voiced_count()) / static_cast<double>(c.values.size()) < 0.2);
}

TEST_CASE("pulse train with rich harmonics resolves to the true period", "[prosody][f0]") {
    // 150 Hz pulse train; octave-jump smoothing must keep the median near
    // 150 Hz, not an octave away.
    std::vector<double> periods(150, 1.0 / 150.0);
    std::vector<double> amps(150, 0.7);
    auto train = testutil::pulse_train(periods, amps, 16000);
    F0Contour c = track_f0(train.waveform);

    std::vector<double> voiced;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (c.voiced_mask[i]) voiced.push_back(c.values[i]);
    REQUIRE(voiced.size() > 20);
    std::sort(voiced.begin(), voiced.end());
    double median = voiced[voiced.size() / 2];
    REQUIRE(median >= 140.0);
    REQUIRE(median <= 160.0);
}

TEST_CASE("f0 contour invariants", "[prosody][f0][property]") {
    auto w = testutil::sine(220.0, 0.5, 1.0, 16000);
    F0Contour c = track_f0(w);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (c.voiced_mask[i]) {
            REQUIRE(c.values[i] >= 60.0);
            REQUIRE(c.values[i] <= 500.0);
        } else {
            REQUIRE(c.values[i] == 0.0);
        }
    }
}

TEST_CASE("f0_statistics over voiced frames", "[prosody][f0]") {
    SECTION("constant contour") {
        F0Contour c;
        c.values.assign(50, 220.0);
        c.voiced_mask.assign(50, true);
        F0Statistics st = f0_statistics(c);
        REQUIRE(st.mean == Approx(220.0));
        REQUIRE(st.sd == Approx(0.0).margin(1e-12));
    }

    SECTION("alternating 100/200 Hz") {
        F0Contour c;
        for (int i = 0; i < 20; ++i) {
            c.values.push_back(i % 2 == 0 ? 100.0 : 200.0);
            c.voiced_mask.push_back(true);
        }
        F0Statistics st = f0_statistics(c);
        REQUIRE(st.mean == Approx(150.0));
        REQUIRE(st.sd == Approx(50.0)); // population SD
    }

    SECTION("all unvoiced raises NoVoicedFrames") {
        F0Contour c;
        c.values.assign(10, 0.0);
        c.voiced_mask.assign(10, false);
        CHECK_THROWS_MATCHES(f0_statistics(c), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == errc::no_voiced_frames;
                             }));
    }
}

TEST_CASE("intensity of constant and sine signals", "[prosody]") {
    SECTION("constant amplitude a gives every frame a^2, SD 0") {
        Waveform w;
        w.sample_rate = 16000;
        w.samples.assign(16000, 0.3);
        TimeSeries t = intensity(w);
        for (double v : t.data) REQUIRE(v == Approx(0.09).epsilon(1e-12));
        REQUIRE(intensity_sd(w) == Approx(0.0).margin(1e-12));
    }

    SECTION("sine of amplitude A gives frame power ~ A^2/2") {
        auto w = testutil::sine(200.0, 0.8, 1.0, 16000); // 5 periods per 25 ms frame
        TimeSeries t = intensity(w);
        for (double v : t.data) REQUIRE(v == Approx(0.32).epsilon(0.01));
    }
}

TEST_CASE("rms of a sine is A/sqrt(2) and rms^2 equals intensity", "[prosody][property]") {
    auto w = testutil::sine(200.0, 0.6, 1.0, 16000);
    TimeSeries r = rms(w);
    for (double v : r.data) REQUIRE(v == Approx(0.6 / std::sqrt(2.0)).epsilon(0.01));

    TimeSeries p = intensity(w);
    REQUIRE(r.data.size() == p.data.size());
    for (std::size_t i = 0; i < r.data.size(); ++i)
        REQUIRE(r.data[i] * r.data[i] == Approx(p.data[i]).epsilon(1e-9));

    auto z = testutil::silence(0.5, 16000);
    for (double v : rms(z).data) REQUIRE(v == 0.0);
}

TEST_CASE("log energy identities", "[prosody]") {
    SECTION("full-scale square wave has log energy 0") {
        Waveform w;
        w.sample_rate = 16000;
        w.samples.resize(16000);
        for (std::size_t i = 0; i < w.samples.size(); ++i) w.samples[i] = i % 80 < 40 ? 1.0 : -1.0;
        REQUIRE(log_energy(w) == Approx(0.0).margin(1e-9));
    }

    SECTION("silence floors at ln(eps)") {
        auto w = testutil::silence(0.5, 16000);
        REQUIRE(log_energy(w) == Approx(std::log(1e-10)).epsilon(1e-12));
    }

    SECTION("sine of amplitude 0.5 gives ln(0.125)") {
        auto w = testutil::sine(100.0, 0.5, 1.0, 16000);
        REQUIRE(log_energy(w) == Approx(std::log(0.125)).margin(0.01));
    }

    SECTION("sliding variant matches the global one on a stationary signal") {
        Waveform w;
        w.sample_rate = 16000;
        w.samples.assign(16000, 0.5);
        TimeSeries t = sliding_log_energy(w);
        for (double v : t.data) REQUIRE(v == Approx(log_energy(w)).epsilon(1e-9));
    }
}

TEST_CASE("zero crossing counts", "[prosody]") {
    SECTION("100 Hz sine for 1 s crosses 200 times") {
        auto w = testutil::sine(100.0, 0.5, 1.0, 16000);
        ZeroCrossings z = zero_crossings(w);
        REQUIRE(std::abs(static_cast<long>(z.count) - 200L) <= 2);
        REQUIRE(z.rate == Approx(static_cast<double>(z.count) / (16000.0 - 1.0)));
    }

    SECTION("constant positive signal has zero crossings") {
        Waveform w;
        w.sample_rate = 8000;
        w.samples.assign(8000, 0.1);
        ZeroCrossings z = zero_crossings(w);
        REQUIRE(z.count == 0);
        REQUIRE(z.rate == 0.0);
    }

    SECTION("amplitude invariance") {
        auto w = testutil::white_noise(0.3, 0.5, 16000, 5);
        auto scaled = w;
        for (auto& s : scaled.samples) s *= 7.5;
        REQUIRE(zero_crossings(w).count == zero_crossings(scaled).count);
        TimeSeries a = sliding_zcr(w);
        TimeSeries b = sliding_zcr(scaled);
        for (std::size_t i = 0; i < a.data.size(); ++i) REQUIRE(a.data[i] == b.data[i]);
    }
}

TEST_CASE("crest factor of canonical shapes", "[prosody]") {
    SECTION("full-scale square wave gives 1.0") {
        Waveform w;
        w.sample_rate = 16000;
        w.samples.resize(16000);
        for (std::size_t i = 0; i < w.samples.size(); ++i) w.samples[i] = i % 80 < 40 ? 1.0 : -1.0;
        TimeSeries t = crest_factor(w);
        for (double v : t.data) REQUIRE(v == Approx(1.0).epsilon(1e-12));
    }

    SECTION("sine gives sqrt(2) within 1%") {
        auto w = testutil::sine(200.0, 0.5, 1.0, 16000);
        TimeSeries t = crest_factor(w);
        for (double v : t.data) REQUIRE(v == Approx(std::sqrt(2.0)).epsilon(0.01));
    }

    SECTION("silent frames are missing") {
        auto w = testutil::silence(0.5, 16000);
        TimeSeries t = crest_factor(w);
        for (double v : t.data) REQUIRE(is_missing(v));
    }

    SECTION("gain invariance") {
        auto w = testutil::white_noise(0.2, 0.5, 16000, 17);
        auto scaled = w;
        for (auto& s : scaled.samples) s *= 3.25;
        TimeSeries a = crest_factor(w);
        TimeSeries b = crest_factor(scaled);
        for (std::size_t i = 0; i < a.data.size(); ++i)
            REQUIRE(a.data[i] == Approx(b.data[i]).epsilon(1e-12));
    }
}
