// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#include <catch2/catch.hpp>

#include <cmath>
#include <cstdlib>
#include <random>

#include "vocalis/audio_io.hpp"
#include "vocalis/windowing.hpp"

#include "testutil.hpp"

using namespace vocalis;

TEST_CASE("load_audio decodes a PCM-16 WAV with expected length and rate", "[audio]") {
    testutil::TempDir tmp("wav_basic");
    auto w = testutil::sine(440.0, 0.5, 1.0, 44100);
    wav::write(tmp.path() / "tone.wav", w.samples, 1, 44100);

    Waveform loaded = load_audio(tmp.path() / "tone.wav");
    REQUIRE(loaded.sample_rate == 44100);
    REQUIRE(loaded.samples.size() == 44100);
    for (double s : loaded.samples) {
        REQUIRE(std::isfinite(s));
        REQUIRE(std::abs(s) <= 1.0);
    }
}

TEST_CASE("load_audio maps digital silence to exact zeros", "[audio]") {
    testutil::TempDir tmp("wav_zero");
    std::vector<double> zeros(8000, 0.0);
    wav::write(tmp.path() / "zero.wav", zeros, 1, 8000);

    Waveform loaded = load_audio(tmp.path() / "zero.wav");
    for (double s : loaded.samples) REQUIRE(s == 0.0);
}

TEST_CASE("PCM-16 decode/encode/decode round trip is sample-exact", "[audio]") {
    testutil::TempDir tmp("wav_roundtrip");
    auto w = testutil::white_noise(0.4, 0.25, 16000, 1234);
    wav::write(tmp.path() / "a.wav", w.samples, 1, 16000);

    Waveform first = load_audio(tmp.path() / "a.wav");
    wav::write(tmp.path() / "b.wav", first.samples, 1, 16000);
    Waveform second = load_audio(tmp.path() / "b.wav");

    REQUIRE(first.samples.size() == second.samples.size());
    for (std::size_t i = 0; i < first.samples.size(); ++i)
        REQUIRE(first.samples[i] == second.samples[i]);
}

TEST_CASE("multi-channel WAV is averaged to mono", "[audio]") {
    testutil::TempDir tmp("wav_stereo");
    // L = 0.5, R = -0.25 constant -> mono 0.125
    std::vector<double> interleaved;
    for (int i = 0; i < 1000; ++i) {
        interleaved.push_back(0.5);
        interleaved.push_back(-0.25);
    }
    wav::write(tmp.path() / "st.wav", interleaved, 2, 16000, wav::SampleFormat::float32);

    Waveform loaded = load_audio(tmp.path() / "st.wav");
    REQUIRE(loaded.samples.size() == 1000);
    for (double s : loaded.samples) REQUIRE(s == Approx(0.125).margin(1e-7));
}

TEST_CASE("24-bit, 32-bit and float WAVs decode consistently", "[audio]") {
    testutil::TempDir tmp("wav_depths");
    auto w = testutil::sine(500.0, 0.7, 0.1, 16000);
    wav::write(tmp.path() / "p24.wav", w.samples, 1, 16000, wav::SampleFormat::pcm24);
    wav::write(tmp.path() / "p32.wav", w.samples, 1, 16000, wav::SampleFormat::pcm32);
    wav::write(tmp.path() / "f32.wav", w.samples, 1, 16000, wav::SampleFormat::float32);

    Waveform p24 = load_audio(tmp.path() / "p24.wav");
    Waveform p32 = load_audio(tmp.path() / "p32.wav");
    Waveform f32 = load_audio(tmp.path() / "f32.wav");
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        REQUIRE(p24.samples[i] == Approx(w.samples[i]).margin(2e-7));
        REQUIRE(p32.samples[i] == Approx(w.samples[i]).margin(1e-9));
        REQUIRE(f32.samples[i] == Approx(w.samples[i]).margin(1e-7));
    }
}

TEST_CASE("load_audio error paths", "[audio]") {
    testutil::TempDir tmp("wav_errors");
    CHECK_THROWS_MATCHES(load_audio(tmp.path() / "missing.wav"), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::file_not_found; }));

    std::ofstream(tmp.path() / "junk.wav") << "definitely not audio";
    CHECK_THROWS_MATCHES(load_audio(tmp.path() / "junk.wav"), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::unsupported_format; }));

    // Structurally valid WAV with an empty data chunk.
    wav::write(tmp.path() / "empty.wav", {}, 1, 16000);
    CHECK_THROWS_MATCHES(load_audio(tmp.path() / "empty.wav"), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::empty_audio; }));
}

TEST_CASE("audio extensions are recognized case-insensitively", "[audio]") {
    REQUIRE(is_audio_extension("a.WAV"));
    REQUIRE(is_audio_extension("b.Flac"));
    REQUIRE(is_audio_extension("c.wav"));
    REQUIRE_FALSE(is_audio_extension("d.mp3"));
    REQUIRE_FALSE(is_audio_extension("e.wav.txt"));

    testutil::TempDir tmp("wav_upper");
    auto w = testutil::sine(440.0, 0.5, 0.2, 16000);
    wav::write(tmp.path() / "TONE.WAV", w.samples, 1, 16000);
    Waveform loaded = load_audio(tmp.path() / "TONE.WAV");
    REQUIRE(loaded.samples.size() == w.samples.size());
}

TEST_CASE("resampling changes length by the rate ratio", "[audio]") {
    testutil::TempDir tmp("wav_resample_len");
    auto w = testutil::sine(440.0, 0.5, 1.0, 44100);
    wav::write(tmp.path() / "tone.wav", w.samples, 1, 44100);

    Waveform loaded = load_audio(tmp.path() / "tone.wav", 16000);
    REQUIRE(loaded.sample_rate == 16000);
    REQUIRE(std::abs(static_cast<long>(loaded.samples.size()) - 16000L) <= 1);
}

TEST_CASE("resampling preserves a pure tone's spectral peak", "[audio]") {
    auto peak_bin = [](const std::vector<double>& y, int rate) {
        const std::size_t n_fft = 4096;
        FftPlan plan(n_fft);
        std::vector<double> frame(y.begin() + 2000, y.begin() + 2000 + n_fft);
        auto win = apply_window(frame, WindowKind::hann);
        auto spec = plan.real_forward(win);
        std::size_t argmax = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            double mag = std::abs(spec[k]);
            if (mag > best) {
                best = mag;
                argmax = k;
            }
        }
        return static_cast<double>(argmax) * rate / n_fft;
    };

    SECTION("downsampling 44.1 kHz to 16 kHz") {
        auto w = testutil::sine(1000.0, 0.8, 1.0, 44100);
        std::vector<double> y = resample(w.samples, 44100, 16000);
        REQUIRE(peak_bin(y, 16000) == Approx(1000.0).margin(16000.0 / 4096.0));
    }

    SECTION("upsampling 16 kHz to 44.1 kHz") {
        auto w = testutil::sine(1000.0, 0.8, 1.0, 16000);
        std::vector<double> y = resample(w.samples, 16000, 44100);
        REQUIRE(peak_bin(y, 44100) == Approx(1000.0).margin(44100.0 / 4096.0));
    }
}

TEST_CASE("frame_signal obeys the frame count formula", "[audio]") {
    auto w = testutil::sine(100.0, 0.5, 1.0, 16000);
    FrameSequence seq = frame_signal(w, 0.025, 0.010);
    REQUIRE(seq.frames.size() == 98); // floor((16000-400)/160)+1
    for (const auto& f : seq.frames) REQUIRE(f.size() == 400);
}

TEST_CASE("frame_signal boundary cases", "[audio]") {
    Waveform w;
    w.sample_rate = 1000;
    w.samples.assign(100, 0.25);

    FrameSequence one = frame_signal(w, 0.1, 0.05); // frame == N
    REQUIRE(one.frames.size() == 1);

    w.samples.resize(99); // N = frame_length - 1
    CHECK_THROWS_MATCHES(frame_signal(w, 0.1, 0.05), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::signal_too_short; }));
}

TEST_CASE("frame count formula holds over random triples", "[audio][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t frame = 1 + rng() % 500;
        std::size_t hop = 1 + rng() % 300;
        std::size_t n = frame + rng() % 5000;
        Waveform w;
        w.sample_rate = 1000;
        w.samples.assign(n, 0.0);
        double frame_s = static_cast<double>(frame) / 1000.0;
        double hop_s = static_cast<double>(hop) / 1000.0;
        FrameSequence seq = frame_signal(w, frame_s, hop_s);
        REQUIRE(seq.frames.size() == (n - frame) / hop + 1);
    }
}

TEST_CASE("framing a constant signal yields identical frames", "[audio][property]") {
    Waveform w;
    w.sample_rate = 8000;
    w.samples.assign(4000, 0.31);
    FrameSequence seq = frame_signal(w, 0.02, 0.007);
    for (const auto& f : seq.frames)
        for (double v : f) REQUIRE(v == 0.31);
}

TEST_CASE("window behavior", "[audio]") {
    std::vector<double> frame(400, 1.0);

    SECTION("rectangular is the identity") {
        auto out = apply_window(frame, WindowKind::rectangular);
        REQUIRE(out == frame);
    }

    SECTION("hann of all-ones equals the window itself, endpoints zero") {
        auto out = apply_window(frame, WindowKind::hann);
        REQUIRE(out.front() == 0.0);
        REQUIRE(out.back() == 0.0);
        REQUIRE(out[200] == Approx(1.0).margin(1e-4));
    }

    SECTION("hann window sum matches direct formula evaluation") {
        // Oracle: sum of 0.5*(1 - cos(2*pi*n/(L-1))) computed independently.
        const std::size_t L = 400;
        double expected = 0.0;
        for (std::size_t n = 0; n < L; ++n)
            expected += 0.5 * (1.0 - std::cos(2.0 * kPi * n / (L - 1)));
        auto out = apply_window(frame, WindowKind::hann);
        double sum = 0.0;
        for (double v : out) sum += v;
        REQUIRE(sum == Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("FLAC decode matches the samples we encoded", "[audio][flac]") {
    testutil::TempDir tmp("flac_roundtrip");
    auto w = testutil::white_noise(0.4, 0.7, 16000, 4321);

    std::vector<std::int32_t> q(w.samples.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        double v = w.samples[i] * 32768.0;
        if (v > 32767.0) v = 32767.0;
        if (v < -32768.0) v = -32768.0;
        q[i] = static_cast<std::int32_t>(std::lrint(v));
    }
    testutil::write_file(tmp.path() / "t.flac", testutil::flac_encode_pcm16({q}, 16000));

    Waveform loaded = load_audio(tmp.path() / "t.flac");
    REQUIRE(loaded.sample_rate == 16000);
    REQUIRE(loaded.samples.size() == q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        REQUIRE(loaded.samples[i] == Approx(q[i] / 32768.0).margin(1e-12));
}

TEST_CASE("FLAC stereo left/side decorrelation decodes and averages to mono", "[audio][flac]") {
    testutil::TempDir tmp("flac_stereo");
    const std::size_t n = 9000;
    std::vector<std::int32_t> left(n), right(n);
    std::mt19937_64 rng(7);
    for (std::size_t i = 0; i < n; ++i) {
        left[i] = static_cast<std::int32_t>(rng() % 20001) - 10000;
        right[i] = static_cast<std::int32_t>(rng() % 20001) - 10000;
    }
    testutil::write_file(
        tmp.path() / "ls.flac",
        testutil::flac_encode_pcm16({left, right}, 22050, testutil::FlacStereoMode::left_side));

    Waveform loaded = load_audio(tmp.path() / "ls.flac");
    REQUIRE(loaded.sample_rate == 22050);
    REQUIRE(loaded.samples.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
        double expected = (left[i] + right[i]) / 2.0 / 32768.0;
        REQUIRE(loaded.samples[i] == Approx(expected).margin(1e-12));
    }
}

TEST_CASE("FLAC constant subframes decode", "[audio][flac]") {
    testutil::TempDir tmp("flac_const");
    std::vector<std::int32_t> dc(5000, -1234);
    testutil::write_file(tmp.path() / "dc.flac", testutil::flac_encode_pcm16({dc}, 16000));
    Waveform loaded = load_audio(tmp.path() / "dc.flac");
    REQUIRE(loaded.samples.size() == 5000);
    for (double s : loaded.samples) REQUIRE(s == Approx(-1234 / 32768.0).margin(1e-12));
}

TEST_CASE("malformed FLAC streams throw instead of misbehaving", "[audio][flac]") {
    testutil::TempDir tmp("flac_fuzz");

    SECTION("random bytes behind a valid magic") {
        std::mt19937_64 rng(1337);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<unsigned char> bytes = {'f', 'L', 'a', 'C'};
            const std::size_t len = 64 + rng() % 4096;
            for (std::size_t i = 0; i < len; ++i)
                bytes.push_back(static_cast<unsigned char>(rng() & 0xFF));
            CHECK_THROWS_AS(flac::decode(bytes, "fuzz"), Error);
        }
    }

    SECTION("a truncated valid stream") {
        auto w = testutil::white_noise(0.4, 0.5, 16000, 2);
        std::vector<std::int32_t> q(w.samples.size());
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] = static_cast<std::int32_t>(std::lrint(w.samples[i] * 30000.0));
        std::vector<unsigned char> full = testutil::flac_encode_pcm16({q}, 16000);
        std::vector<unsigned char> cut(full.begin(),
                                       full.begin() + static_cast<std::ptrdiff_t>(full.size() / 2));
        CHECK_THROWS_AS(flac::decode(cut, "truncated"), Error);
    }
}

#ifndef VOCALIS_SOURCE_DIR
#define VOCALIS_SOURCE_DIR "."
#endif

TEST_CASE("real-world FLAC streams decode bit-exactly (STREAMINFO MD5)", "[audio][flac]") {
    // Exercises LPC subframes, Rice partitions and long streams against the
    // PCM digest the encoder embedded. Skips when no corpus is available.
    std::filesystem::path dir;
    if (const char* env = std::getenv("VOCALIS_LIBRISPEECH_DIR")) dir = env;
    else dir = std::filesystem::path(VOCALIS_SOURCE_DIR) / "tests" / "data" / "librispeech";
    if (!std::filesystem::is_directory(dir)) {
        SUCCEED("no FLAC corpus available; set VOCALIS_LIBRISPEECH_DIR to enable");
        return;
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".flac") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    files.resize(std::min<std::size_t>(files.size(), 10));
    REQUIRE_FALSE(files.empty());

    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
        // STREAMINFO digest lives at byte 26 of the stream.
        REQUIRE(bytes.size() > 42);
        unsigned char expected[16];
        std::memcpy(expected, bytes.data() + 26, 16);

        wav::DecodedAudio decoded = flac::decode(bytes, path.string());
        testutil::Md5 md5;
        std::vector<unsigned char> pcm(decoded.interleaved.size() * 2);
        for (std::size_t i = 0; i < decoded.interleaved.size(); ++i) {
            auto v = static_cast<std::int16_t>(std::lrint(decoded.interleaved[i] * 32768.0));
            pcm[i * 2] = static_cast<unsigned char>(v & 0xFF);
            pcm[i * 2 + 1] = static_cast<unsigned char>((v >> 8) & 0xFF);
        }
        md5.update(pcm.data(), pcm.size());
        INFO(path.filename().string());
        REQUIRE(std::memcmp(md5.digest().data(), expected, 16) == 0);
    }
}
