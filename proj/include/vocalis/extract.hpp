// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0
//
// Component registry and the batch extraction pipeline. Each registered
// component declares its parameter schema and output layout so the CSV
// column schema is fully determined by the configuration, and extraction
// runs one file per worker with a deterministic final ordering.

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vocalis/audio_io.hpp"
#include "vocalis/clinical.hpp"
#include "vocalis/config.hpp"
#include "vocalis/feature_matrix.hpp"
#include "vocalis/loudness.hpp"
#include "vocalis/prosody.hpp"
#include "vocalis/spectral.hpp"
#include "vocalis/statistics.hpp"
#include "vocalis/waveform.hpp"

namespace vocalis {

using ParamMap = std::map<std::string, double>;

/// Pipeline-level F0 search range. The tracker itself defaults to
/// [60, 500] Hz; the batch pipeline narrows to the range the reference
/// extraction chain used (RAPT's conventional 60-240 Hz default) so
/// published corpus statistics are comparable. Override per component with
/// f0_min / f0_max.
inline constexpr double kPipelineF0Min = 60.0;
inline constexpr double kPipelineF0Max = 240.0;

struct ParamDef {
    double def = 0.0;
    double min = 0.0;
    double max = 0.0;
    bool integer = false;
};

/// Declared output slot: a scalar (ts_dims == 0) or a time series with a
/// config-determined dimension count.
struct OutputDecl {
    std::string suffix; // empty for a component's single anonymous output
    std::size_t ts_dims = 0;
};

struct ComponentOutput {
    std::string suffix;
    bool is_series = false;
    double scalar = kMissing;
    TimeSeries series;

    static ComponentOutput make_scalar(std::string suffix, double v) {
        ComponentOutput o;
        o.suffix = std::move(suffix);
        o.scalar = v;
        return o;
    }
    static ComponentOutput make_series(std::string suffix, TimeSeries t) {
        ComponentOutput o;
        o.suffix = std::move(suffix);
        o.is_series = true;
        o.series = std::move(t);
        return o;
    }
};

/// Per-file memo of shared intermediates so components do not recompute the
/// pitch track or STFT.
class ExtractionCache {
public:
    const F0Contour& f0(const Waveform& w) {
        if (!f0_attempted_) {
            f0_attempted_ = true;
            try {
                F0TrackerOptions opt;
                opt.f0_min = kPipelineF0Min;
                opt.f0_max = kPipelineF0Max;
                f0_ = track_f0(w, opt);
            } catch (const Error& e) {
                f0_error_ = e;
            }
        }
        if (f0_error_) throw *f0_error_;
        return *f0_;
    }

    const PeriodSequence& periods(const Waveform& w) {
        if (!periods_attempted_) {
            periods_attempted_ = true;
            try {
                periods_ = extract_periods(w, f0(w));
            } catch (const Error& e) {
                periods_error_ = e;
            }
        }
        if (periods_error_) throw *periods_error_;
        return *periods_;
    }

    const Spectrogram& stft(const Waveform& w, int n_fft, int hop) {
        auto key = std::make_pair(n_fft, hop);
        auto it = stft_.find(key);
        if (it == stft_.end()) it = stft_.emplace(key, stft_magnitude(w, n_fft, hop)).first;
        return it->second;
    }

    const SpectralDescriptors& descriptors(const Waveform& w, int n_fft, int hop) {
        auto key = std::make_pair(n_fft, hop);
        auto it = descriptors_.find(key);
        if (it == descriptors_.end())
            it = descriptors_.emplace(key, spectral_descriptors(stft(w, n_fft, hop))).first;
        return it->second;
    }

private:
    bool f0_attempted_ = false;
    std::optional<F0Contour> f0_;
    std::optional<Error> f0_error_;
    bool periods_attempted_ = false;
    std::optional<PeriodSequence> periods_;
    std::optional<Error> periods_error_;
    std::map<std::pair<int, int>, Spectrogram> stft_;
    std::map<std::pair<int, int>, SpectralDescriptors> descriptors_;
};

struct Component {
    std::map<std::string, ParamDef> params;
    std::function<std::vector<OutputDecl>(const ParamMap&)> declare;
    std::function<std::vector<ComponentOutput>(const Waveform&, const ParamMap&, ExtractionCache&)>
        run;
};

namespace registry_detail {

inline ParamMap resolve_params(const Component& comp, const ComponentSpec& spec) {
    ParamMap out;
    for (const auto& [name, def] : comp.params) out[name] = def.def;
    for (const auto& [name, value] : spec.params) out[name] = value;
    return out;
}

inline int param_int(const ParamMap& p, const std::string& name) {
    return static_cast<int>(p.at(name));
}

inline F0TrackerOptions tracker_options(const ParamMap& p) {
    F0TrackerOptions opt;
    opt.f0_min = kPipelineF0Min;
    opt.f0_max = kPipelineF0Max;
    if (p.count("f0_min")) opt.f0_min = p.at("f0_min");
    if (p.count("f0_max")) opt.f0_max = p.at("f0_max");
    return opt;
}

inline bool default_tracker(const ParamMap& p) {
    return (!p.count("f0_min") || p.at("f0_min") == kPipelineF0Min) &&
           (!p.count("f0_max") || p.at("f0_max") == kPipelineF0Max);
}

inline const F0Contour& contour_for(const Waveform& w, const ParamMap& p, ExtractionCache& cache,
                                    std::optional<F0Contour>& storage) {
    if (default_tracker(p)) return cache.f0(w);
    storage = track_f0(w, tracker_options(p));
    return *storage;
}

// Parameter bundles shared by many components.
inline std::map<std::string, ParamDef> framed_params() {
    return {{"frame_s", {0.025, 0.001, 10.0, false}}, {"hop_s", {0.010, 0.0005, 10.0, false}}};
}

inline std::map<std::string, ParamDef> fft_params(int n_fft_default = 512) {
    return {{"n_fft", {static_cast<double>(n_fft_default), 16.0, 65536.0, true}},
            {"hop", {0.0, 0.0, 1e9, true}}};
}

inline std::map<std::string, ParamDef> f0_range_params() {
    return {{"f0_min", {kPipelineF0Min, 20.0, 2000.0, false}},
            {"f0_max", {kPipelineF0Max, 30.0, 4000.0, false}}};
}

} // namespace registry_detail

/// All registered components, keyed by their config-file names.
inline const std::map<std::string, Component>& component_registry() {
    using namespace registry_detail;
    static const std::map<std::string, Component> registry = [] {
        std::map<std::string, Component> reg;

        // --- spectral ------------------------------------------------------
        {
            Component c;
            c.params = fft_params();
            c.params["n_mfcc"] = {13.0, 1.0, 128.0, true};
            c.params["n_mels"] = {40.0, 2.0, 256.0, true};
            c.declare = [](const ParamMap& p) {
                return std::vector<OutputDecl>{{"", static_cast<std::size_t>(p.at("n_mfcc"))}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", mfcc(w, param_int(p, "n_mfcc"), param_int(p, "n_fft"), param_int(p, "hop"),
                             param_int(p, "n_mels")))};
            };
            reg["mfcc"] = std::move(c);
        }
        {
            Component c;
            c.params = fft_params();
            c.params["n_mels"] = {40.0, 2.0, 256.0, true};
            c.params["fmin"] = {0.0, 0.0, 1e5, false};
            c.params["fmax"] = {-1.0, -1.0, 1e5, false};
            c.declare = [](const ParamMap& p) {
                return std::vector<OutputDecl>{{"", static_cast<std::size_t>(p.at("n_mels"))}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                Spectrogram s = log_mel_spectrogram(w, param_int(p, "n_fft"), param_int(p, "hop"),
                                                    param_int(p, "n_mels"), p.at("fmin"),
                                                    p.at("fmax"));
                TimeSeries t;
                t.dims = s.bins;
                t.data = std::move(s.values);
                t.hop_length = s.hop_length;
                t.sample_rate = s.sample_rate;
                return std::vector<ComponentOutput>{ComponentOutput::make_series("", std::move(t))};
            };
            reg["log_mel_spectrogram"] = std::move(c);
        }
        {
            Component c;
            c.params = fft_params();
            c.declare = [](const ParamMap& p) {
                return std::vector<OutputDecl>{
                    {"", static_cast<std::size_t>(p.at("n_fft")) / 2 + 1}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache& cache) {
                const Spectrogram& s = cache.stft(w, param_int(p, "n_fft"), param_int(p, "hop"));
                TimeSeries t;
                t.dims = s.bins;
                t.data = s.values;
                t.hop_length = s.hop_length;
                t.sample_rate = s.sample_rate;
                return std::vector<ComponentOutput>{ComponentOutput::make_series("", std::move(t))};
            };
            reg["magnitude_spectrum"] = std::move(c);
        }
        {
            Component c;
            c.params = fft_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{24}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                Spectrogram s = bark_spectrogram(w, param_int(p, "n_fft"), param_int(p, "hop"));
                TimeSeries t;
                t.dims = s.bins;
                t.data = std::move(s.values);
                t.hop_length = s.hop_length;
                t.sample_rate = s.sample_rate;
                return std::vector<ComponentOutput>{ComponentOutput::make_series("", std::move(t))};
            };
            reg["bark_spectrogram"] = std::move(c);
        }
        {
            Component c;
            c.params = fft_params(2048);
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{12}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", chromagram_stft(w, param_int(p, "n_fft"), param_int(p, "hop")))};
            };
            reg["chromagram_stft"] = std::move(c);
        }
        {
            Component c;
            c.params = {{"n_widths", {32.0, 2.0, 128.0, true}},
                        {"width_min", {1.0, 0.1, 1e5, false}},
                        {"width_max", {256.0, 0.1, 1e6, false}}};
            c.declare = [](const ParamMap& p) {
                return std::vector<OutputDecl>{{"", static_cast<std::size_t>(p.at("n_widths"))}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                const int n = param_int(p, "n_widths");
                const double lo = std::log(p.at("width_min"));
                const double hi = std::log(p.at("width_max"));
                std::vector<double> widths(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i)
                    widths[static_cast<std::size_t>(i)] =
                        std::exp(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_series("", morlet_cwt(w, widths))};
            };
            reg["morlet_cwt"] = std::move(c);
        }

        struct DescriptorEntry {
            const char* name;
            std::vector<double> SpectralDescriptors::* member;
        };
        static const DescriptorEntry descriptor_entries[] = {
            {"spectral_slope", &SpectralDescriptors::slope},
            {"spectral_flux", &SpectralDescriptors::flux},
            {"spectral_entropy", &SpectralDescriptors::entropy},
            {"spectral_centroid", &SpectralDescriptors::centroid},
            {"spectral_spread", &SpectralDescriptors::spread},
            {"spectral_skewness", &SpectralDescriptors::skewness},
            {"spectral_kurtosis", &SpectralDescriptors::kurtosis},
            {"spectral_flatness", &SpectralDescriptors::flatness},
            {"spectral_rolloff", &SpectralDescriptors::rolloff},
        };
        for (const auto& entry : descriptor_entries) {
            Component c;
            c.params = fft_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            auto member = entry.member;
            c.run = [member](const Waveform& w, const ParamMap& p, ExtractionCache& cache) {
                const SpectralDescriptors& d =
                    cache.descriptors(w, param_int(p, "n_fft"), param_int(p, "hop"));
                const Spectrogram& s = cache.stft(w, param_int(p, "n_fft"), param_int(p, "hop"));
                TimeSeries t = TimeSeries::from_values(d.*member, s.hop_length, s.sample_rate);
                return std::vector<ComponentOutput>{ComponentOutput::make_series("", std::move(t))};
            };
            reg[entry.name] = std::move(c);
        }

        // --- prosody -------------------------------------------------------
        {
            Component c;
            c.params = f0_range_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache& cache) {
                std::optional<F0Contour> storage;
                const F0Contour& f0 = contour_for(w, p, cache, storage);
                if (f0.voiced_count() == 0)
                    raise(errc::no_voiced_frames, "no voiced frames in the signal");
                std::vector<double> values(f0.values.size(), kMissing);
                for (std::size_t i = 0; i < f0.values.size(); ++i)
                    if (f0.voiced_mask[i]) values[i] = f0.values[i];
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", TimeSeries::from_values(std::move(values), f0.hop_length, w.sample_rate))};
            };
            reg["f0_contour"] = std::move(c);
        }
        {
            Component c;
            c.params = f0_range_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"mean", 0}, {"sd", 0}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache& cache) {
                std::optional<F0Contour> storage;
                F0Statistics st = f0_statistics(contour_for(w, p, cache, storage));
                return std::vector<ComponentOutput>{ComponentOutput::make_scalar("mean", st.mean),
                                                    ComponentOutput::make_scalar("sd", st.sd)};
            };
            reg["f0_statistics"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", intensity(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["intensity"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) { return std::vector<OutputDecl>{{"", 0}}; };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_scalar(
                    "", intensity_sd(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["intensity_sd"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_series("", rms(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["rms"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) { return std::vector<OutputDecl>{{"", 0}}; };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("", log_energy(w))};
            };
            reg["log_energy"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", sliding_log_energy(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["sliding_log_energy"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"rate", 0}, {"count", 0}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                ZeroCrossings z = zero_crossings(w);
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("rate", z.rate),
                    ComponentOutput::make_scalar("count", static_cast<double>(z.count))};
            };
            reg["zero_crossings"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", sliding_zcr(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["sliding_zcr"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"integrated", 0}, {"variation", 0}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                LoudnessResult r = loudness(w);
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("integrated", r.integrated_lufs),
                    ComponentOutput::make_scalar("variation", r.variation_db)};
            };
            reg["loudness"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", crest_factor(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["crest_factor"] = std::move(c);
        }

        // --- clinical ------------------------------------------------------
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{
                    {"local", 0}, {"local_absolute", 0}, {"rap", 0}, {"ppq5", 0}, {"ddp", 0}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache& cache) {
                JitterSet j = jitters(cache.periods(w));
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("local", j.local),
                    ComponentOutput::make_scalar("local_absolute", j.local_absolute_s),
                    ComponentOutput::make_scalar("rap", j.rap),
                    ComponentOutput::make_scalar("ppq5", j.ppq5),
                    ComponentOutput::make_scalar("ddp", j.ddp)};
            };
            reg["jitter"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{
                    {"local", 0}, {"local_db", 0}, {"apq3", 0}, {"apq5", 0}, {"apq11", 0}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache& cache) {
                ShimmerSet s = shimmers(cache.periods(w));
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("local", s.local),
                    ComponentOutput::make_scalar("local_db", s.local_db),
                    ComponentOutput::make_scalar("apq3", s.apq3),
                    ComponentOutput::make_scalar("apq5", s.apq5),
                    ComponentOutput::make_scalar("apq11", s.apq11)};
            };
            reg["shimmer"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) { return std::vector<OutputDecl>{{"", 0}}; };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache& cache) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("", pitch_period_entropy(cache.f0(w)))};
            };
            reg["ppe"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) { return std::vector<OutputDecl>{{"", 0}}; };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_scalar("", dfa(w))};
            };
            reg["dfa"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) { return std::vector<OutputDecl>{{"", 0}}; };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache& cache) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("", hnr(w, cache.f0(w)))};
            };
            reg["hnr"] = std::move(c);
        }
        {
            Component c;
            c.params = {{"order", {12.0, 1.0, 64.0, true}}};
            c.declare = [](const ParamMap& p) {
                std::vector<OutputDecl> out;
                for (int k = 1; k <= param_int(p, "order"); ++k)
                    out.push_back({std::to_string(k), 0});
                return out;
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                LpcResult lp = lpc(w, param_int(p, "order"));
                std::vector<ComponentOutput> out;
                for (std::size_t k = 1; k < lp.coefficients.size(); ++k)
                    out.push_back(
                        ComponentOutput::make_scalar(std::to_string(k), lp.coefficients[k]));
                return out;
            };
            reg["lpc"] = std::move(c);
        }
        {
            Component c;
            c.params = {{"order", {12.0, 1.0, 64.0, true}}};
            c.declare = [](const ParamMap& p) {
                std::vector<OutputDecl> out;
                for (int k = 1; k <= param_int(p, "order"); ++k)
                    out.push_back({std::to_string(k), 0});
                return out;
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                std::vector<double> f = lsf(lpc(w, param_int(p, "order")).coefficients);
                std::vector<ComponentOutput> out;
                for (std::size_t k = 0; k < f.size(); ++k)
                    out.push_back(ComponentOutput::make_scalar(std::to_string(k + 1), f[k]));
                return out;
            };
            reg["lsf"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"f1", 0}, {"f2", 0}, {"f3", 0}, {"f4", 0}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                FormantSet set = formants(w);
                return std::vector<ComponentOutput>{ComponentOutput::make_scalar("f1", set.f1),
                                                    ComponentOutput::make_scalar("f2", set.f2),
                                                    ComponentOutput::make_scalar("f3", set.f3),
                                                    ComponentOutput::make_scalar("f4", set.f4)};
            };
            reg["formants"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{4}}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_series("", formants(w).tracks)};
            };
            reg["formant_tracks"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{4}}};
            };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_series("", formants(w).deltas)};
            };
            reg["formant_deltas"] = std::move(c);
        }
        {
            Component c;
            c.declare = [](const ParamMap&) { return std::vector<OutputDecl>{{"", 0}}; };
            c.run = [](const Waveform& w, const ParamMap&, ExtractionCache&) {
                return std::vector<ComponentOutput>{
                    ComponentOutput::make_scalar("", amplitude_shannon_entropy(w))};
            };
            reg["amplitude_shannon_entropy"] = std::move(c);
        }
        {
            Component c;
            c.params = framed_params();
            c.declare = [](const ParamMap&) {
                return std::vector<OutputDecl>{{"", std::size_t{1}}};
            };
            c.run = [](const Waveform& w, const ParamMap& p, ExtractionCache&) {
                return std::vector<ComponentOutput>{ComponentOutput::make_series(
                    "", sliding_amplitude_kurtosis(w, p.at("frame_s"), p.at("hop_s")))};
            };
            reg["sliding_amplitude_kurtosis"] = std::move(c);
        }
        return reg;
    }();
    return registry;
}

/// Hard validation of a parsed config against the registry: unknown names
/// and out-of-range parameters are errors, never warnings.
inline void validate_config(const FeatureConfig& cfg) {
    const auto& reg = component_registry();
    for (const auto& spec : cfg.components) {
        auto it = reg.find(spec.name);
        if (it == reg.end()) raise(errc::unknown_component, spec.name);
        for (const auto& [pname, pvalue] : spec.params) {
            auto pit = it->second.params.find(pname);
            if (pit == it->second.params.end())
                raise(errc::bad_parameter, spec.name + ": unknown parameter '" + pname + "'");
            const ParamDef& def = pit->second;
            if (pvalue < def.min || pvalue > def.max)
                raise(errc::bad_parameter, spec.name + ": parameter '" + pname + "' = " +
                                               std::to_string(pvalue) + " outside [" +
                                               std::to_string(def.min) + ", " +
                                               std::to_string(def.max) + "]");
            if (def.integer && pvalue != static_cast<double>(static_cast<long long>(pvalue)))
                raise(errc::bad_parameter,
                      spec.name + ": parameter '" + pname + "' must be an integer");
        }
    }
    for (const auto& stat : cfg.statistics)
        if (!is_known_statistic(stat)) raise(errc::unknown_statistic, stat);
}

/// Parse and validate a configuration file.
inline FeatureConfig parse_config(const std::filesystem::path& path) {
    FeatureConfig cfg = parse_config_file(path);
    validate_config(cfg);
    return cfg;
}

namespace pipeline_detail {

inline std::string column_base(const std::string& component, const std::string& suffix) {
    return suffix.empty() ? component : component + "." + suffix;
}

} // namespace pipeline_detail

/// The full CSV column schema implied by a validated config. Passthrough
/// mode keeps only scalar outputs in the matrix (series go to side files).
inline std::vector<std::string> column_schema(const FeatureConfig& cfg) {
    const auto& reg = component_registry();
    std::vector<std::string> columns;
    for (const auto& spec : cfg.components) {
        const Component& comp = reg.at(spec.name);
        const ParamMap params = registry_detail::resolve_params(comp, spec);
        for (const OutputDecl& decl : comp.declare(params)) {
            const std::string base = pipeline_detail::column_base(spec.name, decl.suffix);
            if (decl.ts_dims == 0) {
                columns.push_back(base);
            } else if (!cfg.passthrough) {
                TimeSeries dummy;
                dummy.dims = decl.ts_dims;
                StatisticSet names_only = apply_statistics(dummy, cfg.statistics);
                for (const auto& n : names_only.names) columns.push_back(base + "." + n);
            }
        }
    }
    return columns;
}

struct ExtractionWarning {
    std::string file;
    std::string component;
    std::string kind;
    std::string message;
};

struct FileResult {
    std::vector<double> cells;
    std::vector<ExtractionWarning> warnings;
    std::vector<std::pair<std::string, TimeSeries>> series; // passthrough outputs
};

/// Extract one file into a schema-aligned row. Component failures become
/// missing cells plus a structured warning; only decode failures blank the
/// whole row.
inline FileResult extract_file(const std::filesystem::path& path, const FeatureConfig& cfg,
                               const std::string& row_id = {}) {
    const auto& reg = component_registry();
    const std::string id = row_id.empty() ? path.string() : row_id;

    FileResult result;
    result.cells.assign(column_schema(cfg).size(), kMissing);

    Waveform w;
    try {
        w = load_audio(path, cfg.sample_rate);
    } catch (const Error& e) {
        result.warnings.push_back({id, "", "DecodeFailure", e.what()});
        return result;
    } catch (const std::exception& e) {
        result.warnings.push_back({id, "", "DecodeFailure", e.what()});
        return result;
    }

    ExtractionCache cache;
    std::size_t cell = 0;
    for (const auto& spec : cfg.components) {
        const Component& comp = reg.at(spec.name);
        const ParamMap params = registry_detail::resolve_params(comp, spec);
        const auto decls = comp.declare(params);

        std::size_t component_width = 0;
        std::vector<std::size_t> decl_width(decls.size(), 0);
        for (std::size_t d = 0; d < decls.size(); ++d) {
            if (decls[d].ts_dims == 0) {
                decl_width[d] = 1;
            } else if (!cfg.passthrough) {
                TimeSeries dummy;
                dummy.dims = decls[d].ts_dims;
                decl_width[d] = apply_statistics(dummy, cfg.statistics).names.size();
            }
            component_width += decl_width[d];
        }

        try {
            auto outputs = comp.run(w, params, cache);
            std::size_t offset = cell;
            for (std::size_t d = 0; d < decls.size(); ++d) {
                auto out = std::find_if(outputs.begin(), outputs.end(), [&](const auto& o) {
                    return o.suffix == decls[d].suffix;
                });
                if (out == outputs.end()) {
                    offset += decl_width[d];
                    continue;
                }
                if (decls[d].ts_dims == 0) {
                    result.cells[offset] = out->scalar;
                } else if (cfg.passthrough) {
                    result.series.emplace_back(
                        pipeline_detail::column_base(spec.name, decls[d].suffix),
                        std::move(out->series));
                } else {
                    StatisticSet stats = apply_statistics(out->series, cfg.statistics);
                    const std::size_t width = std::min(stats.values.size(), decl_width[d]);
                    for (std::size_t k = 0; k < width; ++k)
                        result.cells[offset + k] = stats.values[k];
                }
                offset += decl_width[d];
            }
        } catch (const Error& e) {
            result.warnings.push_back({id, spec.name, errc_name(e.code()), e.what()});
        } catch (const std::exception& e) {
            result.warnings.push_back({id, spec.name, "Error", e.what()});
        }
        cell += component_width;
    }
    return result;
}

struct ExtractionReport {
    FeatureMatrix matrix;
    std::vector<ExtractionWarning> warnings;
};

/// Recursively collect .wav/.flac files sorted by relative path.
inline std::vector<std::filesystem::path> scan_audio_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
            if (entry.is_regular_file() && is_audio_extension(entry.path()))
                files.push_back(std::filesystem::relative(entry.path(), dir));
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.generic_string() < b.generic_string();
    });
    return files;
}

/// Directory-scale extraction: one worker per file, results gathered into
/// path-sorted rows so the output is invariant to worker scheduling.
/// series_dir enables the passthrough side-output (one CSV per component
/// per input file).
inline ExtractionReport extract_directory(
    const std::filesystem::path& dir, const FeatureConfig& cfg, int n_jobs = 0,
    const std::optional<std::filesystem::path>& series_dir = std::nullopt) {
    std::vector<std::filesystem::path> files = scan_audio_files(dir);
    if (files.empty()) raise(errc::no_audio_found, dir.string());

    if (n_jobs <= 0) n_jobs = cfg.n_jobs;
    n_jobs = std::max(1, std::min<int>(n_jobs, static_cast<int>(files.size())));

    std::vector<FileResult> results(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size()) break;
            const std::string id = files[i].generic_string();
            results[i] = extract_file(dir / files[i], cfg, id);

            if (series_dir && !results[i].series.empty()) {
                try {
                    for (const auto& [name, series] : results[i].series) {
                        std::filesystem::path out = *series_dir / (id + "." + name + ".csv");
                        std::filesystem::create_directories(out.parent_path());
                        FeatureMatrix m;
                        m.column_names.reserve(series.dims);
                        for (std::size_t k = 0; k < series.dims; ++k)
                            m.column_names.push_back("dim" + std::to_string(k));
                        for (std::size_t fidx = 0; fidx < series.frame_count(); ++fidx)
                            m.row_ids.push_back(std::to_string(fidx));
                        m.cells = series.data;
                        write_csv(m, out);
                    }
                } catch (const std::exception& e) {
                    results[i].warnings.push_back({id, "", "IoError", e.what()});
                }
                results[i].series.clear();
            }
        }
    };

    if (n_jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_jobs));
        for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ExtractionReport report;
    report.matrix.column_names = column_schema(cfg);
    report.matrix.row_ids.reserve(files.size());
    report.matrix.cells.reserve(files.size() * report.matrix.cols());
    for (std::size_t i = 0; i < files.size(); ++i) {
        report.matrix.row_ids.push_back(files[i].generic_string());
        report.matrix.cells.insert(report.matrix.cells.end(), results[i].cells.begin(),
                                   results[i].cells.end());
        for (auto& warning : results[i].warnings) report.warnings.push_back(std::move(warning));
    }
    return report;
}

} // namespace vocalis
