// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vocalis {

/// Error categories surfaced by the library. The batch pipeline catches these
/// per file/component and converts them into missing cells plus a warning;
/// everywhere else they propagate to the caller.
enum class errc {
    file_not_found,
    unsupported_format,
    empty_audio,
    signal_too_short,
    invalid_band,
    no_voiced_frames,
    insufficient_voicing,
    too_few_periods,
    degenerate_signal,
    too_short_for_loudness,
    too_few_resolved_formants,
    config_syntax,
    unknown_component,
    unknown_statistic,
    bad_parameter,
    length_mismatch,
    degenerate_input,
    io_error,
    no_audio_found,
    decode_failure,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::file_not_found: return "FileNotFound";
        case errc::unsupported_format: return "UnsupportedFormat";
        case errc::empty_audio: return "EmptyAudio";
        case errc::signal_too_short: return "SignalTooShort";
        case errc::invalid_band: return "InvalidBand";
        case errc::no_voiced_frames: return "NoVoicedFrames";
        case errc::insufficient_voicing: return "InsufficientVoicing";
        case errc::too_few_periods: return "TooFewPeriods";
        case errc::degenerate_signal: return "DegenerateSignal";
        case errc::too_short_for_loudness: return "TooShortForLoudness";
        case errc::too_few_resolved_formants: return "TooFewResolvedFormants";
        case errc::config_syntax: return "ConfigSyntaxError";
        case errc::unknown_component: return "UnknownComponent";
        case errc::unknown_statistic: return "UnknownStatistic";
        case errc::bad_parameter: return "BadParameter";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::degenerate_input: return "DegenerateInput";
        case errc::io_error: return "IoError";
        case errc::no_audio_found: return "NoAudioFound";
        case errc::decode_failure: return "DecodeFailure";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace vocalis
