// Copyright 2026 The Vocalis Authors
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include "vocalis/audio_io.hpp"
#include "vocalis/clinical.hpp"
#include "vocalis/config.hpp"
#include "vocalis/errors.hpp"
#include "vocalis/extract.hpp"
#include "vocalis/feature_matrix.hpp"
#include "vocalis/fft.hpp"
#include "vocalis/flac.hpp"
#include "vocalis/loudness.hpp"
#include "vocalis/prosody.hpp"
#include "vocalis/resample.hpp"
#include "vocalis/spearman.hpp"
#include "vocalis/spectral.hpp"
#include "vocalis/statistics.hpp"
#include "vocalis/wav.hpp"
#include "vocalis/waveform.hpp"
#include "vocalis/windowing.hpp"
