#pragma once

#include <cstdint>
#include <vector>

#include "deid/core.hpp"
#include "deid/wav.hpp"

namespace deid {

// Widens every silenced range by pad_ms on both sides (clipped at 0) and
// renormalizes.  Padding compensates for recognizer timings that start late
// or end early by a frame or two.
RedactionPlan pad_plan(const RedactionPlan& plan, int64_t pad_ms);

// Plan silencing every labeled word, padded by pad_ms.  Equivalent to
// building the unpadded plan and padding it afterwards.
RedactionPlan plan_from_tagged_words(const std::vector<TimedWord>& tagged, int64_t pad_ms = 0);

// Zeroes every sample whose millisecond floor(1000 * frame / sample_rate)
// falls inside the plan; everything else is copied bit-exactly.  Channels of
// one frame are silenced together.  Accepts 8000/16000/44100/48000 Hz, one or
// two channels; anything else raises UnsupportedFormat.
AudioBuffer redact_audio(const AudioBuffer& audio, const RedactionPlan& plan);

} // namespace deid
