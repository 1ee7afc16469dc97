#include "deid/redaction.hpp"

#include <algorithm>

namespace deid {

RedactionPlan pad_plan(const RedactionPlan& plan, int64_t pad_ms) {
    if (pad_ms < 0) throw DeidError("pad_ms must be >= 0");
    std::vector<TimeInterval> widened;
    for (const auto& iv : plan.intervals())
        widened.emplace_back(std::max<int64_t>(0, iv.start_ms - pad_ms), iv.end_ms + pad_ms);
    return plan_normalize(std::move(widened));
}

RedactionPlan plan_from_tagged_words(const std::vector<TimedWord>& tagged, int64_t pad_ms) {
    std::vector<TimeInterval> raw;
    for (const auto& w : tagged)
        if (w.is_phi()) raw.push_back(w.interval);
    return pad_plan(plan_normalize(std::move(raw)), pad_ms);
}

AudioBuffer redact_audio(const AudioBuffer& audio, const RedactionPlan& plan) {
    switch (audio.sample_rate) {
    case 8000:
    case 16000:
    case 44100:
    case 48000: break;
    default:
        throw UnsupportedFormat("unsupported sample rate " + std::to_string(audio.sample_rate));
    }
    if (audio.channels != 1 && audio.channels != 2)
        throw UnsupportedFormat("unsupported channel count " + std::to_string(audio.channels));
    if (audio.samples.size() % audio.channels != 0)
        throw UnsupportedFormat("sample count is not a whole number of frames");

    AudioBuffer out = audio;
    const int64_t rate = audio.sample_rate;
    const int64_t frames = out.frame_count();
    for (const auto& iv : plan.intervals()) {
        // frame f lies in [start, end) iff start <= floor(1000*f/rate) < end,
        // i.e. ceil(start*rate/1000) <= f < ceil(end*rate/1000)
        int64_t lo = (iv.start_ms * rate + 999) / 1000;
        int64_t hi = (iv.end_ms * rate + 999) / 1000;
        lo = std::max<int64_t>(lo, 0);
        hi = std::min(hi, frames);
        for (int64_t f = lo; f < hi; ++f)
            for (int c = 0; c < out.channels; ++c)
                out.samples[f * out.channels + c] = 0;
    }
    return out;
}

} // namespace deid
