#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace deid {

// Interleaved 16-bit PCM.  samples.size() is a multiple of channels.
struct AudioBuffer {
    std::vector<int16_t> samples;
    int sample_rate = 0;
    int channels = 1;

    int64_t frame_count() const {
        return channels > 0 ? static_cast<int64_t>(samples.size()) / channels : 0;
    }
};

// RIFF/WAVE, PCM, 16 bits per sample, little-endian.  Unknown chunks are
// skipped.  Non-PCM encodings or other bit depths raise UnsupportedFormat;
// bad magic or a truncated chunk raises CorruptFile.
AudioBuffer read_wav(std::istream& in);
AudioBuffer read_wav(const std::filesystem::path& path);

// Canonical 44-byte header + data.  Reading a written file returns the exact
// same buffer, and re-writing reproduces the bytes.
void write_wav(std::ostream& out, const AudioBuffer& audio);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

} // namespace deid
