#include "deid/wav.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "deid/errors.hpp"

namespace deid {

namespace {

constexpr uint16_t kFormatPcm = 0x0001;

uint32_t get_u32le(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t get_u16le(const unsigned char* p) {
    return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void put_u32le(std::ostream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u16le(std::ostream& out, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

void read_exact(std::istream& in, void* dst, size_t n, const char* what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
        throw CorruptFile(std::string("truncated wav file while reading ") + what);
}

} // namespace

AudioBuffer read_wav(std::istream& in) {
    unsigned char header[12];
    read_exact(in, header, 12, "RIFF header");
    if (std::memcmp(header, "RIFF", 4) != 0 || std::memcmp(header + 8, "WAVE", 4) != 0)
        throw CorruptFile("not a RIFF/WAVE file");

    bool have_fmt = false;
    AudioBuffer audio;
    uint16_t block_align = 0;

    unsigned char chunk[8];
    while (in.read(reinterpret_cast<char*>(chunk), 8)) {
        uint32_t size = get_u32le(chunk + 4);
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16) throw CorruptFile("fmt chunk too small");
            unsigned char fmt[16];
            read_exact(in, fmt, 16, "fmt chunk");
            uint16_t format = get_u16le(fmt);
            uint16_t channels = get_u16le(fmt + 2);
            uint32_t rate = get_u32le(fmt + 4);
            uint16_t bits = get_u16le(fmt + 14);
            block_align = get_u16le(fmt + 12);
            if (format != kFormatPcm)
                throw UnsupportedFormat("wav format tag " + std::to_string(format) +
                                        " is not plain PCM");
            if (bits != 16)
                throw UnsupportedFormat("only 16-bit PCM is supported, file has " +
                                        std::to_string(bits) + " bits");
            if (channels < 1) throw CorruptFile("fmt chunk declares zero channels");
            audio.channels = channels;
            audio.sample_rate = static_cast<int>(rate);
            have_fmt = true;
            in.ignore(size - 16 + (size % 2)); // fmt extensions and pad byte
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (!have_fmt) throw CorruptFile("data chunk before fmt chunk");
            if (size % (2 * audio.channels) != 0)
                throw CorruptFile("data chunk size does not divide into 16-bit frames");
            audio.samples.resize(size / 2);
            if (size > 0)
                read_exact(in, audio.samples.data(), size, "data chunk");
            // samples are stored little-endian; byte-swap on big-endian hosts
            if constexpr (std::endian::native == std::endian::big)
                for (auto& s : audio.samples)
                    s = static_cast<int16_t>(static_cast<uint16_t>(s) << 8 |
                                             static_cast<uint16_t>(s) >> 8);
            (void)block_align;
            return audio;
        } else {
            // unrelated chunk; data is padded to even length
            in.ignore(size + (size % 2));
            if (!in) throw CorruptFile("truncated wav file inside a skipped chunk");
        }
    }
    throw CorruptFile(have_fmt ? "wav file has no data chunk" : "wav file has no fmt chunk");
}

AudioBuffer read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptFile("cannot open wav file: " + path.string());
    return read_wav(in);
}

void write_wav(std::ostream& out, const AudioBuffer& audio) {
    if (audio.channels < 1) throw UnsupportedFormat("wav needs at least one channel");
    if (audio.sample_rate < 1) throw UnsupportedFormat("wav needs a positive sample rate");
    if (audio.samples.size() % audio.channels != 0)
        throw UnsupportedFormat("sample count is not a whole number of frames");

    const uint32_t data_size = static_cast<uint32_t>(audio.samples.size() * 2);
    const uint16_t channels = static_cast<uint16_t>(audio.channels);
    const uint32_t rate = static_cast<uint32_t>(audio.sample_rate);
    const uint16_t block_align = static_cast<uint16_t>(channels * 2);

    out.write("RIFF", 4);
    put_u32le(out, 36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32le(out, 16);
    put_u16le(out, kFormatPcm);
    put_u16le(out, channels);
    put_u32le(out, rate);
    put_u32le(out, rate * block_align); // byte rate
    put_u16le(out, block_align);
    put_u16le(out, 16); // bits per sample
    out.write("data", 4);
    put_u32le(out, data_size);
    if constexpr (std::endian::native == std::endian::big) {
        for (int16_t s : audio.samples) put_u16le(out, static_cast<uint16_t>(s));
    } else {
        out.write(reinterpret_cast<const char*>(audio.samples.data()), data_size);
    }
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DeidError("cannot write wav file: " + path.string());
    write_wav(out, audio);
    if (!out) throw DeidError("short write on wav file: " + path.string());
}

} // namespace deid
