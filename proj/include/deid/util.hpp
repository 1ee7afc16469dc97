#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace deid {

// FNV-1a over bytes; good enough to fingerprint configs and inputs for the
// run manifest (not a cryptographic hash).
uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);
// Hash of a file's bytes; throws DeidError when the file cannot be read.
std::string hash_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text); // throws DeidError on bad input

// "%.6f" formatting; all reports use this so runs stay byte-comparable.
std::string format_fixed6(double v);

} // namespace deid
