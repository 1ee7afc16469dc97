#pragma once

#include <stdexcept>
#include <string>

namespace deid {

// Base class for every error this library raises on purpose.
struct DeidError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// data / domain errors

struct InvalidInterval : DeidError {
    using DeidError::DeidError;
};

// A structural rule of a value type was broken (ordering, overlap, token shape, ...).
struct InvariantViolation : DeidError {
    using DeidError::DeidError;
};

// Malformed input document; the message carries the location (line/column or field path).
struct ParseError : DeidError {
    using DeidError::DeidError;
};

struct InvalidRho : DeidError {
    using DeidError::DeidError;
};

// A ratio over an empty reference was requested.
struct EmptyReference : DeidError {
    using DeidError::DeidError;
};

// An alignment does not fit the sequences it claims to align.
struct AlignmentMismatch : DeidError {
    using DeidError::DeidError;
};

struct TaggerFailure : DeidError {
    using DeidError::DeidError;
};

struct UnsupportedFormat : DeidError {
    using DeidError::DeidError;
};

struct CorruptFile : DeidError {
    using DeidError::DeidError;
};

// Bad harness configuration (unknown key, unreadable value, missing file).
struct ConfigError : DeidError {
    using DeidError::DeidError;
};

// service errors (speech recognition gateway)

struct AsrError : DeidError {
    using DeidError::DeidError;
};

// Transient backend failure; the gateway may retry this one.
struct ServiceUnavailable : AsrError {
    using AsrError::AsrError;
};

// The service rejected the audio itself; retrying cannot help.
struct BadAudio : AsrError {
    using AsrError::AsrError;
};

struct Timeout : AsrError {
    using AsrError::AsrError;
};

// The backend answered something that violates the response contract.
struct ProtocolViolation : AsrError {
    using AsrError::AsrError;
};

} // namespace deid
