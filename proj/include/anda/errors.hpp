#pragma once

#include <stdexcept>
#include <string>

namespace anda {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A NaN or infinity reached an encoder that only accepts finite inputs.
struct NonFiniteInput : Error {
    explicit NonFiniteInput(const std::string& msg = "non-finite input") : Error(msg) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg = "shape mismatch") : Error(msg) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg = "length mismatch") : Error(msg) {}
};

struct GroupTooWide : Error {
    explicit GroupTooWide(const std::string& msg = "group wider than 64 lanes") : Error(msg) {}
};

struct PlaneCountMismatch : Error {
    explicit PlaneCountMismatch(const std::string& msg = "bit-plane count mismatch") : Error(msg) {}
};

struct OverflowError : Error {
    explicit OverflowError(const std::string& msg = "result exceeds binary32 range") : Error(msg) {}
};

// Container / stream format errors.
struct BadMagic : Error {
    explicit BadMagic(const std::string& msg = "bad magic") : Error(msg) {}
};

struct VersionUnsupported : Error {
    explicit VersionUnsupported(const std::string& msg = "unsupported container version") : Error(msg) {}
};

struct TruncatedStream : Error {
    explicit TruncatedStream(const std::string& msg = "truncated stream") : Error(msg) {}
};

struct DtypeUnsupported : Error {
    explicit DtypeUnsupported(const std::string& msg = "unsupported dtype") : Error(msg) {}
};

struct BadRank : Error {
    explicit BadRank(const std::string& msg = "unsupported tensor rank") : Error(msg) {}
};

// Search / oracle errors.
struct OracleFailure : Error {
    explicit OracleFailure(const std::string& msg) : Error(msg) {}
};

struct OracleTimeout : OracleFailure {
    explicit OracleTimeout(const std::string& msg = "oracle timed out") : OracleFailure(msg) {}
};

struct MalformedResponse : OracleFailure {
    explicit MalformedResponse(const std::string& msg = "malformed oracle response") : OracleFailure(msg) {}
};

struct NonFiniteScore : OracleFailure {
    explicit NonFiniteScore(const std::string& msg = "oracle returned a non-finite score") : OracleFailure(msg) {}
};

// Cost-model precondition: a 16-row activation strip must fit on chip.
struct TileExceedsBuffer : Error {
    explicit TileExceedsBuffer(const std::string& msg) : Error(msg) {}
};

} // namespace anda
