#pragma once

#include <stdexcept>
#include <string>

// Exception taxonomy shared by all modules.  Every failure mode that a caller
// can act on gets its own type; the CLI maps them onto exit codes (config
// errors -> 2, numeric degeneracies -> 3, I/O -> 4).

namespace boundarykit {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- configuration / contract violations (exit code 2) ---

struct InvalidParams : Error {
    using Error::Error;
};

struct ParamsOutOfRange : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct DimensionMismatch : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct DimensionTooHigh : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct IndexOutOfRange : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct InvalidK : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct EmptySet : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct EmptyInput : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct EmptyCloud : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct EmptyComplex : InvalidParams {
    using InvalidParams::InvalidParams;
};

struct OutsideDomain : InvalidParams {
    using InvalidParams::InvalidParams;
};

// --- numeric degeneracies (exit code 3) ---

struct NumericError : Error {
    using Error::Error;
};

struct RankDeficient : NumericError {
    using NumericError::NumericError;
};

struct DegenerateSpectrum : NumericError {
    // index of the offending point when raised from a whole-cloud sweep, -1
    // when raised from a single-point call
    int index = -1;
    explicit DegenerateSpectrum(const std::string& msg, int idx = -1)
        : NumericError(msg), index(idx) {}
};

struct InsufficientNeighbors : NumericError {
    int index = -1;
    explicit InsufficientNeighbors(const std::string& msg, int idx = -1)
        : NumericError(msg), index(idx) {}
};

struct DegenerateNormal : NumericError {
    int index = -1;
    explicit DegenerateNormal(const std::string& msg, int idx = -1)
        : NumericError(msg), index(idx) {}
};

struct NoAdmissibleScale : NumericError {
    using NumericError::NumericError;
};

struct TooFewRadii : NumericError {
    using NumericError::NumericError;
};

// --- I/O (exit code 4) ---

struct IoError : Error {
    using Error::Error;
};

}  // namespace boundarykit
