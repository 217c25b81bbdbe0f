#pragma once

#include <stdexcept>
#include <string>

namespace cdmpm {

// Input rejected before any coding happened (bad symbol, bad parameters).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Container bytes are not a well-formed CDMP container.
struct CorruptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Payload decoding lost sync with the encoder (truncation, bit damage).
struct DesyncError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File / stream failures, kept distinct from format errors for exit codes.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An adaptive model outgrew the coder's 16-bit count budget.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cdmpm
