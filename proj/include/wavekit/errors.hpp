#pragma once

#include <stdexcept>
#include <string>

namespace wavekit {

// A computation was asked to run on a domain larger than its configured guard.
// Guards are hard errors by design: verdicts must be exact or absent, never
// silently downsampled.
struct domain_too_large : std::runtime_error {
    explicit domain_too_large(const std::string& what) : std::runtime_error(what) {}
};

// A group-theoretic routine that requires a transitive action was handed a
// non-transitive one.
struct not_transitive : std::runtime_error {
    explicit not_transitive(const std::string& what) : std::runtime_error(what) {}
};

// A structural invariant of the bundled 64-bit instance failed to verify.
// The message states exactly which check broke.
struct certification_failed : std::runtime_error {
    explicit certification_failed(const std::string& what) : std::runtime_error(what) {}
};

// linear_bound composes three-round blocks; other round counts are undefined.
struct rounds_not_multiple_of_three : std::runtime_error {
    explicit rounds_not_multiple_of_three(const std::string& what) : std::runtime_error(what) {}
};

// The bound ledger stores exact base-2 logarithms. A probability or bias whose
// numerator is not a power of two has no rational log2; we refuse rather than
// round.
struct non_dyadic_value : std::runtime_error {
    explicit non_dyadic_value(const std::string& what) : std::runtime_error(what) {}
};

// Malformed S-box / matrix / KAT input files.
struct data_format_error : std::runtime_error {
    explicit data_format_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wavekit
