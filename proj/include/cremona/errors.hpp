#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cremona {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Root of the library's error hierarchy.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed documents, grammar violations, bad arguments. CLI exit 2.
struct parse_error : error {
    using error::error;
};

/// The n >= r+2 requirement fails. CLI exit 3.
struct hypothesis_violation : error {
    using error::error;
};

/// A verification gate failed. CLI exit 4.
struct verification_error : error {
    using error::error;
};

/// A retry cap was exhausted. CLI exit 5.
struct retry_exhausted : error {
    using error::error;
};

// Recoverable signals. Callers resample or escalate.

/// Every component of a rational map vanished at the point.
struct base_locus_error : error {
    using error::error;
};

/// A symbolic composition collapsed to the zero tuple.
struct identically_zero_error : error {
    using error::error;
};

struct coincident_points_error : error {
    using error::error;
};

struct all_zero_error : error {
    using error::error;
};

/// A nullspace pick failed its non-degeneracy witnesses after retries.
struct witness_failure_error : error {
    using error::error;
};

struct k_max_exceeded_error : retry_exhausted {
    using retry_exhausted::retry_exhausted;
};

struct roundtrip_failure_error : verification_error {
    using verification_error::verification_error;
};

struct degenerate_surface_error : verification_error {
    using verification_error::verification_error;
};

}  // namespace cremona
