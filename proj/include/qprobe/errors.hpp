#pragma once

#include <stdexcept>
#include <string>

namespace qprobe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shapes or factor dimensions do not match.
struct DimensionError : Error {
    using Error::Error;
};

// Basis or parameter index out of range.
struct IndexError : Error {
    using Error::Error;
};

// Matrix expected to be Hermitian is not, beyond tolerance.
struct HermiticityError : Error {
    using Error::Error;
};

// Estimate has non-positive trace; nothing sensible to repair.
struct DegenerateEstimateError : Error {
    using Error::Error;
};

// Probe matrix is rank-deficient (or became so after resampling gave up).
struct RankError : Error {
    using Error::Error;
};

// Invalid user-supplied parameter (probability out of range, bad family, ...).
struct ParamError : Error {
    using Error::Error;
};

// Matrix supplied to a unitary-channel constructor is not unitary.
struct UnitarityError : Error {
    using Error::Error;
};

// Channel annihilates the state: the unnormalized output has ~zero trace.
struct ZeroProbabilityError : Error {
    using Error::Error;
};

// Measurement settings do not span the Hermitian operator space.
struct IncompleteSettingsError : Error {
    using Error::Error;
};

}  // namespace qprobe
