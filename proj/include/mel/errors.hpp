#pragma once

#include <stdexcept>
#include <string>

namespace mel {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix / dataset construction.
struct InvalidMatrix : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ZeroMarginal : Error { using Error::Error; };
struct EmptyAfterDedup : Error { using Error::Error; };
struct NegativeEntries : Error { using Error::Error; };
struct ClassViolation : Error { using Error::Error; };

// Transport solvers.
struct Infeasible : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct NegativeDivergence : Error { using Error::Error; };

// Kernel / Laplacian maps.
struct NegativeQuadraticForm : Error { using Error::Error; };
struct NegativeWeight : Error { using Error::Error; };
struct PositiveReferenceRequired : Error { using Error::Error; };
struct NotGeneric : Error { using Error::Error; };
struct NotPositiveSemidefinite : Error { using Error::Error; };

// Fixed-point iterations.
struct ZeroNorm : Error { using Error::Error; };

// Evaluation metrics.
struct SingleClass : Error { using Error::Error; };

// IO and configuration.
struct ParseError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace mel
