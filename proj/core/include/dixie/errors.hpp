#pragma once

#include <stdexcept>
#include <string>

namespace dixie {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The centering equation n Q_m(b) = 1 has no root (n <= 1).
class NonBracketable : public Error {
 public:
  using Error::Error;
};

/// Inclusion-exclusion term count exceeds the enumeration guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A radial scan would leave the open probability simplex.
class DomainExit : public Error {
 public:
  using Error::Error;
};

/// The certified truncation bound of an infinite product is too loose.
class TruncationInsufficient : public Error {
 public:
  using Error::Error;
};

/// Raised only by callers that require convergence; the numeric routines
/// themselves return their best value with a `converged` flag.
class QuadratureNonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace dixie
