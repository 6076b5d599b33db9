#ifndef QFCERT_ERRORS_HPP
#define QFCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qfcert {

// Base class for all input/contract violations raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct NegativeWeight : Error {
  using Error::Error;
};

struct AllZeroWeight : Error {
  using Error::Error;
};

// Raised by operations whose preconditions demand strictly positive weights
// (everything built on f(i) = 1/b_i - 1/a_i or on log ratios).
struct ZeroWeight : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct InvalidPartition : Error {
  using Error::Error;
};

struct InvalidAuxiliary : Error {
  using Error::Error;
};

// Raised by transform steps whose entry condition f(i+1) < f(i) fails.
struct NotApplicableStep : Error {
  using Error::Error;
};

// Signals an implementation bug (e.g. an all-x certificate fired although the
// necessary condition max a >= max b is violated). Never a user error.
struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace qfcert

#endif  // QFCERT_ERRORS_HPP
