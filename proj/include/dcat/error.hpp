#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dcat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two cells, profunctors or functors do not share the boundary an operation needs.
class BoundaryMismatch : public Error {
 public:
  using Error::Error;
};

/// A value failed one of its structural laws; `what()` names the witness.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A construction that must hold by theory did not. Signals a bug.
class InternalInvariant : public Error {
 public:
  using Error::Error;
};

/// The two pointwise Kan extension procedures disagreed.
class OracleDisagreement : public InternalInvariant {
 public:
  using InternalInvariant::InternalInvariant;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace dcat
