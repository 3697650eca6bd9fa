// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ggospa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Graph invariant does not hold (self-loop, duplicate edge, bad index...).
class InvalidGraph : public Error {
 public:
  using Error::Error;
};

/// Hyperparameters outside the metric family's validity domain.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Enumeration was asked for more nodes than the configured guard allows.
class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ggospa
