// Copyright 2026 The cnqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CNQS_ERRORS_HPP
#define CNQS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cnqs {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range index, inconsistent dimensions, malformed argument.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds what an exact method can handle (search size, memory guard).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A value violates a structural invariant (invalid cover, dependent tableau rows, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation that has no exact parameter-only realisation.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// exp() of an argument whose real part leaves the double range.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double max_argument)
      : Error(what), max_argument_(max_argument) {}
  double max_argument() const { return max_argument_; }

 private:
  double max_argument_;
};

/// Numerical failure inside an iterative or linear-algebra routine.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cnqs

#endif  // CNQS_ERRORS_HPP
