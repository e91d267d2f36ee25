// Copyright 2026 The paradox-lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace paradox {

/// Base of every physics-level failure. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value outside its allowed range (probabilities, settings, outcomes).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A marginal or conditional was requested across a signalling split.
class SignallingError : public Error {
 public:
  using Error::Error;
};

/// A transformation produced something that is not a state.
class InvalidOperation : public Error {
 public:
  using Error::Error;
};

/// Shapes that do not fit together (dimensions, wirings, layouts).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an outcome that never happens.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

class NotImplementedAtScale : public Error {
 public:
  using Error::Error;
};

}  // namespace paradox
