/*
 * Copyright (c) 2026, The dsad Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace dsad {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad label, bad mass, wrong frame...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two mass functions are defined over different frames of discernment.
class FrameMismatch : public InvalidArgument {
 public:
  FrameMismatch() : InvalidArgument("mass functions are defined over different frames") {}
};

/// Dempster's rule is undefined: every product of focal elements is disjoint.
class TotalConflict : public Error {
 public:
  explicit TotalConflict(double k)
      : Error("total conflict between evidence sources (K = " + std::to_string(k) + ")"),
        conflict_(k) {}

  double conflict() const noexcept { return conflict_; }

 private:
  double conflict_;
};

/// A feature cannot rank classes: the pooled standard deviation is zero.
class DegenerateFeature : public Error {
 public:
  using Error::Error;
};

/// Every selected feature of a record is missing.
class UnclassifiableRecord : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or unreadable.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Training or evaluation failed; carries the fold or record that triggered it.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsad
