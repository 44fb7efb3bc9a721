// Copyright 2026 The autocompose Authors
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

namespace autocompose {

/// A caller passed a value outside an operation's documented domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A metric was requested over a set of events for which it is undefined,
/// e.g. exact match rate with zero gated suggestions.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Threshold calibration could not reach the requested coverage.
class CalibrationFailure : public std::runtime_error {
 public:
  CalibrationFailure(const std::string& what, double max_achievable)
      : std::runtime_error(what), max_achievable_(max_achievable) {}

  double max_achievable() const noexcept { return max_achievable_; }

 private:
  double max_achievable_;
};

/// A persisted artifact failed to parse or violates its invariants.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message always names the path involved.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed corpus record or timestamp.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace autocompose
