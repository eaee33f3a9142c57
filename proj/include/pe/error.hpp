// Copyright 2026 The Post-Edit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pe {

/// Malformed or inconsistent input data (bad rows, bad offsets, empty corpora).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line misuse or missing input files.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the post-edit output parser; carries the raw model text so the
/// caller can record it or retry.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::string raw)
      : DataError(what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// The network call could not be completed (connection refused, timeout, 5xx).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The provider answered with a non-retryable error status (4xx), or kept
/// rate-limiting beyond the retry budget.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(const std::string& what, int status)
      : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Provider configuration is incomplete (missing credential, bad URL).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pe
