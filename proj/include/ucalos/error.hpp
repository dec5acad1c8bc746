// SPDX-License-Identifier: Apache-2.0
//
// ucalos: line-of-sight MIMO link simulator for uniform circular arrays
// Copyright (C) 2026 The ucalos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ucalos {

// Invalid argument to a numerical routine (bad index, size mismatch, out-of-domain value)
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive enumeration or counter arithmetic would exceed its configured bound
class CapacityError : public std::length_error {
public:
  using std::length_error::length_error;
};

// Experiment configuration is malformed or incomplete. line() is 0 when the
// problem is not tied to a specific line (e.g. a missing key).
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace ucalos
