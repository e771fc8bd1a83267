/*
 * Copyright 2026 The sysdetect Authors
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

namespace sysdetect {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind {
  Usage = 1,     // bad parameters or arguments
  Data = 2,      // malformed, missing or degenerate input data
  Internal = 3,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class UsageError : public Error {
public:
  explicit UsageError(const std::string &message)
      : Error(ErrorKind::Usage, message) {}
};

class DataError : public Error {
public:
  explicit DataError(const std::string &message)
      : Error(ErrorKind::Data, message) {}
};

} // namespace sysdetect
