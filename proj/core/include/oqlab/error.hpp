// Copyright 2026 The oqlab Authors
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

namespace oqlab {

enum class ErrorCode {
  kInvalidArgument,  // numeric precondition violated
  kInvalidInput,     // a probability bundle violates its invariants
  kMissingData,      // a required measurement setup is absent
  kDegenerateData,   // e.g. a count table with zero total
  kSchema,           // malformed CSV / config content
  kIo,               // file could not be opened or written
};

const char* to_string(ErrorCode code);

// All library failures are reported through this one exception type; the
// code tells callers (and the CLI's exit-status mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oqlab
