// Copyright 2026 the lakeq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lakeq {

// Broad failure classes. The C API maps each one onto a status code.
enum class ErrorKind {
  kInvalidArgument,
  kIo,
  kParse,
  kBinding,    // unknown relation/column, wrong column type
  kType,       // ill-typed expression or predicate
  kSecurity,   // non-SELECT statement
  kBackend,    // LLM or QA backend transport failure
  kReplayMiss, // recorded transcript no longer matches the request
  kExhausted,  // scripted fixture ran out of responses
  kOperator,   // operator-level failure (e.g. UDF codegen gave up)
  kQueryFailed,
  kInternal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace lakeq
