/*
 * Copyright 2026 The RecipeForge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RECIPEFORGE_ERROR_HPP_
#define RECIPEFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace recipeforge {

enum class ErrorKind {
  kFormat,      // structural problem with an input file (missing column...)
  kValidation,  // well-formed input violating a domain rule
  kParse,       // malformed text
  kNumeric,     // non-finite values during training or prediction
  kIo,
  kNotFound,
  kConflict,
  kInternal,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception type. The kind
// drives the CLI exit code and the HTTP status of the service.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace recipeforge

#endif  // RECIPEFORGE_ERROR_HPP_
