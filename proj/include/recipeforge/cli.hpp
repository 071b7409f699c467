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

#ifndef RECIPEFORGE_CLI_HPP_
#define RECIPEFORGE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace recipeforge {

// Runs one CLI invocation. `args` excludes the program name. `in` feeds the
// interactive annotate loop. Returns the process exit code: 0 success,
// 1 usage/validation/input errors, 2 internal or numeric failures.
int RunCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
           std::ostream& err);

}  // namespace recipeforge

#endif  // RECIPEFORGE_CLI_HPP_
