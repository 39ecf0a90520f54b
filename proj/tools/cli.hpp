// Copyright 2026 The estpred Authors
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

#ifndef ESTPRED_TOOLS__CLI_HPP_
#define ESTPRED_TOOLS__CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace estpred::cli
{

/// Exit codes: 0 success, 2 input error, 3 contract violation, 4 numerical failure.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace estpred::cli

#endif  // ESTPRED_TOOLS__CLI_HPP_
