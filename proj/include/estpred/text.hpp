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

#ifndef ESTPRED__TEXT_HPP_
#define ESTPRED__TEXT_HPP_

// Small text helpers shared by the file readers and writers.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace estpred::text
{

std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

std::optional<double> to_double(std::string_view s);
std::optional<int> to_int(std::string_view s);
std::optional<bool> to_bool(std::string_view s);

/// Fixed-point with 9 decimals, the precision of every CSV this project writes.
std::string fixed9(double v);
/// Shortest text that parses back to the identical double.
std::string exact(double v);

std::ifstream open_input(const std::filesystem::path & path);
std::ofstream open_output(const std::filesystem::path & path);

/**
 * Flat "key = value" document. '#' starts a comment; "[name]" starts a new
 * section. Keys before the first header land in a section with an empty name.
 */
struct KeyValueSection
{
  std::string name;
  std::size_t line = 0;
  std::map<std::string, std::string> values;
};

std::vector<KeyValueSection> read_key_value(const std::filesystem::path & path);

}  // namespace estpred::text

#endif  // ESTPRED__TEXT_HPP_
