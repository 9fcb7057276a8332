/*
 * Copyright 2026 The vanetsim Authors.
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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vanetsim {

/// Comma-separated table with a header row. No quoting support: the files
/// this project reads and writes are purely numeric or simple labels.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

/// Strict parse: whole (trimmed) field must be consumed. Accepts inf/nan
/// spellings, leaving the finiteness decision to the caller.
std::optional<double> parse_double(std::string_view field);

/// Shortest round-trippable decimal representation.
std::string format_double(double v);

}  // namespace vanetsim
