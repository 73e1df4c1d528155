// Copyright 2026 The MATRL Authors
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

#ifndef MATRL_CSV_HPP_
#define MATRL_CSV_HPP_

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matrl {

class CsvError : public std::runtime_error {
 public:
  CsvError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;  // 1-based source line of each row

  // Index of a header column, or -1.
  int Column(std::string_view name) const;
  // Parses rows[r][c] as a finite double; CsvError carries the source line.
  double Number(int r, int c) const;
};

// Plain comma-separated values without quoting; a header row is required and
// every row must have as many fields as the header.
CsvTable ParseCsv(std::string_view text);
CsvTable ReadCsv(const std::filesystem::path& path);

// Shortest round-trip decimal form.
std::string FormatDouble(double v);

// LF-terminated rows; throws std::runtime_error if the file cannot be opened.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void Row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace matrl

#endif  // MATRL_CSV_HPP_
