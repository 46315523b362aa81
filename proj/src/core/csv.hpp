// Copyright 2026 The HazardBench Authors
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

// Minimal RFC 4180 CSV: UTF-8, LF line endings on output, quoted fields only
// when needed.

#ifndef HAZARDBENCH_CORE_CSV_HPP_
#define HAZARDBENCH_CORE_CSV_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hb {

using CsvRow = std::vector<std::string>;

std::string csv_escape(std::string_view field);
// Fields joined with ',' plus a trailing '\n'.
std::string csv_line(const CsvRow& fields);

// Accepts LF or CRLF; throws kParse on an unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text);

// Header-keyed view of a CSV file. Throws kParse when a required column is
// missing or a row has the wrong number of fields (with its line number).
struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
  std::map<std::string, std::size_t> column;

  const std::string& at(std::size_t row, const std::string& name) const;
};

CsvTable read_csv_table(const std::string& path, const std::vector<std::string>& required);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_CSV_HPP_
