// Copyright 2026 The nerport Authors
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

#ifndef NERPORT_CSV_H_
#define NERPORT_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace nerport {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

// Fixed-precision form for human-readable tables.
std::string FormatFixed(double value, int digits);

// RFC 4180 style writer: fields containing comma, quote or newline are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void Row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

// Reads RFC 4180 style CSV, including quoted fields with embedded newlines.
std::vector<std::vector<std::string>> ReadCsv(std::istream& in);

}  // namespace nerport

#endif  // NERPORT_CSV_H_
