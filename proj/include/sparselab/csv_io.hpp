// Copyright 2026 The sparselab Authors.
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

#ifndef SPARSELAB_CSV_IO_HPP
#define SPARSELAB_CSV_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sparselab/numerics.hpp"

namespace sparselab {

/// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_double(double v);

// Matrix file: first line "rows,cols", then one matrix row per line.
void write_matrix(std::ostream& os, const Mat& m);
void write_matrix(const std::string& path, const Mat& m);
Mat read_matrix(std::istream& is);
Mat read_matrix(const std::string& path);

/// Vectors are stored as len×1 matrices. A 1×len file is also accepted.
void write_vector(const std::string& path, const Vec& v);
Vec read_vector(const std::string& path);

// Labels file: one class index per line.
void write_labels(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::string& path);

/// Header-first CSV table with UNIX newlines.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);

  std::string str() const;
  void write(const std::string& path) const;

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace sparselab

#endif  // SPARSELAB_CSV_IO_HPP
