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

#include "sparselab/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sparselab/error.hpp"

namespace sparselab {
namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& cell) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::Io, "cannot parse number '" + cell + "'");
  }
  return v;
}

long parse_long(const std::string& cell) {
  const std::string t = trim(cell);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::Io, "cannot parse integer '" + cell + "'");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const Mat& m) {
  os << m.rows() << ',' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_matrix(const std::string& path, const Mat& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

Mat read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "missing dimension line");
  const auto dims = split_commas(line);
  if (dims.size() != 2) throw Error(ErrorCode::Io, "dimension line must be 'rows,cols'");
  const long rows = parse_long(dims[0]);
  const long cols = parse_long(dims[1]);
  if (rows < 1 || cols < 1) throw Error(ErrorCode::Io, "matrix dimensions must be positive");
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw Error(ErrorCode::Io, "expected " + std::to_string(rows) + " data rows");
    const auto cells = split_commas(line);
    if (static_cast<long>(cells.size()) != cols) {
      throw Error(ErrorCode::Io, "row " + std::to_string(i) + " has " + std::to_string(cells.size()) + " cells");
    }
    for (long j = 0; j < cols; ++j) m(i, j) = parse_double(cells[j]);
  }
  require_finite(m, "matrix file");
  return m;
}

Mat read_matrix(const std::string& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

void write_vector(const std::string& path, const Vec& v) { write_matrix(path, Mat(v)); }

Vec read_vector(const std::string& path) {
  Mat m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(ErrorCode::Io, path + " is not a vector");
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels(const std::string& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    labels.push_back(static_cast<int>(parse_long(line)));
  }
  return labels;
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row width does not match CSV header");
  }
  rows_.push_back(cells);
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void CsvTable::write(const std::string& path) const {
  auto out = open_out(path);
  out << str();
}

}  // namespace sparselab
