#include "ddlr/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ddlr {

namespace {

[[noreturn]] void fail(const std::string& path, long line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

SparseMat mm_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string header;
  long lineno = 1;
  if (!std::getline(in, header)) fail(path, lineno, "empty file");

  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    fail(path, lineno, "malformed header, expected '%%MatrixMarket matrix ...'");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate") fail(path, lineno, "unsupported format '" + format + "', only coordinate");
  if (field != "real" && field != "integer")
    fail(path, lineno, "unsupported field '" + field + "', only real or integer");
  if (symmetry != "symmetric" && symmetry != "general")
    fail(path, lineno, "unsupported symmetry '" + symmetry + "', only symmetric or general");
  const bool sym = symmetry == "symmetric";

  std::string line;
  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz)) fail(path, lineno, "malformed size line");
    break;
  }
  if (rows < 0) fail(path, lineno, "missing size line");
  if (rows != cols) fail(path, lineno, "non-square matrix " + std::to_string(rows) + "x" + std::to_string(cols));

  // Entry map keyed by (row, col) so symmetry of general content can be audited;
  // the line number of each entry is kept for error reports.
  std::map<std::pair<Index, Index>, std::pair<double, long>> entries;
  long seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) fail(path, lineno + 1, "unexpected end of file, expected " + std::to_string(nnz) + " entries");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) fail(path, lineno, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols) fail(path, lineno, "index out of range");
    if (sym && j > i) fail(path, lineno, "entry above diagonal in symmetric file");
    auto key = std::make_pair(static_cast<Index>(i - 1), static_cast<Index>(j - 1));
    if (!entries.emplace(key, std::make_pair(v, lineno)).second) fail(path, lineno, "duplicate entry");
    ++seen;
  }

  std::vector<Triplet> ts;
  ts.reserve(entries.size() * 2);
  if (sym) {
    for (const auto& [key, val] : entries) {
      ts.emplace_back(key.first, key.second, val.first);
      if (key.first != key.second) ts.emplace_back(key.second, key.first, val.first);
    }
  } else {
    for (const auto& [key, val] : entries) {
      if (key.first == key.second) {
        ts.emplace_back(key.first, key.second, val.first);
        continue;
      }
      auto mirror = entries.find(std::make_pair(key.second, key.first));
      if (mirror == entries.end())
        fail(path, val.second, "nonsymmetric content: entry (" + std::to_string(key.first + 1) + "," +
                                   std::to_string(key.second + 1) + ") has no transpose mate");
      if (mirror->second.first != val.first)
        fail(path, val.second, "nonsymmetric content: value mismatch with transpose mate");
      ts.emplace_back(key.first, key.second, val.first);
    }
  }

  return from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), ts);
}

void mm_write(const std::string& path, const SparseMat& A) {
  require_square_symmetric(A, "mm_write");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  Index lownnz = 0;
  for (Index r = 0; r < A.outerSize(); ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it)
      if (it.col() <= r) ++lownnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << A.rows() << " " << A.cols() << " " << lownnz << "\n";
  out.precision(17);
  for (Index r = 0; r < A.outerSize(); ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it)
      if (it.col() <= r) out << r + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

}  // namespace ddlr
