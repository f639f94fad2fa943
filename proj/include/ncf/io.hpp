#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "ncf/matrix_core.hpp"
#include "ncf/star_algebra.hpp"

namespace ncf {

using json = nlohmann::json;

inline json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw MalformedInput("complex entry must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

// {"rows": r, "cols": c, "data": [[re, im], ...]} row-major
inline json matrix_to_json(const ComplexMatrix& x) {
  json data = json::array();
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) data.push_back(complex_to_json(x(i, j)));
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw MalformedInput("matrix needs rows, cols and data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer() || !j["data"].is_array())
    throw MalformedInput("matrix fields have the wrong types");
  Index r = j["rows"].get<Index>(), c = j["cols"].get<Index>();
  if (r < 0 || c < 0 || static_cast<Index>(j["data"].size()) != r * c)
    throw MalformedInput("matrix data length must equal rows * cols");
  ComplexMatrix x(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) x(i, k) = complex_from_json(j["data"][static_cast<size_t>(i * c + k)]);
  return x;
}

inline json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) throw MalformedInput("coefficients must be an array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

// {"ambient_dim": N, "basis": [matrix...], "label": str}
inline json algebra_to_json(const MatrixAlgebra& a) {
  json basis = json::array();
  for (Index i = 0; i < a.dim(); ++i) basis.push_back(matrix_to_json(a.basis_element(i)));
  return {{"ambient_dim", a.ambient_dim()}, {"basis", std::move(basis)}, {"label", a.label()}};
}

inline MatrixAlgebra algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("basis") || !j["basis"].is_array())
    throw MalformedInput("algebra needs ambient_dim and basis");
  Index n = j["ambient_dim"].get<Index>();
  std::vector<ComplexMatrix> basis;
  for (const auto& b : j["basis"]) {
    ComplexMatrix x = matrix_from_json(b);
    if (x.rows() != n || x.cols() != n) throw MalformedInput("basis element does not match ambient_dim");
    basis.push_back(std::move(x));
  }
  if (basis.empty()) throw MalformedInput("algebra basis is empty");
  std::string label = j.value("label", std::string("algebra"));
  try {
    return MatrixAlgebra::from_spanning(basis, n, label);
  } catch (const InvalidArgument& e) {
    throw MalformedInput(e.what());
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw MalformedInput(path.string() + ": " + e.what());
  }
}

// Writes to a sibling temporary and renames it over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("rename failed for " + path.string() + ": " + ec.message());
  }
}

}  // namespace ncf
