#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "ncf/fourier.hpp"
#include "ncf/io.hpp"
#include "ncf/tower.hpp"

namespace ncf {

struct InclusionModel {
  std::string family = "matrix-pair";
  Index m = 1;
  Index mu = 2;
  Index k = 3;
  Index n = 0;  // generic shorthand: C in M_n
  std::optional<MatrixAlgebra> b_alg;
  std::optional<MatrixAlgebra> a_alg;
  std::string b_source;
  std::string a_source;

  std::string describe() const {
    std::ostringstream os;
    if (family == "matrix-pair") {
      os << "matrix-pair(m=" << m << ", mu=" << mu << ")";
    } else if (family == "cyclic") {
      os << "cyclic(k=" << k << ")";
    } else if (n > 0) {
      os << "generic(C in M_" << n << ")";
    } else {
      os << "generic(" << b_source << " in " << a_source << ")";
    }
    return os.str();
  }
};

inline InclusionModel matrix_pair_model(Index m, Index mu) {
  InclusionModel x;
  x.family = "matrix-pair";
  x.m = m;
  x.mu = mu;
  return x;
}

inline InclusionModel cyclic_model(Index k) {
  InclusionModel x;
  x.family = "cyclic";
  x.k = k;
  return x;
}

inline InclusionModel generic_scalar_model(Index n) {
  InclusionModel x;
  x.family = "generic";
  x.n = n;
  return x;
}

namespace detail {

inline Index positive_field(const json& j, const char* key, Index fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw MalformedInput(std::string("model field ") + key + " must be an integer");
  return j[key].get<Index>();
}

}  // namespace detail

// {"family": ..., "m", "mu", "k", "n", "algebra_files": {"B": path, "A": path}, "algebras": {...}}
inline InclusionModel model_from_json(const json& j, const std::filesystem::path& base = {}) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw MalformedInput("model spec needs a family");
  InclusionModel x;
  x.family = j["family"].get<std::string>();
  x.m = detail::positive_field(j, "m", 1);
  x.mu = detail::positive_field(j, "mu", 2);
  x.k = detail::positive_field(j, "k", 3);
  x.n = detail::positive_field(j, "n", 0);
  if (x.family != "matrix-pair" && x.family != "cyclic" && x.family != "generic")
    throw MalformedInput("unknown model family " + x.family);
  if (x.family == "generic" && x.n == 0) {
    if (j.contains("algebra_files")) {
      const auto& f = j["algebra_files"];
      if (!f.contains("B") || !f.contains("A")) throw MalformedInput("algebra_files needs B and A");
      auto resolve = [&](const json& p) {
        std::filesystem::path path = p.get<std::string>();
        return path.is_relative() && !base.empty() ? base / path : path;
      };
      auto bp = resolve(f["B"]), ap = resolve(f["A"]);
      x.b_alg = algebra_from_json(read_json_file(bp));
      x.a_alg = algebra_from_json(read_json_file(ap));
      x.b_source = bp.filename().string();
      x.a_source = ap.filename().string();
    } else if (j.contains("algebras")) {
      x.b_alg = algebra_from_json(j["algebras"].at("B"));
      x.a_alg = algebra_from_json(j["algebras"].at("A"));
      x.b_source = x.b_alg->label();
      x.a_source = x.a_alg->label();
    } else {
      throw MalformedInput("generic model needs n, algebra_files or algebras");
    }
  }
  return x;
}

// "matrix-pair:1,3", "cyclic:5", "generic:3", or an inline JSON object.
inline InclusionModel parse_model(const std::string& text, const std::filesystem::path& base = {}) {
  auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return model_from_json(json::parse(text), base);
    } catch (const json::parse_error& e) {
      throw MalformedInput(std::string("inline model: ") + e.what());
    }
  }
  auto colon = text.find(':');
  std::string fam = text.substr(0, colon);
  std::vector<Index> args;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        args.push_back(std::stol(tok));
      } catch (const std::exception&) {
        throw MalformedInput("bad model argument '" + tok + "'");
      }
    }
  }
  if (fam == "matrix-pair") {
    if (args.size() != 2) throw MalformedInput("matrix-pair:<m>,<mu>");
    return matrix_pair_model(args[0], args[1]);
  }
  if (fam == "cyclic") {
    if (args.size() != 1) throw MalformedInput("cyclic:<k>");
    return cyclic_model(args[0]);
  }
  if (fam == "generic") {
    if (args.size() != 1) throw MalformedInput("generic:<n> (C in M_n)");
    return generic_scalar_model(args[0]);
  }
  throw MalformedInput("unknown model '" + text + "'");
}

inline json model_to_json(const InclusionModel& x) {
  json j = {{"family", x.family}};
  if (x.family == "matrix-pair") {
    j["m"] = x.m;
    j["mu"] = x.mu;
  } else if (x.family == "cyclic") {
    j["k"] = x.k;
  } else if (x.n > 0) {
    j["n"] = x.n;
  } else {
    j["algebras"] = {{"B", algebra_to_json(*x.b_alg)}, {"A", algebra_to_json(*x.a_alg)}};
  }
  return j;
}

inline std::shared_ptr<const JonesTower> build_tower(const InclusionModel& x) {
  if (x.family == "matrix-pair") return build_matrix_pair(x.m, x.mu);
  if (x.family == "generic") {
    if (x.n > 0) {
      if (x.n < 1) throw InvalidArgument("generic: n must be positive");
      return build_generic(MatrixAlgebra::scalars(x.n, "C"), MatrixAlgebra::full(x.n, "M_" + std::to_string(x.n)));
    }
    if (!x.b_alg || !x.a_alg) throw BuildError("generic model without algebras");
    return build_generic(*x.b_alg, *x.a_alg);
  }
  throw BuildError("family " + x.family + " has no tower");
}

inline std::shared_ptr<const FourierContext> build_context(const InclusionModel& x) {
  if (x.family == "cyclic") return build_cyclic(x.k);
  return make_fourier_context(build_tower(x));
}

}  // namespace ncf
