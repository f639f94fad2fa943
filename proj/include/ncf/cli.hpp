#pragma once

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncf/io.hpp"
#include "ncf/model.hpp"
#include "ncf/oracle.hpp"
#include "ncf/report.hpp"
#include "ncf/verifier.hpp"

namespace ncf {

enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitBuild = 2, kExitSpan = 3, kExitMalformed = 4 };

struct RunConfig {
  InclusionModel model;
  SampleSpec sample;
  std::filesystem::path out_dir;
  std::vector<std::string> formats = {"text"};

  void validate() const {
    if (formats.empty()) throw MalformedInput("at least one output format is required");
    for (const auto& f : formats)
      if (f != "json" && f != "csv" && f != "text") throw MalformedInput("unknown format '" + f + "'");
  }
};

inline double parse_exponent(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      return std::stod(s);
    } catch (const std::exception&) {
    }
  }
  throw MalformedInput("bad exponent " + j.dump());
}

inline std::uint64_t parse_seed(const std::string& s) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw MalformedInput("bad seed '" + s + "'");
  }
}

// {"model": <spec or shorthand>, "sample": {...}, "output": {"dir": ..., "formats": [...]}}
inline RunConfig config_from_json(const json& j, const std::filesystem::path& base = {}) {
  RunConfig c;
  if (!j.is_object()) throw MalformedInput("config must be a JSON object");
  try {
    if (j.contains("model")) {
      const auto& m = j["model"];
      c.model = m.is_string() ? parse_model(m.get<std::string>(), base) : model_from_json(m, base);
    }
    if (j.contains("sample")) {
      const auto& s = j["sample"];
      if (s.contains("kinds")) {
        c.sample.kinds.clear();
        for (const auto& k : s["kinds"]) c.sample.kinds.push_back(parse_sample_kind(k.get<std::string>()));
      }
      if (s.contains("trials")) c.sample.trials = s["trials"].get<Index>();
      if (s.contains("master_seed")) {
        c.sample.master_seed =
            s["master_seed"].is_string() ? parse_seed(s["master_seed"].get<std::string>()) : s["master_seed"].get<std::uint64_t>();
      }
      if (s.contains("exponents")) {
        c.sample.exponents.clear();
        for (const auto& e : s["exponents"]) c.sample.exponents.push_back(parse_exponent(e));
      }
      if (s.contains("tolerance")) c.sample.tolerance = s["tolerance"].get<double>();
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      if (o.contains("dir")) {
        std::filesystem::path d = o["dir"].get<std::string>();
        c.out_dir = d.is_relative() && !base.empty() ? base / d : d;
      }
      if (o.contains("formats")) c.formats = o["formats"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline json info_json(const FourierContext& c) {
  json j = {{"model", c.description},
            {"family", c.family},
            {"delta", c.delta},
            {"delta2", c.delta2()},
            {"kappa_plus", c.kappa_plus},
            {"kappa_minus", c.kappa_minus},
            {"kappa", c.kappa},
            {"kappa_declared", c.kappa_declared},
            {"dim_plus", c.plus.dim()},
            {"dim_minus", c.minus.dim()},
            {"minimal", c.minimal},
            {"assumptions", c.assumptions}};
  if (c.tower) {
    j["tr_e1"] = markov_trace(*c.tower, 1, c.tower->e1).value.real();
    j["tr_e2"] = markov_trace(*c.tower, 2, c.tower->e2).value.real();
    j["E0"] = c.tower->E0.label;
  } else {
    j["tr_e1"] = nullptr;
    j["tr_e2"] = nullptr;
  }
  return j;
}

inline std::string info_text(const json& j) {
  std::ostringstream os;
  auto num = [&](const char* k) { return j[k].is_null() ? std::string("n/a (no tower)") : format_number(j[k].get<double>()); };
  os << "model          " << j["model"].get<std::string>() << "\n";
  os << "delta^2        " << num("delta2") << "\n";
  os << "kappa_0^+      " << num("kappa_plus") << (j["kappa_declared"].get<bool>() ? " (declared)" : "") << "\n";
  os << "kappa_0^-      " << num("kappa_minus") << (j["kappa_declared"].get<bool>() ? " (declared)" : "") << "\n";
  os << "kappa_0        " << num("kappa") << (j["kappa_declared"].get<bool>() ? " (declared)" : "") << "\n";
  os << "dim B' cap A1  " << j["dim_plus"].get<Index>() << "\n";
  os << "dim A' cap A2  " << j["dim_minus"].get<Index>() << "\n";
  os << "tr(e1)         " << num("tr_e1") << "\n";
  os << "tr(e2)         " << num("tr_e2") << "\n";
  for (const auto& a : j["assumptions"]) os << "assumption     " << a.get<std::string>() << "\n";
  return os.str();
}

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& stem, const std::vector<std::pair<std::string, std::string>>& by_format,
                 std::ostream& out) {
  if (cfg.out_dir.empty()) {
    for (const auto& [fmt, body] : by_format)
      if (fmt == cfg.formats.front()) out << body;
    return;
  }
  for (const auto& fmt : cfg.formats)
    for (const auto& [f, body] : by_format)
      if (f == fmt) {
        std::string ext = fmt == "text" ? "txt" : fmt;
        atomic_write(cfg.out_dir / (stem + "." + ext), body);
      }
}

}  // namespace detail

inline int cmd_info(const RunConfig& cfg, std::ostream& out) {
  auto ctx = build_context(cfg.model);
  json j = info_json(*ctx);
  detail::emit(cfg, "info", {{"json", j.dump(2) + "\n"}, {"text", info_text(j)}, {"csv", info_text(j)}}, out);
  if (!cfg.out_dir.empty()) out << info_text(j);
  return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  SampleSpec spec = cfg.sample;
  spec.model = cfg.model;
  auto ctx = build_context(cfg.model);
  SuiteReport rep = run_suite(spec, ctx);
  std::string text = report_to_text(rep);
  detail::emit(cfg, "report",
               {{"json", report_to_json(rep).dump(2) + "\n"}, {"csv", report_to_csv(rep)}, {"text", text}}, out);
  if (!cfg.out_dir.empty()) out << text;
  return rep.violations == 0 ? kExitOk : kExitViolation;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  OracleReport rep = oracle_for_model(cfg.model, cfg.sample.master_seed);
  std::string text = oracle_to_text(rep);
  detail::emit(cfg, "oracle", {{"json", oracle_to_json(rep).dump(2) + "\n"}, {"text", text}, {"csv", text}}, out);
  if (!cfg.out_dir.empty()) out << text;
  return rep.pass() ? kExitOk : kExitViolation;
}

// Coefficients (array, or {"coefficients": [...]}) or a full matrix file projected with a residual audit.
inline ComplexMatrix element_from_json(const json& j, const MatrixAlgebra& side) {
  const json* coeffs = nullptr;
  if (j.is_array()) coeffs = &j;
  if (j.is_object() && j.contains("coefficients")) coeffs = &j["coefficients"];
  if (coeffs) {
    ComplexVector v = vector_from_json(*coeffs);
    if (v.size() != side.dim())
      throw MalformedInput("expected " + std::to_string(side.dim()) + " coefficients for " + side.label() + ", got " +
                           std::to_string(v.size()));
    return side.element(v);
  }
  const json& mj = j.is_object() && j.contains("matrix") ? j["matrix"] : j;
  ComplexMatrix x = matrix_from_json(mj);
  if (x.rows() != side.ambient_dim() || x.cols() != side.ambient_dim())
    throw MalformedInput("matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + ", expected " +
                         std::to_string(side.ambient_dim()));
  side.checked_coordinates(x);
  return x;
}

inline const std::vector<std::string>& transform_directions() {
  static const std::vector<std::string> d = {"forward", "inverse", "rho+", "rho-", "convolve"};
  return d;
}

inline json transform_json(const FourierContext& c, const std::string& direction, const std::vector<json>& inputs) {
  bool from_minus = direction == "inverse" || direction == "rho-";
  const MatrixAlgebra& in_side = from_minus ? c.minus : c.plus;
  if (std::find(transform_directions().begin(), transform_directions().end(), direction) == transform_directions().end())
    throw MalformedInput("unknown direction '" + direction + "'");
  Index need = direction == "convolve" ? 2 : 1;
  if (static_cast<Index>(inputs.size()) != need)
    throw MalformedInput(direction + " takes " + std::to_string(need) + " element file(s)");
  ComplexMatrix x = element_from_json(inputs[0], in_side);
  ComplexMatrix y;
  bool to_minus = false;
  if (direction == "forward") {
    y = fourier(c, x);
    to_minus = true;
  } else if (direction == "inverse") {
    y = inverse_fourier(c, x);
  } else if (direction == "rho+") {
    y = rho_plus(c, x);
  } else if (direction == "rho-") {
    y = rho_minus(c, x);
    to_minus = true;
  } else {
    y = convolve(c, x, element_from_json(inputs[1], c.plus));
  }
  const MatrixAlgebra& out_side = to_minus ? c.minus : c.plus;
  return {{"model", c.description},
          {"direction", direction},
          {"side", to_minus ? "A' cap A2" : "B' cap A1"},
          {"coefficients", vector_to_json(out_side.coordinates(y))},
          {"matrix", matrix_to_json(y)}};
}

inline int cmd_transform(const RunConfig& cfg, const std::string& direction, const std::vector<std::string>& files,
                         std::ostream& out) {
  std::vector<json> inputs;
  for (const auto& f : files) inputs.push_back(read_json_file(f));
  auto ctx = build_context(cfg.model);
  json j = transform_json(*ctx, direction, inputs);
  std::string body = j.dump(2) + "\n";
  if (cfg.out_dir.empty()) {
    out << body;
  } else {
    atomic_write(cfg.out_dir / "transform.json", body);
  }
  return kExitOk;
}

// Full command line; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"ncf: Fourier analysis workbench for finite-index inclusions"};
  app.require_subcommand(1);
  std::string config_path, model_text, seed_text, format_text;
  std::optional<double> tol;
  std::optional<Index> trials;
  std::string out_dir, kinds_text, direction;
  std::vector<std::string> files;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config JSON file");
    sub->add_option("--model", model_text, "inline model: JSON or matrix-pair:m,mu | cyclic:k | generic:n");
    sub->add_option("--seed", seed_text, "master seed (u64)");
    sub->add_option("--tol", tol, "relative slack tolerance");
    sub->add_option("--trials", trials, "number of trials");
    sub->add_option("--format", format_text, "json|csv|text (comma separated)");
    sub->add_option("--out", out_dir, "output directory");
  };
  auto* info = app.add_subcommand("info", "print constants and dimensions");
  auto* verify = app.add_subcommand("verify", "run the inequality and identity suites");
  auto* transform = app.add_subcommand("transform", "apply F, F^-1, rho+, rho- or convolution to element files");
  auto* oracle = app.add_subcommand("oracle", "compare definitional data against closed forms");
  for (auto* s : {info, verify, transform, oracle}) add_common(s);
  verify->add_option("--kinds", kinds_text, "sample kinds (comma separated)");
  transform->add_option("direction", direction, "forward|inverse|rho+|rho-|convolve")->required();
  transform->add_option("elements", files, "element file(s)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitMalformed;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::filesystem::path p = config_path;
      cfg = config_from_json(read_json_file(p), p.parent_path());
    }
    if (!model_text.empty()) cfg.model = parse_model(model_text);
    if (const char* env = std::getenv("NCF_SEED"); env && *env) cfg.sample.master_seed = parse_seed(env);
    if (!seed_text.empty()) cfg.sample.master_seed = parse_seed(seed_text);
    if (tol) cfg.sample.tolerance = *tol;
    if (trials) cfg.sample.trials = *trials;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format_text.empty()) {
      cfg.formats.clear();
      std::stringstream ss(format_text);
      std::string f;
      while (std::getline(ss, f, ',')) cfg.formats.push_back(f);
    }
    if (!kinds_text.empty()) {
      cfg.sample.kinds.clear();
      std::stringstream ss(kinds_text);
      std::string k;
      while (std::getline(ss, k, ',')) cfg.sample.kinds.push_back(parse_sample_kind(k));
    }
    cfg.validate();
    try {
      cfg.sample.validate();
    } catch (const InvalidArgument& e) {
      throw MalformedInput(e.what());
    }

    if (*info) return cmd_info(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*oracle) return cmd_oracle(cfg, out);
    return cmd_transform(cfg, direction, files, out);
  } catch (const SpanResidualError& e) {
    err << "ncf: span residual: " << e.what() << "\n";
    return kExitSpan;
  } catch (const MalformedInput& e) {
    err << "ncf: malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const Error& e) {
    err << "ncf: build failure: " << e.what() << "\n";
    return kExitBuild;
  }
}

}  // namespace ncf
