#pragma once

#include <iomanip>
#include <sstream>
#include <string>

#include "ncf/io.hpp"
#include "ncf/oracle.hpp"
#include "ncf/verifier.hpp"

namespace ncf {

namespace detail {

// JSON has no infinities; an empty aggregate stores null.
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline double number_or_inf(const json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace detail

inline json record_to_json(const CheckRecord& r) {
  return {{"check", r.check}, {"seed", r.seed},     {"trial", r.trial}, {"kind", r.kind},  {"lhs", r.lhs},
          {"rhs", r.rhs},     {"margin", r.margin}, {"pass", r.pass},   {"notes", r.notes}};
}

inline CheckRecord record_from_json(const json& j) {
  CheckRecord r;
  r.check = j.at("check").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.trial = j.at("trial").get<Index>();
  r.kind = j.at("kind").get<std::string>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.margin = j.at("margin").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.notes = j.value("notes", std::string());
  return r;
}

inline json report_to_json(const SuiteReport& r) {
  json aggs = json::object();
  for (const auto& [name, a] : r.aggregates)
    aggs[name] = {{"count", a.count},
                  {"violations", a.violations},
                  {"min_margin", detail::finite_or_null(a.min_margin)},
                  {"mean_margin", a.mean_margin()},
                  {"max_abs_margin", a.max_abs_margin},
                  {"worst_trial", a.worst_trial}};
  json records = json::array();
  for (const auto& rec : r.records) records.push_back(record_to_json(rec));
  json obs = json::object();
  for (const auto& [k, v] : r.observations) obs[k] = v;
  return {{"model", r.model},
          {"family", r.family},
          {"constants",
           {{"delta", r.delta},
            {"delta2", r.delta2},
            {"kappa_plus", r.kappa_plus},
            {"kappa_minus", r.kappa_minus},
            {"kappa", r.kappa},
            {"young_constant", r.young_constant},
            {"uncertainty_constant", r.uncertainty_constant}}},
          {"dim_plus", r.dim_plus},
          {"dim_minus", r.dim_minus},
          {"trials", r.trials},
          {"master_seed", r.master_seed},
          {"tolerance", r.tolerance},
          {"kinds", r.kinds},
          {"assumptions", r.assumptions},
          {"record_count", r.record_count},
          {"violations", r.violations},
          {"young_factor",
           {{"count", r.young_factor.count},
            {"above_one", r.young_factor.above_one},
            {"min", detail::finite_or_null(r.young_factor.min)},
            {"max", r.young_factor.max},
            {"mean", r.young_factor.mean()},
            {"sum", r.young_factor.sum}}},
          {"observations", obs},
          {"aggregates", aggs},
          {"records", records}};
}

inline SuiteReport report_from_json(const json& j) {
  try {
    SuiteReport r;
    r.model = j.at("model").get<std::string>();
    r.family = j.at("family").get<std::string>();
    const auto& c = j.at("constants");
    r.delta = c.at("delta").get<double>();
    r.delta2 = c.at("delta2").get<double>();
    r.kappa_plus = c.at("kappa_plus").get<double>();
    r.kappa_minus = c.at("kappa_minus").get<double>();
    r.kappa = c.at("kappa").get<double>();
    r.young_constant = c.at("young_constant").get<double>();
    r.uncertainty_constant = c.at("uncertainty_constant").get<double>();
    r.dim_plus = j.at("dim_plus").get<Index>();
    r.dim_minus = j.at("dim_minus").get<Index>();
    r.trials = j.at("trials").get<Index>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.tolerance = j.at("tolerance").get<double>();
    r.kinds = j.at("kinds").get<std::vector<std::string>>();
    r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
    r.record_count = j.at("record_count").get<Index>();
    r.violations = j.at("violations").get<Index>();
    const auto& yf = j.at("young_factor");
    r.young_factor.count = yf.at("count").get<Index>();
    r.young_factor.above_one = yf.at("above_one").get<Index>();
    r.young_factor.min = detail::number_or_inf(yf.at("min"));
    r.young_factor.max = yf.at("max").get<double>();
    r.young_factor.sum = yf.at("sum").get<double>();
    for (const auto& [k, v] : j.at("observations").items()) r.observations[k] = v.get<double>();
    for (const auto& [k, v] : j.at("aggregates").items()) {
      CheckAggregate a;
      a.count = v.at("count").get<Index>();
      a.violations = v.at("violations").get<Index>();
      a.min_margin = detail::number_or_inf(v.at("min_margin"));
      a.margin_sum = v.at("mean_margin").get<double>() * static_cast<double>(a.count);
      a.max_abs_margin = v.at("max_abs_margin").get<double>();
      a.worst_trial = v.at("worst_trial").get<Index>();
      r.aggregates[k] = a;
    }
    for (const auto& rec : j.at("records")) r.records.push_back(record_from_json(rec));
    return r;
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("report: ") + e.what());
  }
}

inline std::string report_to_csv(const SuiteReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "check,trial,kind,seed,lhs,rhs,margin,pass,notes\n";
  for (const auto& x : r.records)
    os << detail::csv_escape(x.check) << ',' << x.trial << ',' << x.kind << ',' << x.seed << ',' << x.lhs << ','
       << x.rhs << ',' << x.margin << ',' << (x.pass ? 1 : 0) << ',' << detail::csv_escape(x.notes) << '\n';
  return os.str();
}

inline std::string report_to_text(const SuiteReport& r) {
  std::ostringstream os;
  os << "model        " << r.model << "\n";
  os << "delta^2      " << r.delta2 << "\n";
  os << "kappa_0^+    " << r.kappa_plus << "\n";
  os << "kappa_0^-    " << r.kappa_minus << "\n";
  os << "kappa_0      " << r.kappa << "\n";
  os << "young const  " << r.young_constant << "  (delta / kappa_0^+)\n";
  os << "trials       " << r.trials << "  seed " << r.master_seed << "  tol " << r.tolerance << "\n";
  for (const auto& a : r.assumptions) os << "assumption   " << a << "\n";
  os << "young factor min " << r.young_factor.min << " max " << r.young_factor.max << " above one "
     << r.young_factor.above_one << "/" << r.young_factor.count << "\n";
  for (const auto& [k, v] : r.observations) os << "observed     " << k << " max deviation " << v << " (not asserted)\n";
  os << std::left;
  for (const auto& [name, a] : r.aggregates)
    os << "  " << std::setw(44) << name << " n=" << std::setw(6) << a.count << " min=" << std::setw(13)
       << a.min_margin << " mean=" << std::setw(13) << a.mean_margin() << (a.violations ? " VIOLATIONS " : " ok")
       << (a.violations ? std::to_string(a.violations) : std::string()) << "\n";
  os << "records " << r.record_count << ", violations " << r.violations << "\n";
  return os.str();
}

inline json oracle_to_json(const OracleReport& r) {
  json items = json::array();
  for (const auto& i : r.items)
    items.push_back({{"object", i.object}, {"deviation", i.deviation}, {"threshold", i.threshold}, {"pass", i.pass}});
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  return {{"model", r.model}, {"pass", r.pass()}, {"items", items}, {"values", values}};
}

inline std::string oracle_to_text(const OracleReport& r) {
  std::ostringstream os;
  os << r.model << (r.pass() ? "  PASS" : "  FAIL") << "\n" << std::left;
  for (const auto& i : r.items)
    os << "  " << std::setw(36) << i.object << std::setw(14) << i.deviation << " < " << i.threshold
       << (i.pass ? "" : "  MISMATCH") << "\n";
  for (const auto& [k, v] : r.values) os << "  " << std::setw(36) << k << v << "\n";
  return os.str();
}

}  // namespace ncf
