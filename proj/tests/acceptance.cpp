// One pass/fail line per acceptance criterion; exit status is nonzero if any line fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ncf/ncf.hpp"
#include "ncf/report.hpp"

using namespace ncf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void line(int n, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("criterion %d %s  %s: %s\n", n, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

struct SuiteRun {
  InclusionModel model;
  SuiteReport report;
  double seconds = 0.0;
};

constexpr Index kTrials = 500;
constexpr std::uint64_t kSeed = 20240601;

SampleSpec suite_spec(const InclusionModel& m) {
  SampleSpec s;
  s.model = m;
  s.trials = kTrials;
  s.master_seed = kSeed;
  s.keep_records = false;
  return s;
}

// Violations and worst margin over checks selected by name prefix.
struct Tally {
  Index count = 0;
  Index violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
};

Tally tally(const SuiteReport& r, const std::vector<std::string>& prefixes) {
  Tally t;
  for (const auto& [name, a] : r.aggregates)
    for (const auto& p : prefixes)
      if (starts_with(name, p)) {
        t.count += a.count;
        t.violations += a.violations;
        t.min_margin = std::min(t.min_margin, a.min_margin);
        break;
      }
  return t;
}

}  // namespace

int main() {
  auto start = Clock::now();

  {
    auto t0 = Clock::now();
    double worst = 0.0;
    bool ok = true;
    for (Index n : {2, 3, 4}) {
      auto rep = matrix_closed_form_oracle(n);
      for (const auto& i : rep.items) {
        ok = ok && i.pass;
        if (i.object.find("map") != std::string::npos) worst = std::max(worst, i.deviation);
      }
    }
    double secs = seconds_since(t0);
    ok = ok && worst < 1e-12 && secs < 5.0;
    line(1, ok, "closed-form exactness, matrix model n=2,3,4",
         "max entry error " + sci(worst) + " for F, F^-1, rho+, rho-; " + sci(secs) + " s");
  }

  {
    double worst = 0.0;
    bool ok = true;
    for (Index k = 2; k <= 8; ++k) {
      auto rep = cyclic_oracle(k);
      for (const char* obj : {"Phi o F (orthonormal)", "rho_+ permutation", "Phi rho_- Phi^-1 permutation"}) {
        worst = std::max(worst, rep.deviation(obj));
        ok = ok && rep.deviation(obj) < 1e-12;
      }
    }
    line(2, ok, "closed-form exactness, cyclic model k=2..8",
         "Phi o F vs DFT and both rotation permutations, max error " + sci(worst));
  }

  {
    double worst = 0.0;
    for (Index n : {2, 3}) {
      auto rep = convolution_closed_form_oracle(n, 200, kSeed);
      worst = std::max(worst, rep.deviation("convolution closed form"));
      std::printf("  n=%ld: alpha from the scalar-multiple relation is %.6g x the (1/n^2) sum form\n",
                  static_cast<long>(n), rep.values.at("alpha/alpha_literal"));
    }
    line(3, worst < 1e-9, "convolution closed form n=2,3, 200 draws",
         "relative error " + sci(worst) + " with alpha from (1/n)J(A.D)(1/n)J = alpha (1/n)J");
  }

  {
    auto t0 = Clock::now();
    double worst = 0.0;
    bool ok = true;
    std::string failed;
    for (Index n : {2, 3}) {
      auto rep = generic_closed_oracle(n);
      for (const auto& i : rep.items) {
        worst = std::max(worst, i.object.rfind("dim", 0) == 0 ? 0.0 : i.deviation);
        if (!i.pass) {
          ok = false;
          failed += " " + i.object;
        }
      }
    }
    line(4, ok, "generic engine vs closed form, C in M_n n=2,3",
         "e1, delta^2, Markov traces, F matrix, quasi-basis: max deviation " + sci(worst) + "; " +
             sci(seconds_since(t0)) + " s" + (failed.empty() ? "" : "; failed:" + failed));
  }

  std::vector<SuiteRun> runs;
  for (const auto& m : {matrix_pair_model(1, 2), matrix_pair_model(1, 3), matrix_pair_model(2, 2),
                        generic_scalar_model(2), cyclic_model(3), cyclic_model(5)}) {
    auto t0 = Clock::now();
    SuiteRun r{m, run_suite(suite_spec(m)), 0.0};
    r.seconds = seconds_since(t0);
    std::printf("  %s: %ld records, %ld violations, %.2f s\n", r.report.model.c_str(),
                static_cast<long>(r.report.record_count), static_cast<long>(r.report.violations), r.seconds);
    runs.push_back(std::move(r));
  }

  {
    const std::vector<std::string> tower = {"tower.", "kadison_schwarz.", "markov.", "pushdown", "relcomm."};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& r : runs) {
      if (r.model.family == "cyclic") continue;
      auto t = tally(r.report, tower);
      ok = ok && t.violations == 0 && t.count > 0;
      detail << r.report.model << " " << t.count << " checks/" << t.violations << " fail; ";
    }
    line(5, ok, "tower invariants, 500 trials per tower model", detail.str());
  }

  {
    const std::vector<std::string> ineq = {"hausdorff_young.", "young", "donoho_stark", "hirschman_beckner",
                                           "operator_norm_bound.", "norm_comparison.", "partial_isometry_bound"};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& r : runs) {
      if (r.model.family == "generic") continue;
      auto t = tally(r.report, ineq);
      double hy2 = std::max(r.report.aggregates.at("hausdorff_young.upper[p=2]").max_abs_margin,
                            r.report.aggregates.at("hausdorff_young.lower[p=2]").max_abs_margin);
      ok = ok && t.violations == 0 && t.count > 0 && hy2 <= 1e-12;
      detail << r.report.model << " " << t.violations << " viol, |HY p=2 margin| " << sci(hy2) << "; ";
    }
    for (Index n : {2, 3}) {
      const auto& rep = runs[static_cast<size_t>(n - 2)].report;
      double want = static_cast<double>(n * n);
      bool exact = std::abs(rep.young_constant - want) <= 1e-12 * want;
      ok = ok && exact;
      detail << "Young constant C in M_" << n << " = " << rep.young_constant << "; ";
    }
    line(6, ok, "inequality suites at slack 1e-9", detail.str());
  }

  {
    const std::vector<std::string> ident = {"plancherel",
                                            "inverse_roundtrip",
                                            "forward_roundtrip",
                                            "fourier_square.",
                                            "fourier_conjugation",
                                            "inverse_fourier_square",
                                            "frobenius_reciprocity",
                                            "convolution_adjoint.",
                                            "convolution_associativity",
                                            "rho_plus.",
                                            "rho_minus.",
                                            "rotation_intertwining",
                                            "schur_positivity"};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& r : runs) {
      auto t = tally(r.report, ident);
      double schur = r.report.aggregates.at("schur_positivity").min_margin;
      ok = ok && t.violations == 0 && schur > -1e-10;
      detail << r.report.model << " " << t.violations << " fail, min Schur eig " << sci(schur) << "; ";
    }
    line(7, ok, "identity suite, 500 trials per model", detail.str());
  }

  {
    bool same = true;
    for (const auto& m : {matrix_pair_model(1, 2), cyclic_model(5)}) {
      SampleSpec s = suite_spec(m);
      s.keep_records = true;
      std::string a = report_to_json(run_suite(s)).dump();
      std::string b = report_to_json(run_suite(s)).dump();
      same = same && a == b;
    }
    double total = seconds_since(start);
    line(8, same && total < 60.0, "determinism and runtime",
         std::string(same ? "identical" : "different") + " reports for repeated seeds; full run " + sci(total) + " s");
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
