#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncf/fourier.hpp"
#include "ncf/model.hpp"
#include "ncf/rng.hpp"

namespace ncf {

enum class SampleKind { Gaussian, Positive, Projection, PartialIsometry, Unitary, Basis };

inline const std::vector<SampleKind>& all_sample_kinds() {
  static const std::vector<SampleKind> k = {SampleKind::Gaussian,        SampleKind::Positive, SampleKind::Projection,
                                            SampleKind::PartialIsometry, SampleKind::Unitary,  SampleKind::Basis};
  return k;
}

inline std::string to_string(SampleKind k) {
  switch (k) {
    case SampleKind::Gaussian: return "gaussian";
    case SampleKind::Positive: return "positive";
    case SampleKind::Projection: return "projection";
    case SampleKind::PartialIsometry: return "partial-isometry";
    case SampleKind::Unitary: return "unitary";
    case SampleKind::Basis: return "basis";
  }
  return "unknown";
}

inline SampleKind parse_sample_kind(const std::string& s) {
  for (auto k : all_sample_kinds())
    if (to_string(k) == s) return k;
  throw MalformedInput("unknown sample kind '" + s + "'");
}

inline std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  if (std::abs(p - 4.0 / 3.0) < 1e-12) return "4/3";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

inline const std::vector<double>& default_exponents() {
  static const std::vector<double> e = {1.0, 4.0 / 3.0, 2.0, 4.0, kInf};
  return e;
}

struct SampleSpec {
  InclusionModel model;
  std::vector<SampleKind> kinds = all_sample_kinds();
  Index trials = 100;
  std::uint64_t master_seed = 20240601;
  std::vector<double> exponents = default_exponents();
  double tolerance = 1e-9;
  bool keep_records = true;

  void validate() const {
    if (trials < 1) throw InvalidArgument("trials must be at least 1");
    if (kinds.empty()) throw InvalidArgument("at least one sample kind is required");
    if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
    for (double p : exponents)
      if (!(p >= 1.0)) throw InvalidArgument("exponents must lie in [1, inf]");
  }
};

struct CheckRecord {
  std::string check;
  std::uint64_t seed = 0;
  Index trial = 0;
  std::string kind;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = true;
  std::string notes;
};

struct CheckAggregate {
  Index count = 0;
  Index violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double margin_sum = 0.0;
  double max_abs_margin = 0.0;
  Index worst_trial = -1;

  double mean_margin() const { return count ? margin_sum / static_cast<double>(count) : 0.0; }
};

struct FactorStats {
  Index count = 0;
  Index above_one = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = 0.0;
  double sum = 0.0;

  void add(double v) {
    ++count;
    if (v > 1.0 + 1e-12) ++above_one;
    min = std::min(min, v);
    max = std::max(max, v);
    sum += v;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

// Largest deviation per quantity that is observed but not asserted.
using ObservationLog = std::map<std::string, double>;

struct SuiteReport {
  std::string model;
  std::string family;
  double delta = 0.0;
  double delta2 = 0.0;
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
  double kappa = 0.0;
  double young_constant = 0.0;
  double uncertainty_constant = 0.0;
  Index dim_plus = 0;
  Index dim_minus = 0;
  Index trials = 0;
  std::uint64_t master_seed = 0;
  double tolerance = 0.0;
  std::vector<std::string> kinds;
  std::vector<std::string> assumptions;
  std::map<std::string, CheckAggregate> aggregates;
  std::vector<CheckRecord> records;
  Index record_count = 0;
  Index violations = 0;
  FactorStats young_factor;
  ObservationLog observations;
};

// Pass rule shared by every record: margin >= -tol * max(1, |rhs|).
inline CheckRecord make_record(std::string name, double lhs, double rhs, double tol) {
  CheckRecord r;
  r.check = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = std::isfinite(r.margin) && r.margin >= -tol * std::max(1.0, std::abs(rhs));
  return r;
}

// Identity: lhs is the relative deviation, rhs is 0.
inline CheckRecord identity_record(std::string name, const ComplexMatrix& got, const ComplexMatrix& want,
                                   double tol) {
  double dev = max_abs(got - want) / std::max(1.0, max_abs(want));
  return make_record(std::move(name), dev, 0.0, tol);
}

inline CheckRecord scalar_identity_record(std::string name, cd got, cd want, double tol) {
  double dev = std::abs(got - want) / std::max(1.0, std::abs(want));
  return make_record(std::move(name), dev, 0.0, tol);
}

// a <= b in the Loewner order: margin is lambda_min(b - a), scale ||b||.
inline CheckRecord psd_record(std::string name, const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  double scale = std::max(operator_norm(b), operator_norm(a));
  double lam = min_eigenvalue(b - a);
  CheckRecord r = make_record(std::move(name), scale - lam, scale, tol);
  r.margin = lam;
  r.pass = std::isfinite(lam) && lam >= -tol * std::max(1.0, scale);
  return r;
}

namespace detail {

inline ComplexMatrix truncated_sum(const ElementDecomposition& d, Index n, Index keep, bool squares) {
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < keep && i < static_cast<Index>(d.terms.size()); ++i) {
    const auto& v = d.terms[static_cast<size_t>(i)].isometry;
    out += squares ? ComplexMatrix(v * v.adjoint()) : v;
  }
  return out;
}

}  // namespace detail

// Deterministic RelPlus sample; basis_index selects the canonical basis element for kind=basis.
inline ComplexMatrix sample_element(const FourierContext& c, SampleKind kind, std::uint64_t seed,
                                    Index basis_index = 0) {
  Rng rng(seed);
  Index n = c.plus.ambient_dim();
  if (kind == SampleKind::Basis) return c.plus.basis_element(basis_index % c.plus.dim());
  ComplexMatrix g = c.plus.random_element(rng);
  if (kind == SampleKind::Gaussian) return g;
  if (kind == SampleKind::Positive) return g.adjoint() * g;
  auto d = rank_one_decomposition(g);
  Index terms = static_cast<Index>(d.terms.size());
  if (terms == 0) return g;
  if (kind == SampleKind::Unitary) return detail::truncated_sum(d, n, terms, false);
  Index keep = rng.uniform_int(1, terms);
  return detail::truncated_sum(d, n, keep, kind == SampleKind::Projection);
}

// Singular values of an element, normalized trace of its ambient algebra.
struct NormProfile {
  RealVector s;
  Index n = 0;
  double operator()(double p) const { return schatten_from_singular(s, n, p); }
  static NormProfile of(const ComplexMatrix& x) { return {singular_values(x), x.rows()}; }
};

inline std::vector<CheckRecord> check_hausdorff_young(const FourierContext& c, const ComplexMatrix& x, double p,
                                                      double tol = 1e-9) {
  if (!(p >= 2.0)) throw InvalidArgument("Hausdorff-Young needs p >= 2");
  if (max_abs(x) == 0.0) return {};
  double q = conjugate_exponent(p);
  auto nx = NormProfile::of(x);
  auto nf = NormProfile::of(fourier(c, x));
  double xq = nx(q), fp = nf(p);
  double expo = 1.0 - 2.0 * reciprocal(p);
  double constant = std::pow(c.delta / c.kappa, expo);
  std::string tag = "[p=" + format_exponent(p) + "]";
  return {make_record("hausdorff_young.lower" + tag, xq, fp, tol),
          make_record("hausdorff_young.upper" + tag, fp, constant * xq, tol)};
}

// Young inputs evaluated once and shared across every exponent pair.
struct YoungData {
  NormProfile x, y, ybar, xy, yx;
  double constant = 0.0;
  double factor = 1.0;  // ||y||_1 / ||ybar||_1
};

inline YoungData young_data(const FourierContext& c, const ComplexMatrix& x, const ComplexMatrix& y) {
  YoungData d;
  d.x = NormProfile::of(x);
  d.y = NormProfile::of(y);
  d.ybar = NormProfile::of(rho_plus(c, y));
  d.xy = NormProfile::of(convolve(c, x, y));
  d.yx = NormProfile::of(convolve(c, y, x));
  d.constant = c.delta / c.kappa_plus;
  double yb1 = d.ybar(1.0);
  d.factor = yb1 > 0.0 ? d.y(1.0) / yb1 : 1.0;
  return d;
}

inline bool valid_young_pair(double p, double q) {
  double inv_r = reciprocal(p) + reciprocal(q) - 1.0;
  return inv_r >= -1e-15 && inv_r <= 1.0 + 1e-15;
}

inline CheckRecord young_record(const YoungData& d, double p, double q, double tol) {
  double inv_r = std::max(0.0, reciprocal(p) + reciprocal(q) - 1.0);
  double r = from_reciprocal(inv_r);
  double rhs = d.constant * std::pow(d.factor, inv_r) * d.x(p) * d.ybar(q);
  return make_record("young[p=" + format_exponent(p) + ",q=" + format_exponent(q) + "]", d.xy(r), rhs, tol);
}

inline CheckRecord check_young(const FourierContext& c, const ComplexMatrix& x, const ComplexMatrix& y, double p,
                               double q, double tol = 1e-9) {
  if (!valid_young_pair(p, q)) throw InvalidArgument("invalid Young exponent pair");
  if (max_abs(y) == 0.0) throw InvalidArgument("Young check needs y != 0");
  return young_record(young_data(c, x, y), p, q, tol);
}

// Extreme exponent corners of Young, each recorded under its own name.
inline std::vector<CheckRecord> young_corner_records(const YoungData& d, const std::vector<double>& grid, double tol) {
  std::vector<CheckRecord> out;
  double c = d.constant;
  out.push_back(make_record("young.corner[inf;1]", d.xy(kInf), c * d.x(kInf) * d.ybar(1.0), tol));
  out.push_back(make_record("young.corner_swapped[inf;1]", d.yx(kInf), c * d.x(kInf) * d.y(1.0), tol));
  out.push_back(make_record("young.corner[1;1]", d.xy(1.0), c * d.x(1.0) * d.y(1.0), tol));
  for (double p : grid) {
    std::string tag = "[p=" + format_exponent(p) + "]";
    double ip = reciprocal(p);
    out.push_back(make_record("young.corner.p_1" + tag, d.xy(p), c * std::pow(d.factor, ip) * d.x(p) * d.ybar(1.0), tol));
    out.push_back(make_record("young.corner_swapped.p_1" + tag, d.yx(p), c * d.x(p) * d.y(1.0), tol));
    double q = conjugate_exponent(p);
    out.push_back(make_record("young.corner.inf_p" + tag, d.xy(kInf), c * d.x(p) * d.ybar(q), tol));
  }
  return out;
}

inline CheckRecord check_donoho_stark(const FourierContext& c, const ComplexMatrix& x, double tol = 1e-9) {
  if (max_abs(x) == 0.0) throw InvalidArgument("Donoho-Stark check needs x != 0");
  double bound = c.kappa * c.kappa / c.delta2();
  double product = support(c, x) * support(c, fourier(c, x));
  return make_record("donoho_stark", bound, product, tol);
}

inline CheckRecord check_hirschman_beckner(const FourierContext& c, const ComplexMatrix& x, double tol = 1e-9,
                                           const std::string& name = "hirschman_beckner") {
  if (max_abs(x) == 0.0) throw InvalidArgument("Hirschman-Beckner check needs x != 0");
  ComplexMatrix f = fourier(c, x);
  double h = 0.5 * (entropy(f, c.tr_minus()) + entropy(x, c.tr_plus()));
  double n2 = schatten_norm(x, 2.0, c.tr_plus());
  double n2sq = n2 * n2;
  double bound = -n2sq * (std::log(c.delta / c.kappa) + std::log(n2sq));
  return make_record(name, bound, h, tol);
}

namespace detail {

struct StructuralInputs {
  ComplexMatrix x, y, z, a, b, nu, w, v;
};

inline StructuralInputs structural_inputs(const FourierContext& c, std::uint64_t seed, SampleKind kind,
                                          Index basis_index) {
  StructuralInputs in;
  in.x = sample_element(c, kind, derive_seed(seed, 0, "x"), basis_index);
  in.y = sample_element(c, SampleKind::Gaussian, derive_seed(seed, 0, "y"));
  in.z = sample_element(c, SampleKind::Gaussian, derive_seed(seed, 0, "z"));
  in.a = sample_element(c, SampleKind::Positive, derive_seed(seed, 0, "a"));
  in.b = sample_element(c, SampleKind::Positive, derive_seed(seed, 0, "b"));
  in.nu = sample_element(c, SampleKind::PartialIsometry, derive_seed(seed, 0, "nu"));
  in.w = fourier(c, sample_element(c, SampleKind::Gaussian, derive_seed(seed, 0, "w")));
  in.v = fourier(c, sample_element(c, SampleKind::Gaussian, derive_seed(seed, 0, "v")));
  return in;
}

inline void observe(ObservationLog* log, const std::string& name, double value) {
  if (!log) return;
  auto& slot = (*log)[name];
  slot = std::max(slot, value);
}

}  // namespace detail

// Algebraic identities of the Fourier calculus plus the tower-level inequalities.
inline std::vector<CheckRecord> check_structural(const FourierContext& c, std::uint64_t seed,
                                                 SampleKind kind = SampleKind::Gaussian, Index basis_index = 0,
                                                 double tol = 1e-9, ObservationLog* log = nullptr) {
  std::vector<CheckRecord> out;
  auto in = detail::structural_inputs(c, seed, kind, basis_index);
  const auto& x = in.x;
  const auto& y = in.y;
  const auto& z = in.z;
  const auto& w = in.w;
  const auto& v = in.v;
  auto trp = c.tr_plus();
  auto trm = c.tr_minus();
  Index np = c.plus.ambient_dim(), nm = c.minus.ambient_dim();

  ComplexMatrix fx = fourier(c, x);
  out.push_back(make_record("plancherel", std::abs(schatten_norm(fx, 2.0, trm) - schatten_norm(x, 2.0, trp)) /
                                              std::max(1.0, schatten_norm(x, 2.0, trp)),
                            0.0, tol));
  out.push_back(identity_record("inverse_roundtrip", inverse_fourier(c, fx), x, tol));
  out.push_back(identity_record("forward_roundtrip", fourier(c, inverse_fourier(c, w)), w, tol));

  ComplexMatrix xy = convolve(c, x, y);
  ComplexMatrix ybar = rho_plus(c, y);
  out.push_back(scalar_identity_record("frobenius_reciprocity", trp(xy * z), trp(x * convolve(c, z, ybar)), tol));
  out.push_back(identity_record("convolution_adjoint.plus", ComplexMatrix(xy.adjoint()),
                                convolve(c, x.adjoint(), y.adjoint()), tol));
  out.push_back(identity_record("convolution_adjoint.minus", ComplexMatrix(convolve_minus(c, w, v).adjoint()),
                                convolve_minus(c, w.adjoint(), v.adjoint()), tol));
  out.push_back(identity_record("convolution_associativity", convolve(c, xy, z), convolve(c, x, convolve(c, y, z)),
                                tol));

  ComplexMatrix rx = rho_plus(c, x);
  out.push_back(identity_record("rho_plus.unital", rho_plus(c, identity(np)), identity(np), tol));
  out.push_back(identity_record("rho_plus.involutive", rho_plus(c, rx), x, tol));
  out.push_back(identity_record("rho_plus.star", rho_plus(c, x.adjoint()), ComplexMatrix(rx.adjoint()), tol));
  out.push_back(identity_record("rho_plus.antimultiplicative", rho_plus(c, x * y), ybar * rx, tol));
  out.push_back(identity_record("rho_plus.convolution_antimultiplicative", rho_plus(c, xy), convolve(c, ybar, rx),
                                tol));
  ComplexMatrix rw = rho_minus(c, w);
  out.push_back(identity_record("rho_minus.unital", rho_minus(c, identity(nm)), identity(nm), tol));
  out.push_back(identity_record("rho_minus.involutive", rho_minus(c, rw), w, tol));
  out.push_back(identity_record("rho_minus.star", rho_minus(c, w.adjoint()), ComplexMatrix(rw.adjoint()), tol));
  out.push_back(identity_record("rho_minus.antimultiplicative", rho_minus(c, w * v), rho_minus(c, v) * rw, tol));
  out.push_back(identity_record("rotation_intertwining", rho_minus(c, fx), fourier(c, rx), tol));

  out.push_back(psd_record("schur_positivity", ComplexMatrix::Zero(np, np), convolve(c, in.a, in.b), tol));

  double xinf = operator_norm(x);
  out.push_back(make_record("rho_plus.opnorm", std::abs(operator_norm(rx) - xinf) / std::max(1.0, xinf), 0.0, tol));
  double trace_dev = std::abs(trp(rx) - trp(x)) / std::max(1.0, std::abs(trp(x)));
  double p1 = schatten_norm(x, 1.0, trp), p2 = schatten_norm(x, 2.0, trp);
  double n1_dev = std::abs(schatten_norm(rx, 1.0, trp) - p1) / std::max(1.0, p1);
  double n2_dev = std::abs(schatten_norm(rx, 2.0, trp) - p2) / std::max(1.0, p2);
  if (c.irreducible_like) {
    out.push_back(make_record("rho_plus.trace", trace_dev, 0.0, tol));
    out.push_back(make_record("rho_plus.norm[p=1]", n1_dev, 0.0, tol));
    out.push_back(make_record("rho_plus.norm[p=2]", n2_dev, 0.0, tol));
  } else {
    detail::observe(log, "rho_plus.trace", trace_dev);
    detail::observe(log, "rho_plus.norm[p=1]", n1_dev);
    detail::observe(log, "rho_plus.norm[p=2]", n2_dev);
  }

  double mt_l = schatten_norm(x, 1.0, trp), mt_f = operator_norm(fx);
  out.push_back(make_record("operator_norm_bound.lower", mt_l, mt_f, tol));
  out.push_back(make_record("operator_norm_bound.upper", mt_f, c.delta / c.kappa * mt_l, tol));

  if (!c.tower) return out;
  const JonesTower& t = *c.tower;
  double d = c.delta;
  double kp = c.kappa_plus, km = c.kappa_minus;

  // Identities that need e2 and E2.
  ComplexMatrix x2 = t.a1_to_a2(x);
  ComplexMatrix xe2x = t.e2_op.right(x2) * x2.adjoint();
  out.push_back(identity_record("fourier_square.relcomm", fx * fx.adjoint(), c.delta2() * relcomm_expectation(t, 2, xe2x), tol));
  out.push_back(identity_record("fourier_square.e1", t.e1_in_a2.right(fx) * fx.adjoint(), xe2x, tol));
  ComplexMatrix y2 = t.a1_to_a2(y);
  out.push_back(identity_record("fourier_conjugation", t.E2(fx * y2 * fx.adjoint()),
                                convolve(c, y, ComplexMatrix(x * x.adjoint())) / d, tol));
  ComplexMatrix fw = inverse_fourier(c, w);
  out.push_back(identity_record("inverse_fourier_square", fw * fw.adjoint(),
                                c.delta2() * t.E2(t.e1_in_a2.right(w) * w.adjoint()), tol));

  // Norm comparison for a partial isometry nu in B' cap A1.
  const auto& nu = in.nu;
  double nu1 = schatten_norm(nu, 1.0, trp);
  ComplexMatrix e1nn = t.E1(nu.adjoint() * nu);
  out.push_back(psd_record("norm_comparison.i", e1nn, nu1 / kp * identity(e1nn.rows()), tol));
  ComplexMatrix rnn = relcomm_expectation(t, 1, ComplexMatrix(nu * nu.adjoint()));
  out.push_back(psd_record("norm_comparison.ii", rnn, nu1 / km * identity(rnn.rows()), tol));
  ComplexMatrix nu2 = t.a1_to_a2(nu);
  out.push_back(psd_record("partial_isometry_bound", t.e2_op.right(nu2) * nu2.adjoint(),
                           nu1 / kp * nu2 * nu2.adjoint(), tol));

  // Random tower elements at each floor.
  Rng rng(derive_seed(seed, 0, "tower"));
  ComplexMatrix a0 = t.A.random_element(rng);
  ComplexMatrix a1 = t.A1.random_element(rng);
  ComplexMatrix a2 = t.A2.random_element(rng);
  auto ks = [&](const std::string& name, const ConditionalExpectationMap& e, const ComplexMatrix& q) {
    ComplexMatrix eq = e(q);
    out.push_back(psd_record(name, eq.adjoint() * eq, e(q.adjoint() * q), tol));
  };
  ks("kadison_schwarz.E0", t.E0, a0);
  ks("kadison_schwarz.E1", t.E1, a1);
  ks("kadison_schwarz.E2", t.E2, a2);

  double inv = 1.0 / t.delta2;
  auto m1 = markov_trace(t, 1, t.e1_op.right(t.a_to_a1(a0)));
  auto m0 = markov_trace(t, 0, a0);
  out.push_back(scalar_identity_record("markov.floor1", m1.value, inv * m0.value, tol));
  auto m2 = markov_trace(t, 2, t.e2_op.right(t.a1_to_a2(a1)));
  auto m1b = markov_trace(t, 1, a1);
  out.push_back(scalar_identity_record("markov.floor2", m2.value, inv * m1b.value, tol));

  ComplexMatrix x0 = t.delta2 * t.E1(t.e1_op.right(a1));
  out.push_back(identity_record("pushdown", t.e1_op.right(t.a_to_a1(x0)), t.e1_op.right(a1), tol));

  // Expectation onto A' cap A_k agrees with the trace-orthogonal projection.
  out.push_back(identity_record("relcomm.floor1", relcomm_expectation(t, 1, x), t.a_comm_a1.project(x), tol));
  ComplexMatrix s2 = t.e2_op.left(x2) * t.a1_to_a2(y);
  out.push_back(identity_record("relcomm.floor2", relcomm_expectation(t, 2, s2), t.rel_minus.project(s2), tol));
  return out;
}

// Checks that do not depend on the trial: tower residuals and, for kind=basis, the basis grid.
inline std::vector<CheckRecord> deterministic_records(const FourierContext& c, double tol) {
  std::vector<CheckRecord> out;
  if (c.tower) {
    for (const auto& r : tower_residuals(*c.tower)) out.push_back(make_record("tower." + r.name, r.value, 0.0, tol));
  }
  Index np = c.plus.ambient_dim();
  ComplexMatrix one = identity(np);
  out.push_back(make_record("hirschman_beckner.unit",
                            -std::log(c.delta / c.kappa), 0.5 * entropy(fourier(c, one), c.tr_minus()), tol));
  out.push_back(make_record("donoho_stark.unit", c.kappa * c.kappa / c.delta2(),
                            support(c, one) * support(c, fourier(c, one)), tol));
  return out;
}

namespace detail {

inline void add(SuiteReport& rep, CheckRecord r, std::uint64_t seed, Index trial, const std::string& kind,
                const std::vector<std::string>& assumptions, bool keep) {
  r.seed = seed;
  r.trial = trial;
  r.kind = kind;
  if (r.notes.empty() && !assumptions.empty()) {
    for (size_t i = 0; i < assumptions.size(); ++i) r.notes += (i ? "; " : "") + assumptions[i];
  }
  auto& agg = rep.aggregates[r.check];
  ++agg.count;
  agg.margin_sum += r.margin;
  agg.max_abs_margin = std::max(agg.max_abs_margin, std::abs(r.margin));
  if (r.margin < agg.min_margin) {
    agg.min_margin = r.margin;
    agg.worst_trial = trial;
  }
  ++rep.record_count;
  if (!r.pass) {
    ++agg.violations;
    ++rep.violations;
  }
  if (keep) rep.records.push_back(std::move(r));
}

}  // namespace detail

inline SuiteReport run_suite(const SampleSpec& spec, std::shared_ptr<const FourierContext> ctx = nullptr) {
  spec.validate();
  if (!ctx) ctx = build_context(spec.model);
  const FourierContext& c = *ctx;
  SuiteReport rep;
  rep.model = c.description;
  rep.family = c.family;
  rep.delta = c.delta;
  rep.delta2 = c.delta2();
  rep.kappa_plus = c.kappa_plus;
  rep.kappa_minus = c.kappa_minus;
  rep.kappa = c.kappa;
  rep.young_constant = c.delta / c.kappa_plus;
  rep.uncertainty_constant = c.delta / c.kappa;
  rep.dim_plus = c.plus.dim();
  rep.dim_minus = c.minus.dim();
  rep.trials = spec.trials;
  rep.master_seed = spec.master_seed;
  rep.tolerance = spec.tolerance;
  for (auto k : spec.kinds) rep.kinds.push_back(to_string(k));
  rep.assumptions = c.assumptions;
  if (!c.minimal && std::find(rep.assumptions.begin(), rep.assumptions.end(),
                              "non-minimal expectation: constants heuristic") == rep.assumptions.end())
    rep.assumptions.push_back("non-minimal expectation: constants heuristic");
  double tol = spec.tolerance;
  const auto& notes = rep.assumptions;

  for (auto& r : deterministic_records(c, tol)) detail::add(rep, std::move(r), spec.master_seed, -1, "fixed", notes, spec.keep_records);

  std::vector<double> hy_exps, young_grid;
  for (double p : spec.exponents) {
    if (p >= 2.0) hy_exps.push_back(p);
    young_grid.push_back(p);
  }
  Index kinds = static_cast<Index>(spec.kinds.size());
  for (Index trial = 0; trial < spec.trials; ++trial) {
    SampleKind kind = spec.kinds[static_cast<size_t>(trial % kinds)];
    Index basis_index = trial / kinds;
    std::string kname = to_string(kind);
    std::uint64_t sx = derive_seed(spec.master_seed, static_cast<std::uint64_t>(trial), "x");
    std::uint64_t sy = derive_seed(spec.master_seed, static_cast<std::uint64_t>(trial), "y");
    std::uint64_t ss = derive_seed(spec.master_seed, static_cast<std::uint64_t>(trial), "structural");
    ComplexMatrix x = sample_element(c, kind, sx, basis_index);
    ComplexMatrix y = sample_element(c, kind, sy, basis_index + 1);
    auto push = [&](CheckRecord r, std::uint64_t seed) {
      detail::add(rep, std::move(r), seed, trial, kname, notes, spec.keep_records);
    };

    for (double p : hy_exps)
      for (auto& r : check_hausdorff_young(c, x, p, tol)) push(std::move(r), sx);

    if (max_abs(y) > 0.0) {
      auto yd = young_data(c, x, y);
      rep.young_factor.add(yd.factor);
      for (double p : young_grid)
        for (double q : young_grid)
          if (valid_young_pair(p, q)) push(young_record(yd, p, q, tol), sx ^ sy);
      for (auto& r : young_corner_records(yd, young_grid, tol)) push(std::move(r), sx ^ sy);
    }
    if (max_abs(x) > 0.0) {
      push(check_donoho_stark(c, x, tol), sx);
      push(check_hirschman_beckner(c, x, tol), sx);
      push(check_hirschman_beckner(c, 2.0 * x, tol, "hirschman_beckner.scaled"), sx);
      double n2 = schatten_norm(x, 2.0, c.tr_plus());
      push(check_hirschman_beckner(c, x / n2, tol, "hirschman_beckner.normalized"), sx);
    }
    for (auto& r : check_structural(c, ss, kind, basis_index, tol, &rep.observations)) push(std::move(r), ss);
  }
  return rep;
}

}  // namespace ncf
