#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ncf/fourier.hpp"
#include "ncf/model.hpp"
#include "ncf/rng.hpp"
#include "ncf/tower.hpp"

namespace ncf {

struct OracleItem {
  std::string object;
  double deviation = 0.0;
  double threshold = 1e-8;
  bool pass = true;
};

struct OracleReport {
  std::string model;
  std::vector<OracleItem> items;
  std::map<std::string, double> values;  // descriptive quantities (scales, ratios)

  void add(std::string object, double deviation, double threshold) {
    items.push_back({std::move(object), deviation, threshold, std::isfinite(deviation) && deviation < threshold});
  }
  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const OracleItem& i) { return i.pass; });
  }
  double deviation(const std::string& object) const {
    for (const auto& i : items)
      if (i.object == object) return i.deviation;
    throw InvalidArgument("no oracle item " + object);
  }
  void merge(const OracleReport& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
    values.insert(other.values.begin(), other.values.end());
  }
};

namespace detail {

// E_kl (x) E_pq (x) 1_rest in M_{mu^2 * rest}
inline ComplexMatrix pair_unit(Index mu, Index k, Index l, Index p, Index q, Index rest) {
  return kron(kron(matrix_unit(mu, k, l), matrix_unit(mu, p, q)), identity(rest));
}

}  // namespace detail

// Definitional F, F^-1, rho_+ and rho_- against the displayed basis maps of the matrix model.
inline OracleReport matrix_closed_form_oracle(Index mu, Index m = 1, double threshold = 1e-12) {
  auto t = build_matrix_pair(m, mu);
  auto c = make_fourier_context(t);
  OracleReport rep;
  rep.model = c->description;
  double df = 0, di = 0, dp = 0, dm = 0;
  Index rp = m, rm = mu * m;
  for (Index i = 0; i < mu; ++i)
    for (Index j = 0; j < mu; ++j)
      for (Index k = 0; k < mu; ++k)
        for (Index l = 0; l < mu; ++l) {
          ComplexMatrix x = detail::pair_unit(mu, i, j, k, l, rp);
          ComplexMatrix w = detail::pair_unit(mu, i, j, k, l, rm);
          df = std::max(df, max_abs(fourier_definitional(*t, x) - detail::pair_unit(mu, j, l, i, k, rm)));
          di = std::max(di, max_abs(inverse_fourier_definitional(*t, w) - detail::pair_unit(mu, k, i, l, j, rp)));
          dp = std::max(dp, max_abs(rho_plus(*c, x) - detail::pair_unit(mu, l, k, j, i, rp)));
          dm = std::max(dm, max_abs(rho_minus(*c, w) - detail::pair_unit(mu, l, k, j, i, rm)));
        }
  rep.add("F basis map", df, threshold);
  rep.add("F^-1 basis map", di, threshold);
  rep.add("rho_+ basis map", dp, threshold);
  rep.add("rho_- basis map", dm, threshold);
  rep.add("delta^2", std::abs(t->delta2 - static_cast<double>(mu * mu)), threshold);
  rep.add("kappa_+", std::abs(c->kappa_plus - 1.0 / static_cast<double>(mu)), 1e-10);
  rep.add("kappa_-", std::abs(c->kappa_minus - 1.0 / static_cast<double>(mu)), 1e-10);
  return rep;
}

// (A (x) B) * (C (x) D) against n alpha (C (x) B), alpha read off (1/n)J(A.D)(1/n)J = alpha (1/n)J.
inline OracleReport convolution_closed_form_oracle(Index n, Index trials, std::uint64_t seed,
                                                   double threshold = 1e-9) {
  auto c = make_fourier_context(build_matrix_pair(1, n));
  OracleReport rep;
  rep.model = c->description;
  ComplexMatrix jn = ComplexMatrix::Constant(n, n, 1.0 / static_cast<double>(n));
  double worst = 0.0, ratio = 0.0;
  for (Index i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), "convolution"));
    auto draw = [&] {
      ComplexMatrix x(n, n);
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) x(a, b) = rng.complex_normal();
      return x;
    };
    ComplexMatrix a = draw(), b = draw(), cc = draw(), d = draw();
    ComplexMatrix m = jn * a.cwiseProduct(d) * jn;
    cd alpha = (jn.array().conjugate() * m.array()).sum() / jn.squaredNorm();
    ComplexMatrix expected = static_cast<double>(n) * alpha * kron(cc, b);
    ComplexMatrix got = convolve(*c, kron(a, b), kron(cc, d));
    worst = std::max(worst, max_abs(got - expected) / std::max(1e-300, max_abs(expected)));
    cd literal = a.cwiseProduct(d).sum() / static_cast<double>(n * n);
    ratio = std::abs(alpha / literal);
  }
  rep.add("convolution closed form", worst, threshold);
  rep.values["alpha/alpha_literal"] = ratio;
  return rep;
}

inline ComplexMatrix reversal_permutation(Index k) {
  ComplexMatrix p = ComplexMatrix::Zero(k, k);
  for (Index r = 0; r < k; ++r) p((k - r) % k, r) = 1.0;
  return p;
}

// Phi o F against the DFT, rho_+ and Phi rho_- Phi^-1 against the reversal, and the fitted
// scales of both convolutions against the displayed products.
inline OracleReport cyclic_oracle(Index k, std::uint64_t seed = 7, double threshold = 1e-12) {
  auto c = build_cyclic(k);
  OracleReport rep;
  rep.model = c->description;
  ComplexMatrix phi = dft_matrix(k);
  // Orthonormal coordinates: the diagonal basis has Gram (1/k) I, the circulant basis I.
  ComplexMatrix gp = c->plus.gram(), gm = c->minus.gram();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ep(gp), em(gm);
  ComplexMatrix f_on = em.operatorSqrt() * c->forward * ep.operatorInverseSqrt();
  rep.add("Phi o F (orthonormal)", max_abs(phi * f_on - phi), threshold);
  rep.values["Phi o F raw scale"] = std::abs((phi * c->forward)(0, 0) / phi(0, 0));

  ComplexMatrix rp(k, k), rm(k, k);
  for (Index j = 0; j < k; ++j) {
    rp.col(j) = c->plus.coordinates(rho_plus(*c, c->plus.basis_element(j)));
    rm.col(j) = c->minus.coordinates(rho_minus(*c, c->minus.basis_element(j)));
  }
  ComplexMatrix perm = reversal_permutation(k);
  rep.add("rho_+ permutation", max_abs(rp - perm), threshold);
  rep.add("Phi rho_- Phi^-1 permutation", max_abs(phi * rm * phi.adjoint() - perm), threshold);
  rep.add("Phi unitary", max_abs(phi.adjoint() * phi - identity(k)), threshold);

  Rng rng(seed);
  ComplexVector al(k), be(k);
  for (Index i = 0; i < k; ++i) {
    al(i) = rng.complex_normal();
    be(i) = rng.complex_normal();
  }
  auto fit = [](const ComplexVector& got, const ComplexVector& model, double& scale, double& resid) {
    cd s = model.dot(got) / model.squaredNorm();
    scale = std::abs(s);
    resid = (got - s * model).norm() / std::max(1e-300, got.norm());
  };
  double s1, r1, s2, r2;
  ComplexVector conv = c->plus.coordinates(convolve(*c, c->plus.element(al), c->plus.element(be)));
  fit(conv, cyclic_new_mult(al, be), s1, r1);
  ComplexVector convm = c->minus.coordinates(convolve_minus(*c, c->minus.element(al), c->minus.element(be)));
  fit(convm, ComplexVector(al.cwiseProduct(be)), s2, r2);
  rep.add("diagonal convolution residual", r1, 1e-10);
  rep.add("circulant convolution residual", r2, 1e-10);
  rep.values["diagonal convolution scale"] = s1;
  rep.values["circulant convolution scale"] = s2;
  return rep;
}

// Generic engine on C in M_n against the closed matrix model. The two A1 realisations differ
// by the tensor flip Psi; A' cap A2 is matched through the matrix units
// W(k,l,p,q) = n lambda(Psi(E_pk (x) 1)) e2 lambda(Psi(E_lq (x) 1)).
inline OracleReport generic_closed_oracle(Index n, std::shared_ptr<const JonesTower> generic = nullptr,
                                          double threshold = 1e-8) {
  auto closed = build_matrix_pair(1, n);
  auto cc = make_fourier_context(closed);
  if (!generic) generic = build_generic(MatrixAlgebra::scalars(n), MatrixAlgebra::full(n));
  const JonesTower& g = *generic;
  OracleReport rep;
  rep.model = "generic(C in M_" + std::to_string(n) + ") vs matrix-pair(1, " + std::to_string(n) + ")";
  Index n2 = n * n;
  ComplexMatrix flip = ComplexMatrix::Zero(n2, n2);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) flip(j * n + i, i * n + j) = 1.0;
  auto psi = [&](const ComplexMatrix& x) -> ComplexMatrix { return flip * x * flip; };

  if (g.A1.ambient_dim() != n2) throw InternalConsistencyError("generic A1 has an unexpected size");
  rep.add("e1", max_abs(g.e1 - psi(closed->e1)), threshold);
  rep.add("delta^2", std::abs(g.delta2 - static_cast<double>(n2)), threshold);
  auto gc = make_fourier_context(generic);
  rep.add("kappa_+", std::abs(gc->kappa_plus - cc->kappa_plus), threshold);
  rep.add("kappa_-", std::abs(gc->kappa_minus - cc->kappa_minus), threshold);
  rep.add("dim B' cap A1", std::abs(static_cast<double>(g.rel_plus.dim() - closed->rel_plus.dim())), 0.5);
  rep.add("dim A' cap A2", std::abs(static_cast<double>(g.rel_minus.dim() - closed->rel_minus.dim())), 0.5);

  std::vector<ComplexMatrix> lam(static_cast<size_t>(n2));  // lambda(Psi(E_ab (x) 1)) at a*n+b
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      lam[static_cast<size_t>(a * n + b)] = g.a1_to_a2(psi(kron(matrix_unit(n, a, b), identity(n))));
  auto w_unit = [&](Index k, Index l, Index p, Index q) -> ComplexMatrix {
    return static_cast<double>(n) * lam[static_cast<size_t>(p * n + k)] * g.e2_op.left(lam[static_cast<size_t>(l * n + q)]);
  };
  std::vector<ComplexMatrix> w;
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l)
      for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q) w.push_back(w_unit(k, l, p, q));

  double in_minus = 0.0;
  for (const auto& x : w) in_minus = std::max(in_minus, g.rel_minus.span_residual(x));
  rep.add("W in A' cap A2", in_minus, threshold);
  ComplexMatrix unit = ComplexMatrix::Zero(w[0].rows(), w[0].cols());
  for (Index k = 0; k < n; ++k)
    for (Index p = 0; p < n; ++p) unit += w[static_cast<size_t>(((k * n + k) * n + p) * n + p)];
  rep.add("sum of diagonal W", max_abs(unit - identity(unit.rows())), threshold);
  double units = 0.0;
  Index total = static_cast<Index>(w.size());
  Index stride = std::max<Index>(1, total * total / 256);
  for (Index s = 0; s < total * total; s += stride) {
    Index i = s / total, j = s % total;
    Index l = (i / (n * n)) % n, q = i % n, k2 = j / (n * n * n), p2 = (j / n) % n;
    ComplexMatrix want = ComplexMatrix::Zero(unit.rows(), unit.cols());
    if (l == k2 && q == p2) {
      Index k = i / (n * n * n), p = (i / n) % n, l2 = (j / (n * n)) % n, q2 = j % n;
      want = w[static_cast<size_t>(((k * n + l2) * n + p) * n + q2)];
    }
    units = std::max(units, max_abs(w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] - want));
  }
  rep.add("W matrix units", units, threshold);

  auto wbasis = MatrixAlgebra::from_basis(w, "W");
  Index d = closed->rel_plus.dim();
  ComplexMatrix fg(d, d), bg(d, d);
  double tr1 = 0.0, tr2 = 0.0;
  for (Index j = 0; j < d; ++j) {
    ComplexMatrix x = psi(closed->rel_plus.basis_element(j));
    fg.col(j) = wbasis.checked_coordinates(fourier_definitional(g, x), threshold);
    bg.col(j) = closed->rel_plus.checked_coordinates(psi(inverse_fourier_definitional(g, w[static_cast<size_t>(j)])),
                                                     threshold);
    tr1 = std::max(tr1, std::abs(markov_trace(g, 1, x).value - markov_trace(*closed, 1, closed->rel_plus.basis_element(j)).value));
    tr2 = std::max(tr2, std::abs(markov_trace(g, 2, w[static_cast<size_t>(j)]).value -
                                 markov_trace(*closed, 2, closed->rel_minus.basis_element(j)).value));
  }
  rep.add("F coordinate matrix", max_abs(fg - cc->forward), threshold);
  rep.add("F^-1 coordinate matrix", max_abs(bg - cc->backward), threshold);
  rep.add("Markov tr1 on B' cap A1", tr1, threshold);
  rep.add("Markov tr2 on A' cap A2", tr2, threshold);
  rep.add("quasi-basis E0", quasi_basis_residual(g.E0, g.E0.quasi_basis), threshold);
  rep.add("quasi-basis E1", quasi_basis_residual(g.E1, g.E1.quasi_basis), threshold);
  return rep;
}

// Whatever comparison the model admits.
inline OracleReport oracle_for_model(const InclusionModel& model, std::uint64_t seed = 20240601) {
  if (model.family == "matrix-pair") {
    auto rep = matrix_closed_form_oracle(model.mu, model.m);
    if (model.m == 1) rep.merge(convolution_closed_form_oracle(model.mu, 50, seed));
    return rep;
  }
  if (model.family == "cyclic") return cyclic_oracle(model.k, seed);
  if (model.n > 0) return generic_closed_oracle(model.n);
  throw InvalidArgument("oracle needs a model with a closed form (matrix-pair, cyclic, generic:<n>)");
}

}  // namespace ncf
