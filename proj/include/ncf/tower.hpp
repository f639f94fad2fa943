#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncf/matrix_core.hpp"
#include "ncf/star_algebra.hpp"

namespace ncf {

// Unital *-homomorphism between ambient matrix algebras.
class Embedding {
 public:
  Embedding() = default;
  Embedding(Index from, Index to, LinearMap map) : from_(from), to_(to), map_(std::move(map)) {}

  static Embedding identity(Index n) {
    return {n, n, [](const ComplexMatrix& x) { return x; }};
  }

  // x -> I_mult (x) x
  static Embedding left_identity(Index mult, Index n) {
    return {n, mult * n, [mult](const ComplexMatrix& x) { return kron(ncf::identity(mult), x); }};
  }

  // Linear extension of basis_i -> images_i for the given domain algebra.
  static Embedding linear(const MatrixAlgebra& domain, const std::vector<ComplexMatrix>& images) {
    if (images.empty() || static_cast<Index>(images.size()) != domain.dim())
      throw InvalidArgument("embedding: one image per basis element required");
    Index to = images.front().rows();
    auto stacked = std::make_shared<ComplexMatrix>(to * to, domain.dim());
    for (size_t j = 0; j < images.size(); ++j)
      stacked->col(static_cast<Index>(j)) = Eigen::Map<const ComplexVector>(images[j].data(), to * to);
    return {domain.ambient_dim(), to, [domain, stacked, to](const ComplexMatrix& x) {
              ComplexVector v = (*stacked) * domain.coordinates(x);
              return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), to, to));
            }};
  }

  Index from_dim() const { return from_; }
  Index to_dim() const { return to_; }
  ComplexMatrix operator()(const ComplexMatrix& x) const {
    if (x.rows() != from_ || x.cols() != from_) throw InvalidArgument("embedding: size mismatch");
    return map_(x);
  }

  Embedding then(const Embedding& next) const {
    auto first = *this;
    return {from_, next.to_, [first, next](const ComplexMatrix& x) { return next(first(x)); }};
  }

 private:
  Index from_ = 0;
  Index to_ = 0;
  LinearMap map_;
};

// E : domain -> codomain. The action maps the domain ambient to the codomain ambient;
// embed carries results back into the domain ambient.
struct ConditionalExpectationMap {
  MatrixAlgebra domain;
  MatrixAlgebra codomain;
  LinearMap action;
  Embedding embed;
  std::vector<ComplexMatrix> quasi_basis;
  ComplexMatrix index;
  std::string label;

  ComplexMatrix operator()(const ComplexMatrix& x) const { return action(x); }

  // Deviation of the index from tr(index) * 1.
  double index_nonscalar() const {
    cd t = index.trace() / static_cast<double>(index.rows());
    return max_abs(index - t * ncf::identity(index.rows())) / std::max(1.0, std::abs(t));
  }
  bool index_is_scalar(double tol = 1e-9) const { return index_nonscalar() <= tol; }
  double index_value() const { return (index.trace() / static_cast<double>(index.rows())).real(); }
};

inline ComplexMatrix watatani_index(const std::vector<ComplexMatrix>& qb) {
  if (qb.empty()) throw InvalidArgument("empty quasi-basis");
  ComplexMatrix out = ComplexMatrix::Zero(qb.front().rows(), qb.front().cols());
  for (const auto& l : qb) out += l * l.adjoint();
  return out;
}

// max over domain basis of both quasi-basis expansions, relative to max(1, |x|).
// With max_elements > 0 only an evenly strided subset of the basis is visited.
inline double quasi_basis_residual(const ConditionalExpectationMap& e, const std::vector<ComplexMatrix>& qb,
                                   Index max_elements = 0) {
  double worst = 0.0;
  Index d = e.domain.dim();
  Index step = max_elements > 0 ? std::max<Index>(1, d / max_elements) : 1;
  for (Index j = 0; j < d; j += step) {
    ComplexMatrix x = e.domain.basis_element(j);
    ComplexMatrix left = ComplexMatrix::Zero(x.rows(), x.cols());
    ComplexMatrix right = left;
    for (const auto& l : qb) {
      left += l * e.embed(e.action(l.adjoint() * x));
      right += e.embed(e.action(x * l)) * l.adjoint();
    }
    double scale = std::max(1.0, max_abs(x));
    worst = std::max({worst, max_abs(left - x) / scale, max_abs(right - x) / scale});
  }
  return worst;
}

// Gram-Schmidt over the codomain with respect to <x, y> = E(x^* y).
inline std::vector<ComplexMatrix> gram_schmidt_quasi_basis(const ConditionalExpectationMap& e,
                                                           const std::vector<ComplexMatrix>& start) {
  std::vector<ComplexMatrix> lam;
  for (const auto& m : start) {
    ComplexMatrix v = m;
    for (int pass = 0; pass < 2; ++pass) {
      ComplexMatrix corr = ComplexMatrix::Zero(v.rows(), v.cols());
      for (const auto& l : lam) corr += l * e.embed(e.action(l.adjoint() * v));
      v -= corr;
    }
    ComplexMatrix g = hermitian_part(e.action(v.adjoint() * v));
    auto spec = eigh(g);
    double top = spec.values(spec.values.size() - 1);
    if (top < 1e-10 * std::max(1.0, max_abs(m) * max_abs(m))) continue;
    RealVector w = spec.values.unaryExpr([top](double t) { return t > 1e-10 * top ? 1.0 / std::sqrt(t) : 0.0; });
    ComplexMatrix inv_half = spec.vectors * w.asDiagonal() * spec.vectors.adjoint();
    lam.push_back(v * e.embed(inv_half));
  }
  return lam;
}

// Quasi-basis by Gram-Schmidt over the codomain, verified on every domain basis element.
inline std::vector<ComplexMatrix> quasi_basis(const ConditionalExpectationMap& e,
                                              std::vector<ComplexMatrix> start = {}) {
  if (start.empty()) start = e.domain.basis();
  auto qb = gram_schmidt_quasi_basis(e, start);
  double r = qb.empty() ? kInf : quasi_basis_residual(e, qb);
  if (!(r <= 1e-8)) throw BuildError("E not of index-finite type at working precision");
  return qb;
}

// Fills quasi_basis (if empty) and index.
inline ConditionalExpectationMap finalize_expectation(ConditionalExpectationMap e) {
  if (e.quasi_basis.empty()) e.quasi_basis = quasi_basis(e);
  e.index = watatani_index(e.quasi_basis);
  return e;
}

struct JonesTower {
  std::string family;
  Index m = 0;
  Index mu = 0;
  MatrixAlgebra B, A, A1, A2;
  Embedding a_to_a1, a1_to_a2, a_to_a2;
  ComplexMatrix e1;  // in A1
  ComplexMatrix e2;  // in A2
  ConditionalExpectationMap E0, E1, E2;
  double delta2 = 0.0;
  bool index_scalar = true;
  bool minimal = true;
  MatrixAlgebra rel_plus;   // B' cap A1
  MatrixAlgebra rel_minus;  // A' cap A2
  MatrixAlgebra b_comm_a;   // B' cap A
  MatrixAlgebra a_comm_a1;  // A' cap A1
  std::vector<MatrixOperand> qb_in_a1, qb_in_a2;
  MatrixOperand e1_op, e1_in_a2, e2_op;
  std::vector<std::string> notes;

  double delta() const { return std::sqrt(delta2); }
  TraceFunctional tr0() const { return A.trace(); }
  TraceFunctional tr1() const { return A1.trace(); }
  TraceFunctional tr2() const { return A2.trace(); }
};

namespace detail {

// Normalized partial trace over the leftmost factor of size mult.
inline ComplexMatrix partial_trace_left(const ComplexMatrix& x, Index mult) {
  Index n = x.rows() / mult;
  if (n * mult != x.rows()) throw InvalidArgument("partial trace: size mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < mult; ++i) out += x.block(i * n, i * n, n, n);
  return out / static_cast<double>(mult);
}

inline ComplexMatrix jones_pair(Index mu) {
  ComplexMatrix f = ComplexMatrix::Zero(mu * mu, mu * mu);
  for (Index i = 0; i < mu; ++i)
    for (Index j = 0; j < mu; ++j) f(i * mu + i, j * mu + j) = 1.0 / static_cast<double>(mu);
  return f;
}

inline void attach_operands(JonesTower& t) {
  t.qb_in_a1.clear();
  t.qb_in_a2.clear();
  for (const auto& u : t.E0.quasi_basis) {
    t.qb_in_a1.emplace_back(t.a_to_a1(u));
    t.qb_in_a2.emplace_back(t.a_to_a2(u));
  }
  t.e1_op = MatrixOperand(t.e1);
  t.e1_in_a2 = MatrixOperand(t.a1_to_a2(t.e1));
  t.e2_op = MatrixOperand(t.e2);
}

}  // namespace detail

// (1/delta^2) sum_i u_i x u_i^* on B' cap A_k, k in {1, 2}.
inline ComplexMatrix relcomm_expectation(const JonesTower& t, int floor, const ComplexMatrix& x) {
  if (floor != 1 && floor != 2) throw InvalidArgument("relcomm_expectation: floor must be 1 or 2");
  const auto& qb = floor == 1 ? t.qb_in_a1 : t.qb_in_a2;
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& q : qb) out += q.sandwich(x);
  return out / t.delta2;
}

inline LinearMap relcomm_expectation(const JonesTower& t, int floor) {
  if (floor != 1 && floor != 2) throw InvalidArgument("relcomm_expectation: floor must be 1 or 2");
  return [&t, floor](const ComplexMatrix& x) { return relcomm_expectation(t, floor, x); };
}

struct MarkovValue {
  cd value;
  double nonscalar;  // deviation of the composite from a scalar
};

// (E_0 o ... o E_k)(x), reported as a scalar.
inline MarkovValue markov_trace(const JonesTower& t, int k, const ComplexMatrix& x) {
  if (k < 0 || k > 2) throw InvalidArgument("markov_trace: k must be 0, 1 or 2");
  ComplexMatrix y = x;
  if (k >= 2) y = t.E2(y);
  if (k >= 1) y = t.E1(y);
  y = t.E0.embed(t.E0(y));
  cd v = y.trace() / static_cast<double>(y.rows());
  double dev = max_abs(y - v * identity(y.rows())) / std::max(1.0, std::abs(v));
  return {v, dev};
}

// x0 = delta^2 E_1(x1 e_1), with x1 e1 = x0 e1 audited.
inline ComplexMatrix pushdown(const JonesTower& t, const ComplexMatrix& x1) {
  ComplexMatrix x0 = t.delta2 * t.E1(t.e1_op.right(x1));
  ComplexMatrix lhs = t.e1_op.right(x1);
  ComplexMatrix rhs = t.e1_op.right(t.a_to_a1(x0));
  double r = max_abs(lhs - rhs) / std::max(1.0, max_abs(x1));
  if (r > 1e-8) throw InternalConsistencyError("pushdown residual " + std::to_string(r));
  return x0;
}

// B' cap A_k computed on demand (used by oracles; the tower stores only what F needs).
inline MatrixAlgebra b_commutant(const JonesTower& t, int floor) {
  if (floor == 0) return t.b_comm_a;
  if (floor == 1) return t.rel_plus;
  if (floor != 2) throw InvalidArgument("b_commutant: floor must be 0, 1 or 2");
  if (t.family == "matrix-pair") {
    Index mu = t.mu;
    std::vector<ComplexMatrix> basis;
    Index d = mu * mu * mu;
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) basis.push_back(kron(matrix_unit(d, a, b), identity(t.m)));
    return MatrixAlgebra::from_basis(basis, "B' cap A2");
  }
  std::vector<ComplexMatrix> imgs;
  for (Index i = 0; i < t.B.dim(); ++i) imgs.push_back(t.a_to_a2(t.B.basis_element(i)));
  auto b2 = MatrixAlgebra::from_spanning(imgs, t.A2.ambient_dim(), "B in A2");
  return commutant(b2, t.A2, "B' cap A2");
}

struct TowerResidual {
  std::string name;
  double value;
};

// Build-time invariants: projections, Temperley-Lieb, E_k(e_k), Markov relations, vip,
// quasi-basis expansion.
inline std::vector<TowerResidual> tower_residuals(const JonesTower& t) {
  std::vector<TowerResidual> out;
  double inv = 1.0 / t.delta2;
  ComplexMatrix e1 = t.e1_in_a2.dense();
  const ComplexMatrix& e2 = t.e2;
  auto proj = [](const ComplexMatrix& p) { return std::max(max_abs(p * p - p), max_abs(p - p.adjoint())); };
  out.push_back({"e1_projection", proj(t.e1)});
  out.push_back({"e2_projection", proj(e2)});
  out.push_back({"temperley_lieb_e2e1e2", max_abs(e2 * e1 * e2 - inv * e2)});
  out.push_back({"temperley_lieb_e1e2e1", max_abs(e1 * e2 * e1 - inv * e1)});
  out.push_back({"E1_e1", max_abs(t.E1(t.e1) - inv * identity(t.A.ambient_dim()))});
  out.push_back({"E2_e2", max_abs(t.E2(e2) - inv * identity(t.A1.ambient_dim()))});
  auto m1 = markov_trace(t, 1, t.e1);
  auto m2 = markov_trace(t, 2, e2);
  out.push_back({"markov_tr1_e1", std::abs(m1.value - inv) + m1.nonscalar});
  out.push_back({"markov_tr2_e2", std::abs(m2.value - inv) + m2.nonscalar});
  ComplexMatrix vip = ComplexMatrix::Zero(t.e1.rows(), t.e1.cols());
  for (const auto& q : t.qb_in_a1) vip += q.sandwich(t.e1);
  out.push_back({"vip", max_abs(vip - identity(t.e1.rows()))});
  out.push_back({"quasi_basis_E0", quasi_basis_residual(t.E0, t.E0.quasi_basis)});
  out.push_back({"relcomm_e1", max_abs(relcomm_expectation(t, 1, t.e1) - inv * identity(t.e1.rows()))});
  double cons = 0.0;
  for (Index i = 0; i < std::min<Index>(t.rel_plus.dim(), 16); ++i) {
    ComplexMatrix x = t.rel_plus.basis_element(i);
    cons = std::max(cons, std::abs(markov_trace(t, 2, t.a1_to_a2(x)).value - markov_trace(t, 1, x).value));
  }
  out.push_back({"markov_restriction", cons});
  return out;
}

inline void require_invariants(const JonesTower& t, double tol = 1e-9) {
  for (const auto& r : tower_residuals(t))
    if (!(r.value <= tol)) throw InternalConsistencyError("tower invariant " + r.name + " = " + std::to_string(r.value));
}

// Closed-form tower: B = 1_mu (x) M_m in A = M_mu (x) M_m, new legs prepended on the left.
inline std::shared_ptr<const JonesTower> build_matrix_pair(Index m, Index mu) {
  if (m < 1 || mu < 2) throw InvalidArgument("matrix-pair needs m >= 1 and mu >= 2");
  auto t = std::make_shared<JonesTower>();
  t->family = "matrix-pair";
  t->m = m;
  t->mu = mu;
  Index n0 = mu * m, n1 = mu * n0, n2 = mu * n1;
  double dmu = static_cast<double>(mu);

  std::vector<ComplexMatrix> bbasis;
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) bbasis.push_back(kron(identity(mu), matrix_unit(m, a, b)));
  t->B = MatrixAlgebra::from_basis(bbasis, "B");
  t->A = MatrixAlgebra::full(n0, "A");
  t->A1 = MatrixAlgebra::full(n1, "A1");
  t->A2 = MatrixAlgebra::full(n2, "A2");
  t->a_to_a1 = Embedding::left_identity(mu, n0);
  t->a1_to_a2 = Embedding::left_identity(mu, n1);
  t->a_to_a2 = t->a_to_a1.then(t->a1_to_a2);

  ComplexMatrix f = detail::jones_pair(mu);
  t->e1 = kron(f, identity(m));
  t->e2 = kron(f, identity(mu * m));
  t->delta2 = dmu * dmu;

  t->E0.domain = t->A;
  t->E0.codomain = t->B;
  t->E0.action = [mu](const ComplexMatrix& x) { return kron(identity(mu), detail::partial_trace_left(x, mu)); };
  t->E0.embed = Embedding::identity(n0);
  t->E0.label = "minimal (partial trace)";
  for (Index p = 0; p < mu; ++p)
    for (Index q = 0; q < mu; ++q) t->E0.quasi_basis.push_back(std::sqrt(dmu) * kron(matrix_unit(mu, p, q), identity(m)));
  t->E0.index = watatani_index(t->E0.quasi_basis);

  auto dual = [](const ConditionalExpectationMap& prev, const Embedding& up, const ComplexMatrix& e, double delta) {
    std::vector<ComplexMatrix> qb;
    for (const auto& u : prev.quasi_basis) qb.push_back(delta * up(u) * e);
    return qb;
  };
  t->E1.domain = t->A1;
  t->E1.codomain = t->A;
  t->E1.action = [mu](const ComplexMatrix& x) { return detail::partial_trace_left(x, mu); };
  t->E1.embed = t->a_to_a1;
  t->E1.label = "dual (partial trace)";
  t->E1.quasi_basis = dual(t->E0, t->a_to_a1, t->e1, dmu);
  t->E1.index = watatani_index(t->E1.quasi_basis);

  t->E2.domain = t->A2;
  t->E2.codomain = t->A1;
  t->E2.action = t->E1.action;
  t->E2.embed = t->a1_to_a2;
  t->E2.label = "dual (partial trace)";
  t->E2.quasi_basis = dual(t->E1, t->a1_to_a2, t->e2, dmu);
  t->E2.index = watatani_index(t->E2.quasi_basis);

  std::vector<ComplexMatrix> plus, minus, bca, aca1;
  for (Index k = 0; k < mu; ++k)
    for (Index l = 0; l < mu; ++l) {
      bca.push_back(kron(matrix_unit(mu, k, l), identity(m)));
      aca1.push_back(kron(matrix_unit(mu, k, l), identity(mu * m)));
      for (Index p = 0; p < mu; ++p)
        for (Index q = 0; q < mu; ++q) {
          ComplexMatrix u = kron(matrix_unit(mu, k, l), matrix_unit(mu, p, q));
          plus.push_back(kron(u, identity(m)));
          minus.push_back(kron(u, identity(mu * m)));
        }
    }
  t->rel_plus = MatrixAlgebra::from_basis(plus, "B' cap A1");
  t->rel_minus = MatrixAlgebra::from_basis(minus, "A' cap A2");
  t->b_comm_a = MatrixAlgebra::from_basis(bca, "B' cap A");
  t->a_comm_a1 = MatrixAlgebra::from_basis(aca1, "A' cap A1");
  detail::attach_operands(*t);
  require_invariants(*t);
  return t;
}

namespace detail {

struct BasicConstruction {
  Embedding lambda;
  ComplexMatrix e;
  MatrixAlgebra upper;
  ConditionalExpectationMap dual;
};

// Left-regular representation of E.domain on itself as a Hilbert module over E.codomain,
// with inner product tr(E(x^* y)); the upper algebra is span{lambda(u_i) e lambda(a_j)}.
inline BasicConstruction basic_construction(const ConditionalExpectationMap& e, const std::string& label) {
  const MatrixAlgebra& a = e.domain;
  Index d = a.dim();
  auto basis = a.basis();
  TraceFunctional tra = a.trace();

  ComplexMatrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) {
      g(i, j) = tra(e.embed(e.action(basis[i].adjoint() * basis[j])));
      g(j, i) = std::conj(g(i, j));
    }
  Eigen::LLT<ComplexMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw BuildError("expectation is not faithful");
  ComplexMatrix r = llt.matrixL().adjoint();
  ComplexMatrix rinv = r.inverse();

  auto left_mult = [&](const ComplexMatrix& x) {
    ComplexMatrix l(d, d);
    for (Index j = 0; j < d; ++j) l.col(j) = a.coordinates(x * basis[j]);
    return ComplexMatrix(r * l * rinv);
  };
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<size_t>(d));
  for (Index j = 0; j < d; ++j) images.push_back(left_mult(basis[j]));

  BasicConstruction out;
  out.lambda = Embedding::linear(a, images);

  ComplexMatrix pe(d, d);
  for (Index j = 0; j < d; ++j) pe.col(j) = a.coordinates(e.embed(e.action(basis[j])));
  out.e = r * pe * rinv;
  if (max_abs(out.e * out.e - out.e) > 1e-9 || max_abs(out.e - out.e.adjoint()) > 1e-9)
    throw InternalConsistencyError("Jones projection is not a projection");

  std::vector<ComplexMatrix> spanning;
  std::vector<ComplexMatrix> lu;
  for (const auto& u : e.quasi_basis) lu.push_back(out.lambda(u));
  for (const auto& x : lu) {
    ComplexMatrix xe = x * out.e;
    for (const auto& y : images) spanning.push_back(xe * y);
  }
  out.upper = MatrixAlgebra::from_spanning(spanning, d, label);

  // Dual expectation: X -> Ind^{-1} sum_i X(u_i) u_i^*, X acting on module vectors.
  ComplexMatrix ind_inv = e.index.inverse();
  std::vector<ComplexVector> uvec;
  std::vector<ComplexMatrix> uadj;
  for (const auto& u : e.quasi_basis) {
    uvec.push_back(r * a.coordinates(u));
    uadj.push_back(u.adjoint());
  }
  MatrixAlgebra dom = a;
  out.dual.domain = out.upper;
  out.dual.codomain = a;
  out.dual.embed = out.lambda;
  out.dual.label = "dual expectation";
  out.dual.action = [dom, uvec, uadj, rinv, ind_inv](const ComplexMatrix& x) {
    ComplexMatrix acc = ComplexMatrix::Zero(dom.ambient_dim(), dom.ambient_dim());
    for (size_t i = 0; i < uvec.size(); ++i) acc += dom.element(rinv * (x * uvec[i])) * uadj[i];
    return ComplexMatrix(ind_inv * acc);
  };
  if (e.index_is_scalar()) {
    double delta = std::sqrt(e.index_value());
    for (const auto& x : lu) out.dual.quasi_basis.push_back(delta * x * out.e);
    double res = quasi_basis_residual(out.dual, out.dual.quasi_basis, 64);
    if (res > 1e-8) throw InternalConsistencyError("dual quasi-basis residual " + std::to_string(res));
  } else {
    out.dual.quasi_basis = quasi_basis(out.dual);
  }
  out.dual.index = watatani_index(out.dual.quasi_basis);
  return out;
}

}  // namespace detail

inline bool is_factor(const MatrixAlgebra& alg) { return center(alg).dim() == 1; }

// Default expectation for generic input: trace-orthogonal projection of A onto B.
inline ConditionalExpectationMap trace_expectation(const MatrixAlgebra& b, const MatrixAlgebra& a) {
  ConditionalExpectationMap e;
  e.domain = a;
  e.codomain = b;
  e.action = trace_orthogonal_expectation(a, b, a.trace());
  e.embed = Embedding::identity(a.ambient_dim());
  e.label = "trace-orthogonal";
  return finalize_expectation(std::move(e));
}

// Watatani basic construction applied twice to concrete data.
namespace detail {

inline void require_inclusion(const MatrixAlgebra& b, const MatrixAlgebra& a) {
  if (b.ambient_dim() != a.ambient_dim()) throw BuildError("generic: B and A must share an ambient dimension");
  if (!a.contains(b)) throw BuildError("generic: B is not contained in A");
}

}  // namespace detail

inline std::shared_ptr<const JonesTower> build_generic(const MatrixAlgebra& b, const MatrixAlgebra& a,
                                                       ConditionalExpectationMap e0, const TraceFunctional& tr) {
  detail::require_inclusion(b, a);
  if (tr.dim() != a.ambient_dim()) throw BuildError("generic: trace size does not match A");
  e0.domain = a;
  e0.codomain = b;
  if (e0.embed.to_dim() == 0) e0.embed = Embedding::identity(a.ambient_dim());
  if (!e0.action) throw BuildError("generic: expectation has no action");
  if (!e0.embed(identity(a.ambient_dim())).isApprox(identity(a.ambient_dim())))
    throw BuildError("generic: expectation embedding must be the inclusion");
  e0 = finalize_expectation(std::move(e0));

  auto t = std::make_shared<JonesTower>();
  t->family = "generic";
  t->B = b;
  t->A = a;
  t->E0 = e0;
  t->index_scalar = e0.index_is_scalar();
  t->delta2 = e0.index_value();
  if (!t->index_scalar) t->notes.push_back("non-scalar index: index-dependent inequality checks are not applicable");

  auto f1 = detail::basic_construction(e0, "A1");
  t->A1 = f1.upper;
  t->a_to_a1 = f1.lambda;
  t->e1 = f1.e;
  t->E1 = f1.dual;

  auto f2 = detail::basic_construction(t->E1, "A2");
  t->A2 = f2.upper;
  t->a1_to_a2 = f2.lambda;
  t->a_to_a2 = t->a_to_a1.then(t->a1_to_a2);
  t->e2 = f2.e;
  t->E2 = f2.dual;

  Index d1 = t->A1.ambient_dim(), d2 = t->A2.ambient_dim();
  std::vector<ComplexMatrix> bimg, aimg1, aimg2;
  for (Index i = 0; i < b.dim(); ++i) bimg.push_back(t->a_to_a1(b.basis_element(i)));
  for (Index i = 0; i < a.dim(); ++i) {
    ComplexMatrix x = t->a_to_a1(a.basis_element(i));
    aimg1.push_back(x);
    aimg2.push_back(t->a1_to_a2(x));
  }
  auto b_in_a1 = MatrixAlgebra::from_spanning(bimg, d1, "B");
  auto a_in_a1 = MatrixAlgebra::from_spanning(aimg1, d1, "A");
  auto a_in_a2 = MatrixAlgebra::from_spanning(aimg2, d2, "A");
  t->b_comm_a = commutant(b, a, "B' cap A");
  t->rel_plus = commutant(b_in_a1, t->A1, "B' cap A1");
  t->a_comm_a1 = commutant(a_in_a1, t->A1, "A' cap A1");
  t->rel_minus = commutant(a_in_a2, t->A2, "A' cap A2");

  bool factors = is_factor(a) && is_factor(b);
  t->minimal = factors && e0.label == "trace-orthogonal";
  if (!t->minimal) t->notes.push_back("non-minimal expectation: constants heuristic");

  detail::attach_operands(*t);
  if (t->index_scalar) require_invariants(*t);
  return t;
}

inline std::shared_ptr<const JonesTower> build_generic(const MatrixAlgebra& b, const MatrixAlgebra& a) {
  detail::require_inclusion(b, a);
  return build_generic(b, a, trace_expectation(b, a), a.trace());
}

}  // namespace ncf
