#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ncf/matrix_core.hpp"
#include "ncf/rng.hpp"

namespace ncf {

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

// Unital *-subalgebra of M_N described by a basis. Coordinates are taken with respect
// to the normalized trace inner product tr(a^* b). Copies share the basis data.
class MatrixAlgebra {
 public:
  MatrixAlgebra() = default;

  static MatrixAlgebra full(Index n, std::string label = "M_N") {
    if (n < 1) throw InvalidArgument("full algebra needs a positive dimension");
    auto p = std::make_shared<Impl>();
    p->n = n;
    p->dim = n * n;
    p->label = std::move(label);
    p->full = true;
    p->orthonormal = true;
    return MatrixAlgebra(std::move(p));
  }

  static MatrixAlgebra scalars(Index n, std::string label = "C") { return from_basis({identity(n)}, std::move(label)); }

  // Keeps the given (linearly independent) basis and its order.
  static MatrixAlgebra from_basis(const std::vector<ComplexMatrix>& basis, std::string label) {
    if (basis.empty()) throw InvalidArgument("zero-dimensional algebra");
    Index n = basis.front().rows();
    auto p = std::make_shared<Impl>();
    p->n = n;
    p->dim = static_cast<Index>(basis.size());
    p->label = std::move(label);
    p->vectors = stack(basis, n);
    ComplexMatrix g = p->vectors.adjoint() * p->vectors / static_cast<double>(n);
    RealVector ev = eigh(g).values;
    if (ev(0) <= 1e-12 * ev(ev.size() - 1)) throw InvalidArgument("basis is not linearly independent: " + p->label);
    p->orthonormal = max_abs(g - ComplexMatrix::Identity(p->dim, p->dim)) < 1e-13;
    p->gram = g;
    if (!p->orthonormal) p->gram_inv = g.inverse();
    MatrixAlgebra out(std::move(p));
    out.require_unit();
    return out;
  }

  // Trace-orthonormal basis of span(spanning); directions with relative Gram eigenvalue
  // below rel_cutoff are discarded. Returns the full-algebra form when the span is all of M_N.
  static MatrixAlgebra from_spanning(const std::vector<ComplexMatrix>& spanning, Index n, std::string label,
                                     double rel_cutoff = 1e-9) {
    if (spanning.empty()) throw InvalidArgument("zero-dimensional algebra");
    return from_vectors(stack(spanning, n), n, std::move(label), rel_cutoff);
  }

  // Columns are column-major vectorizations of N x N matrices.
  static MatrixAlgebra from_vectors(const ComplexMatrix& s, Index n, std::string label, double rel_cutoff = 1e-9) {
    if (s.cols() == 0) throw InvalidArgument("zero-dimensional algebra");
    ComplexMatrix k = s.adjoint() * s / static_cast<double>(n);
    auto spec = eigh(k);
    double top = spec.values(spec.values.size() - 1);
    if (top <= 0.0) throw InvalidArgument("zero-dimensional algebra: " + label);
    std::vector<Index> keep;
    for (Index i = spec.values.size() - 1; i >= 0; --i)
      if (spec.values(i) > rel_cutoff * top) keep.push_back(i);
    Index d = static_cast<Index>(keep.size());
    if (d == n * n) return full(n, std::move(label));
    ComplexMatrix coeff(s.cols(), d);
    for (Index j = 0; j < d; ++j) coeff.col(j) = spec.vectors.col(keep[j]) / std::sqrt(spec.values(keep[j]));
    auto p = std::make_shared<Impl>();
    p->n = n;
    p->dim = d;
    p->label = std::move(label);
    p->vectors = s * coeff;
    p->orthonormal = true;
    MatrixAlgebra out(std::move(p));
    out.require_unit();
    return out;
  }

  bool valid() const { return static_cast<bool>(p_); }
  Index ambient_dim() const { return p_->n; }
  Index dim() const { return p_->dim; }
  const std::string& label() const { return p_->label; }
  bool is_full() const { return p_->full; }
  bool is_orthonormal() const { return p_->orthonormal; }
  ComplexMatrix unit() const { return identity(p_->n); }
  TraceFunctional trace() const { return TraceFunctional(p_->n); }

  MatrixAlgebra relabeled(std::string label) const {
    auto p = std::make_shared<Impl>(*p_);
    p->label = std::move(label);
    return MatrixAlgebra(std::move(p));
  }

  ComplexMatrix basis_element(Index i) const {
    Index n = p_->n;
    if (p_->full) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i / n, i % n) = std::sqrt(static_cast<double>(n));
      return e;
    }
    return Eigen::Map<const ComplexMatrix>(p_->vectors.col(i).data(), n, n);
  }

  std::vector<ComplexMatrix> basis() const {
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<size_t>(p_->dim));
    for (Index i = 0; i < p_->dim; ++i) out.push_back(basis_element(i));
    return out;
  }

  // Gram matrix tr(b_i^* b_j).
  ComplexMatrix gram() const {
    if (p_->orthonormal) return ComplexMatrix::Identity(p_->dim, p_->dim);
    return p_->gram;
  }

  ComplexVector coordinates(const ComplexMatrix& x) const {
    Index n = p_->n;
    if (x.rows() != n || x.cols() != n) throw InvalidArgument("coordinates: size mismatch for " + p_->label);
    if (p_->full) {
      ComplexVector c(n * n);
      double s = 1.0 / std::sqrt(static_cast<double>(n));
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) c(a * n + b) = x(a, b) * s;
      return c;
    }
    Eigen::Map<const ComplexVector> v(x.data(), n * n);
    ComplexVector c = p_->vectors.adjoint() * v / static_cast<double>(n);
    if (!p_->orthonormal) c = p_->gram_inv * c;
    return c;
  }

  ComplexMatrix element(const ComplexVector& c) const {
    Index n = p_->n;
    if (c.size() != p_->dim) throw InvalidArgument("element: coordinate length mismatch for " + p_->label);
    if (p_->full) {
      ComplexMatrix x(n, n);
      double s = std::sqrt(static_cast<double>(n));
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) x(a, b) = c(a * n + b) * s;
      return x;
    }
    ComplexVector v = p_->vectors * c;
    return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
  }

  // Column j of coords becomes one element.
  std::vector<ComplexMatrix> elements(const ComplexMatrix& coords) const {
    std::vector<ComplexMatrix> out;
    Index n = p_->n;
    if (p_->full) {
      for (Index j = 0; j < coords.cols(); ++j) out.push_back(element(coords.col(j)));
      return out;
    }
    ComplexMatrix v = p_->vectors * coords;
    for (Index j = 0; j < coords.cols(); ++j) out.push_back(Eigen::Map<const ComplexMatrix>(v.col(j).data(), n, n));
    return out;
  }

  ComplexMatrix project(const ComplexMatrix& x) const { return element(coordinates(x)); }

  // max|x - P x| / max(1, max|x|)
  double span_residual(const ComplexMatrix& x) const {
    if (p_->full) return 0.0;
    return max_abs(x - project(x)) / std::max(1.0, max_abs(x));
  }

  bool contains(const ComplexMatrix& x, double tol = 1e-9) const { return span_residual(x) <= tol; }

  bool contains(const MatrixAlgebra& sub, double tol = 1e-9) const {
    if (sub.ambient_dim() != ambient_dim()) return false;
    if (p_->full) return true;
    for (Index i = 0; i < sub.dim(); ++i)
      if (span_residual(sub.basis_element(i)) > tol) return false;
    return true;
  }

  ComplexVector checked_coordinates(const ComplexMatrix& x, double tol = 1e-10) const {
    ComplexVector c = coordinates(x);
    if (!p_->full) {
      double r = max_abs(x - element(c)) / std::max(1.0, max_abs(x));
      if (r > tol) throw SpanResidualError("element outside " + p_->label, r);
    }
    return c;
  }

  ComplexMatrix random_element(Rng& rng) const {
    ComplexVector c(p_->dim);
    for (Index i = 0; i < p_->dim; ++i) c(i) = rng.complex_normal();
    return element(c);
  }

  ComplexMatrix random_hermitian(Rng& rng) const { return hermitian_part(random_element(rng)); }

  // Largest span residual of adjoints of all basis elements and of products of sampled pairs.
  double closure_residual(Index max_pairs = 64) const {
    if (p_->full) return 0.0;
    double worst = 0.0;
    auto b = basis();
    for (const auto& x : b) worst = std::max(worst, span_residual(x.adjoint()));
    Index d = dim();
    Index step = std::max<Index>(1, (d * d) / std::max<Index>(1, max_pairs));
    for (Index k = 0; k < d * d; k += step) worst = std::max(worst, span_residual(b[k / d] * b[k % d]));
    return worst;
  }

 private:
  struct Impl {
    Index n = 0;
    Index dim = 0;
    std::string label;
    bool full = false;
    bool orthonormal = false;
    ComplexMatrix vectors;
    ComplexMatrix gram;
    ComplexMatrix gram_inv;
  };

  explicit MatrixAlgebra(std::shared_ptr<Impl> p) : p_(std::move(p)) {}

  static ComplexMatrix stack(const std::vector<ComplexMatrix>& mats, Index n) {
    ComplexMatrix s(n * n, static_cast<Index>(mats.size()));
    for (size_t j = 0; j < mats.size(); ++j) {
      if (mats[j].rows() != n || mats[j].cols() != n) throw InvalidArgument("inconsistent ambient dimensions");
      s.col(static_cast<Index>(j)) = Eigen::Map<const ComplexVector>(mats[j].data(), n * n);
    }
    return s;
  }

  void require_unit() const {
    if (span_residual(unit()) > 1e-9) throw BuildError("algebra is not unital: " + p_->label);
  }

  std::shared_ptr<const Impl> p_;
};

// {x in within : xb = bx for all b in sub}, trace-orthonormal basis.
inline MatrixAlgebra commutant(const MatrixAlgebra& sub, const MatrixAlgebra& within, std::string label = "") {
  if (sub.ambient_dim() != within.ambient_dim()) throw InvalidArgument("commutant: inconsistent ambient dims");
  if (label.empty()) label = sub.label() + "' cap " + within.label();
  if (sub.dim() == 1) return within.relabeled(label);
  Index n = within.ambient_dim();

  std::vector<ComplexMatrix> gens;
  if (sub.dim() <= 4) {
    gens = sub.basis();
  } else {
    Rng rng(derive_seed(0x5eed0001ULL, static_cast<std::uint64_t>(sub.dim()), "commutant"));
    gens.push_back(sub.random_hermitian(rng));
    gens.push_back(sub.random_hermitian(rng));
  }

  Index d = within.dim();
  Index nn = n * n;
  ComplexMatrix c(nn * static_cast<Index>(gens.size()), d);
  for (Index j = 0; j < d; ++j) {
    ComplexMatrix w = within.basis_element(j);
    for (size_t g = 0; g < gens.size(); ++g) {
      ComplexMatrix comm = w * gens[g] - gens[g] * w;
      c.block(static_cast<Index>(g) * nn, j, nn, 1) = Eigen::Map<const ComplexVector>(comm.data(), nn);
    }
  }
  auto spec = eigh(c.adjoint() * c);
  double top = std::max(spec.values(d - 1), 1e-300);
  Index k = 0;
  while (k < d && spec.values(k) <= 1e-10 * top) ++k;
  if (k == 0) throw InternalConsistencyError("commutant is empty; unit should always commute");
  if (k == d) return within.relabeled(label);

  auto elems = within.elements(spec.vectors.leftCols(k));
  MatrixAlgebra out = MatrixAlgebra::from_spanning(elems, n, label);
  for (Index i = 0; i < out.dim(); ++i) {
    ComplexMatrix x = out.basis_element(i);
    for (Index j = 0; j < sub.dim(); ++j) {
      ComplexMatrix b = sub.basis_element(j);
      double r = max_abs(x * b - b * x) / std::max(1.0, max_abs(x) * max_abs(b));
      if (r > 1e-8) throw InternalConsistencyError("commutant basis fails to commute with " + sub.label());
    }
  }
  return out;
}

inline MatrixAlgebra center(const MatrixAlgebra& alg) { return commutant(alg, alg, "Z(" + alg.label() + ")"); }

struct Block {
  ComplexMatrix central_projection;
  Index size;          // d_i with z_i alg = M_{d_i} (x) 1
  double min_trace;    // trace of a minimal projection under z_i
};

struct BlockDecomposition {
  std::vector<Block> blocks;
};

namespace detail {

// Groups of (ascending) eigenvalue indices separated by gaps larger than tol * spread.
inline std::vector<std::pair<Index, Index>> cluster_sorted(const RealVector& v, double tol) {
  std::vector<std::pair<Index, Index>> out;
  if (v.size() == 0) return out;
  double spread = std::max(1.0, v.cwiseAbs().maxCoeff());
  Index start = 0;
  for (Index i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v(i) - v(i - 1) > tol * spread) {
      out.emplace_back(start, i - start);
      start = i;
    }
  }
  return out;
}

}  // namespace detail

inline BlockDecomposition block_decompose(const MatrixAlgebra& alg, const TraceFunctional& tr) {
  if (alg.ambient_dim() != tr.dim()) throw InvalidArgument("block_decompose: size mismatch");
  for (Index i = 0; i < alg.dim(); ++i)
    if (alg.span_residual(alg.basis_element(i).adjoint()) > 1e-9)
      throw InvalidArgument("block_decompose: basis not closed under adjoint");
  Index n = alg.ambient_dim();
  MatrixAlgebra z = center(alg);
  Rng rng(derive_seed(0x5eed0002ULL, static_cast<std::uint64_t>(alg.dim()), "block_decompose"));

  // A random central element has one distinct eigenvalue per block; shifting by a
  // unit multiple separates blocks from the zero eigenvalue pattern.
  ComplexMatrix c = z.dim() == 1 ? identity(n) : z.random_hermitian(rng);
  auto spec = eigh(c);
  auto groups = detail::cluster_sorted(spec.values, 1e-6);

  ComplexMatrix h = alg.random_hermitian(rng);
  BlockDecomposition out;
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (auto [start, len] : groups) {
    ComplexMatrix q = spec.vectors.middleCols(start, len);
    ComplexMatrix zi = q * q.adjoint();

    // z_i A is unital with unit z_i, so its dimension is taken as the rank of the cut basis.
    ComplexMatrix cut(n * n, alg.dim());
    for (Index j = 0; j < alg.dim(); ++j) {
      ComplexMatrix zb = zi * alg.basis_element(j);
      cut.col(j) = Eigen::Map<const ComplexVector>(zb.data(), n * n);
    }
    RealVector gram = eigh(ComplexMatrix(cut.adjoint() * cut)).values;
    double top = gram(gram.size() - 1);
    Index block_dim = 0;
    for (Index j = 0; j < gram.size(); ++j) block_dim += gram(j) > 1e-9 * top ? 1 : 0;
    Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(block_dim))));
    if (d * d != block_dim) throw InternalConsistencyError("block dimension is not a square");

    ComplexMatrix hi = q.adjoint() * h * q;
    auto sub = eigh(hi);
    auto parts = detail::cluster_sorted(sub.values, 1e-6);
    if (static_cast<Index>(parts.size()) != d) throw InternalConsistencyError("block multiplicity pattern mismatch");
    Index mult = parts.front().second;
    for (auto [s, l] : parts)
      if (l != mult) throw InternalConsistencyError("block multiplicities differ");

    double t = static_cast<double>(mult) / static_cast<double>(n);
    if (std::abs(t * static_cast<double>(d) - tr.real(zi)) > 1e-9) throw InternalConsistencyError("t_i d_i != tr(z_i)");
    out.blocks.push_back({zi, d, t});
    total += zi;
  }
  if (max_abs(total - identity(n)) > 1e-8) throw InternalConsistencyError("central projections do not sum to 1");
  return out;
}

inline double min_projection_trace(const MatrixAlgebra& alg, const TraceFunctional& tr) {
  if (!alg.valid() || alg.dim() == 0) throw InvalidArgument("min_projection_trace: zero algebra");
  auto bd = block_decompose(alg, tr);
  double m = kInf;
  for (const auto& b : bd.blocks) m = std::min(m, b.min_trace);
  return m;
}

// Orthogonal projection onto span(onto) under tr(a^* b), with its expectation
// properties checked on seeded samples.
inline LinearMap trace_orthogonal_expectation(const MatrixAlgebra& from, const MatrixAlgebra& onto,
                                              const TraceFunctional& tr) {
  if (from.ambient_dim() != onto.ambient_dim() || tr.dim() != from.ambient_dim())
    throw InvalidArgument("trace_orthogonal_expectation: size mismatch");
  if (!from.contains(onto)) throw InvalidArgument("trace_orthogonal_expectation: target not contained in source");
  LinearMap e = [onto](const ComplexMatrix& x) { return onto.project(x); };

  Rng rng(derive_seed(0x5eed0003ULL, static_cast<std::uint64_t>(from.dim() * 1000 + onto.dim()), "expectation"));
  for (int s = 0; s < 3; ++s) {
    ComplexMatrix x = from.random_element(rng);
    ComplexMatrix b1 = onto.random_element(rng);
    ComplexMatrix b2 = onto.random_element(rng);
    double scale = std::max(1.0, max_abs(x) * max_abs(b1) * max_abs(b2));
    if (max_abs(e(b1 * x * b2) - b1 * e(x) * b2) > 1e-9 * scale)
      throw InternalConsistencyError("expectation is not a bimodule map");
    ComplexMatrix ex = e(x);
    ComplexMatrix lhs = ex.adjoint() * ex;
    ComplexMatrix rhs = e(x.adjoint() * x);
    if (min_eigenvalue(rhs - lhs) < -1e-9 * std::max(1.0, max_abs(rhs)))
      throw InternalConsistencyError("expectation violates Kadison-Schwarz");
  }
  return e;
}

}  // namespace ncf
