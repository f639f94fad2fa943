#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "ncf/errors.hpp"

namespace ncf {

using cd = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseComplex = Eigen::SparseMatrix<cd>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kRankCutoff = 1e-10;
inline constexpr double kClusterTol = 1e-8;
inline constexpr double kEntropyFloor = 1e-14;
inline constexpr double kNegativeClip = 1e-10;

// Normalized trace x -> (1/N) sum diag(x).
// The unnormalized trace on the k-th relative commutant relates by tr_k(x) = delta^{-(k+1)} Tr_k(x).
class TraceFunctional {
 public:
  explicit TraceFunctional(Index n) : n_(n) {
    if (n < 1) throw InvalidArgument("trace functional needs a positive dimension");
  }

  Index dim() const { return n_; }

  cd operator()(const ComplexMatrix& x) const {
    check(x);
    return x.trace() / static_cast<double>(n_);
  }

  double real(const ComplexMatrix& x) const { return (*this)(x).real(); }

  // tr(a^* b) without forming the product.
  cd inner(const ComplexMatrix& a, const ComplexMatrix& b) const {
    check(a);
    check(b);
    return a.conjugate().cwiseProduct(b).sum() / static_cast<double>(n_);
  }

 private:
  void check(const ComplexMatrix& x) const {
    if (x.rows() != n_ || x.cols() != n_) throw InvalidArgument("trace functional: size mismatch");
  }
  Index n_;
};

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

// E_ij in M_n, zero-based indices.
inline ComplexMatrix matrix_unit(Index n, Index i, Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double max_abs(const ComplexMatrix& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

// max|a-b| / max(1, max|b|)
inline double relative_deviation(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("relative_deviation: size mismatch");
  return max_abs(a - b) / std::max(1.0, max_abs(b));
}

inline bool is_hermitian(const ComplexMatrix& x, double tol = 1e-9) {
  if (x.rows() != x.cols()) return false;
  return max_abs(x - x.adjoint()) <= tol * std::max(1.0, max_abs(x));
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& x) { return 0.5 * (x + x.adjoint()); }

// 1/p with the convention 1/inf = 0.
inline double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

inline double from_reciprocal(double r) { return r <= 0.0 ? kInf : 1.0 / r; }

inline double conjugate_exponent(double p) { return from_reciprocal(1.0 - reciprocal(p)); }

struct HermitianSpectrum {
  RealVector values;  // ascending
  ComplexMatrix vectors;
};

inline HermitianSpectrum eigh(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw InternalConsistencyError("Hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double min_eigenvalue(const ComplexMatrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// f applied to the spectrum of a Hermitian matrix.
inline ComplexMatrix hermitian_function(const ComplexMatrix& h, const std::function<double(double)>& f) {
  auto s = eigh(h);
  RealVector fv = s.values.unaryExpr(f);
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

// Descending singular values.
inline RealVector singular_values(const ComplexMatrix& x) {
  if (x.size() == 0) return RealVector();
  Eigen::BDCSVD<ComplexMatrix> svd(x);
  return svd.singularValues();
}

inline double operator_norm(const ComplexMatrix& x) {
  auto s = singular_values(x);
  return s.size() ? s(0) : 0.0;
}

// ((1/N) sum sigma_i^p)^{1/p} from a precomputed spectrum.
inline double schatten_from_singular(const RealVector& s, Index n, double p) {
  if (p < 1.0) throw InvalidArgument("schatten_norm: p must be at least 1");
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s.maxCoeff();
  double top = s.maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / top, p);
  return top * std::pow(acc / static_cast<double>(n), 1.0 / p);
}

inline double schatten_norm(const ComplexMatrix& x, double p, const TraceFunctional& tr) {
  if (x.rows() != x.cols() || x.rows() != tr.dim()) throw InvalidArgument("schatten_norm: size mismatch");
  if (p < 1.0) throw InvalidArgument("schatten_norm: p must be at least 1");
  return schatten_from_singular(singular_values(x), tr.dim(), p);
}

inline ComplexMatrix range_projection(const ComplexMatrix& x, double rank_cutoff = kRankCutoff) {
  if (x.rows() != x.cols()) throw InvalidArgument("range_projection: square input required");
  Index n = x.rows();
  if (n == 0 || max_abs(x) == 0.0) return ComplexMatrix::Zero(n, n);
  Eigen::BDCSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU);
  const RealVector& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > rank_cutoff * s(0)) ++r;
  ComplexMatrix u = svd.matrixU().leftCols(r);
  return u * u.adjoint();
}

struct DecompositionTerm {
  double coefficient;
  ComplexMatrix isometry;
};

struct ElementDecomposition {
  std::vector<DecompositionTerm> terms;

  ComplexMatrix reconstruct(Index n) const {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& t : terms) out += t.coefficient * t.isometry;
    return out;
  }
};

// x = sum_k lambda_k nu_k with orthogonal partial isometries; singular values whose
// consecutive relative gap is below cluster_tol share a term (mean coefficient).
inline ElementDecomposition rank_one_decomposition(const ComplexMatrix& x, double cluster_tol = kClusterTol,
                                                   double rank_cutoff = kRankCutoff) {
  if (x.rows() != x.cols()) throw InvalidArgument("rank_one_decomposition: square input required");
  ElementDecomposition out;
  if (x.size() == 0 || max_abs(x) == 0.0) return out;
  Eigen::BDCSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const ComplexMatrix& u = svd.matrixU();
  const ComplexMatrix& v = svd.matrixV();
  Index r = 0;
  while (r < s.size() && s(r) > rank_cutoff * s(0)) ++r;
  Index start = 0;
  while (start < r) {
    Index end = start + 1;
    while (end < r && (s(end - 1) - s(end)) < cluster_tol * s(end - 1)) ++end;
    Index len = end - start;
    double mean = s.segment(start, len).mean();
    out.terms.push_back({mean, u.middleCols(start, len) * v.middleCols(start, len).adjoint()});
    start = end;
  }
  return out;
}

// Partial isometry of the polar decomposition, restricted to the support of x.
inline ComplexMatrix polar_part(const ComplexMatrix& x, double rank_cutoff = kRankCutoff) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& t : rank_one_decomposition(x, kClusterTol, rank_cutoff).terms) out += t.isometry;
  return out;
}

inline double eta(double t) { return t <= kEntropyFloor ? 0.0 : -t * std::log(t); }

// H(|x|^2) = tr(eta(x^* x)).
inline double entropy(const ComplexMatrix& x, const TraceFunctional& tr, double floor = kEntropyFloor) {
  if (x.rows() != x.cols() || x.rows() != tr.dim()) throw InvalidArgument("entropy: size mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x.adjoint() * x), Eigen::EigenvaluesOnly);
  const RealVector& mu = es.eigenvalues();
  double scale = std::max(1.0, mu.size() ? mu.maxCoeff() : 0.0);
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    double t = mu(i);
    if (t < 0.0) {
      if (t < -kNegativeClip * scale) throw InternalConsistencyError("entropy: |x|^2 has a negative eigenvalue");
      t = 0.0;
    }
    acc += t <= floor ? 0.0 : -t * std::log(t);
  }
  return acc / static_cast<double>(tr.dim());
}

// a <= b in the Loewner order, up to tol.
inline bool psd_order_check(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("psd_order_check: size mismatch");
  if (!is_hermitian(a) || !is_hermitian(b)) throw InvalidArgument("psd_order_check: Hermitian input required");
  return min_eigenvalue(b - a) >= -tol;
}

// Dense matrix with a cached sparse copy when it is mostly zeros.
class MatrixOperand {
 public:
  MatrixOperand() = default;
  explicit MatrixOperand(ComplexMatrix m) : dense_(std::move(m)) {
    Index nnz = (dense_.array() != cd{}).count();
    sparse_ok_ = dense_.size() > 64 && nnz * 8 < dense_.size();
    if (sparse_ok_) {
      sparse_ = dense_.sparseView();
      sparse_adj_ = sparse_.adjoint();
    }
  }

  const ComplexMatrix& dense() const { return dense_; }

  ComplexMatrix left(const ComplexMatrix& x) const {
    if (sparse_ok_) return sparse_ * x;
    return dense_ * x;
  }

  ComplexMatrix right(const ComplexMatrix& x) const {
    if (sparse_ok_) return x * sparse_;
    return x * dense_;
  }

  // m x m^*
  ComplexMatrix sandwich(const ComplexMatrix& x) const {
    if (sparse_ok_) return (sparse_ * x) * sparse_adj_;
    return dense_ * x * dense_.adjoint();
  }

 private:
  ComplexMatrix dense_;
  SparseComplex sparse_;
  SparseComplex sparse_adj_;
  bool sparse_ok_ = false;
};

}  // namespace ncf
