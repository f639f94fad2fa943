#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "ncf/matrix_core.hpp"
#include "ncf/star_algebra.hpp"
#include "ncf/tower.hpp"

namespace ncf {

struct FourierContext {
  std::string family;
  std::string description;
  MatrixAlgebra plus;   // B' cap A1
  MatrixAlgebra minus;  // A' cap A2
  ComplexMatrix forward;
  ComplexMatrix backward;
  double delta = 1.0;
  double kappa_plus = 1.0;
  double kappa_minus = 1.0;
  double kappa = 1.0;
  bool kappa_declared = false;
  bool minimal = true;
  bool irreducible_like = false;  // models where rho_+ is known to preserve the trace
  std::shared_ptr<const JonesTower> tower;
  std::vector<std::string> assumptions;

  TraceFunctional tr_plus() const { return plus.trace(); }
  TraceFunctional tr_minus() const { return minus.trace(); }
  double delta2() const { return delta * delta; }
};

// delta^3 E_{A' cap A2}(x e2 e1), straight from the tower.
inline ComplexMatrix fourier_definitional(const JonesTower& t, const ComplexMatrix& x) {
  ComplexMatrix y = t.e1_in_a2.right(t.e2_op.right(t.a1_to_a2(x)));
  double d = t.delta();
  return d * d * d * relcomm_expectation(t, 2, y);
}

// delta^3 E_2(w e1 e2)
inline ComplexMatrix inverse_fourier_definitional(const JonesTower& t, const ComplexMatrix& w) {
  ComplexMatrix y = t.e2_op.right(t.e1_in_a2.right(w));
  double d = t.delta();
  return d * d * d * t.E2(y);
}

namespace detail {

inline void check_roundtrip(const FourierContext& c) {
  Index dp = c.plus.dim(), dm = c.minus.dim();
  if (dp != dm) throw InternalConsistencyError("relative commutants have different dimensions");
  double r1 = max_abs(c.backward * c.forward - ComplexMatrix::Identity(dp, dp));
  double r2 = max_abs(c.forward * c.backward - ComplexMatrix::Identity(dm, dm));
  if (r1 > 1e-9 || r2 > 1e-9) throw InternalConsistencyError("F and F^-1 coordinate matrices are not inverse");
}

}  // namespace detail

inline std::shared_ptr<const FourierContext> make_fourier_context(std::shared_ptr<const JonesTower> t) {
  auto c = std::make_shared<FourierContext>();
  c->family = t->family;
  c->plus = t->rel_plus;
  c->minus = t->rel_minus;
  c->delta = t->delta();
  c->minimal = t->minimal;
  c->tower = t;
  c->assumptions = t->notes;
  Index dp = c->plus.dim(), dm = c->minus.dim();
  c->forward.resize(dm, dp);
  for (Index j = 0; j < dp; ++j)
    c->forward.col(j) = c->minus.checked_coordinates(fourier_definitional(*t, c->plus.basis_element(j)), 1e-8);
  c->backward.resize(dp, dm);
  for (Index j = 0; j < dm; ++j)
    c->backward.col(j) = c->plus.checked_coordinates(inverse_fourier_definitional(*t, c->minus.basis_element(j)), 1e-8);
  detail::check_roundtrip(*c);
  c->kappa_plus = min_projection_trace(t->b_comm_a, t->tr0());
  c->kappa_minus = min_projection_trace(t->a_comm_a1, t->tr1());
  c->kappa = std::sqrt(c->kappa_plus * c->kappa_minus);
  c->irreducible_like = t->family == "matrix-pair";
  if (t->family == "matrix-pair") {
    c->description = "matrix-pair(m=" + std::to_string(t->m) + ", mu=" + std::to_string(t->mu) + ")";
  } else {
    c->description = "generic(" + t->B.label() + " in " + t->A.label() + ", N=" + std::to_string(t->A.ambient_dim()) +
                     ", " + t->E0.label + ")";
  }
  return c;
}

// Diagonal projections p_r and powers of the cyclic shift C_k in M_k.
inline ComplexMatrix cyclic_shift(Index k) {
  ComplexMatrix c = ComplexMatrix::Zero(k, k);
  c(0, k - 1) = 1.0;
  for (Index i = 1; i < k; ++i) c(i, i - 1) = 1.0;
  return c;
}

inline std::shared_ptr<const FourierContext> build_cyclic(Index k) {
  if (k < 2) throw InvalidArgument("cyclic model needs k >= 2");
  auto c = std::make_shared<FourierContext>();
  c->family = "cyclic";
  c->description = "cyclic(k=" + std::to_string(k) + ")";
  std::vector<ComplexMatrix> p, circ;
  ComplexMatrix shift = cyclic_shift(k);
  ComplexMatrix power = identity(k);
  for (Index r = 0; r < k; ++r) {
    p.push_back(matrix_unit(k, r, r));
    circ.push_back(power);
    power = shift * power;
  }
  c->plus = MatrixAlgebra::from_basis(p, "Alg{p_r}");
  c->minus = MatrixAlgebra::from_basis(circ, "Alg{C^r}");
  double sk = std::sqrt(static_cast<double>(k));
  c->delta = sk;
  c->forward = ComplexMatrix::Identity(k, k) / sk;
  c->backward = ComplexMatrix::Identity(k, k) * sk;
  detail::check_roundtrip(*c);
  c->kappa_plus = 1.0;
  c->kappa_minus = 1.0;
  c->kappa = 1.0;
  c->kappa_declared = true;
  c->irreducible_like = true;
  c->assumptions.push_back("kappa_0 = 1 declared (irreducible fixed-point inclusion; relative commutants trivial)");
  return c;
}

inline ComplexMatrix fourier(const FourierContext& c, const ComplexMatrix& x) {
  return c.minus.element(c.forward * c.plus.checked_coordinates(x));
}

inline ComplexMatrix inverse_fourier(const FourierContext& c, const ComplexMatrix& w) {
  return c.plus.element(c.backward * c.minus.checked_coordinates(w));
}

// (F^-1(F(x)^*))^*
inline ComplexMatrix rho_plus(const FourierContext& c, const ComplexMatrix& x) {
  return inverse_fourier(c, fourier(c, x).adjoint()).adjoint();
}

// (F(F^-1(w)^*))^*
inline ComplexMatrix rho_minus(const FourierContext& c, const ComplexMatrix& w) {
  return fourier(c, inverse_fourier(c, w).adjoint()).adjoint();
}

// x * y = F^-1(F(y) F(x))
inline ComplexMatrix convolve(const FourierContext& c, const ComplexMatrix& x, const ComplexMatrix& y) {
  return inverse_fourier(c, fourier(c, y) * fourier(c, x));
}

// w * z = F(F^-1(z) F^-1(w))
inline ComplexMatrix convolve_minus(const FourierContext& c, const ComplexMatrix& w, const ComplexMatrix& z) {
  return fourier(c, inverse_fourier(c, z) * inverse_fourier(c, w));
}

// tr(l(x)) with the normalized trace of whichever side x lives on.
inline double support(const FourierContext& c, const ComplexMatrix& x, double rank_cutoff = kRankCutoff) {
  if (max_abs(x) == 0.0) throw InvalidArgument("support of the zero element");
  Index n = x.rows();
  if (n != c.plus.ambient_dim() && n != c.minus.ambient_dim()) throw InvalidArgument("support: size mismatch");
  return TraceFunctional(n).real(range_projection(x, rank_cutoff));
}

inline ComplexMatrix dft_matrix(Index k) {
  ComplexMatrix f(k, k);
  double s = 1.0 / std::sqrt(static_cast<double>(k));
  for (Index r = 0; r < k; ++r)
    for (Index q = 0; q < k; ++q)
      f(r, q) = s * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((r * q) % k) / static_cast<double>(k));
  return f;
}

// Phi(alpha)_s = (1/sqrt k) sum_r omega^{rs} alpha_r
inline ComplexVector cyclic_phi(Index k, const ComplexVector& coefficients) {
  if (coefficients.size() != k) throw InvalidArgument("cyclic_phi: length mismatch");
  return dft_matrix(k) * coefficients;
}

// gamma_j = sum_r alpha_r beta_{k+j-r}
inline ComplexVector cyclic_new_mult(const ComplexVector& alpha, const ComplexVector& beta) {
  Index k = alpha.size();
  if (beta.size() != k) throw InvalidArgument("cyclic product: length mismatch");
  ComplexVector g = ComplexVector::Zero(k);
  for (Index j = 0; j < k; ++j)
    for (Index r = 0; r < k; ++r) g(j) += alpha(r) * beta((k + j - r) % k);
  return g;
}

}  // namespace ncf
