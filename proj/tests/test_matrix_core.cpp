#include <gtest/gtest.h>

#include <cmath>

#include "ncf/matrix_core.hpp"
#include "ncf/rng.hpp"

using namespace ncf;

namespace {

ComplexMatrix random_matrix(Index n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix x(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) x(i, j) = rng.complex_normal();
  return x;
}

ComplexMatrix random_unitary(Index n, std::uint64_t seed) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, seed));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

}  // namespace

TEST(Kron, MatchesIndexFormula) {
  ComplexMatrix a = random_matrix(2, 1), b = random_matrix(3, 2);
  ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index p = 0; p < 3; ++p)
        for (Index q = 0; q < 3; ++q) EXPECT_LT(std::abs(k(i * 3 + p, j * 3 + q) - a(i, j) * b(p, q)), 1e-15);
}

TEST(TraceFunctional, NormalizedAndInner) {
  TraceFunctional tr(4);
  EXPECT_NEAR(tr.real(identity(4)), 1.0, 1e-15);
  ComplexMatrix a = random_matrix(4, 3), b = random_matrix(4, 4);
  EXPECT_NEAR(std::abs(tr.inner(a, b) - tr(a.adjoint() * b)), 0.0, 1e-12);
  EXPECT_THROW(tr(identity(3)), InvalidArgument);
}

TEST(Exponents, ConjugatesAndReciprocals) {
  EXPECT_EQ(conjugate_exponent(1.0), kInf);
  EXPECT_EQ(conjugate_exponent(kInf), 1.0);
  EXPECT_NEAR(conjugate_exponent(4.0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(conjugate_exponent(2.0), 2.0, 1e-15);
  EXPECT_EQ(reciprocal(kInf), 0.0);
}

TEST(Schatten, DiagonalClosedForm) {
  // diag(3, 4) in M_2 with tr = Tr / 2
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  TraceFunctional tr(2);
  EXPECT_NEAR(schatten_norm(d, 1.0, tr), 3.5, 1e-14);
  EXPECT_NEAR(schatten_norm(d, 2.0, tr), std::sqrt(12.5), 1e-14);
  EXPECT_NEAR(schatten_norm(d, kInf, tr), 4.0, 1e-14);
  EXPECT_NEAR(schatten_norm(d, 4.0, tr), std::pow((81.0 + 256.0) / 2.0, 0.25), 1e-13);
  EXPECT_THROW(schatten_norm(d, 0.5, tr), InvalidArgument);
}

TEST(Schatten, TwoNormIsNormalizedFrobenius) {
  ComplexMatrix x = random_matrix(5, 9);
  TraceFunctional tr(5);
  EXPECT_NEAR(schatten_norm(x, 2.0, tr), x.norm() / std::sqrt(5.0), 1e-12);
}

TEST(Schatten, UnitaryInvarianceAndHolder) {
  TraceFunctional tr(4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    ComplexMatrix x = random_matrix(4, 100 + s), y = random_matrix(4, 200 + s);
    ComplexMatrix u = random_unitary(4, 300 + s), v = random_unitary(4, 400 + s);
    for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0, kInf}) {
      double n = schatten_norm(x, p, tr);
      EXPECT_NEAR(schatten_norm(u * x * v, p, tr), n, 1e-12 * std::max(1.0, n));
      double q = conjugate_exponent(p);
      EXPECT_LE(schatten_norm(x * y, 1.0, tr), schatten_norm(x, p, tr) * schatten_norm(y, q, tr) * (1 + 1e-12));
    }
    EXPECT_NEAR(operator_norm(x), singular_values(x)(0), 1e-14);
  }
}

TEST(RangeProjection, RankDeficient) {
  ComplexMatrix a = random_matrix(4, 5).leftCols(2);
  ComplexMatrix x = a * a.adjoint();  // rank 2
  ComplexMatrix p = range_projection(x);
  EXPECT_LT(max_abs(p * p - p), 1e-12);
  EXPECT_LT(max_abs(p * x - x), 1e-12);
  EXPECT_NEAR(p.trace().real(), 2.0, 1e-12);
  EXPECT_LT(max_abs(range_projection(ComplexMatrix::Zero(3, 3))), 1e-300);
}

TEST(RankOneDecomposition, ReconstructsWithOrthogonalTerms) {
  ComplexMatrix x = random_matrix(5, 11);
  auto d = rank_one_decomposition(x);
  ASSERT_EQ(d.terms.size(), 5u);
  EXPECT_LT(max_abs(d.reconstruct(5) - x), 1e-12);
  for (size_t i = 0; i < d.terms.size(); ++i) {
    const auto& v = d.terms[i].isometry;
    EXPECT_LT(max_abs(v * v.adjoint() * v - v), 1e-12);
    for (size_t j = 0; j < i; ++j) {
      EXPECT_LT(max_abs(v.adjoint() * d.terms[j].isometry), 1e-12);
      EXPECT_GE(d.terms[j].coefficient, d.terms[i].coefficient);
    }
  }
}

TEST(RankOneDecomposition, DegenerateValuesShareATerm) {
  ComplexMatrix u = random_unitary(4, 5);
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = 2.0;
  d(1, 1) = 2.0;
  d(2, 2) = 1.0;
  auto dec = rank_one_decomposition(u * d * u.adjoint());
  ASSERT_EQ(dec.terms.size(), 2u);
  EXPECT_NEAR(dec.terms[0].coefficient, 2.0, 1e-12);
  EXPECT_NEAR(dec.terms[0].isometry.trace().real(), 2.0, 1e-12);
}

TEST(PolarPart, RecoversUnitaryFactor) {
  ComplexMatrix u = random_unitary(4, 7);
  ComplexMatrix g = random_matrix(4, 8);
  ComplexMatrix pos = g.adjoint() * g + identity(4);
  EXPECT_LT(max_abs(polar_part(u * pos) - u), 1e-10);
}

TEST(Entropy, ClosedForms) {
  TraceFunctional tr(2);
  // |x|^2 = diag(1/2, 1/2): H = (1/2)(2 * (1/2) log 2)
  ComplexMatrix x = identity(2) / std::sqrt(2.0);
  EXPECT_NEAR(entropy(x, tr), 0.5 * std::log(2.0), 1e-14);
  EXPECT_NEAR(entropy(identity(2), tr), 0.0, 1e-15);
  EXPECT_EQ(eta(0.0), 0.0);
  EXPECT_NEAR(eta(std::exp(-1.0)), std::exp(-1.0), 1e-15);
  // Unitary: flat spectrum of 1
  EXPECT_NEAR(entropy(random_unitary(2, 3), tr), 0.0, 1e-12);
}

TEST(PsdOrder, KnownPairsAndErrors) {
  ComplexMatrix a = identity(3), b = 2.0 * identity(3);
  EXPECT_TRUE(psd_order_check(a, b, 0.0));
  EXPECT_FALSE(psd_order_check(b, a, 1e-9));
  ComplexMatrix n = matrix_unit(3, 0, 1);
  EXPECT_THROW(psd_order_check(n, b, 1e-9), InvalidArgument);
}

TEST(MatrixOperand, SparseAndDenseAgree) {
  ComplexMatrix m = ComplexMatrix::Zero(16, 16);
  for (Index i = 0; i < 16; ++i) m(i, (i * 5) % 16) = cd(1.0, 0.5 * static_cast<double>(i));
  MatrixOperand op(m);
  ComplexMatrix x = random_matrix(16, 2);
  EXPECT_LT(max_abs(op.left(x) - m * x), 1e-13);
  EXPECT_LT(max_abs(op.right(x) - x * m), 1e-13);
  EXPECT_LT(max_abs(op.sandwich(x) - m * x * m.adjoint()), 1e-12);
}

TEST(Rng, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2, "x"), derive_seed(1, 2, "x"));
  EXPECT_NE(derive_seed(1, 2, "x"), derive_seed(1, 2, "y"));
  EXPECT_NE(derive_seed(1, 2, "x"), derive_seed(1, 3, "x"));
  EXPECT_NE(derive_seed(1, 2, "x"), derive_seed(2, 2, "x"));
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.complex_normal(), b.complex_normal());
}

TEST(Rng, ComplexNormalHasUnitVariance) {
  Rng rng(123);
  double acc = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) acc += std::norm(rng.complex_normal());
  EXPECT_NEAR(acc / n, 1.0, 0.05);
}
