#include <gtest/gtest.h>

#include "ncf/star_algebra.hpp"

using namespace ncf;

namespace {

ComplexMatrix random_matrix(Index n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix x(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) x(i, j) = rng.complex_normal();
  return x;
}

// C (+) M_2 embedded block-diagonally in M_3.
MatrixAlgebra c_plus_m2() {
  std::vector<ComplexMatrix> b = {matrix_unit(3, 0, 0)};
  for (Index i = 1; i < 3; ++i)
    for (Index j = 1; j < 3; ++j) b.push_back(matrix_unit(3, i, j));
  return MatrixAlgebra::from_basis(b, "C+M2");
}

}  // namespace

TEST(MatrixAlgebra, FullCoordinatesRoundTrip) {
  auto a = MatrixAlgebra::full(3);
  ComplexMatrix x = random_matrix(3, 1);
  EXPECT_EQ(a.dim(), 9);
  EXPECT_TRUE(a.is_full());
  EXPECT_LT(max_abs(a.element(a.coordinates(x)) - x), 1e-14);
  EXPECT_NEAR(a.span_residual(x), 0.0, 1e-14);
}

TEST(MatrixAlgebra, CanonicalBasisCoordinates) {
  std::vector<ComplexMatrix> b;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) b.push_back(kron(matrix_unit(2, i, j), identity(2)));
  auto alg = MatrixAlgebra::from_basis(b, "M2 (x) 1");
  ComplexMatrix x = 2.0 * b[1] - cd(0, 3) * b[2];
  ComplexVector c = alg.checked_coordinates(x);
  EXPECT_NEAR(std::abs(c(0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c(1) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c(2) - cd(0, -3)), 0.0, 1e-14);
  EXPECT_LT(max_abs(alg.element(c) - x), 1e-14);
  EXPECT_TRUE(alg.contains(x));
  EXPECT_LT(alg.closure_residual(), 1e-12);
}

TEST(MatrixAlgebra, SpanResidualErrorCarriesResidual) {
  auto alg = MatrixAlgebra::from_basis({identity(2), matrix_unit(2, 0, 0)}, "D2");
  try {
    alg.checked_coordinates(matrix_unit(2, 0, 1));
    FAIL() << "expected SpanResidualError";
  } catch (const SpanResidualError& e) {
    EXPECT_NEAR(e.residual(), 1.0, 1e-12);
  }
  EXPECT_THROW(MatrixAlgebra::from_basis({identity(2), 2.0 * identity(2)}, "dup"), InvalidArgument);
}

TEST(MatrixAlgebra, FromSpanningDropsDependence) {
  std::vector<ComplexMatrix> s = {identity(2), matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)};
  auto alg = MatrixAlgebra::from_spanning(s, 2, "D2");
  EXPECT_EQ(alg.dim(), 2);
  EXPECT_TRUE(alg.is_orthonormal());
  EXPECT_LT(max_abs(alg.gram() - identity(2)), 1e-12);
}

TEST(Commutant, TensorFactorsCommute) {
  std::vector<ComplexMatrix> b;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) b.push_back(kron(matrix_unit(2, i, j), identity(3)));
  auto sub = MatrixAlgebra::from_basis(b, "M2 (x) 1");
  auto comm = commutant(sub, MatrixAlgebra::full(6));
  EXPECT_EQ(comm.dim(), 9);
  ComplexMatrix y = kron(identity(2), random_matrix(3, 4));
  EXPECT_TRUE(comm.contains(y));
  EXPECT_FALSE(comm.contains(kron(matrix_unit(2, 0, 1), identity(3))));
}

TEST(Commutant, MasaIsSelfCommutant) {
  std::vector<ComplexMatrix> d;
  for (Index i = 0; i < 4; ++i) d.push_back(matrix_unit(4, i, i));
  auto masa = MatrixAlgebra::from_basis(d, "D4");
  auto comm = commutant(masa, MatrixAlgebra::full(4));
  EXPECT_EQ(comm.dim(), 4);
  EXPECT_TRUE(comm.contains(masa));
}

TEST(Center, DirectSumHasTwoCentralProjections) {
  auto a = c_plus_m2();
  auto z = center(a);
  EXPECT_EQ(z.dim(), 2);
  EXPECT_TRUE(z.contains(matrix_unit(3, 0, 0)));
}

TEST(BlockDecompose, MultiplicityGivesMinimalTrace) {
  // M_2 (x) 1_3 in M_6: one block of size 2, multiplicity 3, minimal trace 3/6.
  std::vector<ComplexMatrix> b;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) b.push_back(kron(matrix_unit(2, i, j), identity(3)));
  auto alg = MatrixAlgebra::from_basis(b, "M2 (x) 1");
  auto d = block_decompose(alg, TraceFunctional(6));
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].size, 2);
  EXPECT_NEAR(d.blocks[0].min_trace, 0.5, 1e-12);
  EXPECT_NEAR(min_projection_trace(alg, TraceFunctional(6)), 0.5, 1e-12);
}

TEST(BlockDecompose, DirectSumBlocks) {
  auto d = block_decompose(c_plus_m2(), TraceFunctional(3));
  ASSERT_EQ(d.blocks.size(), 2u);
  for (const auto& blk : d.blocks) EXPECT_NEAR(blk.min_trace, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(min_projection_trace(MatrixAlgebra::scalars(5), TraceFunctional(5)), 1.0, 1e-12);
}

TEST(TraceOrthogonalExpectation, DiagonalPartAndBimodule) {
  std::vector<ComplexMatrix> d;
  for (Index i = 0; i < 3; ++i) d.push_back(matrix_unit(3, i, i));
  auto masa = MatrixAlgebra::from_basis(d, "D3");
  auto e = trace_orthogonal_expectation(MatrixAlgebra::full(3), masa, TraceFunctional(3));
  ComplexMatrix x = random_matrix(3, 6);
  ComplexMatrix want = x.diagonal().asDiagonal();
  EXPECT_LT(max_abs(e(x) - want), 1e-12);
  Rng rng(1);
  ComplexMatrix b1 = masa.random_element(rng);
  ComplexMatrix b2 = masa.random_element(rng);
  EXPECT_LT(max_abs(e(b1 * x * b2) - b1 * e(x) * b2), 1e-12);
}
