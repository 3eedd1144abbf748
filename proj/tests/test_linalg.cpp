#include <gtest/gtest.h>

#include <random>

#include "bellviol/linalg.hpp"
#include "test_support.hpp"

namespace bellviol {
namespace {

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)).max_abs_diff(ComplexMatrix::identity(4)), 0.0);
}

TEST(Kron, SigmaZSigmaZIsDiagonal) {
  const ComplexMatrix zz = kron(pauli(3), pauli(3));
  ComplexMatrix expect(4, 4);
  expect(0, 0) = 1;
  expect(1, 1) = -1;
  expect(2, 2) = -1;
  expect(3, 3) = 1;
  EXPECT_EQ(zz.max_abs_diff(expect), 0.0);
}

TEST(Kron, SigmaXSigmaYByIndexArithmetic) {
  const ComplexMatrix a = pauli(1), b = pauli(2);
  const ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 4u);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(k(r, c), a(r / 2, c / 2) * b(r % 2, c % 2)) << r << "," << c;
}

TEST(Kron, Associative) {
  std::mt19937_64 rng(1);
  const auto a = testing::random_hermitian(2, rng), b = testing::random_hermitian(2, rng),
             c = testing::random_hermitian(4, rng);
  EXPECT_LT(kron(kron(a, b), c).max_abs_diff(kron(a, kron(b, c))), 1e-14);
}

TEST(Pauli, Basics) {
  EXPECT_EQ(pauli(0).max_abs_diff(ComplexMatrix::identity(2)), 0.0);
  const ComplexMatrix z = pauli(3);
  EXPECT_EQ(z(0, 0), Complex(1));
  EXPECT_EQ(z(1, 1), Complex(-1));
  EXPECT_EQ(z(0, 1), Complex(0));
  EXPECT_THROW(pauli(4), std::out_of_range);
  EXPECT_THROW(pauli(-1), std::out_of_range);
}

TEST(Pauli, HermitianUnitaryTraceless) {
  for (int i = 0; i < 4; ++i) {
    const ComplexMatrix p = pauli(i);
    EXPECT_EQ(p.hermiticity_defect(), 0.0);
    EXPECT_EQ((p * p).max_abs_diff(ComplexMatrix::identity(2)), 0.0);
    if (i > 0) EXPECT_EQ(p.trace(), Complex(0));
  }
}

TEST(Pauli, Orthogonality) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(trace_product(pauli(i), pauli(j)), Complex(i == j ? 2.0 : 0.0));
}

TEST(TraceProduct, SmallCases) {
  EXPECT_EQ(trace_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), Complex(2));
  EXPECT_EQ(trace_product(pauli(1), pauli(1)), Complex(2));
  EXPECT_THROW(trace_product(ComplexMatrix::identity(2), ComplexMatrix::identity(4)), std::invalid_argument);
}

TEST(TraceProduct, MatchesFullProduct) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = std::size_t{1} << (1 + trial % 4);
    const auto a = testing::random_hermitian(d, rng), b = testing::random_hermitian(d, rng);
    EXPECT_LT(std::abs(trace_product(a, b) - (a * b).trace()), 1e-12);
  }
}

TEST(DotSigma, MatchesPauliCombination) {
  const RealVec3 a{0.3, -0.4, 0.5};
  const ComplexMatrix expect = pauli(1) * Complex(a[0]) + pauli(2) * Complex(a[1]) + pauli(3) * Complex(a[2]);
  EXPECT_LT(dot_sigma(a).max_abs_diff(expect), 1e-15);
}

TEST(EigSym3, DiagonalAndZero) {
  const auto d = eig_sym3(RealSym3{1, 3, 2, 0, 0, 0});
  EXPECT_EQ(d[0], 3);
  EXPECT_EQ(d[1], 2);
  EXPECT_EQ(d[2], 1);
  const auto z = eig_sym3(RealSym3{});
  for (double v : z) EXPECT_EQ(v, 0.0);
}

TEST(EigSym3, MatchesCubicBisection) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const RealSym3 m{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto ev = eig_sym3(m);
    const auto roots = testing::cubic_roots_bisection(m);
    ASSERT_EQ(roots.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(ev[k], roots[k], 1e-10);
  }
}

TEST(EigSym3, TraceAndDeterminantInvariants) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const RealSym3 m{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto ev = eig_sym3(m);
    EXPECT_GE(ev[0], ev[1]);
    EXPECT_GE(ev[1], ev[2]);
    const double tr = m.trace(), det = m.determinant();
    EXPECT_NEAR(ev[0] + ev[1] + ev[2], tr, 1e-10 * std::max(1.0, std::abs(tr)));
    EXPECT_NEAR(ev[0] * ev[1] * ev[2], det, 1e-10 * std::max(1.0, std::abs(det)));
  }
}

TEST(EigSym3, GramMatricesAreNonnegative) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    RealMat3 m{};
    for (auto& row : m)
      for (auto& x : row) x = u(rng);
    if (trial % 3 == 0) m[2] = m[1];  // rank deficient
    if (trial % 5 == 0) m[1] = m[0], m[2] = m[0];
    for (double v : eig_sym3(gram(m))) EXPECT_GE(v, -1e-12);
  }
}

TEST(EigSym3, NearDegenerateUsesAccurateFallback) {
  // Two equal eigenvalues after a rotation: the cubic discriminant vanishes.
  const double c = std::cos(0.3), s = std::sin(0.3);
  // R diag(2, 2, -1) R^T with R a rotation in the x-z plane.
  const RealSym3 m{2 * c * c - s * s, 2.0, 2 * s * s - c * c, 0.0, 3 * c * s, 0.0};
  const auto ev = eig_sym3(m);
  EXPECT_NEAR(ev[0], 2.0, 1e-12);
  EXPECT_NEAR(ev[1], 2.0, 1e-12);
  EXPECT_NEAR(ev[2], -1.0, 1e-12);
  const auto j = eig_sym3_jacobi(m);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(j[k], ev[k], 1e-12);
}

TEST(EigSym3, VectorsSatisfyEigenEquation) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const RealSym3 m{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const SymEigen3 e = eig_sym3_vectors(m);
    const RealMat3 f = m.full();
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(norm(e.vectors[k]), 1.0, 1e-12);
      for (std::size_t i = 0; i < 3; ++i) {
        const double mv = f[i][0] * e.vectors[k][0] + f[i][1] * e.vectors[k][1] + f[i][2] * e.vectors[k][2];
        EXPECT_NEAR(mv, e.values[k] * e.vectors[k][i], 1e-11);
      }
    }
  }
}

TEST(Vec3, OrthogonalHelper) {
  for (const RealVec3& u : {RealVec3{1, 0, 0}, RealVec3{0, 0, 1}, normalized(RealVec3{1, 2, 3})}) {
    const RealVec3 w = any_orthogonal(u);
    EXPECT_NEAR(norm(w), 1.0, 1e-15);
    EXPECT_NEAR(dot(u, w), 0.0, 1e-15);
  }
}

}  // namespace
}  // namespace bellviol
