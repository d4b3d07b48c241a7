#include <gtest/gtest.h>

#include <numbers>

#include "lagrep/lagrangian.hpp"

using namespace lagrep;

namespace {

const cplx I1(0.0, 1.0);

RMatrix random_orthogonal(Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  RMatrix p(n, n);
  for (Index i = 0; i < p.size(); ++i) p(i) = normal(rng);
  Eigen::HouseholderQR<RMatrix> qr(p);
  return qr.householderQ() * RMatrix::Identity(n, n);
}

}  // namespace

TEST(Lagrangian, Invariants) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto l = random_lagrangian(3, rng);
    const CMatrix& m = l.matrix();
    EXPECT_LT(unitarity_defect(m), 1e-12);
    EXPECT_LT(symmetry_defect(m), 1e-12);
    EXPECT_LT((m * m.conjugate() - CMatrix::Identity(3, 3)).norm(), 1e-12);
  }
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = 0.1;
  EXPECT_THROW(Lagrangian{bad}, InputError);
}

TEST(LagrangianFromFrame, Examples) {
  EXPECT_LT((lagrangian_from_frame(UnitaryMatrix::identity(3)).matrix() -
             CMatrix::Identity(3, 3)).norm(), 1e-15);
  Rng rng(2);
  RMatrix o = random_orthogonal(3, rng);
  EXPECT_LT((lagrangian_from_frame(UnitaryMatrix(o.cast<cplx>())).matrix() -
             CMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(LagrangianFromFrame, RightOrthogonalFactorIrrelevant) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = haar_unitary(3, rng);
    RMatrix o = random_orthogonal(3, rng);
    auto h = UnitaryMatrix::trusted(g.matrix() * o.cast<cplx>());
    EXPECT_LT((lagrangian_from_frame(g).matrix() - lagrangian_from_frame(h).matrix()).norm(),
              1e-10);
  }
}

TEST(LagrangianFromFrame, InjectivityModuloOrthogonal) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto l = random_lagrangian(3, rng);
    auto g = haar_unitary(3, rng);
    auto h = l.frame();
    auto g2 = lagrangian_from_frame(h);
    EXPECT_LT((g2.matrix() - l.matrix()).norm(), 1e-10);
    // h^{-1} k is real orthogonal for any other frame k of the same L.
    RMatrix o = random_orthogonal(3, rng);
    CMatrix k = h.matrix() * o.cast<cplx>();
    CMatrix r = h.matrix().adjoint() * k;
    EXPECT_LT(r.imag().norm(), 1e-10);
    (void)g;
  }
}

TEST(Involution, Examples) {
  auto l0 = Lagrangian::standard(2);
  CVector real(2);
  real << 1.5, -2.0;
  EXPECT_LT((involution_apply(l0, real) - real).norm(), 1e-15);
  CVector ie1 = CVector::Zero(2);
  ie1(0) = I1;
  EXPECT_LT((involution_apply(l0, ie1) + ie1).norm(), 1e-15);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto l = random_lagrangian(3, rng);
    CVector z = complex_gaussian(3, 1, rng);
    EXPECT_LT((involution_apply(l, involution_apply(l, z)) - z).norm(), 1e-10);
  }
  EXPECT_THROW(involution_apply(l0, CVector::Zero(3)), InputError);
}

TEST(Involution, FixedSpaceIsFrameSpan) {
  Rng rng(6);
  auto l = random_lagrangian(3, rng);
  auto g = l.frame();
  for (Index j = 0; j < 3; ++j) {
    CVector v = g.matrix().col(j);
    EXPECT_LT((involution_apply(l, v) - v).norm(), 1e-10);
  }
}

TEST(AdjointInvolution, Examples) {
  auto l0 = Lagrangian::standard(3);
  Rng rng(7);
  CMatrix x = random_skew(3, rng);
  EXPECT_LT((adjoint_involution(l0, x) - x.conjugate()).norm(), 1e-15);
  CMatrix a = x.real().cast<cplx>();
  EXPECT_LT((adjoint_involution(l0, a) - a).norm(), 1e-15);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = I1;
  d(1, 1) = 2.0 * I1;
  EXPECT_LT((adjoint_involution(l0, d) + d).norm(), 1e-15);
  EXPECT_THROW(adjoint_involution(l0, CMatrix::Identity(3, 3)), InputError);

  auto l = random_lagrangian(3, rng);
  CMatrix y = adjoint_involution(l, x);
  EXPECT_TRUE(is_skew_hermitian(y));
  EXPECT_LT((adjoint_involution(l, y) - x).norm(), 1e-10);
}

TEST(Tau2, Examples) {
  Rng rng(8);
  auto l = random_lagrangian(3, rng);
  EXPECT_LT((tau2(l, l).matrix() - CMatrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LT((tau2(l, Lagrangian::standard(3)).matrix() - l.matrix()).norm(), 1e-15);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_lagrangian(3, rng);
    auto b = random_lagrangian(3, rng);
    auto c = random_lagrangian(3, rng);
    EXPECT_LT((tau2(a, c).matrix() - tau2(a, b).matrix() * tau2(b, c).matrix()).norm(), 1e-10);
    EXPECT_LT((tau2(b, a).matrix() - tau2(a, b).matrix().adjoint()).norm(), 1e-10);
    EXPECT_LT(unitarity_defect(tau2(a, b).matrix()), 1e-12);
  }
  EXPECT_THROW(tau2(l, Lagrangian::standard(2)), InputError);
}

TEST(Tau2, Equivariance) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_lagrangian(3, rng);
    auto b = random_lagrangian(3, rng);
    CMatrix u = haar_unitary(3, rng).matrix();
    CMatrix lhs = tau2(a.transformed(u), b.transformed(u)).matrix();
    CMatrix rhs = u * tau2(a, b).matrix() * u.adjoint();
    EXPECT_LT((lhs - rhs).norm(), 1e-10);
  }
}

TEST(Tau2, SpectrumDuality) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_lagrangian(3, rng);
    auto b = random_lagrangian(3, rng);
    auto s = spectrum(tau2(a, b));
    auto t = spectrum(tau2(b, a));
    std::vector<double> neg;
    for (double x : s.alpha) neg.push_back(x == 0.0 ? 0.0 : 1.0 - x);
    std::sort(neg.begin(), neg.end());
    for (std::size_t j = 0; j < neg.size(); ++j) EXPECT_NEAR(neg[j], t.alpha[j], 1e-10);
  }
}

TEST(Tau2Split, IdentityAndDiagonal) {
  auto [a, b] = tau2_split(UnitaryMatrix::identity(2));
  EXPECT_LT((a.matrix() - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((b.matrix() - CMatrix::Identity(2, 2)).norm(), 1e-15);

  CVector d(2);
  d << std::polar(1.0, 0.4), std::polar(1.0, 2.1);
  auto [m1, m2] = tau2_split(UnitaryMatrix(CMatrix(d.asDiagonal())));
  EXPECT_LT((m1.matrix() - CMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((m2.matrix() - CMatrix(d.conjugate().asDiagonal())).norm(), 1e-14);
  EXPECT_LT((tau2(m1, m2).matrix() - CMatrix(d.asDiagonal())).norm(), 1e-14);
}

TEST(Tau2Split, RoundTripWithTorusFiber) {
  Rng rng(11);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 4;
    auto g = haar_unitary(n, rng);
    CVector t(n);
    for (Index j = 0; j < n; ++j) t(j) = std::polar(1.0, angle(rng));
    auto [l1, l2] = tau2_split(g, CMatrix(t.asDiagonal()));
    EXPECT_LT((tau2(l1, l2).matrix() - g.matrix()).norm(), 1e-9);
    EXPECT_LT(symmetry_defect(l1.matrix()), 1e-10);
    EXPECT_LT(unitarity_defect(l2.matrix()), 1e-10);
  }
}

TEST(Tau2Split, RejectsBadFiber) {
  CVector d(2);
  d << std::polar(1.0, 0.4), std::polar(1.0, 2.1);
  UnitaryMatrix g(CMatrix(d.asDiagonal()));
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;  // symmetric unitary, does not commute with d
  EXPECT_THROW(tau2_split(g, swap), InputError);
  CMatrix anti(2, 2);
  anti << 0, 1, -1, 0;
  EXPECT_THROW(tau2_split(UnitaryMatrix::identity(2), anti), InputError);
  EXPECT_THROW(tau2_split(UnitaryMatrix::trusted(CMatrix::Identity(2, 2) * 1.1)), InputError);
}

TEST(DimIntersection, Examples) {
  Rng rng(12);
  auto l = random_lagrangian(3, rng);
  EXPECT_EQ(dim_intersection(l, l), 3);
  EXPECT_EQ(dim_intersection(random_lagrangian(1, rng), random_lagrangian(1, rng)), 0);
  CVector d(2);
  d << 1.0, std::polar(1.0, std::numbers::pi / 3);
  auto framed = lagrangian_from_frame(UnitaryMatrix(CMatrix(d.asDiagonal())));
  EXPECT_EQ(dim_intersection(Lagrangian::standard(2), framed), 1);
}

TEST(Stabilizer, Examples) {
  for (Index n = 1; n <= 4; ++n) {
    auto s = stabilizer_algebra_dim(Lagrangian::standard(n), Lagrangian::standard(n));
    EXPECT_EQ(s.o1_cap_o2, n * (n - 1) / 2);
    EXPECT_EQ(s.z_g, n * n);
  }
  Rng rng(13);
  auto s = stabilizer_algebra_dim(random_lagrangian(3, rng), random_lagrangian(3, rng));
  EXPECT_EQ(s.o1_cap_o2, 0);
  EXPECT_EQ(s.z_g, 3);
}

TEST(Stabilizer, DecompositionIdentity) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 4;
    Lagrangian a = random_lagrangian(n, rng);
    Lagrangian b = random_lagrangian(n, rng);
    if (trial % 3 == 1) {
      // Force a shared line so that the product has a repeated eigenvalue.
      CMatrix g = a.frame().matrix();
      CMatrix h = haar_unitary(n, rng).matrix();
      h.col(0) = g.col(0);
      Eigen::HouseholderQR<CMatrix> qr(h);
      CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
      q.col(0) = g.col(0);
      for (Index j = 1; j < n; ++j) {
        for (Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
        q.col(j).normalize();
      }
      b = lagrangian_from_frame(UnitaryMatrix::trusted(q));
    }
    auto s = stabilizer_algebra_dim(a, b);
    EXPECT_EQ(2 * s.o1_cap_o2, s.z_g - n) << "n=" << n;
  }
}

TEST(Symmetrizers, Contract) {
  auto std3 = LagrangianTuple::standard(3, 2);
  EXPECT_LT(symmetrizer_defect(std3, pairwise_symmetrizers(std3)), 1e-12);
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    auto lam = random_lagrangian_tuple(trial % 2 ? 3 : 5, trial % 2 ? 2 : 3, rng);
    auto c = pairwise_symmetrizers(lam);
    EXPECT_LT(symmetrizer_defect(lam, c), 1e-9);
  }
}
