#include <gtest/gtest.h>

#include <random>

#include "epistrict/quantum.hpp"

using namespace epistrict;

namespace {

Vec<Zp> vec(const PhaseSpace& s, std::vector<std::int64_t> x) { return make_vec<Zp>(s.field, x); }

Vec<Zp> add(const Vec<Zp>& a, const Vec<Zp>& b) {
  Vec<Zp> r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

ComplexOperator pauli_x() { return shift(2, 1); }
ComplexOperator pauli_z() { return epistrict::boost(2, 1); }
ComplexOperator pauli_y() {
  ComplexOperator y(2, 2);
  y << 0, Cplx(0, -1), Cplx(0, 1), 0;
  return y;
}

}  // namespace

TEST(Character, RootsOfUnity) {
  EXPECT_NEAR(std::abs(chi(3, 1) - std::polar(1.0, 2 * std::numbers::pi / 3)), 0, 1e-15);
  EXPECT_NEAR(std::abs(chi(2, 1) - Cplx(0, 1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(chi(2, 2) + 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(chi(5, 7) - chi(5, 2)), 0, 1e-15);
}

TEST(ShiftBoost, Examples) {
  Eigen::VectorXcd ket0 = Eigen::VectorXcd::Zero(3);
  ket0(0) = 1;
  Eigen::VectorXcd out = shift(3, 1) * ket0;
  EXPECT_NEAR(std::abs(out(2) - 1.0), 0, 1e-15);
  ComplexOperator z(2, 2);
  z << 1, 0, 0, -1;
  EXPECT_TRUE(approx_equal(epistrict::boost(2, 1), z));
  for (std::int64_t d : {2, 3, 5})
    for (std::int64_t k = 0; k < d; ++k) {
      EXPECT_TRUE(approx_equal(shift(d, k) * shift(d, k).adjoint(), ComplexOperator::Identity(d, d)));
      EXPECT_TRUE(approx_equal(epistrict::boost(d, k) * epistrict::boost(d, k).adjoint(), ComplexOperator::Identity(d, d)));
    }
}

TEST(Weyl, RelationToShiftAndBoost) {
  for (std::int64_t d : {2, 3, 5}) {
    auto s = PhaseSpace::prime(d, 1);
    for (std::int64_t k = 0; k < d; ++k) {
      EXPECT_TRUE(approx_equal(weyl(s, vec(s, {k, 0})), shift(d, -k)));
      EXPECT_TRUE(approx_equal(weyl(s, vec(s, {0, k})), epistrict::boost(d, k)));
    }
  }
}

TEST(Weyl, QubitPaulis) {
  auto s = PhaseSpace::prime(2, 1);
  EXPECT_TRUE(approx_equal(weyl(s, vec(s, {1, 0})), pauli_x()));
  EXPECT_TRUE(approx_equal(weyl(s, vec(s, {0, 1})), pauli_z()));
  EXPECT_TRUE(approx_equal(weyl(s, vec(s, {1, 1})), pauli_y()));
}

TEST(Weyl, QubitProductPhasesAndCommutation) {
  auto s = PhaseSpace::prime(2, 2);
  const Cplx allowed[] = {1.0, -1.0, Cplx(0, 1), Cplx(0, -1)};
  for (const auto& a : all_points(s))
    for (const auto& b : all_points(s)) {
      auto wa = weyl(s, a), wb = weyl(s, b);
      EXPECT_TRUE(approx_equal(wa, wa.adjoint()));
      auto c = proportionality(wa * wb, weyl(s, add(a, b)));
      ASSERT_TRUE(c.has_value());
      bool ok = false;
      for (auto z : allowed) ok |= std::abs(*c - z) < 1e-12;
      EXPECT_TRUE(ok);
      EXPECT_TRUE(approx_equal(wa * wb, chi(2, 2 * symp_inner(s, a, b).value()) * wb * wa));
    }
}

TEST(Weyl, ProductLawOddDimensions) {
  for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{3, 1}, {5, 1}, {3, 2}}) {
    auto s = PhaseSpace::prime(d, n);
    const std::int64_t inv2 = inverse_mod(2, d);
    auto pts = all_points(s);
    for (const auto& a : pts)
      for (const auto& b : pts) {
        const std::int64_t w = symp_inner(s, a, b).value();
        auto wa = weyl(s, a), wb = weyl(s, b);
        ASSERT_TRUE(approx_equal(wa * wb, chi(d, -inv2 * w) * weyl(s, add(a, b))));
        ASSERT_TRUE(approx_equal(wa * wb, chi(d, -w) * wb * wa));
      }
  }
}

TEST(Weyl, UnitaryAndTraceOrthogonal) {
  auto s = PhaseSpace::prime(3, 1);
  for (const auto& a : all_points(s))
    for (const auto& b : all_points(s)) {
      Cplx tr = (weyl(s, a).adjoint() * weyl(s, b)).trace();
      EXPECT_NEAR(std::abs(tr), a == b ? 3.0 : 0.0, 1e-12);
    }
}

TEST(Weyl, DimensionCap) {
  EXPECT_THROW(weyl(PhaseSpace::prime(3, 5), zero_vec<Zp>(FieldTag::prime(3), 10)), SizeCapExceeded);
  EXPECT_NO_THROW(weyl(PhaseSpace::prime(2, 7), zero_vec<Zp>(FieldTag::prime(2), 14)));
}

TEST(Metaplectic, CovarianceOddDimensions) {
  for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{3, 1}, {5, 1}}) {
    auto s = PhaseSpace::prime(d, n);
    for (const auto& sm : enumerate_symplectic_group(s)) {
      auto v = metaplectic(s, sm);
      for (const auto& a : all_points(s)) ASSERT_TRUE(approx_equal(v * weyl(s, a) * v.adjoint(), weyl(s, sm * a)));
    }
  }
}

TEST(Metaplectic, CovarianceTwoTritsSampled) {
  auto s = PhaseSpace::prime(3, 2);
  auto group = enumerate_symplectic_group(s);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto& sm = group[rng() % group.size()];
    auto v = metaplectic(s, sm);
    for (const auto& a : all_points(s)) ASSERT_TRUE(approx_equal(v * weyl(s, a) * v.adjoint(), weyl(s, sm * a)));
  }
}

TEST(Metaplectic, QubitCovarianceUpToSign) {
  for (std::size_t n : {1u, 2u}) {
    auto s = PhaseSpace::prime(2, n);
    for (const auto& sm : enumerate_symplectic_group(s)) {
      auto v = metaplectic(s, sm);
      for (const auto& a : all_points(s)) {
        auto c = proportionality(v * weyl(s, a) * v.adjoint(), weyl(s, sm * a));
        ASSERT_TRUE(c.has_value());
        EXPECT_NEAR(std::abs(std::abs(c->real()) - 1.0), 0, 1e-9);
      }
    }
  }
}

TEST(Metaplectic, IdentityAndRejection) {
  auto s = PhaseSpace::prime(3, 1);
  EXPECT_TRUE(approx_equal(metaplectic(s, Matrix<Zp>::identity(s.field, 2)), ComplexOperator::Identity(3, 3)));
  EXPECT_THROW(metaplectic(s, time_reversal<Zp>(s)), std::invalid_argument);
}

TEST(Metaplectic, FourierMatrix) {
  // (q, p) -> (-p, q) is implemented by the discrete Fourier transform up to phase.
  auto s = PhaseSpace::prime(3, 1);
  auto v = metaplectic(s, Matrix<Zp>::from_ints(s.field, {{0, -1}, {1, 0}}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(v(i, j)), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Clifford, ActsAsAffineMapOnWeyl) {
  auto s = PhaseSpace::prime(3, 1);
  for (const auto& t : enumerate_affine_group(s)) {
    auto c = clifford(t);
    EXPECT_TRUE(approx_equal(c.u * c.u.adjoint(), ComplexOperator::Identity(3, 3)));
    for (const auto& b : all_points(s))
      ASSERT_TRUE(proportionality(c.u * weyl(s, b) * c.u.adjoint(), weyl(s, t.s * b)).has_value());
  }
}

TEST(Projector, PositionAtD3) {
  auto s = PhaseSpace::prime(3, 1);
  ComplexOperator p0 = ComplexOperator::Zero(3, 3);
  p0(0, 0) = 1;
  EXPECT_TRUE(approx_equal(quadrature_projector(s, vec(s, {1, 0}), 0), p0));
}

TEST(Projector, MomentumIsFourierBasis) {
  auto s = PhaseSpace::prime(3, 1);
  for (std::int64_t k = 0; k < 3; ++k) {
    Eigen::VectorXcd ket(3);
    for (int x = 0; x < 3; ++x) ket(x) = chi(3, x * k) / std::sqrt(3.0);
    EXPECT_TRUE(approx_equal(quadrature_projector(s, vec(s, {0, 1}), k), ket * ket.adjoint()));
  }
}

TEST(Projector, ResolutionOfIdentityAndRank) {
  for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
    auto s = PhaseSpace::prime(d, n);
    const std::size_t dim = hilbert_dim(s);
    for (const auto& m : enumerate_measurements(s)) {
      auto pvm = quadrature_pvm(m);
      ComplexOperator sum = ComplexOperator::Zero(dim, dim);
      for (std::size_t i = 0; i < pvm.size(); ++i) {
        const auto& p = pvm[i];
        ASSERT_TRUE(approx_equal(p * p, p));
        ASSERT_TRUE(approx_equal(p, p.adjoint()));
        EXPECT_NEAR(p.trace().real(), std::pow(double(d), double(n - m.rank())), 1e-9);
        for (std::size_t j = i + 1; j < pvm.size(); ++j) ASSERT_TRUE(approx_equal(p * pvm[j], ComplexOperator::Zero(dim, dim)));
        sum += p;
      }
      ASSERT_TRUE(approx_equal(sum, ComplexOperator::Identity(dim, dim)));
    }
  }
}

TEST(Projector, IndependentOfBasisAtOddD) {
  auto s = PhaseSpace::prime(3, 2);
  for (const auto& v : enumerate_isotropic(s, 2)) {
    auto f1 = v.row(0), f2 = v.row(1);
    Matrix<Zp> other(s.field, 0, 4);
    other.append_row(add(f1, f2));
    other.append_row(add(add(f1, f2), f2));
    for (const auto& c : all_labels(3, 2)) {
      Vec<Zp> cv = vec(s, c);
      Vec<Zp> c_other{cv[0] + cv[1], cv[0] + cv[1] + cv[1]};
      ASSERT_TRUE(approx_equal(joint_projector(s, v, cv), joint_projector(s, other, c_other)));
    }
  }
}

TEST(Projector, RejectsNonCommutingQuadratures) {
  auto s = PhaseSpace::prime(3, 1);
  EXPECT_THROW(joint_projector(s, Matrix<Zp>::from_ints(s.field, {{1, 0}, {0, 1}}), vec(s, {0, 0})),
               std::invalid_argument);
}

TEST(QuadratureStates, RankAndTrace) {
  for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{3, 1}, {2, 2}}) {
    auto s = PhaseSpace::prime(d, n);
    for (const auto& st : enumerate_states(s)) {
      auto q = quadrature_state(st);
      EXPECT_NEAR(q.rho.trace().real(), 1.0, 1e-12);
      Eigen::SelfAdjointEigenSolver<ComplexOperator> es(q.rho);
      std::size_t rank = 0;
      for (auto ev : es.eigenvalues()) rank += ev > 1e-9;
      EXPECT_EQ(rank, static_cast<std::size_t>(std::pow(double(d), double(n - st.rank()))));
    }
  }
}

TEST(QuadratureStates, BornMatchesEpistrictedOddD) {
  auto s = PhaseSpace::prime(3, 1);
  auto ms = enumerate_measurements(s);
  for (const auto& st : enumerate_states(s))
    for (const auto& t : enumerate_affine_group(s))
      for (const auto& m : ms) {
        auto q = quantum_scenario(st, t, m);
        auto c = scenario(st, t, m);
        for (std::size_t i = 0; i < q.size(); ++i) ASSERT_NEAR(q[i], c[i].probability.convert_to<double>(), 1e-9);
      }
}
