#include <gtest/gtest.h>

#include "epistrict/symplectic.hpp"
#include "oracles.hpp"

using namespace epistrict;

namespace {

oracle::IVec ints(const Vec<Zp>& v) {
  oracle::IVec r;
  for (const auto& x : v) r.push_back(x.value());
  return r;
}

}  // namespace

TEST(SymplecticForm, MatchesBruteForceInner) {
  for (std::int64_t d : {2, 3, 5}) {
    auto s = PhaseSpace::prime(d, 1);
    for (const auto& f : all_points(s))
      for (const auto& g : all_points(s))
        EXPECT_EQ(symp_inner(s, f, g).value(), oracle::symp(ints(f), ints(g), d));
  }
}

TEST(SymplecticForm, QAndPPair) {
  auto s = PhaseSpace::prime(3, 1);
  auto q = make_vec<Zp>(s.field, {1, 0}), p = make_vec<Zp>(s.field, {0, 1});
  EXPECT_EQ(symp_inner(s, q, p).value(), 1);
  EXPECT_EQ(symp_inner(s, p, q).value(), 2);
}

TEST(SymplecticForm, JSquaredIsMinusIdentity) {
  for (std::int64_t d : {2, 3, 5})
    for (std::size_t n : {1u, 2u}) {
      auto s = PhaseSpace::prime(d, n);
      auto j = symplectic_form<Zp>(s);
      EXPECT_EQ(j * j, -Matrix<Zp>::identity(s.field, s.dim()));
      EXPECT_EQ(j.transpose(), -j);
    }
}

TEST(PoissonBracket, LinearFunctionalsGiveSymplecticInner) {
  for (std::int64_t d : {2, 3, 5}) {
    auto s = PhaseSpace::prime(d, 1);
    auto pts = all_points(s);
    for (const auto& f : pts)
      for (const auto& g : pts) {
        std::vector<Zp> tf, tg;
        for (const auto& m : pts) {
          tf.push_back(dot(s.field, f, m));
          tg.push_back(dot(s.field, g, m));
        }
        for (const auto& v : poisson_bracket_fd(s, tf, tg)) EXPECT_EQ(v, symp_inner(s, f, g));
      }
  }
}

TEST(PoissonBracket, QAndPAtD3) {
  auto s = PhaseSpace::prime(3, 1);
  std::vector<Zp> q, p;
  for (const auto& m : all_points(s)) {
    q.push_back(m[0]);
    p.push_back(m[1]);
  }
  for (const auto& v : poisson_bracket_fd(s, q, p)) EXPECT_EQ(v.value(), 1);
}

TEST(Isotropic, ExamplesAtD3) {
  auto s = PhaseSpace::prime(3, 1);
  EXPECT_TRUE(is_isotropic(s, Matrix<Zp>::from_ints(s.field, {{1, 0}})));
  EXPECT_FALSE(is_isotropic(s, Matrix<Zp>::from_ints(s.field, {{1, 0}, {0, 1}})));
  auto s2 = PhaseSpace::prime(3, 2);
  EXPECT_TRUE(is_lagrangian(s2, Matrix<Zp>::from_ints(s2.field, {{1, 0, 2, 0}, {0, 1, 0, 1}})));
}

TEST(Isotropic, ShiftedSubspaceIsNotIsotropic) {
  auto s = PhaseSpace::prime(3, 1);
  auto v = AffineSubspace<Zp>::make(Matrix<Zp>::from_ints(s.field, {{1, 0}}), make_vec<Zp>(s.field, {0, 1}));
  EXPECT_FALSE(is_isotropic(s, v));
  EXPECT_TRUE(is_isotropic(s, AffineSubspace<Zp>::linear(Matrix<Zp>::from_ints(s.field, {{1, 0}}))));
}

TEST(Complements, SymplecticOfEuclideanIsJImage) {
  for (std::int64_t d : {2, 3})
    for (std::size_t n : {1u, 2u}) {
      auto s = PhaseSpace::prime(d, n);
      for (std::size_t k = 1; k <= n; ++k)
        for (const auto& v : enumerate_isotropic(s, k)) {
          auto perp = euclidean_complement(v);
          EXPECT_EQ(symplectic_complement(s, perp), j_image(s, v));
          EXPECT_EQ(perp.rows() + v.rows(), s.dim());
          // V is contained in its own symplectic complement
          auto vc = AffineSubspace<Zp>::linear(symplectic_complement(s, v));
          for (std::size_t i = 0; i < v.rows(); ++i) EXPECT_TRUE(vc.contains(v.row(i)));
        }
    }
}

TEST(ExtendToSymplectic, Examples) {
  auto s2 = PhaseSpace::prime(2, 1);
  EXPECT_EQ(extend_to_symplectic(s2, make_vec<Zp>(s2.field, {0, 1})), Matrix<Zp>::from_ints(s2.field, {{0, 1}, {1, 0}}));
  auto s3 = PhaseSpace::prime(3, 1);
  auto m = extend_to_symplectic(s3, make_vec<Zp>(s3.field, {1, 1}));
  EXPECT_TRUE(is_symplectic(s3, m));
  EXPECT_EQ(m.col(0), make_vec<Zp>(s3.field, {1, 1}));
}

TEST(ExtendToSymplectic, AllNonzeroVectors) {
  for (std::int64_t d : {2, 3, 5})
    for (std::size_t n : {1u, 2u}) {
      auto s = PhaseSpace::prime(d, n);
      for (const auto& f : all_points(s)) {
        if (is_zero_vec(f)) continue;
        auto m = extend_to_symplectic(s, f);
        ASSERT_TRUE(is_symplectic(s, m));
        EXPECT_EQ(m.col(0), f);
        auto inv = SymplecticAffine<Zp>::make(s, m, zero_vec<Zp>(s.field, s.dim())).inverse();
        EXPECT_EQ(inv.s * m, Matrix<Zp>::identity(s.field, s.dim()));
      }
    }
}

TEST(ExtendToSymplectic, PartnerIsLexicographicallyLeast) {
  auto s = PhaseSpace::prime(3, 1);
  for (const auto& f : all_points(s)) {
    if (is_zero_vec(f)) continue;
    auto g = extend_to_symplectic(s, f).col(1);
    for (const auto& h : all_points(s))
      if (symp_inner(s, f, h).value() == 1) {
        EXPECT_LE(ints(g), ints(h));
      }
  }
}

TEST(SymplecticGroup, OrdersMatchFormula) {
  EXPECT_EQ(enumerate_symplectic_group(PhaseSpace::prime(2, 1)).size(), 6u);
  EXPECT_EQ(enumerate_symplectic_group(PhaseSpace::prime(3, 1)).size(), 24u);
  EXPECT_EQ(enumerate_symplectic_group(PhaseSpace::prime(5, 1)).size(), 120u);
  EXPECT_EQ(enumerate_symplectic_group(PhaseSpace::prime(2, 2)).size(), 720u);
  EXPECT_EQ(symplectic_group_order(2, 3), 51840);
  EXPECT_EQ(enumerate_affine_group(PhaseSpace::prime(2, 1)).size(), 24u);
}

TEST(SymplecticGroup, BruteForceCountAtD3) {
  auto s = PhaseSpace::prime(3, 1);
  std::size_t count = 0;
  for (const auto& c : oracle::all_vectors(3, 4)) {
    auto m = Matrix<Zp>::from_ints(s.field, {{c[0], c[1]}, {c[2], c[3]}});
    if (is_symplectic(s, m)) ++count;
  }
  EXPECT_EQ(count, 24u);
}

TEST(SymplecticGroup, SizeCapRefusal) {
  EXPECT_THROW(enumerate_symplectic_group(PhaseSpace::prime(3, 2), 1000), SizeCapExceeded);
}

TEST(SymplecticGroup, PreservesIsotropy) {
  auto s = PhaseSpace::prime(3, 1);
  for (const auto& m : enumerate_symplectic_group(s)) {
    EXPECT_TRUE(is_symplectic(s, m));
    for (const auto& v : enumerate_isotropic(s, 1))
      EXPECT_TRUE(is_isotropic(s, row_span(v * m.transpose())));
  }
}

TEST(SymplecticAffine, ComposeAndInverse) {
  auto s = PhaseSpace::prime(3, 1);
  auto group = enumerate_affine_group(s);
  for (std::size_t i = 0; i < group.size(); i += 7) {
    const auto& t = group[i];
    auto id = SymplecticAffine<Zp>::identity(s);
    EXPECT_EQ(t.compose(t.inverse()), id);
    EXPECT_EQ(t.inverse().compose(t), id);
    const auto& u = group[(i * 5 + 3) % group.size()];
    for (const auto& m : all_points(s)) EXPECT_EQ(t.compose(u).apply(m), t.apply(u.apply(m)));
  }
}

TEST(TimeReversal, NotSymplecticButPreservesIsotropy) {
  for (std::int64_t d : {3, 5}) {
    auto s = PhaseSpace::prime(d, 1);
    auto t = time_reversal<Zp>(s);
    EXPECT_FALSE(is_symplectic(s, t));
    EXPECT_THROW(SymplecticAffine<Zp>::make(s, t, zero_vec<Zp>(s.field, 2)), std::invalid_argument);
    for (const auto& v : enumerate_isotropic(s, 1)) EXPECT_TRUE(is_isotropic(s, row_span(v * t.transpose())));
  }
}

TEST(IsotropicEnumeration, CountsMatchBruteForce) {
  for (std::int64_t d : {2, 3})
    for (std::size_t n : {1u, 2u})
      for (std::size_t k = 1; k <= n; ++k) {
        auto s = PhaseSpace::prime(d, n);
        EXPECT_EQ(enumerate_isotropic(s, k).size(), oracle::isotropic_subspaces(d, n, k).size());
      }
  EXPECT_EQ(enumerate_isotropic(PhaseSpace::prime(3, 1), 1).size(), 4u);
  EXPECT_EQ(enumerate_isotropic(PhaseSpace::prime(2, 1), 1).size(), 3u);
  EXPECT_EQ(enumerate_isotropic(PhaseSpace::prime(3, 2), 2).size(), lagrangian_count(2, 3));
  EXPECT_EQ(enumerate_isotropic(PhaseSpace::prime(5, 2), 2).size(), lagrangian_count(2, 5));
}
