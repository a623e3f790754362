#include <gtest/gtest.h>

#include "epistrict/stabilizer.hpp"

using namespace epistrict;

namespace {

EpistemicState<Zp> state(std::int64_t d, std::size_t n, std::vector<std::vector<std::int64_t>> rows,
                         std::vector<std::int64_t> values) {
  auto s = PhaseSpace::prime(d, n);
  return EpistemicState<Zp>::from_values(s, Matrix<Zp>::from_ints(s.field, rows, s.dim()), make_vec<Zp>(s.field, values));
}

}  // namespace

TEST(Stabilizer, PositionStateQutrit) {
  for (std::int64_t x = 0; x < 3; ++x) {
    auto st = state(3, 1, {{1, 0}}, {x});
    auto g = stabilizer_of_quadrature(st);
    EXPECT_EQ(g.subspace(), j_image(st.space(), st.quadratures()));
    EXPECT_EQ(check_eigen_formula(st).max_deviation < 1e-10, true);
    auto rho = quadrature_state(st).rho;
    for (const auto& [a, k] : g.elements())
      EXPECT_TRUE(approx_equal(weyl(st.space(), a) * rho, g.eigenvalue(a) * rho));
  }
}

TEST(Stabilizer, ZeroValuationGivesTrivialEigenvalues) {
  auto st = state(3, 2, {{1, 0, -1, 0}, {0, 1, 0, 1}}, {0, 0});
  auto g = stabilizer_of_quadrature(st);
  for (const auto& [a, k] : g.elements()) EXPECT_NEAR(std::abs(g.eigenvalue(a) - Cplx(1.0)), 0, 1e-12);
}

TEST(Stabilizer, EprQutrits) {
  for (auto c : {std::vector<std::int64_t>{0, 0}, {1, 2}, {2, 1}}) {
    auto st = state(3, 2, {{1, 0, -1, 0}, {0, 1, 0, 1}}, c);
    auto g = stabilizer_of_quadrature(st);
    EXPECT_EQ(g.elements().size(), 9u);
    EXPECT_LT(check_eigen_formula(st).max_deviation, 1e-10);
    for (const auto& [a, k] : g.elements())
      EXPECT_NEAR(std::abs(g.eigenvalue(a) - g.formula_eigenvalue(a)), 0, 1e-10);
  }
}

TEST(Stabilizer, FormulaHoldsForAllOddStates) {
  for (std::size_t n : {1u, 2u})
    for (const auto& st : enumerate_states(PhaseSpace::prime(3, n))) ASSERT_LT(check_eigen_formula(st).max_deviation, 1e-10);
}

TEST(Stabilizer, QubitFormulaFailsOnSignCocycle) {
  for (const auto& st : enumerate_states(PhaseSpace::prime(2, 1))) EXPECT_LT(check_eigen_formula(st).max_deviation, 1e-10);
  // M = span{XX, ZZ} contains YY = -XX.ZZ, so a -> eigenvalue is not a character of M.
  auto bell = state(2, 2, {{1, 0, 1, 0}, {0, 1, 0, 1}}, {0, 0});
  auto r = check_eigen_formula(bell);
  EXPECT_GT(r.max_deviation, 0.5);
  ASSERT_TRUE(r.first_failure.has_value());
  EXPECT_EQ(*r.first_failure, make_vec<Zp>(FieldTag::prime(2), {1, 1, 1, 1}));
}

TEST(Stabilizer, RoundTrips) {
  for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{3, 1}, {2, 1}, {2, 2}, {3, 2}}) {
    auto states = enumerate_states(PhaseSpace::prime(d, n));
    for (std::size_t i = 0; i < states.size(); i += (d == 3 && n == 2) ? 7 : 1) {
      const auto& st = states[i];
      auto g = stabilizer_of_quadrature(st);
      auto rho = state_from_stabilizer(g);
      ASSERT_TRUE(approx_equal(rho, quadrature_state(st).rho, 1e-10)) << st.to_string();
      ASSERT_EQ(quadrature_from_stabilizer(g), st);
      ASSERT_EQ(stabilizer_from_state(st.space(), rho), g);
    }
  }
}

TEST(Stabilizer, TrivialGroupIsMaximallyMixed) {
  auto s = PhaseSpace::prime(3, 1);
  StabilizerGroup g(s, Matrix<Zp>(s.field, 0, 2), {});
  EXPECT_TRUE(approx_equal(state_from_stabilizer(g), ComplexOperator::Identity(3, 3) / 3.0));
}

TEST(Stabilizer, QubitPauliEigenstates) {
  auto s = PhaseSpace::prime(2, 1);
  for (auto [word, e] : {std::pair<std::vector<std::int64_t>, std::int64_t>{{0, 1}, 0}, {{0, 1}, 1}, {{1, 0}, 0},
                         {{1, 0}, 1}, {{1, 1}, 0}, {{1, 1}, 1}}) {
    StabilizerGroup g(s, Matrix<Zp>::from_ints(s.field, {word}), {e});
    auto rho = state_from_stabilizer(g);
    auto p = weyl(s, make_vec<Zp>(s.field, word));
    EXPECT_TRUE(approx_equal(rho, (ComplexOperator::Identity(2, 2) + (e ? -1.0 : 1.0) * p) / 2.0));
    EXPECT_TRUE(approx_equal(quadrature_state(quadrature_from_stabilizer(g)).rho, rho));
  }
}

TEST(Stabilizer, RejectsBadGroups) {
  auto s = PhaseSpace::prime(2, 1);
  EXPECT_THROW(StabilizerGroup(s, Matrix<Zp>::from_ints(s.field, {{1, 0}, {0, 1}}), {0, 0}), std::invalid_argument);
  EXPECT_THROW(StabilizerGroup(s, Matrix<Zp>::from_ints(s.field, {{1, 0}}), {}), std::invalid_argument);
  // XX, ZZ, YY all at +1 has no joint eigenvector; dependent generators are refused.
  auto s2 = PhaseSpace::prime(2, 2);
  EXPECT_THROW(StabilizerGroup(s2, Matrix<Zp>::from_ints(s2.field, {{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 1, 1}}), {0, 0, 0}),
               std::invalid_argument);
  StabilizerGroup g(s2, Matrix<Zp>::from_ints(s2.field, {{1, 0, 1, 0}, {0, 1, 0, 1}}), {0, 0});
  EXPECT_NEAR(std::abs(g.eigenvalue(make_vec<Zp>(s2.field, {1, 1, 1, 1})) + Cplx(1.0)), 0, 1e-12);
  EXPECT_THROW(g.eigenvalue(make_vec<Zp>(s2.field, {1, 0, 0, 0})), std::invalid_argument);
}

TEST(Stabilizer, ComplementIsJImage) {
  for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{2, 2}, {3, 2}}) {
    auto s = PhaseSpace::prime(d, n);
    for (std::size_t k = 0; k <= n; ++k)
      for (const auto& v : enumerate_isotropic(s, k)) {
        EXPECT_EQ(symplectic_complement(s, euclidean_complement(v)), j_image(s, v));
        auto m = j_image(s, v);
        for (std::size_t i = 0; i < m.rows(); ++i)
          for (std::size_t j = 0; j < m.rows(); ++j) {
            auto a = weyl(s, m.row(i)), b = weyl(s, m.row(j));
            EXPECT_TRUE(approx_equal(a * b, b * a));
          }
      }
  }
}

TEST(Mermin, SquareContradiction) {
  auto r = mermin_square();
  EXPECT_TRUE(r.contexts_commute);
  EXPECT_TRUE(r.products_are_scalar);
  EXPECT_EQ(r.context_signs, (std::vector<int>{1, 1, 1, 1, 1, -1}));
  EXPECT_EQ(r.assignments, 512u);
  EXPECT_EQ(r.consistent, 0u);
  EXPECT_GT(r.relaxed_consistent, 0u);
  EXPECT_TRUE(r.contradiction());
}

TEST(Ghz, ParityContradiction) {
  auto r = ghz_test();
  ASSERT_EQ(r.expectations.size(), 4u);
  EXPECT_NEAR(r.expectations[0], 1.0, 1e-10);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(r.expectations[i], -1.0, 1e-10);
  EXPECT_EQ(r.state.rank(), 3u);
  EXPECT_EQ(r.consistent, 0u);
  EXPECT_GT(r.relaxed_consistent, 0u);
}

TEST(Inequivalence, StructuralIsomorphismIsBijective) {
  for (std::int64_t d : {2, 3}) {
    auto r = structural_isomorphism(TheoryTables::build(PhaseSpace::prime(d, 1)));
    EXPECT_TRUE(r.bijective());
    EXPECT_EQ(r.transforms, static_cast<std::size_t>(d == 2 ? 24 : 216));
  }
}

TEST(Inequivalence, QubitWitnessFound) {
  auto w = inequivalence_witness(2);
  ASSERT_TRUE(w.triple.has_value());
  EXPECT_GT(w.triple->max_difference, 0.1);
  EXPECT_EQ(w.tables->space.n, 1u);
  // Reproduce the witness independently.
  const auto& t = *w.tables;
  const auto& c = *w.triple;
  auto ep = scenario(t.states[c.state], t.transforms[c.transform], t.measurements[c.measurement]);
  auto qu = quantum_scenario(t.states[c.state], t.transforms[c.transform], t.measurements[c.measurement]);
  double diff = 0;
  for (std::size_t o = 0; o < qu.size(); ++o) diff = std::max(diff, std::abs(qu[o] - ep[o].probability.convert_to<double>()));
  EXPECT_NEAR(diff, c.max_difference, 1e-12);
  EXPECT_EQ(inequivalence_witness(2).triple->state, c.state);
}

TEST(Inequivalence, QutritHasNoWitness) {
  auto t = TheoryTables::build(PhaseSpace::prime(3, 1));
  EXPECT_TRUE(differing_triples(t, 1).empty());
  EXPECT_FALSE(inequivalence_witness(3, 1).triple.has_value());
}
