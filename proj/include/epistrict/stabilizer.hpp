#pragma once

// Stabilizer groups of quadrature states and the qubit contextuality witnesses.
//
// A group is a list of commuting Weyl displacements g_i (spanning M) with
// eigenvalue exponents e_i: W(g_i) rho = root(e_i) rho, where root(e) = chi(e)
// for odd d and (-1)^e for d = 2.

#include "epistrict/wigner.hpp"

#include <array>
#include <functional>

namespace epistrict {

inline Cplx sign_root(std::int64_t d, std::int64_t e) { return chi(d, d == 2 ? 2 * e : e); }

// chi(<v, a>) with the doubled character at d = 2.
inline Cplx formula_character(const PhaseSpace& s, const Vec<Zp>& v, const Vec<Zp>& a) {
  return sign_root(s.d(), symp_inner(s, v, a).value());
}

class StabilizerGroup {
 public:
  StabilizerGroup(const PhaseSpace& s, const Matrix<Zp>& generators, std::vector<std::int64_t> exponents,
                  Vec<Zp> valuation = {})
      : space_(s), gens_(generators), exps_(std::move(exponents)), v_(std::move(valuation)) {
    if (gens_.cols() != s.dim()) throw std::invalid_argument("stabilizer generators have wrong dimension");
    if (exps_.size() != gens_.rows()) throw std::invalid_argument("one eigenvalue exponent per generator");
    if (rank(gens_) != gens_.rows()) throw std::invalid_argument("stabilizer generators are dependent");
    if (auto bad = non_isotropic_pair(s, gens_))
      throw std::invalid_argument("generators " + std::to_string(bad->first) + " and " + std::to_string(bad->second) +
                                  " do not commute");
  }

  const PhaseSpace& space() const { return space_; }
  const Matrix<Zp>& generators() const { return gens_; }
  const std::vector<std::int64_t>& exponents() const { return exps_; }
  const Vec<Zp>& valuation() const { return v_; }
  Matrix<Zp> subspace() const { return row_span(gens_); }

  // Every element a of M with the coefficient vector expressing it in the generators.
  std::vector<std::pair<Vec<Zp>, std::vector<std::int64_t>>> elements() const {
    std::vector<std::pair<Vec<Zp>, std::vector<std::int64_t>>> out;
    for (const auto& k : all_labels(space_.d(), gens_.rows())) {
      Vec<Zp> a = zero_vec<Zp>(space_.field, space_.dim());
      for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += Zp(k[i], space_.d()) * gens_(i, j);
      out.emplace_back(a, k);
    }
    return out;
  }

  // Eigenvalue of W(a) forced by the generator eigenvalues and the Weyl product law.
  Cplx eigenvalue_from_coefficients(const Vec<Zp>& a, const std::vector<std::int64_t>& k) const {
    const std::size_t n = hilbert_dim(space_);
    Monomial prod = Monomial::identity(n);
    Cplx lambda = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const Monomial w = weyl_monomial(space_, gens_.row(i));
      for (std::int64_t r = 0; r < k[i]; ++r) {
        prod = prod * w;
        lambda *= sign_root(space_.d(), exps_[i]);
      }
    }
    const Monomial target = weyl_monomial(space_, a);
    // prod = phi W(a), so W(a) has eigenvalue lambda / phi.
    const Cplx phi = prod.phase[0] / target.phase[0];
    return lambda / phi;
  }

  Cplx eigenvalue(const Vec<Zp>& a) const {
    for (const auto& [b, k] : elements())
      if (b == a) return eigenvalue_from_coefficients(a, k);
    throw std::invalid_argument("displacement is not in the stabilizer group");
  }

  Cplx formula_eigenvalue(const Vec<Zp>& a) const {
    if (v_.empty()) throw std::logic_error("stabilizer group carries no valuation");
    return formula_character(space_, v_, a);
  }

  // Same subgroup and the same eigenvalue on every element.
  bool operator==(const StabilizerGroup& o) const {
    if (!(space_ == o.space_) || !(subspace() == o.subspace())) return false;
    for (const auto& [a, k] : elements())
      if (std::abs(eigenvalue_from_coefficients(a, k) - o.eigenvalue(a)) > 1e-9) return false;
    return true;
  }

 private:
  PhaseSpace space_;
  Matrix<Zp> gens_;
  std::vector<std::int64_t> exps_;
  Vec<Zp> v_;
};

// Generators J f for the canonical rows f of V, eigenvalues chi(<v, J f>) with v any
// point of the support.
inline StabilizerGroup stabilizer_of_quadrature(const EpistemicState<Zp>& st) {
  const PhaseSpace& s = st.space();
  const Vec<Zp> v = st.support().offset();
  const Matrix<Zp> f = st.quadratures();
  Matrix<Zp> gens(s.field, 0, s.dim());
  std::vector<std::int64_t> exps;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const Vec<Zp> g = apply_j(s, f.row(i));
    gens.append_row(g);
    exps.push_back(symp_inner(s, v, g).value());
  }
  return StabilizerGroup(s, gens, exps, v);
}

// Normalised projector onto the joint eigenspace.
inline ComplexOperator state_from_stabilizer(const StabilizerGroup& g, std::size_t max_dim = kDefaultMaxDim) {
  const PhaseSpace& s = g.space();
  check_dim(s, max_dim);
  const auto n = static_cast<Eigen::Index>(hilbert_dim(s));
  ComplexOperator p = ComplexOperator::Identity(n, n);
  for (std::size_t i = 0; i < g.generators().rows(); ++i) {
    const ComplexOperator w = weyl(s, g.generators().row(i), max_dim) / sign_root(s.d(), g.exponents()[i]);
    ComplexOperator proj = ComplexOperator::Zero(n, n), power = ComplexOperator::Identity(n, n);
    for (std::int64_t k = 0; k < s.d(); ++k) {
      proj += power;
      power = power * w;
    }
    p = p * proj / static_cast<double>(s.d());
  }
  const double tr = p.trace().real();
  if (tr < 0.5) throw std::invalid_argument("inconsistent stabilizer phases: no joint eigenspace");
  return p / tr;
}

// Displacements with |Tr(W(a) rho)| = 1 and their eigenvalues.
inline StabilizerGroup stabilizer_from_state(const PhaseSpace& s, const ComplexOperator& rho,
                                             std::size_t max_dim = kDefaultMaxDim) {
  check_dim(s, max_dim);
  Matrix<Zp> found(s.field, 0, s.dim());
  for (const auto& a : all_points(s))
    if (std::abs((weyl(s, a, max_dim) * rho).trace()) > 0.5) found.append_row(a);
  const Matrix<Zp> gens = row_span(found);
  std::vector<std::int64_t> exps;
  for (std::size_t i = 0; i < gens.rows(); ++i) {
    const Cplx t = (weyl(s, gens.row(i), max_dim) * rho).trace();
    std::int64_t e = 0;
    while (e < s.d() && std::abs(sign_root(s.d(), e) - t) > 1e-6) ++e;
    if (e == s.d()) throw std::logic_error("stabilizer eigenvalue is not a root of unity");
    exps.push_back(e);
  }
  Vec<Zp> valuation;
  for (const auto& v : all_points(s)) {
    bool ok = true;
    for (std::size_t i = 0; i < gens.rows() && ok; ++i)
      ok = std::abs(formula_character(s, v, gens.row(i)) - sign_root(s.d(), exps[i])) < 1e-9;
    if (ok) {
      valuation = v;
      break;
    }
  }
  return StabilizerGroup(s, gens, exps, valuation);
}

// V = J^-1 M; the values are those whose quadrature state equals the stabilizer state.
inline EpistemicState<Zp> quadrature_from_stabilizer(const StabilizerGroup& g, std::size_t max_dim = kDefaultMaxDim) {
  const PhaseSpace& s = g.space();
  const Matrix<Zp> jt = symplectic_form<Zp>(s);  // rows m -> J^T m are m J
  const Matrix<Zp> v = row_span(g.subspace() * jt);
  const ComplexOperator rho = state_from_stabilizer(g, max_dim);
  for (const auto& c : all_labels(s.d(), v.rows())) {
    auto st = EpistemicState<Zp>::from_values(s, v, make_vec<Zp>(s.field, c));
    if (approx_equal(quadrature_state(st, max_dim).rho, rho, 1e-9)) return st;
  }
  throw std::logic_error("stabilizer state is not a quadrature state");
}

struct FormulaCheck {
  double max_deviation = 0;
  std::optional<Vec<Zp>> first_failure;
};

// || W(a) rho - chi(<v, a>) rho || over a in M = JV.
inline FormulaCheck check_eigen_formula(const EpistemicState<Zp>& st, std::size_t max_dim = kDefaultMaxDim) {
  const auto g = stabilizer_of_quadrature(st);
  const auto rho = quadrature_state(st, max_dim).rho;
  FormulaCheck r;
  for (const auto& [a, k] : g.elements()) {
    const double dev = (weyl(st.space(), a, max_dim) * rho - g.formula_eigenvalue(a) * rho).cwiseAbs().maxCoeff();
    if (dev > 1e-10 && !r.first_failure) r.first_failure = a;
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

// Count of +-1 assignments to `vars` observables meeting the product constraints.
inline std::size_t count_assignments(std::size_t vars, const std::vector<std::vector<std::size_t>>& constraints,
                                     const std::vector<int>& signs) {
  std::size_t count = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << vars); ++mask) {
    bool ok = true;
    for (std::size_t c = 0; c < constraints.size() && ok; ++c) {
      int prod = 1;
      for (auto i : constraints[c]) prod *= (mask >> i) & 1 ? -1 : 1;
      ok = prod == signs[c];
    }
    count += ok;
  }
  return count;
}

struct ContextualityReport {
  std::vector<std::string> observables;
  std::vector<std::vector<std::size_t>> contexts;
  std::vector<int> context_signs;  // operator product = sign * identity
  bool contexts_commute = true;
  bool products_are_scalar = true;
  std::size_t assignments = 0;
  std::size_t consistent = 0;
  std::size_t relaxed_consistent = 0;  // with the last constraint dropped
  bool contradiction() const { return contexts_commute && products_are_scalar && consistent == 0 && relaxed_consistent > 0; }
};

namespace detail {

inline Vec<Zp> pauli_vector(const std::string& word) {
  std::vector<std::int64_t> a;
  for (char c : word) {
    a.push_back(c == 'X' || c == 'Y');
    a.push_back(c == 'Z' || c == 'Y');
  }
  return make_vec<Zp>(FieldTag::prime(2), a);
}

inline void check_contexts(const PhaseSpace& s, const std::vector<ComplexOperator>& ops, ContextualityReport& r) {
  const auto n = static_cast<Eigen::Index>(hilbert_dim(s));
  for (const auto& ctx : r.contexts) {
    for (auto i : ctx)
      for (auto j : ctx)
        if (!approx_equal(ops[i] * ops[j], ops[j] * ops[i])) r.contexts_commute = false;
    ComplexOperator prod = ComplexOperator::Identity(n, n);
    for (auto i : ctx) prod = prod * ops[i];
    int sign = 0;
    if (approx_equal(prod, ComplexOperator::Identity(n, n))) sign = 1;
    if (approx_equal(prod, -ComplexOperator::Identity(n, n))) sign = -1;
    if (sign == 0) r.products_are_scalar = false;
    r.context_signs.push_back(sign);
  }
}

}  // namespace detail

// Two-qubit square; rows then columns are the six contexts, the last column is the
// anomalous one.
inline ContextualityReport mermin_square() {
  const auto s = PhaseSpace::prime(2, 2);
  ContextualityReport r;
  r.observables = {"XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY"};
  r.contexts = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
  std::vector<ComplexOperator> ops;
  for (const auto& w : r.observables) ops.push_back(weyl(s, detail::pauli_vector(w)));
  detail::check_contexts(s, ops, r);
  r.assignments = std::size_t{1} << 9;
  r.consistent = count_assignments(9, r.contexts, r.context_signs);
  r.relaxed_consistent = count_assignments(9, {r.contexts.begin(), r.contexts.end() - 1},
                                           {r.context_signs.begin(), r.context_signs.end() - 1});
  return r;
}

struct GhzReport {
  EpistemicState<Zp> state;
  std::vector<std::string> observables;
  std::vector<double> expectations;
  std::size_t assignments = 64;
  std::size_t consistent = 0;
  std::size_t relaxed_consistent = 0;
  bool contradiction() const { return consistent == 0 && relaxed_consistent > 0; }
};

// Stabilized by XXX, ZZI, IZZ. Local values x_i, y_i are bits 2i and 2i+1.
inline GhzReport ghz_test() {
  const auto s = PhaseSpace::prime(2, 3);
  Matrix<Zp> gens(s.field, 0, s.dim());
  for (const auto* w : {"XXX", "ZZI", "IZZ"}) gens.append_row(detail::pauli_vector(w));
  const StabilizerGroup g(s, gens, {0, 0, 0});
  const auto rho = state_from_stabilizer(g);
  GhzReport r{quadrature_from_stabilizer(g), {"XXX", "XYY", "YXY", "YYX"}, {}};
  std::vector<std::vector<std::size_t>> constraints;
  std::vector<int> signs;
  for (const auto& w : r.observables) {
    const double e = (weyl(s, detail::pauli_vector(w)) * rho).trace().real();
    r.expectations.push_back(e);
    signs.push_back(e > 0 ? 1 : -1);
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < 3; ++i) vars.push_back(2 * i + (w[i] == 'Y'));
    constraints.push_back(vars);
  }
  r.consistent = count_assignments(6, constraints, signs);
  r.relaxed_consistent = count_assignments(6, {constraints.begin() + 1, constraints.end()}, {signs.begin() + 1, signs.end()});
  return r;
}

struct IsomorphismReport {
  std::size_t states = 0, distinct_quantum_states = 0;
  std::size_t transforms = 0, distinct_superoperators = 0;
  std::size_t measurements = 0, distinct_pvms = 0;
  bool bijective() const {
    return states == distinct_quantum_states && transforms == distinct_superoperators && measurements == distinct_pvms;
  }
};

// Cached quantum images of every enumerated object.
struct TheoryTables {
  PhaseSpace space;
  std::vector<EpistemicState<Zp>> states;
  std::vector<SymplecticAffine<Zp>> transforms;
  std::vector<SharpMeasurement<Zp>> measurements;
  std::vector<ComplexOperator> rhos;
  std::vector<ComplexOperator> unitaries;
  std::vector<std::vector<ComplexOperator>> pvms;

  static TheoryTables build(const PhaseSpace& s, std::size_t max_dim = kDefaultMaxDim) {
    TheoryTables t{s, enumerate_states(s), enumerate_affine_group(s), enumerate_measurements(s), {}, {}, {}};
    for (const auto& st : t.states) t.rhos.push_back(quadrature_state(st, max_dim).rho);
    for (const auto& tr : t.transforms) t.unitaries.push_back(clifford(tr, max_dim).u);
    for (const auto& m : t.measurements) t.pvms.push_back(quadrature_pvm(m, max_dim));
    return t;
  }
};

namespace detail {

template <class Eq>
std::size_t count_distinct(std::size_t n, Eq eq) {
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = eq(i, j);
    distinct += !seen;
  }
  return distinct;
}

}  // namespace detail

inline IsomorphismReport structural_isomorphism(const TheoryTables& t) {
  IsomorphismReport r{t.states.size(), 0, t.transforms.size(), 0, t.measurements.size(), 0};
  r.distinct_quantum_states =
      detail::count_distinct(t.rhos.size(), [&](auto i, auto j) { return approx_equal(t.rhos[i], t.rhos[j]); });
  r.distinct_superoperators = detail::count_distinct(
      t.unitaries.size(), [&](auto i, auto j) { return proportionality(t.unitaries[i], t.unitaries[j]).has_value(); });
  r.distinct_pvms = detail::count_distinct(t.pvms.size(), [&](auto i, auto j) {
    if (t.pvms[i].size() != t.pvms[j].size()) return false;
    for (const auto& e : t.pvms[i]) {
      bool found = false;
      for (const auto& f : t.pvms[j]) found = found || approx_equal(e, f);
      if (!found) return false;
    }
    return true;
  });
  return r;
}

struct TripleComparison {
  std::size_t state = 0, transform = 0, measurement = 0;
  Distribution epistricted;
  std::vector<double> quantum;
  double max_difference = 0;
};

// Triples in lexicographic (state, transform, measurement) order whose outcome
// distributions differ by more than tol; stops after `limit` hits.
inline std::vector<TripleComparison> differing_triples(const TheoryTables& t, std::size_t limit = 1,
                                                       double tol = 1e-9) {
  std::vector<TripleComparison> out;
  for (std::size_t i = 0; i < t.states.size(); ++i)
    for (std::size_t k = 0; k < t.transforms.size(); ++k) {
      const ComplexOperator rho = t.unitaries[k] * t.rhos[i] * t.unitaries[k].adjoint();
      const auto image = transform(t.states[i], t.transforms[k]);
      for (std::size_t j = 0; j < t.measurements.size(); ++j) {
        TripleComparison c{i, k, j, measure(image, t.measurements[j]), born(rho, t.pvms[j]), 0};
        for (std::size_t o = 0; o < c.quantum.size(); ++o)
          c.max_difference =
              std::max(c.max_difference, std::abs(c.quantum[o] - c.epistricted[o].probability.convert_to<double>()));
        if (c.max_difference > tol) {
          out.push_back(std::move(c));
          if (out.size() >= limit) return out;
        }
      }
    }
  return out;
}

struct InequivalenceWitness {
  std::optional<TheoryTables> tables;
  std::optional<TripleComparison> triple;
};

// First differing triple at n = 1, then n = 2.
inline InequivalenceWitness inequivalence_witness(std::int64_t d, std::size_t max_n = 2) {
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto tables = TheoryTables::build(PhaseSpace::prime(d, n));
    auto hits = differing_triples(tables, 1);
    if (!hits.empty()) return {std::move(tables), hits.front()};
  }
  return {};
}

}  // namespace epistrict
