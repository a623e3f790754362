#pragma once

// Acceptance suites shared by the acceptance test binary and `epistrict accept`.

#include "epistrict/stabilizer.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace epistrict::acceptance {

struct Check {
  std::string name;
  bool pass = false;
  std::string expected;
  std::string actual;
  std::string tolerance;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

constexpr std::uint64_t kDefaultSeed = 20240611;

inline std::uint64_t seed() {
  if (const char* env = std::getenv("EPISTRICT_SEED")) return std::strtoull(env, nullptr, 10);
  return kDefaultSeed;
}

inline std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

inline std::string num(std::size_t x) { return std::to_string(x); }

inline Check exact(std::string name, std::size_t expected, std::size_t actual) {
  return {std::move(name), expected == actual, num(expected), num(actual), "exact"};
}

inline Check within(std::string name, double deviation, double tol, std::string expected = "0") {
  return {std::move(name), deviation <= tol, std::move(expected), num(deviation), num(tol)};
}

inline Check holds(std::string name, bool ok, std::string actual = {}) {
  return {std::move(name), ok, "true", actual.empty() ? (ok ? "true" : "false") : std::move(actual), "exact"};
}

namespace detail {

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline double max_abs(const ComplexOperator& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// mu(m) = 1/|support| on the support.
inline double state_identity_deviation(const PointOperatorBasis& b, const EpistemicState<Zp>& st,
                                       const ComplexOperator& rho) {
  const auto w = wigner_state(b, rho);
  const auto support = st.support();
  const double size = static_cast<double>(support.cardinality().count);
  double dev = 0;
  for (const auto& m : all_points(st.space()))
    dev = std::max(dev, std::abs(w[point_index(st.space(), m)] - (support.contains(m) ? 1.0 / size : 0.0)));
  return dev;
}

// Gamma(m | m') = delta(m - S m' - a)
inline double channel_identity_deviation(const PointOperatorBasis& b, const SymplecticAffine<Zp>& t,
                                         const ComplexOperator& u) {
  const auto w = wigner_channel(b, u);
  double dev = 0;
  for (const auto& mp : all_points(t.space)) {
    const std::size_t target = point_index(t.space, t.apply(mp)), col = point_index(t.space, mp);
    for (std::size_t m = 0; m < w.size(); ++m) dev = std::max(dev, std::abs(w[m][col] - (m == target ? 1.0 : 0.0)));
  }
  return dev;
}

// xi(k | m) = delta(F m = k)
inline double measurement_identity_deviation(const PointOperatorBasis& b, const SharpMeasurement<Zp>& meas,
                                             const std::vector<ComplexOperator>& pvm) {
  const auto w = wigner_measurement(b, pvm);
  const auto labels = all_labels(meas.space().d(), meas.rank());
  double dev = 0;
  for (const auto& m : all_points(meas.space())) {
    const Vec<Zp> value = meas.quadratures() * m;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const bool hit = value == make_vec<Zp>(meas.space().field, labels[k]);
      dev = std::max(dev, std::abs(w[k][point_index(meas.space(), m)] - (hit ? 1.0 : 0.0)));
    }
  }
  return dev;
}

inline double distribution_deviation(const Distribution& ep, const std::vector<double>& qu) {
  double dev = 0;
  for (std::size_t o = 0; o < qu.size(); ++o) dev = std::max(dev, std::abs(qu[o] - ep[o].probability.convert_to<double>()));
  return dev;
}

struct EquivalenceTally {
  std::size_t triples = 0, mismatches = 0;
  double born = 0, state_identity = 0, channel_identity = 0, measurement_identity = 0;
};

inline void tally_triple(EquivalenceTally& t, const EpistemicState<Zp>& st, const SymplecticAffine<Zp>& tr,
                         const SharpMeasurement<Zp>& m, const ComplexOperator& rho, const ComplexOperator& u,
                         const std::vector<ComplexOperator>& pvm) {
  const double dev = distribution_deviation(measure(transform(st, tr), m), born(u * rho * u.adjoint(), pvm));
  ++t.triples;
  t.mismatches += dev > 1e-9;
  t.born = std::max(t.born, dev);
}

// Exhaustive at n = 1 when the triple count allows it.
inline EquivalenceTally exhaustive_equivalence(const PhaseSpace& s) {
  EquivalenceTally t;
  const auto tables = TheoryTables::build(s);
  const auto b = point_operators(s);
  for (std::size_t i = 0; i < tables.states.size(); ++i) {
    t.state_identity = std::max(t.state_identity, state_identity_deviation(b, tables.states[i], tables.rhos[i]));
    for (std::size_t k = 0; k < tables.transforms.size(); ++k)
      for (std::size_t j = 0; j < tables.measurements.size(); ++j)
        tally_triple(t, tables.states[i], tables.transforms[k], tables.measurements[j], tables.rhos[i],
                     tables.unitaries[k], tables.pvms[j]);
  }
  for (std::size_t k = 0; k < tables.transforms.size(); ++k)
    t.channel_identity =
        std::max(t.channel_identity, channel_identity_deviation(b, tables.transforms[k], tables.unitaries[k]));
  for (std::size_t j = 0; j < tables.measurements.size(); ++j)
    t.measurement_identity =
        std::max(t.measurement_identity, measurement_identity_deviation(b, tables.measurements[j], tables.pvms[j]));
  return t;
}

// Uniform deterministic sample of (state, S, a, measurement) with all three identities
// checked on each sampled object.
inline EquivalenceTally sampled_equivalence(const PhaseSpace& s, std::size_t count, std::uint64_t seed_value) {
  EquivalenceTally t;
  std::mt19937_64 rng(seed_value);
  const auto states = enumerate_states(s);
  const auto group = enumerate_symplectic_group(s);
  const auto ms = enumerate_measurements(s);
  const auto pts = all_points(s);
  const auto b = point_operators(s);
  for (std::size_t r = 0; r < count; ++r) {
    const auto& st = states[pick(rng, states.size())];
    const SymplecticAffine<Zp> tr{s, group[pick(rng, group.size())], pts[pick(rng, pts.size())]};
    const auto& m = ms[pick(rng, ms.size())];
    const auto rho = quadrature_state(st).rho;
    const auto u = clifford(tr).u;
    const auto pvm = quadrature_pvm(m);
    tally_triple(t, st, tr, m, rho, u, pvm);
    t.state_identity = std::max(t.state_identity, state_identity_deviation(b, st, rho));
    t.channel_identity = std::max(t.channel_identity, channel_identity_deviation(b, tr, u));
    t.measurement_identity = std::max(t.measurement_identity, measurement_identity_deviation(b, m, pvm));
  }
  return t;
}

inline void add_tally(Criterion& c, const std::string& where, const EquivalenceTally& t) {
  c.checks.push_back(exact(where + ": differing triples out of " + num(t.triples), 0, t.mismatches));
  c.checks.push_back(within(where + ": max |Born - epistricted|", t.born, 1e-9));
  c.checks.push_back(within(where + ": W_rho = mu", t.state_identity, 1e-10));
  c.checks.push_back(within(where + ": W_U = Gamma", t.channel_identity, 1e-10));
  c.checks.push_back(within(where + ": W_O = xi", t.measurement_identity, 1e-10));
}

template <class F>
Criterion timed(int id, std::string title, F body) {
  Criterion c{id, std::move(title), {}, 0};
  const auto start = std::chrono::steady_clock::now();
  body(c);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

}  // namespace detail

inline Criterion enumeration_counts() {
  return detail::timed(1, "enumeration counts", [](Criterion& c) {
    for (std::int64_t d : {3, 2}) {
      const auto s = PhaseSpace::prime(d, 1);
      const auto states = enumerate_states(s);
      const auto pure = static_cast<std::size_t>(std::count_if(states.begin(), states.end(), [](const auto& st) { return st.is_pure(); }));
      const std::string tag = "d=" + std::to_string(d) + " n=1 ";
      c.checks.push_back(exact(tag + "pure states", d == 3 ? 12 : 6, pure));
      c.checks.push_back(exact(tag + "mixed states", 1, states.size() - pure));
      c.checks.push_back(exact(tag + "inequivalent quadratures", d == 3 ? 4 : 3, enumerate_measurements(s).size()));
    }
    const auto s = PhaseSpace::prime(2, 1);
    c.checks.push_back(exact("d=2 n=1 symplectic matrices", 6, enumerate_symplectic_group(s).size()));
    c.checks.push_back(exact("d=2 n=1 affine transformations", 24, enumerate_affine_group(s).size()));
  });
}

inline Criterion algebra() {
  return detail::timed(2, "symplectic and Weyl algebra", [](Criterion& c) {
    std::size_t transforms = 0, bad_transforms = 0;
    for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}}) {
      const auto s = PhaseSpace::prime(d, n);
      const auto j = symplectic_form<Zp>(s);
      for (const auto& m : enumerate_symplectic_group(s)) {
        ++transforms;
        bad_transforms += !(m.transpose() * j * m == j);
      }
      c.checks.push_back(holds("J^2 = -I at d=" + std::to_string(d) + " n=" + std::to_string(n),
                               j * j == -Matrix<Zp>::identity(s.field, s.dim())));
    }
    c.checks.push_back(exact("S^T J S != J among " + num(transforms) + " group elements", 0, bad_transforms));

    std::size_t skew = 0, invariance = 0, poisson = 0;
    for (std::int64_t d : {2, 3, 5}) {
      const auto s = PhaseSpace::prime(d, 1);
      const auto pts = all_points(s);
      const auto group = enumerate_symplectic_group(s);
      for (const auto& f : pts)
        for (const auto& g : pts) {
          skew += !(symp_inner(s, f, g) == -symp_inner(s, g, f));
          for (const auto& m : group) invariance += !(symp_inner(s, m * f, m * g) == symp_inner(s, f, g));
          std::vector<Zp> tf, tg;
          for (const auto& m : pts) {
            tf.push_back(dot(s.field, f, m));
            tg.push_back(dot(s.field, g, m));
          }
          for (const auto& v : poisson_bracket_fd(s, tf, tg)) poisson += !(v == symp_inner(s, f, g));
        }
    }
    c.checks.push_back(exact("skew-symmetry violations, d in {2,3,5}", 0, skew));
    c.checks.push_back(exact("symplectic invariance violations, d in {2,3,5}", 0, invariance));
    c.checks.push_back(exact("Poisson bracket != <f,g>, d in {2,3,5}", 0, poisson));

    const auto s = PhaseSpace::prime(3, 1);
    const auto pts = all_points(s);
    double product = 0;
    std::size_t commutation = 0;
    for (const auto& a : pts)
      for (const auto& b : pts) {
        const auto wa = weyl(s, a), wb = weyl(s, b);
        Vec<Zp> ab = a;
        for (std::size_t i = 0; i < ab.size(); ++i) ab[i] += b[i];
        const Cplx phase = chi(3, -half_exponent(3, symp_inner(s, a, b).value()));
        product = std::max(product, detail::max_abs(wa * wb - phase * weyl(s, ab)));
        const bool commute = approx_equal(wa * wb, wb * wa);
        commutation += commute != (symp_inner(s, a, b).value() == 0);
      }
    c.checks.push_back(within("Weyl product law, d=3 n=1", product, 1e-10));
    c.checks.push_back(exact("commutation != (<a,b> = 0), d=3 n=1", 0, commutation));
  });
}

inline Criterion equivalence(std::optional<std::int64_t> only_d = std::nullopt, std::uint64_t seed_value = seed()) {
  return detail::timed(3, "equivalence at odd d", [&](Criterion& c) {
    if (only_d) {
      const auto s1 = PhaseSpace::prime(*only_d, 1);
      if (s1.d() == 2) throw std::invalid_argument("the equivalence suite needs an odd prime d");
      const BigInt triples = BigInt(enumerate_states(s1).size()) * symplectic_group_order(1, s1.d()) *
                             static_cast<std::int64_t>(s1.num_points()) * enumerate_measurements(s1).size();
      if (triples <= 2000000)
        detail::add_tally(c, "d=" + std::to_string(*only_d) + " n=1 exhaustive", detail::exhaustive_equivalence(s1));
      else
        detail::add_tally(c, "d=" + std::to_string(*only_d) + " n=1 sample", detail::sampled_equivalence(s1, 200, seed_value));
      return;
    }
    detail::add_tally(c, "d=3 n=1 exhaustive", detail::exhaustive_equivalence(PhaseSpace::prime(3, 1)));
    detail::add_tally(c, "d=3 n=2 sample", detail::sampled_equivalence(PhaseSpace::prime(3, 2), 200, seed_value));
    detail::add_tally(c, "d=5 n=1 spot sample", detail::sampled_equivalence(PhaseSpace::prime(5, 1), 10, seed_value));
  });
}

inline Criterion wigner_structure() {
  return detail::timed(4, "Wigner point operators", [](Criterion& c) {
    const auto s = PhaseSpace::prime(3, 1);
    const auto b = point_operators(s);
    const auto id = ComplexOperator::Identity(3, 3);
    double trace = 0, herm = 0;
    ComplexOperator sum = ComplexOperator::Zero(3, 3);
    for (const auto& a : b.ops) {
      trace = std::max(trace, std::abs(a.trace() - Cplx(1.0)));
      herm = std::max(herm, detail::max_abs(a - a.adjoint()));
      sum += a;
    }
    c.checks.push_back(within("Tr A(m) = 1", trace, 1e-10));
    c.checks.push_back(within("A(m) Hermitian", herm, 1e-10));
    const Cplx scale = sum.trace() / 3.0;
    c.checks.push_back({"sum_m A(m) = identity", detail::max_abs(sum - id) <= 1e-10, "I",
                        num(scale.real()) + " I (deviation " + num(detail::max_abs(sum - id)) + ")", num(1e-10)});
    double orth = 0;
    for (std::size_t i = 0; i < b.ops.size(); ++i)
      for (std::size_t j = 0; j < b.ops.size(); ++j)
        orth = std::max(orth, std::abs((b.ops[i] * b.ops[j]).trace() - Cplx(i == j ? 3.0 : 0.0)));
    c.checks.push_back(within("Tr(A(m) A(m')) = 3 delta(m, m')", orth, 1e-10));

    std::size_t covariant = 0;
    double cov_dev = 0;
    const auto group = enumerate_affine_group(s);
    for (const auto& t : group) {
      const auto r = verify_covariance(b, t);
      covariant += r.holds;
      cov_dev = std::max(cov_dev, r.max_deviation);
    }
    c.checks.push_back(exact("covariant group elements (max deviation " + num(cov_dev) + ")", group.size(), covariant));

    double min_entry = std::numeric_limits<double>::infinity();
    std::size_t tables = 0;
    auto scan = [&](const std::vector<double>& w) {
      ++tables;
      min_entry = std::min(min_entry, min_value(w));
    };
    for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{3, 1}, {5, 1}, {3, 2}}) {
      const auto sp = PhaseSpace::prime(d, n);
      const auto basis = point_operators(sp);
      for (const auto& st : enumerate_states(sp)) scan(wigner_state(basis, quadrature_state(st).rho));
      for (const auto& m : enumerate_measurements(sp))
        for (const auto& row : wigner_measurement(basis, quadrature_pvm(m))) scan(row);
    }
    for (const auto& t : group)
      for (const auto& row : wigner_channel(b, clifford(t).u)) scan(row);
    c.checks.push_back({"min entry over " + num(tables) + " odd-d quadrature tables", min_entry >= -1e-10, ">= 0",
                        num(min_entry), num(1e-10)});
  });
}

inline Criterion stabilizer_bridge() {
  return detail::timed(5, "stabilizer bridge", [](Criterion& c) {
    for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{3, 1}, {3, 2}, {2, 1}, {2, 2}}) {
      const auto s = PhaseSpace::prime(d, n);
      const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
      std::size_t formula_failures = 0, round_trip_failures = 0;
      double worst = 0;
      std::string first;
      const auto states = enumerate_states(s);
      for (const auto& st : states) {
        const auto r = check_eigen_formula(st);
        worst = std::max(worst, r.max_deviation);
        if (r.first_failure) {
          if (first.empty()) first = " first " + st.to_string();
          ++formula_failures;
        }
        const auto g = stabilizer_of_quadrature(st);
        const auto rho = state_from_stabilizer(g);
        const bool ok = approx_equal(rho, quadrature_state(st).rho, 1e-10) && quadrature_from_stabilizer(g) == st &&
                        stabilizer_from_state(s, rho) == g;
        round_trip_failures += !ok;
      }
      c.checks.push_back({tag + ": states violating W(a) rho = chi(<v,a>) rho", formula_failures == 0, "0",
                          num(formula_failures) + "/" + num(states.size()) + " (max deviation " + num(worst) + ")" + first,
                          num(1e-10)});
      c.checks.push_back(exact(tag + ": round-trip failures", 0, round_trip_failures));
    }
  });
}

struct NegativeState {
  std::size_t state = 0;
  std::size_t point = 0;
  double value = 0;
};

// Exhaustive GHW scan of two-qubit quadrature states.
inline std::vector<NegativeState> qubit_negativity_scan(QubitNet net = {}) {
  const auto s = PhaseSpace::prime(2, 2);
  const auto b = point_operators(s, net);
  std::vector<NegativeState> out;
  const auto states = enumerate_states(s);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto w = most_negative(wigner_state(b, quadrature_state(states[i]).rho));
    if (w.negative()) out.push_back({i, w.index, w.value});
  }
  return out;
}

inline Criterion inequivalence() {
  return detail::timed(6, "inequivalence at d=2", [](Criterion& c) {
    const auto neg = qubit_negativity_scan();
    const auto s = PhaseSpace::prime(2, 2);
    std::string witness = num(neg.size()) + " states";
    if (!neg.empty())
      witness += "; first " + enumerate_states(s)[neg.front().state].to_string() + " at " +
                 vec_to_string(point_at(s, neg.front().point)) + " = " + num(neg.front().value);
    c.checks.push_back({"(i) two-qubit states with a GHW entry < -1e-12", !neg.empty(), ">= 1", witness, "-1e-12"});

    const auto mermin = mermin_square();
    c.checks.push_back(holds("(ii) Mermin contexts commute with scalar products",
                             mermin.contexts_commute && mermin.products_are_scalar));
    c.checks.push_back(exact("(ii) Mermin consistent assignments of 512", 0, mermin.consistent));
    c.checks.push_back({"(ii) Mermin relaxed control", mermin.relaxed_consistent > 0, "> 0", num(mermin.relaxed_consistent), "exact"});

    const auto ghz = ghz_test();
    c.checks.push_back(exact("(iii) GHZ consistent assignments of 64", 0, ghz.consistent));
    c.checks.push_back({"(iii) GHZ relaxed control", ghz.relaxed_consistent > 0, "> 0", num(ghz.relaxed_consistent), "exact"});

    const auto iso = structural_isomorphism(TheoryTables::build(PhaseSpace::prime(2, 1)));
    c.checks.push_back(holds("(iv) structural isomorphism at d=2 n=1 is bijective", iso.bijective()));
    const auto w = inequivalence_witness(2);
    std::string triple = "none";
    if (w.triple) {
      const auto& t = *w.tables;
      triple = "state " + t.states[w.triple->state].to_string() + ", S " + t.transforms[w.triple->transform].s.to_string() +
               " a " + vec_to_string(t.transforms[w.triple->transform].a) + ", measure " +
               t.measurements[w.triple->measurement].quadratures().to_string() + ", max difference " +
               num(w.triple->max_difference);
    }
    c.checks.push_back({"(iv) differing prepare/transform/measure triple", w.triple.has_value(), "exists", triple, "1e-9"});

    const auto qutrit = TheoryTables::build(PhaseSpace::prime(3, 1));
    c.checks.push_back(holds("(v) d=3 n=1 structural isomorphism is bijective", structural_isomorphism(qutrit).bijective()));
    c.checks.push_back(exact("(v) d=3 n=1 differing triples", 0,
                             differing_triples(qutrit, std::numeric_limits<std::size_t>::max()).size()));
  });
}

namespace ontic {

// Plain-integer reference: enumerate the support, push every point through
// m -> S m + a, count points per outcome.
using IVec = std::vector<std::int64_t>;

inline std::int64_t md(std::int64_t x, std::int64_t d) { return ((x % d) + d) % d; }

inline IVec ints(const Vec<Zp>& v) {
  IVec r;
  for (const auto& x : v) r.push_back(x.value());
  return r;
}

inline std::vector<IVec> rows(const Matrix<Zp>& m) {
  std::vector<IVec> r;
  for (std::size_t i = 0; i < m.rows(); ++i) r.push_back(ints(m.row(i)));
  return r;
}

inline IVec apply(const std::vector<IVec>& m, const IVec& x, std::int64_t d) {
  IVec r;
  for (const auto& row : m) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * x[j];
    r.push_back(md(s, d));
  }
  return r;
}

inline std::size_t index(const IVec& x, std::int64_t d) {
  std::size_t i = 0;
  for (auto v : x) i = i * static_cast<std::size_t>(d) + static_cast<std::size_t>(v);
  return i;
}

inline IVec point(std::size_t idx, std::int64_t d, std::size_t dim) {
  IVec x(dim);
  for (std::size_t j = dim; j-- > 0;) {
    x[j] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(d));
    idx /= static_cast<std::size_t>(d);
  }
  return x;
}

}  // namespace ontic

inline Criterion ontic_oracle() {
  return detail::timed(7, "epistricted engine vs ontic simulation", [](Criterion& c) {
    for (auto [d, n] : {std::pair<std::int64_t, std::size_t>{2, 1}, {3, 1}, {2, 2}}) {
      const auto s = PhaseSpace::prime(d, n);
      const std::size_t dim = s.dim(), np = s.num_points();
      if (np > 64) throw SizeCapExceeded("ontic oracle stores supports as 64-bit masks");
      const auto states = enumerate_states(s);
      const auto group = enumerate_affine_group(s);
      const auto ms = enumerate_measurements(s);

      // Engine route, cached by the index of the transformed state.
      std::map<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>, std::size_t> index_of;
      auto key = [](const EpistemicState<Zp>& st) {
        return std::make_pair(epistrict::detail::key_of(st.quadratures()), ontic::ints(st.values()));
      };
      for (std::size_t i = 0; i < states.size(); ++i) index_of[key(states[i])] = i;
      // Engine probabilities rescaled by the support size; -1 marks a non-integer count.
      std::vector<std::vector<std::vector<std::int64_t>>> measured(states.size());
      for (std::size_t i = 0; i < states.size(); ++i) {
        const BigInt size = states[i].support().cardinality().count;
        for (const auto& m : ms) {
          std::vector<std::int64_t> scaled;
          for (const auto& o : measure(states[i], m)) {
            const Rational x = o.probability * size;
            scaled.push_back(denominator(x) == 1 ? numerator(x).convert_to<std::int64_t>() : -1);
          }
          measured[i].push_back(scaled);
        }
      }

      // Oracle route: supports by scanning every point against the defining equations.
      std::vector<std::vector<ontic::IVec>> supports(states.size());
      for (std::size_t i = 0; i < states.size(); ++i) {
        const auto f = ontic::rows(states[i].quadratures());
        const auto v = ontic::ints(states[i].values());
        for (std::size_t p = 0; p < np; ++p) {
          auto x = ontic::point(p, d, dim);
          if (ontic::apply(f, x, d) == v) supports[i].push_back(x);
        }
      }
      std::vector<std::vector<std::int64_t>> labels_of(ms.size(), std::vector<std::int64_t>(np));
      for (std::size_t j = 0; j < ms.size(); ++j) {
        const auto g = ontic::rows(ms[j].quadratures());
        for (std::size_t p = 0; p < np; ++p)
          labels_of[j][p] = static_cast<std::int64_t>(ontic::index(ontic::apply(g, ontic::point(p, d, dim), d), d));
      }
      std::unordered_map<std::uint64_t, std::vector<std::vector<std::int64_t>>> counts_memo;

      std::size_t triples = 0, mismatches = 0;
      std::string first;
      for (const auto& t : group) {
        const auto sm = ontic::rows(t.s);
        const auto a = ontic::ints(t.a);
        for (std::size_t i = 0; i < states.size(); ++i) {
          const std::size_t image = index_of.at(key(transform(states[i], t)));
          std::uint64_t mask = 0;
          for (const auto& x : supports[i]) {
            auto y = ontic::apply(sm, x, d);
            for (std::size_t k = 0; k < dim; ++k) y[k] = ontic::md(y[k] + a[k], d);
            mask |= std::uint64_t{1} << ontic::index(y, d);
          }
          auto [it, fresh] = counts_memo.try_emplace(mask);
          if (fresh)
            for (std::size_t j = 0; j < ms.size(); ++j) {
              std::vector<std::int64_t> cnt(static_cast<std::size_t>(std::pow(d, ms[j].rank())), 0);
              for (std::size_t p = 0; p < np; ++p)
                if (mask >> p & 1) ++cnt[static_cast<std::size_t>(labels_of[j][p])];
              it->second.push_back(cnt);
            }
          // Both routes carry the same denominator |support|, so compare counts.
          for (std::size_t j = 0; j < ms.size(); ++j) {
            ++triples;
            if (measured[image][j] != it->second[j]) {
              ++mismatches;
              if (first.empty()) first = states[i].to_string();
            }
          }
        }
      }
      c.checks.push_back({"d=" + std::to_string(d) + " n=" + std::to_string(n) + ": mismatching triples", mismatches == 0,
                          "0", num(mismatches) + "/" + num(triples) + (first.empty() ? "" : " first " + first),
                          "exact rational"});
    }
  });
}

inline Criterion continuous_possibilistic(std::uint64_t seed_value = seed()) {
  return detail::timed(8, "continuous possibilistic engine", [&](Criterion& c) {
    using R = Rational;
    const PhaseSpace s{FieldTag::rational(), 2};
    const auto mat = [&](std::vector<std::vector<std::int64_t>> r) { return Matrix<R>::from_ints(s.field, r, 4); };
    const R c1(2, 3), c2(-5, 7);
    const auto epr = EpistemicState<R>::from_values(s, mat({{1, 0, -1, 0}, {0, 1, 0, 1}}), Vec<R>{c1, c2});

    // q1 is unconstrained by the EPR state.
    const auto q1 = possibilistic(epr, SharpMeasurement<R>(s, mat({{1, 0, 0, 0}})));
    c.checks.push_back(holds("q1 outcomes = all of Q", q1 == AffineSubspace<R>::linear(Matrix<R>::from_ints(s.field, {{1}})),
                             q1.to_string()));
    // (q1, q2) lies on q1 - q2 = c1: the line {(t, t - c1)}.
    const auto q12 = possibilistic(epr, SharpMeasurement<R>(s, mat({{1, 0, 0, 0}, {0, 0, 1, 0}})));
    const auto line = AffineSubspace<R>::make(Matrix<R>::from_ints(s.field, {{1, 1}}), Vec<R>{R(0), -c1});
    c.checks.push_back(holds("(q1, q2) outcomes = {(t, t - c1)}", q12 == line, q12.to_string()));
    // p1 + p2 is known.
    const auto psum = possibilistic(epr, SharpMeasurement<R>(s, mat({{0, 1, 0, 1}})));
    c.checks.push_back(holds("p1 + p2 outcomes = {c2}", psum == AffineSubspace<R>::point(s.field, Vec<R>{c2}), psum.to_string()));

    std::mt19937_64 rng(seed_value);
    auto rnd = [&] { return R(static_cast<std::int64_t>(rng() % 19) - 9, static_cast<std::int64_t>(rng() % 7) + 1); };
    std::size_t failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
      Matrix<R> v(s.field, 0, 4);
      Vec<R> f;
      do {
        f = {rnd(), rnd(), rnd(), rnd()};
      } while (is_zero_vec(f));
      v.append_row(f);
      if (trial % 2) {
        // A second commuting quadrature from the symplectic complement of f.
        const auto comp = symplectic_complement(s, v);
        Vec<R> g = zero_vec<R>(s.field, 4);
        for (std::size_t i = 0; i < comp.rows(); ++i) {
          const R coeff = rnd();
          for (std::size_t j = 0; j < 4; ++j) g[j] += coeff * comp(i, j);
        }
        if (rank(Matrix<R>::from_rows(s.field, {f, g}, 4)) == 2) v.append_row(g);
      }
      Vec<R> values;
      for (std::size_t i = 0; i < v.rows(); ++i) values.push_back(rnd());
      const auto st = EpistemicState<R>::from_values(s, v, values);
      for (std::size_t i = 0; i < st.quadratures().rows(); ++i) {
        const auto out = possibilistic(st, SharpMeasurement<R>(s, Matrix<R>::from_rows(s.field, {st.quadratures().row(i)}, 4)));
        failures += !(out.cardinality().count == 1 && !out.cardinality().infinite &&
                      out == AffineSubspace<R>::point(s.field, Vec<R>{st.values()[i]}));
      }
      failures += !(possibilistic(st, SharpMeasurement<R>(s, st.quadratures())) == AffineSubspace<R>::point(s.field, st.values()));
    }
    c.checks.push_back(exact("repeatability failures over 50 random rational states", 0, failures));
  });
}

inline std::vector<Criterion> run(const std::vector<int>& ids, std::optional<std::int64_t> only_d = std::nullopt) {
  std::vector<Criterion> out;
  for (int id : ids) switch (id) {
      case 1: out.push_back(enumeration_counts()); break;
      case 2: out.push_back(algebra()); break;
      case 3: out.push_back(equivalence(only_d)); break;
      case 4: out.push_back(wigner_structure()); break;
      case 5: out.push_back(stabilizer_bridge()); break;
      case 6: out.push_back(inequivalence()); break;
      case 7: out.push_back(ontic_oracle()); break;
      case 8: out.push_back(continuous_possibilistic()); break;
      default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
    }
  return out;
}

inline std::vector<int> suite(const std::string& name) {
  if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8};
  if (name == "algebra") return {1, 2, 7, 8};
  if (name == "equivalence") return {3, 4, 5};
  if (name == "inequivalence") return {6};
  throw std::invalid_argument("unknown suite '" + name + "'");
}

// One line per criterion.
inline std::string summary_line(const Criterion& c) {
  std::ostringstream os;
  os << (c.pass() ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " (" << std::fixed
     << std::setprecision(2) << c.seconds << " s)";
  std::size_t failed = 0;
  for (const auto& ch : c.checks)
    if (!ch.pass) {
      os << (failed++ ? "; " : " | failed: ") << ch.name << " expected " << ch.expected << " got " << ch.actual;
    }
  return os.str();
}

}  // namespace epistrict::acceptance
