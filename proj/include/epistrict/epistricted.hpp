#pragma once

// Epistemic states, sharp measurements and symplectic affine transformations
// of the epistemically restricted theory.
//
// A state is labelled by an isotropic quadrature subspace V (canonical echelon
// rows F) and the joint values c = F v. Its ontic support is {m : F m = c}.

#include "epistrict/symplectic.hpp"

namespace epistrict {

template <class T>
class EpistemicState {
 public:
  EpistemicState() = default;

  // V spanned by the rows of v_rows (any spanning set), valuation vector v.
  static EpistemicState make(const PhaseSpace& s, const Matrix<T>& v_rows, const Vec<T>& v) {
    check_quadratures(s, v_rows);
    if (v.size() != s.dim()) throw std::invalid_argument("valuation vector has wrong dimension");
    EpistemicState st;
    st.space_ = s;
    st.f_ = row_span(v_rows);
    st.c_ = st.f_ * v;
    return st;
  }

  // Values c are those of the canonical echelon rows of V.
  static EpistemicState from_values(const PhaseSpace& s, const Matrix<T>& v_rows, const Vec<T>& c) {
    check_quadratures(s, v_rows);
    EpistemicState st;
    st.space_ = s;
    st.f_ = row_span(v_rows);
    if (c.size() != st.f_.rows()) throw std::invalid_argument("expected one value per canonical quadrature");
    st.c_ = c;
    return st;
  }

  // State whose ontic support is the given affine subspace.
  static EpistemicState from_support(const PhaseSpace& s, const AffineSubspace<T>& support) {
    if (support.is_empty()) throw std::invalid_argument("empty support");
    EpistemicState st;
    st.space_ = s;
    st.f_ = kernel(support.basis());
    if (!is_isotropic(s, st.f_)) throw std::invalid_argument("support is not an epistemic state (V not isotropic)");
    st.c_ = st.f_ * support.offset();
    return st;
  }

  const PhaseSpace& space() const { return space_; }
  const Matrix<T>& quadratures() const { return f_; }
  const Vec<T>& values() const { return c_; }
  std::size_t rank() const { return f_.rows(); }
  bool is_pure() const { return rank() == space_.n; }

  AffineSubspace<T> support() const {
    if (f_.rows() == 0) return AffineSubspace<T>::linear(Matrix<T>::identity(space_.field, space_.dim()));
    return solve_affine(f_, c_);
  }

  // A valuation vector v with F v = c; lies in V whenever F F^T is invertible.
  Vec<T> valuation() const {
    if (f_.rows() == 0) return zero_vec<T>(space_.field, space_.dim());
    const Matrix<T> gram = f_ * f_.transpose();
    auto coeffs = solve_affine(gram, c_);
    if (coeffs.is_empty() || coeffs.dim() > 0) return support().offset();
    return f_.transpose() * coeffs.offset();
  }

  bool valuation_in_v() const {
    if (f_.rows() == 0) return true;
    return rank(f_ * f_.transpose()) == f_.rows();
  }

  bool operator==(const EpistemicState& o) const { return space_ == o.space_ && f_ == o.f_ && c_ == o.c_; }

  std::string to_string() const {
    std::string s = "V=" + f_.to_string() + " c=(";
    for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + field_traits<T>::str(c_[i]);
    return s + ")";
  }

 private:
  static void check_quadratures(const PhaseSpace& s, const Matrix<T>& v) {
    if (v.cols() != s.dim()) throw std::invalid_argument("quadrature rows have wrong dimension");
    if (!(v.field() == s.field)) throw std::invalid_argument("mixed field tags");
    if (auto bad = non_isotropic_pair(s, v))
      throw std::invalid_argument("quadratures " + std::to_string(bad->first) + " and " + std::to_string(bad->second) +
                                  " do not commute (symplectic product nonzero)");
  }

  static std::size_t rank(const Matrix<T>& m) { return epistrict::rank(m); }

  PhaseSpace space_;
  Matrix<T> f_;
  Vec<T> c_;
};

// Sharp measurement of the isotropic quadrature subspace spanned by the rows.
// Outcomes are labelled by the joint values of the canonical echelon rows.
template <class T>
class SharpMeasurement {
 public:
  SharpMeasurement() = default;
  SharpMeasurement(const PhaseSpace& s, const Matrix<T>& rows) : space_(s), f_(row_span(rows)) {
    if (rows.cols() != s.dim()) throw std::invalid_argument("measurement rows have wrong dimension");
    if (f_.rows() == 0) throw std::invalid_argument("measurement of the trivial subspace");
    if (auto bad = non_isotropic_pair(s, f_))
      throw std::invalid_argument("measured quadratures " + std::to_string(bad->first) + " and " +
                                  std::to_string(bad->second) + " do not commute");
  }
  const PhaseSpace& space() const { return space_; }
  const Matrix<T>& quadratures() const { return f_; }
  std::size_t rank() const { return f_.rows(); }
  bool operator==(const SharpMeasurement& o) const { return space_ == o.space_ && f_ == o.f_; }

 private:
  PhaseSpace space_;
  Matrix<T> f_;
};

struct Outcome {
  std::vector<std::int64_t> label;
  Rational probability;
  bool operator==(const Outcome&) const = default;
};
using Distribution = std::vector<Outcome>;

inline std::vector<std::vector<std::int64_t>> all_labels(std::int64_t d, std::size_t k) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> c(k, 0);
  while (true) {
    out.push_back(c);
    std::size_t t = k;
    while (t > 0) {
      if (++c[t - 1] < d) break;
      c[t - 1] = 0;
      --t;
    }
    if (t == 0) break;
  }
  return out;
}

// Pr(c) = |support & {F x = c}| / |support| for every label c, in lexicographic order.
inline Distribution measure_support(const AffineSubspace<Zp>& support, const Matrix<Zp>& f) {
  const FieldTag field = support.field();
  const BigInt total = support.cardinality().count;
  Distribution dist;
  for (const auto& label : all_labels(field.modulus, f.rows())) {
    auto cell = intersect_affine(support, solve_affine(f, make_vec<Zp>(field, label)));
    dist.push_back({label, Rational(cell.cardinality().count, total)});
  }
  return dist;
}

inline Distribution measure(const EpistemicState<Zp>& st, const SharpMeasurement<Zp>& m) {
  if (!(st.space() == m.space())) throw std::invalid_argument("state and measurement live on different spaces");
  return measure_support(st.support(), m.quadratures());
}

template <class T>
EpistemicState<T> transform(const EpistemicState<T>& st, const SymplecticAffine<T>& t) {
  if (!(st.space() == t.space)) throw std::invalid_argument("state and transformation live on different spaces");
  if (!is_symplectic(t.space, t.s)) throw std::invalid_argument("transformation matrix is not symplectic");
  return EpistemicState<T>::from_support(st.space(), st.support().image(t.s, t.a));
}

// Prepare, transform, measure. Both the Schroedinger and the Heisenberg route are
// evaluated and must agree.
inline Distribution scenario(const EpistemicState<Zp>& st, const SymplecticAffine<Zp>& t,
                             const SharpMeasurement<Zp>& m) {
  Distribution forward = measure(transform(st, t), m);
  const FieldTag field = st.space().field;
  const Matrix<Zp> pulled = m.quadratures() * t.s;
  const Vec<Zp> shift = m.quadratures() * t.a;
  const AffineSubspace<Zp> support = st.support();
  const BigInt total = support.cardinality().count;
  for (const auto& o : forward) {
    Vec<Zp> rhs = make_vec<Zp>(field, o.label);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= shift[i];
    auto cell = intersect_affine(support, solve_affine(pulled, rhs));
    if (Rational(cell.cardinality().count, total) != o.probability)
      throw std::logic_error("scenario: forward and pulled-back evaluations disagree");
  }
  return forward;
}

// Set of outcome labels with nonzero probability; works over any field.
template <class T>
AffineSubspace<T> possibilistic(const EpistemicState<T>& st, const SharpMeasurement<T>& m) {
  if (!(st.space() == m.space())) throw std::invalid_argument("state and measurement live on different spaces");
  return st.support().image(m.quadratures(), zero_vec<T>(st.space().field, m.rank()));
}

// State after a sharp measurement returned `label`: the measured quadratures take
// their observed values, quadratures of V commuting with all of V' keep theirs, and
// the rest are randomised.
template <class T>
EpistemicState<T> update(const EpistemicState<T>& st, const SharpMeasurement<T>& m, const Vec<T>& label) {
  const PhaseSpace& s = st.space();
  const AffineSubspace<T> support = st.support();
  const AffineSubspace<T> cell = solve_affine(m.quadratures(), label);
  if (intersect_affine(support, cell).is_empty()) throw std::invalid_argument("outcome has probability zero");
  const Matrix<T> kept =
      intersect_affine(AffineSubspace<T>::linear(st.quadratures()),
                       AffineSubspace<T>::linear(symplectic_complement(s, m.quadratures())))
          .basis();
  Matrix<T> rows = m.quadratures();
  Vec<T> rhs = label;
  const Vec<T> kept_values = kept * support.offset();
  for (std::size_t i = 0; i < kept.rows(); ++i) {
    rows.append_row(kept.row(i));
    rhs.push_back(kept_values[i]);
  }
  return EpistemicState<T>::from_support(s, solve_affine(rows, rhs));
}

// Every epistemic state, ordered by rank of V, then V, then values.
inline std::vector<EpistemicState<Zp>> enumerate_states(const PhaseSpace& s, std::size_t cap = 200000) {
  std::vector<EpistemicState<Zp>> out;
  for (std::size_t k = 0; k <= s.n; ++k)
    for (const auto& v : enumerate_isotropic(s, k, cap))
      for (const auto& c : all_labels(s.d(), k)) {
        out.push_back(EpistemicState<Zp>::from_values(s, v, make_vec<Zp>(s.field, c)));
        if (out.size() > cap) throw SizeCapExceeded("state enumeration exceeds cap " + std::to_string(cap));
      }
  return out;
}

inline std::vector<SharpMeasurement<Zp>> enumerate_measurements(const PhaseSpace& s, std::size_t cap = 200000) {
  std::vector<SharpMeasurement<Zp>> out;
  for (std::size_t k = 1; k <= s.n; ++k)
    for (const auto& v : enumerate_isotropic(s, k, cap)) out.emplace_back(s, v);
  return out;
}

// Product state on the joint space (system coordinates first).
template <class T>
EpistemicState<T> tensor(const EpistemicState<T>& a, const EpistemicState<T>& b) {
  const PhaseSpace joint(a.space().field, a.space().n + b.space().n);
  Matrix<T> rows(joint.field, 0, joint.dim());
  for (std::size_t i = 0; i < a.rank(); ++i) {
    Vec<T> r = a.quadratures().row(i);
    r.resize(joint.dim(), field_traits<T>::from_int(joint.field, 0));
    rows.append_row(r);
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    Vec<T> r = zero_vec<T>(joint.field, a.space().dim());
    auto br = b.quadratures().row(i);
    r.insert(r.end(), br.begin(), br.end());
    rows.append_row(r);
  }
  Vec<T> c = a.values();
  c.insert(c.end(), b.values().begin(), b.values().end());
  return EpistemicState<T>::from_values(joint, rows, c);
}

// Pads quadrature rows of the last `anc.n` systems with zeros on the first `sys_n` systems.
template <class T>
Matrix<T> embed_ancilla_rows(const PhaseSpace& anc, std::size_t sys_n, const Matrix<T>& rows) {
  Matrix<T> out(anc.field, 0, 2 * (sys_n + anc.n));
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    Vec<T> r = zero_vec<T>(anc.field, 2 * sys_n);
    auto ar = rows.row(i);
    r.insert(r.end(), ar.begin(), ar.end());
    out.append_row(r);
  }
  return out;
}

// Response kernel of an ontic point: rows[x][c] = probability of outcome labels[c] given system point x.
struct ResponseKernel {
  std::vector<std::vector<std::int64_t>> labels;
  std::vector<std::vector<Rational>> rows;
};

namespace detail {

inline AffineSubspace<Zp> point_times_support(const PhaseSpace& sys, const Vec<Zp>& x,
                                              const AffineSubspace<Zp>& anc_support) {
  const std::size_t n = sys.dim() + anc_support.ambient_dim();
  Vec<Zp> o = x;
  o.insert(o.end(), anc_support.offset().begin(), anc_support.offset().end());
  Matrix<Zp> dirs(sys.field, 0, n);
  for (std::size_t i = 0; i < anc_support.dim(); ++i) {
    Vec<Zp> r = zero_vec<Zp>(sys.field, sys.dim());
    auto b = anc_support.basis().row(i);
    r.insert(r.end(), b.begin(), b.end());
    dirs.append_row(r);
  }
  return AffineSubspace<Zp>::make(dirs, o);
}

}  // namespace detail

// Adjoin an ancilla in anc_state, apply the joint coupling, perform the joint sharp
// measurement and read off the effective measurement on the system.
inline ResponseKernel dilate_unsharp(const PhaseSpace& sys, const EpistemicState<Zp>& anc_state,
                                     const SymplecticAffine<Zp>& coupling, const SharpMeasurement<Zp>& meas) {
  const PhaseSpace joint(sys.field, sys.n + anc_state.space().n);
  if (!(coupling.space == joint) || !(meas.space() == joint))
    throw std::invalid_argument("coupling and measurement must act on system plus ancilla");
  ResponseKernel k;
  k.labels = all_labels(sys.d(), meas.rank());
  const auto anc_support = anc_state.support();
  for (const auto& x : all_points(sys)) {
    auto joint_support = detail::point_times_support(sys, x, anc_support).image(coupling.s, coupling.a);
    std::vector<Rational> row;
    for (const auto& o : measure_support(joint_support, meas.quadratures())) row.push_back(o.probability);
    k.rows.push_back(std::move(row));
  }
  return k;
}

// Transition kernel rows[x][x'] of the system after coupling to an ancilla and discarding it.
inline ResponseKernel dilate_irreversible(const PhaseSpace& sys, const EpistemicState<Zp>& anc_state,
                                          const SymplecticAffine<Zp>& coupling) {
  const PhaseSpace joint(sys.field, sys.n + anc_state.space().n);
  if (!(coupling.space == joint)) throw std::invalid_argument("coupling must act on system plus ancilla");
  ResponseKernel k;
  for (const auto& x : all_points(sys)) {
    std::vector<std::int64_t> lab;
    for (const auto& v : x) lab.push_back(v.value());
    k.labels.push_back(lab);
  }
  const auto anc_support = anc_state.support();
  const BigInt total = anc_support.cardinality().count;
  for (const auto& x : all_points(sys)) {
    auto pts = detail::point_times_support(sys, x, anc_support).image(coupling.s, coupling.a).points();
    std::vector<BigInt> counts(sys.num_points(), 0);
    for (const auto& p : pts) counts[point_index(sys, Vec<Zp>(p.begin(), p.begin() + sys.dim()))] += 1;
    std::vector<Rational> row;
    for (const auto& c : counts) row.push_back(Rational(c, total));
    k.rows.push_back(std::move(row));
  }
  return k;
}

}  // namespace epistrict
