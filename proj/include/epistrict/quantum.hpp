#pragma once

// Weyl operators, metaplectic and Clifford unitaries, quadrature projectors.
//
// Conventions: basis |x_1 ... x_n>, system 1 most significant. shift(q)|x> = |x-q>,
// boost(p) = diag chi(xp), X = shift(-1), Z = boost(1). The Weyl operator
// W(a) = prod_i h(p_i q_i) X^{q_i} Z^{p_i} displaces phase space by +a, with
// h(c) = chi(c / 2) for odd d and h(c) = i^c for d = 2.

#include "epistrict/epistricted.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace epistrict {

using Cplx = std::complex<double>;
using ComplexOperator = Eigen::MatrixXcd;

constexpr double kTolerance = 1e-10;
constexpr std::size_t kDefaultMaxDim = 128;

// Root of unity: exp(2 pi i c / d) for odd d, i^c (exponent mod 4) for d = 2.
inline Cplx chi(std::int64_t d, std::int64_t c) {
  const std::int64_t period = d == 2 ? 4 : d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(c, period)) / static_cast<double>(period);
  return std::polar(1.0, angle);
}

// Exponent of chi for the Weyl prefactor h(pq).
inline std::int64_t half_exponent(std::int64_t d, std::int64_t c) {
  return d == 2 ? mod(c, 4) : mod(c * inverse_mod(2, d), d);
}

inline std::size_t hilbert_dim(const PhaseSpace& s) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < s.n; ++i) n *= static_cast<std::size_t>(s.d());
  return n;
}

inline void check_dim(const PhaseSpace& s, std::size_t max_dim) {
  if (!s.field.is_prime_field()) throw std::invalid_argument("quantum layer needs a prime field");
  BigInt n = boost::multiprecision::pow(BigInt(s.d()), static_cast<unsigned>(s.n));
  if (n > max_dim)
    throw SizeCapExceeded("Hilbert space dimension " + n.str() + " exceeds cap " + std::to_string(max_dim));
}

inline ComplexOperator shift(std::int64_t d, std::int64_t q) {
  ComplexOperator m = ComplexOperator::Zero(d, d);
  for (std::int64_t x = 0; x < d; ++x) m(mod(x - q, d), x) = 1.0;
  return m;
}

inline ComplexOperator boost(std::int64_t d, std::int64_t p) {
  ComplexOperator m = ComplexOperator::Zero(d, d);
  for (std::int64_t x = 0; x < d; ++x) m(x, x) = chi(d, d == 2 ? 2 * x * p : x * p);
  return m;
}

// M|x> = phase[x] |image[x]>
struct Monomial {
  std::vector<std::size_t> image;
  std::vector<Cplx> phase;

  static Monomial identity(std::size_t n) {
    Monomial m{std::vector<std::size_t>(n), std::vector<Cplx>(n, 1.0)};
    for (std::size_t x = 0; x < n; ++x) m.image[x] = x;
    return m;
  }
  std::size_t dim() const { return image.size(); }

  // (*this) * o
  Monomial operator*(const Monomial& o) const {
    Monomial r{std::vector<std::size_t>(dim()), std::vector<Cplx>(dim())};
    for (std::size_t x = 0; x < dim(); ++x) {
      r.image[x] = image[o.image[x]];
      r.phase[x] = phase[o.image[x]] * o.phase[x];
    }
    return r;
  }
  Monomial adjoint() const {
    Monomial r{std::vector<std::size_t>(dim()), std::vector<Cplx>(dim())};
    for (std::size_t x = 0; x < dim(); ++x) {
      r.image[image[x]] = x;
      r.phase[image[x]] = std::conj(phase[x]);
    }
    return r;
  }
  ComplexOperator dense() const {
    ComplexOperator m = ComplexOperator::Zero(dim(), dim());
    for (std::size_t x = 0; x < dim(); ++x) m(image[x], x) = phase[x];
    return m;
  }
};

inline std::vector<std::int64_t> digits(const PhaseSpace& s, std::size_t idx) {
  std::vector<std::int64_t> x(s.n);
  for (std::size_t i = s.n; i-- > 0;) {
    x[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(s.d()));
    idx /= static_cast<std::size_t>(s.d());
  }
  return x;
}

inline std::size_t index_of(const PhaseSpace& s, const std::vector<std::int64_t>& x) {
  std::size_t idx = 0;
  for (auto v : x) idx = idx * static_cast<std::size_t>(s.d()) + static_cast<std::size_t>(v);
  return idx;
}

inline Monomial weyl_monomial(const PhaseSpace& s, const Vec<Zp>& a) {
  if (a.size() != s.dim()) throw std::invalid_argument("weyl: displacement has wrong dimension");
  const std::int64_t d = s.d();
  const std::size_t n = hilbert_dim(s);
  Monomial m{std::vector<std::size_t>(n), std::vector<Cplx>(n)};
  for (std::size_t idx = 0; idx < n; ++idx) {
    auto x = digits(s, idx);
    std::int64_t e = 0;  // exponent of chi
    for (std::size_t i = 0; i < s.n; ++i) {
      const std::int64_t q = a[2 * i].value(), p = a[2 * i + 1].value();
      e += half_exponent(d, p * q) + (d == 2 ? 2 * x[i] * p : x[i] * p);
      x[i] = mod(x[i] + q, d);
    }
    m.image[idx] = index_of(s, x);
    m.phase[idx] = chi(d, e);
  }
  return m;
}

inline ComplexOperator weyl(const PhaseSpace& s, const Vec<Zp>& a, std::size_t max_dim = kDefaultMaxDim) {
  check_dim(s, max_dim);
  return weyl_monomial(s, a).dense();
}

inline bool approx_equal(const ComplexOperator& a, const ComplexOperator& b, double tol = kTolerance) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

// Scalar c with a = c b, if one exists.
inline std::optional<Cplx> proportionality(const ComplexOperator& a, const ComplexOperator& b, double tol = kTolerance) {
  Eigen::Index bi = 0, bj = 0;
  if (b.cwiseAbs().maxCoeff(&bi, &bj) <= tol) return std::nullopt;
  const Cplx c = a(bi, bj) / b(bi, bj);
  if (!approx_equal(a, c * b, tol)) return std::nullopt;
  return c;
}

// Divide out the global phase so that the first nonzero entry (row-major) is real positive.
inline ComplexOperator phase_normalised(const ComplexOperator& u) {
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if (std::abs(u(i, j)) > 1e-9) return u * (std::conj(u(i, j)) / std::abs(u(i, j)));
  return u;
}

// Unitary V with V W(a) V^dagger = W(S a) up to phase (exactly on the unit vectors,
// and for every a when d is odd). Global phase fixed by phase_normalised.
inline ComplexOperator metaplectic(const PhaseSpace& s, const Matrix<Zp>& sm, std::size_t max_dim = kDefaultMaxDim) {
  check_dim(s, max_dim);
  if (!is_symplectic(s, sm)) throw std::invalid_argument("metaplectic: matrix is not symplectic");
  const std::size_t n = hilbert_dim(s);
  const std::size_t dim2 = s.dim();
  std::vector<Monomial> gen, img;
  for (std::size_t j = 0; j < dim2; ++j) {
    Vec<Zp> e = zero_vec<Zp>(s.field, dim2);
    e[j] = Zp(1, s.d());
    gen.push_back(weyl_monomial(s, e));
    img.push_back(weyl_monomial(s, sm.col(j)));
  }
  // phi(W(a)) = c_a prod_j W(S e_j)^{a_j}, where W(a) = c_a prod_j W(e_j)^{a_j}.
  std::vector<Monomial> weyls, images;
  for (const auto& a : all_points(s)) {
    Monomial p = Monomial::identity(n), q = Monomial::identity(n);
    for (std::size_t j = 0; j < dim2; ++j)
      for (std::int64_t k = 0; k < a[j].value(); ++k) {
        p = p * gen[j];
        q = q * img[j];
      }
    Monomial w = weyl_monomial(s, a);
    const Cplx c = w.phase[0] / p.phase[0];
    for (auto& ph : q.phase) ph *= c;
    weyls.push_back(std::move(w));
    images.push_back(std::move(q));
  }
  for (std::size_t b = 0; b < weyls.size(); ++b) {
    const Monomial y = weyls[b].adjoint();
    ComplexOperator v = ComplexOperator::Zero(n, n);
    for (std::size_t k = 0; k < weyls.size(); ++k) {
      const Monomial term = images[k] * y * weyls[k].adjoint();
      for (std::size_t x = 0; x < n; ++x) v(term.image[x], x) += term.phase[x];
    }
    const ComplexOperator vv = v * v.adjoint();
    const double norm = vv(0, 0).real();
    if (norm < 1e-6) continue;
    v /= std::sqrt(norm);
    if (!approx_equal(v * v.adjoint(), ComplexOperator::Identity(n, n), 1e-9))
      throw std::logic_error("metaplectic: twirl did not produce a unitary");
    v = phase_normalised(v);
    for (std::size_t j = 0; j < dim2; ++j)
      if (!approx_equal(v * gen[j].dense() * v.adjoint(), img[j].dense(), 1e-9))
        throw std::logic_error("metaplectic: covariance check failed");
    return v;
  }
  throw std::logic_error("metaplectic: no intertwiner found");
}

struct Clifford {
  SymplecticAffine<Zp> map;
  ComplexOperator u;
  ComplexOperator apply(const ComplexOperator& rho) const { return u * rho * u.adjoint(); }
};

// U(S, a) = W(a) V(S)
inline Clifford clifford(const SymplecticAffine<Zp>& t, std::size_t max_dim = kDefaultMaxDim) {
  return {t, weyl(t.space, t.a, max_dim) * metaplectic(t.space, t.s, max_dim)};
}

// |x><x| on the first system, identity elsewhere.
inline ComplexOperator position_projector(const PhaseSpace& s, std::int64_t x) {
  const std::size_t n = hilbert_dim(s);
  ComplexOperator p = ComplexOperator::Zero(n, n);
  for (std::size_t idx = 0; idx < n; ++idx)
    if (digits(s, idx)[0] == mod(x, s.d())) p(idx, idx) = 1.0;
  return p;
}

// Projectors onto f(m) = x for x = 0 .. d-1.
inline std::vector<ComplexOperator> quadrature_projectors(const PhaseSpace& s, const Vec<Zp>& f,
                                                          std::size_t max_dim = kDefaultMaxDim) {
  check_dim(s, max_dim);
  const Matrix<Zp> t = extend_to_symplectic(s, f);
  const Matrix<Zp> j = symplectic_form<Zp>(s);
  const Matrix<Zp> sm = j.transpose() * t * j;  // t^{-T}
  const ComplexOperator v = metaplectic(s, sm, max_dim);
  std::vector<ComplexOperator> out;
  for (std::int64_t x = 0; x < s.d(); ++x) out.push_back(v * position_projector(s, x) * v.adjoint());
  return out;
}

inline ComplexOperator quadrature_projector(const PhaseSpace& s, const Vec<Zp>& f, std::int64_t x,
                                            std::size_t max_dim = kDefaultMaxDim) {
  return quadrature_projectors(s, f, max_dim)[static_cast<std::size_t>(mod(x, s.d()))];
}

namespace detail {

inline std::vector<std::vector<ComplexOperator>> row_projectors(const PhaseSpace& s, const Matrix<Zp>& v_rows,
                                                                std::size_t max_dim) {
  check_dim(s, max_dim);
  if (auto bad = non_isotropic_pair(s, v_rows))
    throw std::invalid_argument("quadratures " + std::to_string(bad->first) + " and " + std::to_string(bad->second) +
                                " do not commute");
  std::vector<std::vector<ComplexOperator>> out;
  for (std::size_t i = 0; i < v_rows.rows(); ++i) out.push_back(quadrature_projectors(s, v_rows.row(i), max_dim));
  return out;
}

inline ComplexOperator product_for(const PhaseSpace& s, const std::vector<std::vector<ComplexOperator>>& rows,
                                   const Vec<Zp>& c) {
  const std::size_t n = hilbert_dim(s);
  ComplexOperator p = ComplexOperator::Identity(n, n);
  for (std::size_t i = 0; i < rows.size(); ++i) p = p * rows[i][static_cast<std::size_t>(c[i].value())];
  return p;
}

}  // namespace detail

// Joint projector for the given rows of V taking values c.
inline ComplexOperator joint_projector(const PhaseSpace& s, const Matrix<Zp>& v_rows, const Vec<Zp>& c,
                                       std::size_t max_dim = kDefaultMaxDim) {
  if (c.size() != v_rows.rows()) throw std::invalid_argument("expected one value per quadrature");
  return detail::product_for(s, detail::row_projectors(s, v_rows, max_dim), c);
}

struct QuadratureState {
  EpistemicState<Zp> label;
  ComplexOperator rho;
};

inline QuadratureState quadrature_state(const EpistemicState<Zp>& st, std::size_t max_dim = kDefaultMaxDim) {
  ComplexOperator p = joint_projector(st.space(), st.quadratures(), st.values(), max_dim);
  const double tr = p.trace().real();
  if (tr < 0.5) throw std::logic_error("quadrature state has zero trace");
  return {st, p / tr};
}

// Projective measurement {Pi_V(c)} in lexicographic label order.
inline std::vector<ComplexOperator> quadrature_pvm(const SharpMeasurement<Zp>& m, std::size_t max_dim = kDefaultMaxDim) {
  const auto rows = detail::row_projectors(m.space(), m.quadratures(), max_dim);
  std::vector<ComplexOperator> out;
  for (const auto& label : all_labels(m.space().d(), m.rank()))
    out.push_back(detail::product_for(m.space(), rows, make_vec<Zp>(m.space().field, label)));
  return out;
}

inline std::vector<double> born(const ComplexOperator& rho, const std::vector<ComplexOperator>& pvm) {
  std::vector<double> p;
  for (const auto& e : pvm) p.push_back((e * rho).trace().real());
  return p;
}

inline std::vector<double> quantum_scenario(const EpistemicState<Zp>& st, const SymplecticAffine<Zp>& t,
                                            const SharpMeasurement<Zp>& m, std::size_t max_dim = kDefaultMaxDim) {
  const auto rho = quadrature_state(st, max_dim).rho;
  return born(clifford(t, max_dim).apply(rho), quadrature_pvm(m, max_dim));
}

}  // namespace epistrict
