#pragma once

// Discrete Wigner representation.
//
// Odd d: A(m) = d^-n sum_a chi(<a, m>) W(a). d = 2: tensor products of the
// single-qubit operators (I + (-1)^q Z + (-1)^p X + s (-1)^(q+p) Y) / 2, where
// s = +-1 selects the net of lines. Either way Tr A(m) = 1, sum_m A(m) = d^n I
// and Tr(A(m) A(m')) = d^n delta(m, m'). States and channels expand in the frame
// A / d^n, effects in the dual frame A.

#include "epistrict/quantum.hpp"

namespace epistrict {

struct QubitNet {
  int y_sign = 1;
};

struct PointOperatorBasis {
  PhaseSpace space;
  std::vector<ComplexOperator> ops;  // indexed by point_index
  double frame_factor() const { return 1.0 / static_cast<double>(hilbert_dim(space)); }
  const ComplexOperator& at(const Vec<Zp>& m) const { return ops[point_index(space, m)]; }
};

inline ComplexOperator qubit_point_operator(std::int64_t q, std::int64_t p, QubitNet net) {
  const auto x = shift(2, 1), z = epistrict::boost(2, 1);
  ComplexOperator y(2, 2);
  y << 0, Cplx(0, -1), Cplx(0, 1), 0;
  const double sq = q % 2 ? -1.0 : 1.0, sp = p % 2 ? -1.0 : 1.0;
  return 0.5 * (ComplexOperator::Identity(2, 2) + sq * z + sp * x + double(net.y_sign) * sq * sp * y);
}

inline ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b) {
  ComplexOperator r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

inline PointOperatorBasis point_operators(const PhaseSpace& s, QubitNet net = {}, std::size_t max_dim = kDefaultMaxDim) {
  check_dim(s, max_dim);
  if (std::abs(net.y_sign) != 1) throw std::invalid_argument("qubit net sign must be +1 or -1");
  PointOperatorBasis basis{s, {}};
  const std::size_t n = hilbert_dim(s);
  const auto pts = all_points(s);
  if (s.d() == 2) {
    for (const auto& m : pts) {
      ComplexOperator a = ComplexOperator::Identity(1, 1);
      for (std::size_t i = 0; i < s.n; ++i) a = kron(a, qubit_point_operator(m[2 * i].value(), m[2 * i + 1].value(), net));
      basis.ops.push_back(a);
    }
    return basis;
  }
  std::vector<Monomial> weyls;
  for (const auto& a : pts) weyls.push_back(weyl_monomial(s, a));
  for (const auto& m : pts) {
    ComplexOperator a = ComplexOperator::Zero(n, n);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Cplx c = chi(s.d(), symp_inner(s, pts[k], m).value());
      for (std::size_t x = 0; x < n; ++x) a(weyls[k].image[x], x) += c * weyls[k].phase[x];
    }
    basis.ops.push_back(a / static_cast<double>(n));
  }
  return basis;
}

namespace detail {

inline double real_part(Cplx z, const char* what) {
  if (std::abs(z.imag()) > 1e-9) throw std::logic_error(std::string(what) + ": Wigner value is not real");
  return z.real();
}

}  // namespace detail

// W_rho(m) = d^-n Tr(rho A(m))
inline std::vector<double> wigner_state(const PointOperatorBasis& b, const ComplexOperator& rho) {
  std::vector<double> w;
  for (const auto& a : b.ops) w.push_back(detail::real_part((rho * a).trace(), "state") * b.frame_factor());
  return w;
}

// W_Pi(m) = Tr(Pi A(m))
inline std::vector<double> wigner_effect(const PointOperatorBasis& b, const ComplexOperator& effect) {
  std::vector<double> w;
  for (const auto& a : b.ops) w.push_back(detail::real_part((effect * a).trace(), "effect"));
  return w;
}

// W_U(m | m') = d^-n Tr(A(m) U A(m') U^dagger); rows m, columns m'.
inline std::vector<std::vector<double>> wigner_channel(const PointOperatorBasis& b, const ComplexOperator& u) {
  std::vector<ComplexOperator> images;
  for (const auto& a : b.ops) images.push_back(u * a * u.adjoint());
  std::vector<std::vector<double>> w(b.ops.size(), std::vector<double>(b.ops.size()));
  for (std::size_t i = 0; i < b.ops.size(); ++i)
    for (std::size_t j = 0; j < b.ops.size(); ++j)
      w[i][j] = detail::real_part((b.ops[i] * images[j]).trace(), "channel") * b.frame_factor();
  return w;
}

// W_O(k | m) = Tr(Pi_k A(m)); one row per outcome.
inline std::vector<std::vector<double>> wigner_measurement(const PointOperatorBasis& b,
                                                           const std::vector<ComplexOperator>& pvm) {
  std::vector<std::vector<double>> w;
  for (const auto& e : pvm) w.push_back(wigner_effect(b, e));
  return w;
}

struct CovarianceReport {
  bool holds = true;
  double max_deviation = 0;
};

// U A(m) U^dagger against A(S m + a) for every m.
inline CovarianceReport verify_covariance(const PointOperatorBasis& b, const SymplecticAffine<Zp>& t,
                                          std::size_t max_dim = kDefaultMaxDim) {
  const auto u = clifford(t, max_dim).u;
  CovarianceReport r;
  for (const auto& m : all_points(b.space)) {
    const double dev = (u * b.at(m) * u.adjoint() - b.at(t.apply(m))).cwiseAbs().maxCoeff();
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  r.holds = r.max_deviation <= 1e-9;
  return r;
}

// Constant c with Tr(O O') = c sum_m W_O(m) W_O'(m) for two effect-frame functions.
inline double parseval_constant(const PointOperatorBasis& b) { return b.frame_factor(); }

inline double min_value(const std::vector<double>& w) { return *std::min_element(w.begin(), w.end()); }

struct NegativityWitness {
  double value;
  std::size_t index;
  bool negative(double threshold = -1e-12) const { return value < threshold; }
};

inline NegativityWitness most_negative(const std::vector<double>& w) {
  const auto it = std::min_element(w.begin(), w.end());
  return {*it, static_cast<std::size_t>(it - w.begin())};
}

// Sum of the absolute values of the negative entries.
inline double negativity(const std::vector<double>& w) {
  double s = 0;
  for (double x : w)
    if (x < 0) s -= x;
  return s;
}

}  // namespace epistrict
