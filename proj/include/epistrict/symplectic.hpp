#pragma once

// Phase space Z_d^{2n} (or Q^{2n}) with coordinates ordered (q1,p1,...,qn,pn),
// its symplectic form, isotropic subspaces and the affine symplectic group.

#include "epistrict/exactlin.hpp"

#include <functional>
#include <set>

namespace epistrict {

class SizeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhaseSpace {
  FieldTag field;
  std::size_t n = 1;

  PhaseSpace() = default;
  PhaseSpace(FieldTag f, std::size_t systems) : field(f), n(systems) {
    if (systems == 0) throw std::invalid_argument("phase space needs at least one degree of freedom");
  }
  static PhaseSpace prime(std::int64_t d, std::size_t systems) { return {FieldTag::prime(d), systems}; }

  std::size_t dim() const { return 2 * n; }
  std::int64_t d() const { return field.modulus; }
  std::size_t num_points() const {
    if (!field.is_prime_field()) throw std::invalid_argument("num_points: infinite phase space");
    std::size_t c = 1;
    for (std::size_t i = 0; i < dim(); ++i) c *= static_cast<std::size_t>(field.modulus);
    return c;
  }
  bool operator==(const PhaseSpace&) const = default;
};

// Lexicographic point index, first coordinate most significant.
inline std::size_t point_index(const PhaseSpace& s, const Vec<Zp>& m) {
  std::size_t idx = 0;
  for (const auto& x : m) idx = idx * static_cast<std::size_t>(s.d()) + static_cast<std::size_t>(x.value());
  return idx;
}

inline Vec<Zp> point_at(const PhaseSpace& s, std::size_t idx) {
  Vec<Zp> m(s.dim());
  for (std::size_t j = s.dim(); j-- > 0;) {
    m[j] = Zp(static_cast<std::int64_t>(idx % static_cast<std::size_t>(s.d())), s.d());
    idx /= static_cast<std::size_t>(s.d());
  }
  return m;
}

inline std::vector<Vec<Zp>> all_points(const PhaseSpace& s) {
  std::vector<Vec<Zp>> pts;
  for (std::size_t i = 0; i < s.num_points(); ++i) pts.push_back(point_at(s, i));
  return pts;
}

template <class T>
Matrix<T> symplectic_form(const PhaseSpace& s) {
  Matrix<T> j(s.field, s.dim(), s.dim());
  for (std::size_t i = 0; i < s.n; ++i) {
    j(2 * i, 2 * i + 1) = field_traits<T>::from_int(s.field, 1);
    j(2 * i + 1, 2 * i) = field_traits<T>::from_int(s.field, -1);
  }
  return j;
}

// <f,g> = f^T J g
template <class T>
T symp_inner(const PhaseSpace& s, const Vec<T>& f, const Vec<T>& g) {
  if (f.size() != s.dim() || g.size() != s.dim()) throw std::invalid_argument("symp_inner: dimension mismatch");
  T r = field_traits<T>::from_int(s.field, 0);
  for (std::size_t i = 0; i < s.n; ++i) r += f[2 * i] * g[2 * i + 1] - f[2 * i + 1] * g[2 * i];
  return r;
}

template <class T>
Vec<T> apply_j(const PhaseSpace& s, const Vec<T>& v) {
  return symplectic_form<T>(s) * v;
}

// Finite-difference Poisson bracket of two functions tabulated on all points.
inline std::vector<Zp> poisson_bracket_fd(const PhaseSpace& s, const std::vector<Zp>& f, const std::vector<Zp>& g) {
  const std::size_t np = s.num_points();
  if (f.size() != np || g.size() != np) throw std::invalid_argument("poisson_bracket_fd: table size mismatch");
  std::vector<Zp> out(np, Zp(0, s.d()));
  for (std::size_t idx = 0; idx < np; ++idx) {
    Vec<Zp> m = point_at(s, idx);
    Zp acc(0, s.d());
    for (std::size_t i = 0; i < s.n; ++i) {
      Vec<Zp> mq = m, mp = m;
      mq[2 * i] += Zp(1, s.d());
      mp[2 * i + 1] += Zp(1, s.d());
      const std::size_t iq = point_index(s, mq), ip = point_index(s, mp);
      acc += (f[iq] - f[idx]) * (g[ip] - g[idx]) - (f[ip] - f[idx]) * (g[iq] - g[idx]);
    }
    out[idx] = acc;
  }
  return out;
}

// First pair of rows (i, j) of v with nonzero symplectic product, if any.
template <class T>
std::optional<std::pair<std::size_t, std::size_t>> non_isotropic_pair(const PhaseSpace& s, const Matrix<T>& v) {
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = i + 1; j < v.rows(); ++j)
      if (!field_traits<T>::is_zero(symp_inner(s, v.row(i), v.row(j)))) return std::make_pair(i, j);
  return std::nullopt;
}

template <class T>
bool is_isotropic(const PhaseSpace& s, const Matrix<T>& v) {
  return !non_isotropic_pair(s, v).has_value();
}

template <class T>
bool is_isotropic(const PhaseSpace& s, const AffineSubspace<T>& v) {
  if (v.is_empty() || !is_zero_vec(v.offset())) return false;
  return is_isotropic(s, v.basis());
}

template <class T>
bool is_lagrangian(const PhaseSpace& s, const Matrix<T>& v) {
  return is_isotropic(s, v) && rank(v) == s.n;
}

// V-perp under the Euclidean dot product.
template <class T>
Matrix<T> euclidean_complement(const Matrix<T>& v) {
  return kernel(v);
}

// V^C = {m : <v, m> = 0 for all v in V}.
template <class T>
Matrix<T> symplectic_complement(const PhaseSpace& s, const Matrix<T>& v) {
  return kernel(v * symplectic_form<T>(s));
}

// span{J v : v in V}
template <class T>
Matrix<T> j_image(const PhaseSpace& s, const Matrix<T>& v) {
  return row_span(v * symplectic_form<T>(s).transpose());
}

template <class T>
bool is_symplectic(const PhaseSpace& s, const Matrix<T>& m) {
  if (m.rows() != s.dim() || m.cols() != s.dim()) return false;
  const Matrix<T> j = symplectic_form<T>(s);
  return m.transpose() * j * m == j;
}

// (q, p) -> (q, -p) on every degree of freedom.
template <class T>
Matrix<T> time_reversal(const PhaseSpace& s) {
  Matrix<T> m = Matrix<T>::identity(s.field, s.dim());
  for (std::size_t i = 0; i < s.n; ++i) m(2 * i + 1, 2 * i + 1) = field_traits<T>::from_int(s.field, -1);
  return m;
}

// Symplectic S with S q1 = f. Partners are the lexicographically least admissible vectors.
template <class T>
Matrix<T> extend_to_symplectic(const PhaseSpace& s, const Vec<T>& f) {
  if (f.size() != s.dim()) throw std::invalid_argument("extend_to_symplectic: dimension mismatch");
  if (is_zero_vec(f)) throw std::invalid_argument("extend_to_symplectic: zero vector");
  const Matrix<T> jt = symplectic_form<T>(s);
  Matrix<T> constraints(s.field, 0, s.dim());  // rows u^T J for the vectors chosen so far
  std::vector<Vec<T>> cols;
  Vec<T> u = f;
  for (std::size_t k = 0; k < s.n; ++k) {
    if (k > 0) {
      Matrix<T> w = kernel(constraints);
      u = w.row(w.rows() - 1);
    }
    const Vec<T> uj = jt.transpose() * u;  // row u^T J as a vector
    Matrix<T> a = constraints;
    Vec<T> b = zero_vec<T>(s.field, constraints.rows());
    a.append_row(uj);
    b.push_back(field_traits<T>::from_int(s.field, 1));
    auto sol = solve_affine(a, b);
    if (sol.is_empty()) throw std::logic_error("extend_to_symplectic: no partner");
    const Vec<T> g = sol.offset();
    cols.push_back(u);
    cols.push_back(g);
    constraints.append_row(uj);
    constraints.append_row(jt.transpose() * g);
  }
  Matrix<T> m(s.field, s.dim(), s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j)
    for (std::size_t i = 0; i < s.dim(); ++i) m(i, j) = cols[j][i];
  return m;
}

// m -> S m + a
template <class T>
struct SymplecticAffine {
  PhaseSpace space;
  Matrix<T> s;
  Vec<T> a;

  static SymplecticAffine identity(const PhaseSpace& sp) {
    return {sp, Matrix<T>::identity(sp.field, sp.dim()), zero_vec<T>(sp.field, sp.dim())};
  }
  static SymplecticAffine make(const PhaseSpace& sp, const Matrix<T>& m, const Vec<T>& shift) {
    if (!is_symplectic(sp, m)) throw std::invalid_argument("matrix is not symplectic");
    if (shift.size() != sp.dim()) throw std::invalid_argument("displacement has wrong dimension");
    return {sp, m, shift};
  }

  Vec<T> apply(const Vec<T>& m) const {
    Vec<T> r = s * m;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a[i];
    return r;
  }

  // (*this) after o
  SymplecticAffine compose(const SymplecticAffine& o) const { return {space, s * o.s, apply(o.a)}; }

  SymplecticAffine inverse() const {
    const Matrix<T> j = symplectic_form<T>(space);
    const Matrix<T> inv = j.transpose() * s.transpose() * j;
    Vec<T> shift = inv * a;
    for (auto& x : shift) x = -x;
    return {space, inv, shift};
  }

  bool operator==(const SymplecticAffine& o) const { return s == o.s && a == o.a; }
};

inline BigInt symplectic_group_order(std::size_t n, std::int64_t d) {
  BigInt order = boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(n * n));
  for (std::size_t i = 1; i <= n; ++i) order *= boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(2 * i)) - 1;
  return order;
}

inline BigInt lagrangian_count(std::size_t n, std::int64_t d) {
  BigInt c = 1;
  for (std::size_t i = 1; i <= n; ++i) c *= boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(i)) + 1;
  return c;
}

namespace detail {

inline std::vector<std::int64_t> key_of(const Matrix<Zp>& m) {
  std::vector<std::int64_t> k;
  k.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) k.push_back(m(i, j).value());
  return k;
}

inline Matrix<Zp> matrix_of(const PhaseSpace& s, const std::vector<std::int64_t>& k) {
  Matrix<Zp> m(s.field, s.dim(), s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) m(i, j) = Zp(k[i * s.dim() + j], s.d());
  return m;
}

}  // namespace detail

// Transvection x -> x + <u, x> u.
inline Matrix<Zp> transvection(const PhaseSpace& s, const Vec<Zp>& u) {
  Matrix<Zp> m = Matrix<Zp>::identity(s.field, s.dim());
  const Vec<Zp> uj = symplectic_form<Zp>(s).transpose() * u;
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) m(i, j) += u[i] * uj[j];
  return m;
}

// All of Sp(2n, Z_d), sorted by entries. Throws SizeCapExceeded past the cap.
inline std::vector<Matrix<Zp>> enumerate_symplectic_group(const PhaseSpace& s, std::size_t cap = 100000) {
  if (!s.field.is_prime_field()) throw std::invalid_argument("group enumeration needs a prime field");
  const BigInt order = symplectic_group_order(s.n, s.d());
  if (order > cap)
    throw SizeCapExceeded("|Sp(" + std::to_string(s.dim()) + ", Z_" + std::to_string(s.d()) + ")| = " +
                          order.str() + " exceeds cap " + std::to_string(cap));
  std::vector<Matrix<Zp>> gens;
  for (std::size_t mask = 1; mask < (std::size_t{1} << s.dim()); ++mask) {
    Vec<Zp> u = zero_vec<Zp>(s.field, s.dim());
    for (std::size_t j = 0; j < s.dim(); ++j)
      if (mask >> j & 1) u[j] = Zp(1, s.d());
    gens.push_back(transvection(s, u));
  }
  std::set<std::vector<std::int64_t>> seen;
  std::vector<Matrix<Zp>> frontier{Matrix<Zp>::identity(s.field, s.dim())};
  seen.insert(detail::key_of(frontier.front()));
  while (!frontier.empty()) {
    std::vector<Matrix<Zp>> next;
    for (const auto& m : frontier)
      for (const auto& g : gens) {
        Matrix<Zp> p = g * m;
        if (seen.insert(detail::key_of(p)).second) next.push_back(std::move(p));
      }
    frontier = std::move(next);
  }
  std::vector<Matrix<Zp>> out;
  out.reserve(seen.size());
  for (const auto& k : seen) out.push_back(detail::matrix_of(s, k));
  return out;
}

// Every (S, a) with S symplectic and a a displacement.
inline std::vector<SymplecticAffine<Zp>> enumerate_affine_group(const PhaseSpace& s, std::size_t cap = 1000000) {
  const BigInt order = symplectic_group_order(s.n, s.d()) * s.num_points();
  if (order > cap)
    throw SizeCapExceeded("affine symplectic group of order " + order.str() + " exceeds cap " + std::to_string(cap));
  auto group = enumerate_symplectic_group(s, cap);
  auto pts = all_points(s);
  std::vector<SymplecticAffine<Zp>> out;
  out.reserve(group.size() * pts.size());
  for (const auto& m : group)
    for (const auto& a : pts) out.push_back({s, m, a});
  return out;
}

// All rank-k subspaces of F^dim as reduced echelon bases, in lexicographic order of pivots then entries.
inline void for_each_subspace(FieldTag f, std::size_t dim, std::size_t k,
                              const std::function<void(const Matrix<Zp>&)>& visit) {
  const std::int64_t d = f.modulus;
  std::vector<std::size_t> piv(k);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t i, std::size_t start) {
    if (i == k) {
      std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, col)
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = piv[r] + 1; c < dim; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
      std::vector<std::int64_t> vals(free.size(), 0);
      while (true) {
        Matrix<Zp> m(f, k, dim);
        for (std::size_t r = 0; r < k; ++r) m(r, piv[r]) = Zp(1, d);
        for (std::size_t t = 0; t < free.size(); ++t) m(free[t].first, free[t].second) = Zp(vals[t], d);
        visit(m);
        std::size_t t = free.size();
        while (t > 0) {
          if (++vals[t - 1] < d) break;
          vals[t - 1] = 0;
          --t;
        }
        if (t == 0) break;
      }
      return;
    }
    for (std::size_t c = start; c + (k - i) <= dim; ++c) {
      piv[i] = c;
      choose(i + 1, c + 1);
    }
  };
  choose(0, 0);
}

// Isotropic subspaces of the given rank (rank 0 yields the trivial subspace).
inline std::vector<Matrix<Zp>> enumerate_isotropic(const PhaseSpace& s, std::size_t k, std::size_t cap = 200000) {
  if (!s.field.is_prime_field()) throw std::invalid_argument("subspace enumeration needs a prime field");
  if (k > s.n) return {};
  BigInt total = 1;  // Gaussian binomial bound on the number of candidates
  for (std::size_t i = 0; i < k; ++i)
    total = total * (boost::multiprecision::pow(BigInt(s.d()), static_cast<unsigned>(s.dim() - i)) - 1) /
            (boost::multiprecision::pow(BigInt(s.d()), static_cast<unsigned>(i + 1)) - 1);
  if (total > cap)
    throw SizeCapExceeded("subspace enumeration of " + total.str() + " candidates exceeds cap " + std::to_string(cap));
  std::vector<Matrix<Zp>> out;
  for_each_subspace(s.field, s.dim(), k, [&](const Matrix<Zp>& m) {
    if (is_isotropic(s, m)) out.push_back(m);
  });
  return out;
}

}  // namespace epistrict
