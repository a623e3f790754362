#pragma once

// Exact linear algebra over a prime field Z_d or over the rationals.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epistrict {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_prime(std::int64_t d) {
  if (d < 2) return false;
  for (std::int64_t k = 2; k * k <= d; ++k)
    if (d % k == 0) return false;
  return true;
}

inline std::int64_t mod(std::int64_t x, std::int64_t d) {
  std::int64_t r = x % d;
  return r < 0 ? r + d : r;
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t d) {
  std::int64_t t = 0, new_t = 1, r = d, new_r = mod(a, d);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw std::domain_error("element is not invertible");
  return mod(t, d);
}

// modulus == 0 denotes the rationals.
struct FieldTag {
  std::int64_t modulus = 0;

  static FieldTag prime(std::int64_t d) {
    if (!is_prime(d)) throw std::invalid_argument("modulus " + std::to_string(d) + " is not prime");
    return FieldTag{d};
  }
  static FieldTag rational() { return FieldTag{0}; }

  bool is_prime_field() const { return modulus != 0; }
  bool operator==(const FieldTag&) const = default;

  std::string to_string() const { return is_prime_field() ? "Z_" + std::to_string(modulus) : "Q"; }
};

// Element of Z_d. Carries its modulus so that mixing fields is caught.
class Zp {
 public:
  Zp() = default;
  Zp(std::int64_t value, std::int64_t d) : v_(mod(value, d)), d_(d) {}

  std::int64_t value() const { return v_; }
  std::int64_t modulus() const { return d_; }

  Zp operator+(const Zp& o) const { check(o); return Zp(v_ + o.v_, d_); }
  Zp operator-(const Zp& o) const { check(o); return Zp(v_ - o.v_, d_); }
  Zp operator*(const Zp& o) const { check(o); return Zp(v_ * o.v_, d_); }
  Zp operator/(const Zp& o) const { check(o); return Zp(v_ * inverse_mod(o.v_, d_), d_); }
  Zp operator-() const { return Zp(-v_, d_); }
  Zp& operator+=(const Zp& o) { return *this = *this + o; }
  Zp& operator-=(const Zp& o) { return *this = *this - o; }
  Zp& operator*=(const Zp& o) { return *this = *this * o; }
  bool operator==(const Zp& o) const { return v_ == o.v_ && d_ == o.d_; }
  auto operator<=>(const Zp& o) const { return v_ <=> o.v_; }

 private:
  void check(const Zp& o) const {
    if (d_ != o.d_) throw std::invalid_argument("mixed field tags: Z_" + std::to_string(d_) + " vs Z_" + std::to_string(o.d_));
  }
  std::int64_t v_ = 0;
  std::int64_t d_ = 0;
};

template <class T>
struct field_traits;

template <>
struct field_traits<Zp> {
  static Zp from_int(FieldTag f, std::int64_t x) {
    if (!f.is_prime_field()) throw std::invalid_argument("Zp element requested for the rational field");
    return Zp(x, f.modulus);
  }
  static bool is_zero(const Zp& x) { return x.value() == 0; }
  static FieldTag tag_of(const Zp& x) { return FieldTag{x.modulus()}; }
  static std::string str(const Zp& x) { return std::to_string(x.value()); }
};

template <>
struct field_traits<Rational> {
  static Rational from_int(FieldTag f, std::int64_t x) {
    if (f.is_prime_field()) throw std::invalid_argument("rational element requested for a prime field");
    return Rational(x);
  }
  static bool is_zero(const Rational& x) { return x == 0; }
  static FieldTag tag_of(const Rational&) { return FieldTag::rational(); }
  static std::string str(const Rational& x) {
    std::ostringstream os;
    os << numerator(x) << "/" << denominator(x);
    return os.str();
  }
};

template <class T>
using Vec = std::vector<T>;

template <class T>
Vec<T> make_vec(FieldTag f, const std::vector<std::int64_t>& xs) {
  Vec<T> v;
  v.reserve(xs.size());
  for (auto x : xs) v.push_back(field_traits<T>::from_int(f, x));
  return v;
}

template <class T>
Vec<T> zero_vec(FieldTag f, std::size_t n) {
  return Vec<T>(n, field_traits<T>::from_int(f, 0));
}

template <class T>
T dot(FieldTag f, const Vec<T>& a, const Vec<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  T s = field_traits<T>::from_int(f, 0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
bool is_zero_vec(const Vec<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return field_traits<T>::is_zero(x); });
}

template <class T>
std::string vec_to_string(const Vec<T>& v) {
  std::string s = "(";
  for (std::size_t j = 0; j < v.size(); ++j) s += (j ? "," : "") + field_traits<T>::str(v[j]);
  return s + ")";
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldTag f, std::size_t rows, std::size_t cols)
      : f_(f), rows_(rows), cols_(cols), data_(rows * cols, field_traits<T>::from_int(f, 0)) {}

  static Matrix from_ints(FieldTag f, const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols = 0) {
    Matrix m(f, rows.size(), rows.empty() ? cols : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = field_traits<T>::from_int(f, rows[i][j]);
    }
    return m;
  }

  static Matrix from_rows(FieldTag f, const std::vector<Vec<T>>& rows, std::size_t cols) {
    Matrix m(f, 0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  static Matrix identity(FieldTag f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field_traits<T>::from_int(f, 1);
    return m;
  }

  FieldTag field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<T> row(std::size_t i) const { return Vec<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vec<T> col(std::size_t j) const {
    Vec<T> c;
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  void append_row(const Vec<T>& r) {
    if (r.size() != cols_) throw std::invalid_argument("append_row: dimension mismatch");
    for (const auto& x : r)
      if (!(field_traits<T>::tag_of(x) == f_)) throw std::invalid_argument("mixed field tags in matrix");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(f_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    if (!(f_ == o.f_)) throw std::invalid_argument("mixed field tags in matrix product");
    Matrix p(f_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (field_traits<T>::is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  Vec<T> operator*(const Vec<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector product: dimension mismatch");
    Vec<T> r = zero_vec<T>(f_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix operator-() const {
    Matrix m = *this;
    for (auto& x : m.data_) x = -x;
    return m;
  }

  bool operator==(const Matrix& o) const {
    return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + field_traits<T>::str((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  FieldTag f_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
struct RrefResult {
  Matrix<T> echelon;  // nonzero rows only
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

template <class T>
RrefResult<T> rref(const Matrix<T>& input) {
  Matrix<T> m = input;
  const FieldTag f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && field_traits<T>::is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const T inv = field_traits<T>::from_int(f, 1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = m(r, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || field_traits<T>::is_zero(m(i, c))) continue;
      const T factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  RrefResult<T> out{Matrix<T>(f, 0, m.cols()), r, pivots};
  for (std::size_t i = 0; i < r; ++i) out.echelon.append_row(m.row(i));
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).rank;
}

// Basis (rows, reduced echelon) of {x : m x = 0}.
template <class T>
Matrix<T> kernel(const Matrix<T>& m) {
  const FieldTag f = m.field();
  auto r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  Matrix<T> basis(f, 0, m.cols());
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<T> v = zero_vec<T>(f, m.cols());
    v[free] = field_traits<T>::from_int(f, 1);
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.echelon(i, free);
    basis.append_row(v);
  }
  return rref(basis).echelon;
}

template <class T>
Matrix<T> row_span(const Matrix<T>& m) {
  return rref(m).echelon;
}

struct Cardinality {
  bool infinite = false;
  BigInt count = 0;
  bool operator==(const Cardinality&) const = default;
};

// Affine subspace offset + span(basis rows), or the empty set.
// Canonical form: basis in reduced echelon form, offset zero in the basis pivot columns.
template <class T>
class AffineSubspace {
 public:
  AffineSubspace() = default;

  static AffineSubspace empty(FieldTag f, std::size_t ambient) {
    AffineSubspace s;
    s.f_ = f;
    s.n_ = ambient;
    s.empty_ = true;
    s.basis_ = Matrix<T>(f, 0, ambient);
    s.offset_ = zero_vec<T>(f, ambient);
    return s;
  }

  static AffineSubspace make(const Matrix<T>& directions, const Vec<T>& offset) {
    if (offset.size() != directions.cols()) throw std::invalid_argument("affine subspace: dimension mismatch");
    AffineSubspace s;
    s.f_ = directions.field();
    s.n_ = directions.cols();
    auto r = rref(directions);
    s.basis_ = r.echelon;
    s.pivots_ = r.pivots;
    s.offset_ = offset;
    for (std::size_t i = 0; i < r.rank; ++i) {
      const T c = s.offset_[r.pivots[i]];
      if (field_traits<T>::is_zero(c)) continue;
      for (std::size_t j = 0; j < s.n_; ++j) s.offset_[j] -= c * s.basis_(i, j);
    }
    return s;
  }

  static AffineSubspace linear(const Matrix<T>& directions) {
    return make(directions, zero_vec<T>(directions.field(), directions.cols()));
  }

  static AffineSubspace point(FieldTag f, const Vec<T>& p) { return make(Matrix<T>(f, 0, p.size()), p); }

  FieldTag field() const { return f_; }
  std::size_t ambient_dim() const { return n_; }
  bool is_empty() const { return empty_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix<T>& basis() const { return basis_; }
  const Vec<T>& offset() const { return offset_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  Cardinality cardinality() const {
    if (empty_) return {false, 0};
    if (!f_.is_prime_field()) return dim() == 0 ? Cardinality{false, 1} : Cardinality{true, 0};
    return {false, boost::multiprecision::pow(BigInt(f_.modulus), static_cast<unsigned>(dim()))};
  }

  bool contains(const Vec<T>& x) const {
    if (empty_) return false;
    if (x.size() != n_) throw std::invalid_argument("contains: dimension mismatch");
    Vec<T> r(x);
    for (std::size_t j = 0; j < n_; ++j) r[j] -= offset_[j];
    for (std::size_t i = 0; i < dim(); ++i) {
      const T c = r[pivots_[i]];
      if (field_traits<T>::is_zero(c)) continue;
      for (std::size_t j = 0; j < n_; ++j) r[j] -= c * basis_(i, j);
    }
    return is_zero_vec(r);
  }

  // Rows A and right-hand side b with this = {x : A x = b}.
  std::pair<Matrix<T>, Vec<T>> equations() const {
    if (empty_) throw std::logic_error("equations of the empty set");
    Matrix<T> a = kernel(basis_);
    return {a, a * offset_};
  }

  // Image under x -> m x + t.
  AffineSubspace image(const Matrix<T>& m, const Vec<T>& t) const {
    if (m.cols() != n_ || t.size() != m.rows()) throw std::invalid_argument("image: dimension mismatch");
    if (empty_) return empty(f_, m.rows());
    Matrix<T> dirs(f_, 0, m.rows());
    for (std::size_t i = 0; i < dim(); ++i) dirs.append_row(m * basis_.row(i));
    Vec<T> o = m * offset_;
    for (std::size_t j = 0; j < o.size(); ++j) o[j] += t[j];
    return make(dirs, o);
  }

  // All points; prime fields only.
  std::vector<Vec<T>> points() const {
    if (!f_.is_prime_field()) throw std::invalid_argument("points: infinite set");
    std::vector<Vec<T>> out;
    if (empty_) return out;
    const std::int64_t d = f_.modulus;
    std::vector<std::int64_t> coef(dim(), 0);
    while (true) {
      Vec<T> p = offset_;
      for (std::size_t i = 0; i < dim(); ++i)
        if (coef[i])
          for (std::size_t j = 0; j < n_; ++j) p[j] += field_traits<T>::from_int(f_, coef[i]) * basis_(i, j);
      out.push_back(std::move(p));
      std::size_t k = dim();
      while (k > 0) {
        if (++coef[k - 1] < d) break;
        coef[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
    return out;
  }

  bool operator==(const AffineSubspace& o) const {
    if (!(f_ == o.f_) || n_ != o.n_ || empty_ != o.empty_) return false;
    return empty_ || (basis_ == o.basis_ && offset_ == o.offset_);
  }

  std::string to_string() const {
    if (empty_) return "{}";
    std::string s = "(";
    for (std::size_t j = 0; j < n_; ++j) s += (j ? "," : "") + field_traits<T>::str(offset_[j]);
    return s + ") + span" + basis_.to_string();
  }

 private:
  FieldTag f_{};
  std::size_t n_ = 0;
  bool empty_ = false;
  Matrix<T> basis_;
  std::vector<std::size_t> pivots_;
  Vec<T> offset_;
};

// Solution set of a x = b.
template <class T>
AffineSubspace<T> solve_affine(const Matrix<T>& a, const Vec<T>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_affine: dimension mismatch");
  const FieldTag f = a.field();
  Matrix<T> aug(f, 0, a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Vec<T> r = a.row(i);
    r.push_back(b[i]);
    aug.append_row(r);
  }
  auto r = rref(aug);
  if (!r.pivots.empty() && r.pivots.back() == a.cols()) return AffineSubspace<T>::empty(f, a.cols());
  Vec<T> particular = zero_vec<T>(f, a.cols());
  for (std::size_t i = 0; i < r.rank; ++i) particular[r.pivots[i]] = r.echelon(i, a.cols());
  return AffineSubspace<T>::make(kernel(a), particular);
}

template <class T>
AffineSubspace<T> intersect_affine(const AffineSubspace<T>& u, const AffineSubspace<T>& w) {
  if (!(u.field() == w.field()) || u.ambient_dim() != w.ambient_dim())
    throw std::invalid_argument("intersect_affine: incompatible subspaces");
  if (u.is_empty() || w.is_empty()) return AffineSubspace<T>::empty(u.field(), u.ambient_dim());
  auto [au, bu] = u.equations();
  auto [aw, bw] = w.equations();
  Matrix<T> a = au;
  Vec<T> b = bu;
  for (std::size_t i = 0; i < aw.rows(); ++i) {
    a.append_row(aw.row(i));
    b.push_back(bw[i]);
  }
  return solve_affine(a, b);
}

}  // namespace epistrict
