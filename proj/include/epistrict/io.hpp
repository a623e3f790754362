#pragma once

// JSON scenarios, enumeration records and phase-space grid rendering.
//
// Field elements are integers for Z_d and "num/den" strings for Q. Preparation
// values given on input belong to the rows as written; output always uses the
// canonical echelon rows and their values, so parse -> serialize is idempotent.

#include "epistrict/acceptance.hpp"

#include "json.hpp"

#include <variant>

namespace epistrict::io {

using nlohmann::json;

enum class Mode { epistricted, quantum, compare };

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::quantum: return "quantum";
    case Mode::compare: return "compare";
    default: return "epistricted";
  }
}

inline Mode parse_mode(const std::string& s) {
  if (s == "epistricted") return Mode::epistricted;
  if (s == "quantum") return Mode::quantum;
  if (s == "compare") return Mode::compare;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

template <class T>
json to_json(const T& x);

template <>
inline json to_json(const Zp& x) {
  return x.value();
}

template <>
inline json to_json(const Rational& x) {
  return field_traits<Rational>::str(x);
}

template <class T>
json to_json(const Vec<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

template <class T>
json to_json(const Matrix<T>& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

template <class T>
T scalar(FieldTag f, const json& j, const std::string& where);

template <>
inline Zp scalar(FieldTag f, const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw std::invalid_argument(where + ": expected an integer entry, got " + j.dump());
  return Zp(j.get<std::int64_t>(), f.modulus);
}

template <>
inline Rational scalar(FieldTag, const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw std::invalid_argument(where + ": expected an integer or \"num/den\", got " + j.dump());
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    const BigInt num(s.substr(0, slash));
    const BigInt den = slash == std::string::npos ? BigInt(1) : BigInt(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument(where + ": malformed rational \"" + s + "\"");
  }
}

template <class T>
Vec<T> vec(FieldTag f, const json& j, std::size_t len, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
  if (j.size() != len)
    throw std::invalid_argument(where + ": expected length " + std::to_string(len) + ", got " + std::to_string(j.size()));
  Vec<T> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(scalar<T>(f, j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

template <class T>
Matrix<T> matrix(FieldTag f, const json& j, std::size_t cols, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected an array of rows");
  Matrix<T> m(f, 0, cols);
  for (std::size_t i = 0; i < j.size(); ++i) m.append_row(vec<T>(f, j[i], cols, where + "[" + std::to_string(i) + "]"));
  return m;
}

template <class T>
void require_isotropic(const PhaseSpace& s, const Matrix<T>& rows, const std::string& where) {
  if (auto bad = non_isotropic_pair(s, rows))
    throw std::invalid_argument(where + ": rows " + std::to_string(bad->first) + " and " + std::to_string(bad->second) +
                                " do not commute (" + vec_to_string(rows.row(bad->first)) + " and " +
                                vec_to_string(rows.row(bad->second)) + ")");
}

template <class T>
EpistemicState<T> parse_state(const PhaseSpace& s, const json& j, const std::string& where = "preparation") {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  const Matrix<T> rows = matrix<T>(s.field, j.value("V", json::array()), s.dim(), where + ".V");
  require_isotropic(s, rows, where + ".V");
  if (j.contains("v")) {
    if (j.contains("values")) throw std::invalid_argument(where + ": give either v or values, not both");
    return EpistemicState<T>::make(s, rows, vec<T>(s.field, j["v"], s.dim(), where + ".v"));
  }
  const Vec<T> values = vec<T>(s.field, j.value("values", json::array()), rows.rows(), where + ".values");
  const auto support = solve_affine(rows, values);
  if (support.is_empty()) throw std::invalid_argument(where + ": values are inconsistent on dependent rows");
  return EpistemicState<T>::from_support(s, support);
}

template <class T>
json state_json(const EpistemicState<T>& st) {
  return {{"V", to_json(st.quadratures())}, {"values", to_json(st.values())}};
}

template <class T>
struct Scenario {
  PhaseSpace space;
  Mode mode = Mode::epistricted;
  EpistemicState<T> preparation;
  std::optional<SymplecticAffine<T>> transformation;
  SharpMeasurement<T> measurement;
};

using AnyScenario = std::variant<Scenario<Zp>, Scenario<Rational>>;

inline FieldTag parse_field(const json& j) {
  if (j.is_string() && j.get<std::string>() == "rational") return FieldTag::rational();
  if (j.is_number_integer()) return FieldTag::prime(j.get<std::int64_t>());
  throw std::invalid_argument("field: expected a prime modulus or \"rational\", got " + j.dump());
}

template <class T>
Scenario<T> parse_scenario_as(const PhaseSpace& s, const json& j) {
  Scenario<T> sc;
  sc.space = s;
  sc.mode = parse_mode(j.value("mode", std::string("epistricted")));
  if (!j.contains("preparation")) throw std::invalid_argument("scenario: missing preparation");
  sc.preparation = parse_state<T>(s, j["preparation"]);
  if (j.contains("transformation") && !j["transformation"].is_null()) {
    const auto& t = j["transformation"];
    const Matrix<T> m = t.contains("S") ? matrix<T>(s.field, t["S"], s.dim(), "transformation.S")
                                        : Matrix<T>::identity(s.field, s.dim());
    if (m.rows() != s.dim()) throw std::invalid_argument("transformation.S: expected " + std::to_string(s.dim()) + " rows");
    const Vec<T> a = t.contains("a") ? vec<T>(s.field, t["a"], s.dim(), "transformation.a") : zero_vec<T>(s.field, s.dim());
    if (!is_symplectic(s, m)) throw std::invalid_argument("transformation.S: matrix is not symplectic (S^T J S != J)");
    sc.transformation = SymplecticAffine<T>::make(s, m, a);
  }
  if (!j.contains("measurement")) throw std::invalid_argument("scenario: missing measurement");
  const Matrix<T> mrows = matrix<T>(s.field, j["measurement"].value("V", json::array()), s.dim(), "measurement.V");
  require_isotropic(s, mrows, "measurement.V");
  sc.measurement = SharpMeasurement<T>(s, mrows);
  return sc;
}

inline AnyScenario parse_scenario(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario: expected a JSON object");
  if (!j.contains("field")) throw std::invalid_argument("scenario: missing field");
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0)
    throw std::invalid_argument("scenario: n must be a positive integer");
  const PhaseSpace s{parse_field(j["field"]), j["n"].get<std::size_t>()};
  if (s.field.is_prime_field()) return parse_scenario_as<Zp>(s, j);
  return parse_scenario_as<Rational>(s, j);
}

template <class T>
json scenario_json(const Scenario<T>& sc) {
  json j;
  j["field"] = sc.space.field.is_prime_field() ? json(sc.space.d()) : json("rational");
  j["n"] = sc.space.n;
  j["mode"] = mode_name(sc.mode);
  j["preparation"] = state_json(sc.preparation);
  if (sc.transformation) j["transformation"] = {{"S", to_json(sc.transformation->s)}, {"a", to_json(sc.transformation->a)}};
  j["measurement"] = {{"V", to_json(sc.measurement.quadratures())}};
  return j;
}

inline json scenario_json(const AnyScenario& sc) {
  return std::visit([](const auto& s) { return scenario_json(s); }, sc);
}

template <class T>
json affine_json(const AffineSubspace<T>& a) {
  if (a.is_empty()) return json{{"empty", true}};
  return {{"offset", to_json(a.offset())}, {"directions", to_json(a.basis())}};
}

// Rendering over a d x d grid per degree of freedom: q to the right, p upward.
// n = 2 nests the grid of system 2 inside each cell of system 1.
struct Grid {
  std::int64_t d = 0;
  std::size_t n = 0;
  std::vector<int> cells;  // by point_index; -1 blank, otherwise a glyph class
};

inline void check_renderable(const PhaseSpace& s) {
  if (!s.field.is_prime_field() || (s.d() != 2 && s.d() != 3 && s.d() != 5) || s.n > 2)
    throw std::invalid_argument("rendering supports d in {2,3,5} and n <= 2");
}

inline Grid support_grid(const EpistemicState<Zp>& st) {
  check_renderable(st.space());
  Grid g{st.space().d(), st.space().n, std::vector<int>(st.space().num_points(), -1)};
  for (const auto& p : st.support().points()) g.cells[point_index(st.space(), p)] = 0;
  return g;
}

// Each cell carries the index of the outcome it belongs to.
inline Grid outcome_grid(const SharpMeasurement<Zp>& m) {
  const auto& s = m.space();
  check_renderable(s);
  Grid g{s.d(), s.n, std::vector<int>(s.num_points(), -1)};
  for (const auto& p : all_points(s)) {
    std::size_t label = 0;
    for (const auto& x : m.quadratures() * p) label = label * static_cast<std::size_t>(s.d()) + static_cast<std::size_t>(x.value());
    g.cells[point_index(s, p)] = static_cast<int>(label);
  }
  return g;
}

namespace detail {

// Point at display row r (top first) and column c of the (d^n x d^n) layout.
inline std::size_t cell_at(const Grid& g, std::size_t r, std::size_t c) {
  const auto d = static_cast<std::size_t>(g.d);
  std::vector<std::size_t> coords;
  std::size_t block = 1;
  for (std::size_t i = 1; i < g.n; ++i) block *= d;
  const std::size_t rr = d * block - 1 - r;  // p grows upward
  for (std::size_t i = 0; i < g.n; ++i) {
    coords.push_back((c / block) % d);
    coords.push_back((rr / block) % d);
    block = std::max<std::size_t>(block / d, 1);
  }
  std::size_t idx = 0;
  for (auto x : coords) idx = idx * d + x;
  return idx;
}

inline char glyph(int cls) {
  if (cls < 0) return '.';
  if (cls == 0) return '#';
  constexpr const char* marks = "#ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  return marks[cls % 53];
}

}  // namespace detail

inline std::string render_ascii(const Grid& g, bool outcomes = false) {
  const auto d = static_cast<std::size_t>(g.d);
  const std::size_t side = g.n == 2 ? d * d : d;
  std::string out;
  for (std::size_t r = 0; r < side; ++r) {
    if (g.n == 2 && r > 0 && r % d == 0) {
      for (std::size_t c = 0; c < side; ++c) out += (c > 0 && c % d == 0) ? "+-" : "-";
      out += "\n";
    }
    for (std::size_t c = 0; c < side; ++c) {
      if (g.n == 2 && c > 0 && c % d == 0) out += '|';
      const int cls = g.cells[detail::cell_at(g, r, c)];
      out += outcomes ? (cls < 10 ? char('0' + cls) : detail::glyph(cls)) : detail::glyph(cls);
    }
    out += "\n";
  }
  return out;
}

inline std::string render_svg(const Grid& g, bool outcomes = false) {
  static const std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const auto d = static_cast<std::size_t>(g.d);
  const std::size_t side = g.n == 2 ? d * d : d;
  const int cell = 24, gap = g.n == 2 ? 4 : 0, margin = 8;
  const std::size_t blocks = g.n == 2 ? d : 1;
  const int size = margin * 2 + static_cast<int>(side) * cell + static_cast<int>(blocks - 1) * gap;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << " " << size << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      const int cls = g.cells[detail::cell_at(g, r, c)];
      const int x = margin + static_cast<int>(c) * cell + static_cast<int>(g.n == 2 ? c / d : 0) * gap;
      const int y = margin + static_cast<int>(r) * cell + static_cast<int>(g.n == 2 ? r / d : 0) * gap;
      std::string fill = "white";
      if (cls >= 0) fill = outcomes ? palette[static_cast<std::size_t>(cls) % palette.size()] : "#404040";
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << fill
         << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

inline json criterion_json(const acceptance::Criterion& c) {
  json checks = json::array();
  for (const auto& ch : c.checks)
    checks.push_back({{"name", ch.name},
                      {"pass", ch.pass},
                      {"expected", ch.expected},
                      {"actual", ch.actual},
                      {"tolerance", ch.tolerance}});
  return {{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"seconds", c.seconds}, {"checks", checks}};
}

}  // namespace epistrict::io
