#include "epistrict/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace epistrict;
using io::json;

namespace {

constexpr int kOk = 0, kAcceptFailure = 1, kSizeCap = 2, kInvalid = 3;

struct Options {
  std::int64_t d = 3;
  std::size_t n = 1;
  std::string what = "states";
  std::string suite = "all";
  std::optional<std::int64_t> suite_d;
  std::string format;
  std::string scenario;
  std::string state;
  std::string out;
  std::size_t max_dim = kDefaultMaxDim;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + o.out);
  f << text;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

PhaseSpace checked_space(const Options& o) {
  const PhaseSpace s = PhaseSpace::prime(o.d, o.n);
  if (o.n == 0) throw std::invalid_argument("n must be positive");
  check_dim(s, o.max_dim);
  return s;
}

int cmd_enumerate(const Options& o) {
  const PhaseSpace s = checked_space(o);
  json records = json::array();
  std::string text;
  json report{{"d", o.d}, {"n", o.n}, {"what", o.what}};
  if (o.what == "states") {
    const auto states = enumerate_states(s);
    std::size_t pure = 0;
    for (const auto& st : states) {
      pure += st.is_pure();
      auto r = io::state_json(st);
      r["pure"] = st.is_pure();
      r["support_size"] = st.support().cardinality().count.str();
      records.push_back(r);
      text += st.to_string() + (st.is_pure() ? "  pure\n" : "  mixed\n");
    }
    report["pure"] = pure;
    report["mixed"] = states.size() - pure;
    text = std::to_string(states.size()) + " states (" + std::to_string(pure) + " pure, " +
           std::to_string(states.size() - pure) + " mixed)\n" + text;
  } else if (o.what == "transforms") {
    for (const auto& t : enumerate_affine_group(s)) {
      records.push_back({{"S", io::to_json(t.s)}, {"a", io::to_json(t.a)}});
      text += "S=" + t.s.to_string() + " a=" + vec_to_string(t.a) + "\n";
    }
    text = std::to_string(records.size()) + " transforms\n" + text;
  } else if (o.what == "measurements") {
    for (const auto& m : enumerate_measurements(s)) {
      records.push_back({{"V", io::to_json(m.quadratures())}, {"outcomes", all_labels(s.d(), m.rank()).size()}});
      text += "V=" + m.quadratures().to_string() + "\n";
    }
    text = std::to_string(records.size()) + " measurements\n" + text;
  } else {
    throw std::invalid_argument("--what must be states, transforms or measurements");
  }
  report["count"] = records.size();
  report["records"] = records;
  emit(o, o.format == "text" ? text : report.dump(2) + "\n");
  return kOk;
}

json distribution_json(const Distribution& dist) {
  json a = json::array();
  for (const auto& x : dist) a.push_back({{"outcome", x.label}, {"probability", field_traits<Rational>::str(x.probability)}});
  return a;
}

json quantum_json(const std::vector<double>& p, std::int64_t d, std::size_t rank) {
  json a = json::array();
  const auto labels = all_labels(d, rank);
  for (std::size_t i = 0; i < p.size(); ++i) a.push_back({{"outcome", labels[i]}, {"probability", std::abs(p[i]) < 1e-15 ? 0.0 : p[i]}});
  return a;
}

int simulate_prime(const Options& o, const io::Scenario<Zp>& sc, json& report, std::string& text) {
  const auto t = sc.transformation.value_or(SymplecticAffine<Zp>::identity(sc.space));
  std::optional<Distribution> ep;
  std::optional<std::vector<double>> qu;
  if (sc.mode != io::Mode::quantum) {
    ep = scenario(sc.preparation, t, sc.measurement);
    report["epistricted"] = distribution_json(*ep);
    text += "epistricted (exact):\n";
    for (const auto& x : *ep)
      text += "  " + vec_to_string(make_vec<Zp>(sc.space.field, x.label)) + "  " + field_traits<Rational>::str(x.probability) + "\n";
  }
  if (sc.mode != io::Mode::epistricted) {
    qu = quantum_scenario(sc.preparation, t, sc.measurement, o.max_dim);
    report["quantum"] = {{"outcomes", quantum_json(*qu, sc.space.d(), sc.measurement.rank())}, {"tolerance", 1e-9}};
    text += "quantum (floating point, tolerance 1e-9):\n";
    const auto labels = all_labels(sc.space.d(), sc.measurement.rank());
    for (std::size_t i = 0; i < qu->size(); ++i) {
      std::ostringstream os;
      os << std::setprecision(12) << (std::abs((*qu)[i]) < 1e-15 ? 0.0 : (*qu)[i]);
      text += "  " + vec_to_string(make_vec<Zp>(sc.space.field, labels[i])) + "  " + os.str() + "\n";
    }
  }
  if (ep && qu) {
    double diff = 0;
    for (std::size_t i = 0; i < qu->size(); ++i) diff = std::max(diff, std::abs((*qu)[i] - (*ep)[i].probability.convert_to<double>()));
    const bool agree = diff <= 1e-9;
    report["compare"] = {{"max_difference", diff}, {"tolerance", 1e-9}, {"verdict", agree ? "agree" : "differ"}};
    text += "max |difference| = " + acceptance::num(diff) + (agree ? "  agree\n" : "  DIFFER\n");
  }
  return kOk;
}

int simulate_rational(const io::Scenario<Rational>& sc, json& report, std::string& text) {
  if (sc.mode != io::Mode::epistricted) throw std::invalid_argument("quantum and compare modes need a prime field");
  const auto t = sc.transformation.value_or(SymplecticAffine<Rational>::identity(sc.space));
  const auto outcomes = possibilistic(transform(sc.preparation, t), sc.measurement);
  report["possible_outcomes"] = io::affine_json(outcomes);
  text += "possible outcomes: " + outcomes.to_string() + "\n";
  return kOk;
}

int cmd_simulate(const Options& o) {
  if (o.scenario.empty()) throw std::invalid_argument("simulate needs --scenario <path>");
  const auto sc = io::parse_scenario(read_json_file(o.scenario));
  json report{{"scenario", io::scenario_json(sc)}};
  std::string text;
  const int code = std::visit(
      [&](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, io::Scenario<Zp>>)
          return simulate_prime(o, s, report, text);
        else
          return simulate_rational(s, report, text);
      },
      sc);
  emit(o, o.format == "text" ? text : report.dump(2) + "\n");
  return code;
}

int cmd_render(const Options& o) {
  io::Grid grid;
  bool outcomes = false;
  if (!o.scenario.empty()) {
    const auto sc = io::parse_scenario(read_json_file(o.scenario));
    const auto* p = std::get_if<io::Scenario<Zp>>(&sc);
    if (!p) throw std::invalid_argument("rendering supports d in {2,3,5} and n <= 2");
    outcomes = o.what == "measurement";
    grid = outcomes ? io::outcome_grid(p->measurement) : io::support_grid(p->preparation);
  } else {
    const PhaseSpace s = PhaseSpace::prime(o.d, o.n);
    io::check_renderable(s);
    json st = o.state.empty() ? json::object() : json::parse(o.state);
    grid = io::support_grid(io::parse_state<Zp>(s, st, "state"));
  }
  emit(o, o.format == "svg" ? io::render_svg(grid, outcomes) : io::render_ascii(grid, outcomes));
  return kOk;
}

int cmd_accept(const Options& o) {
  const auto ids = acceptance::suite(o.suite);
  std::vector<acceptance::Criterion> results;
  if (o.suite_d && o.suite == "equivalence")
    results = acceptance::run({3}, o.suite_d);
  else if (o.suite_d)
    throw std::invalid_argument("--d applies to the equivalence suite only");
  else
    results = acceptance::run(ids);
  bool ok = true;
  json criteria = json::array();
  std::string text;
  for (const auto& c : results) {
    ok = ok && c.pass();
    criteria.push_back(io::criterion_json(c));
    text += acceptance::summary_line(c) + "\n";
  }
  json report{{"suite", o.suite}, {"seed", acceptance::seed()}, {"pass", ok}, {"criteria", criteria}};
  if (o.suite_d) report["d"] = *o.suite_d;
  emit(o, o.format == "text" ? text : report.dump(2) + "\n");
  return ok ? kOk : kAcceptFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epistricted phase-space theories and their quantum counterparts"};
  app.require_subcommand(1);
  Options o;

  auto* en = app.add_subcommand("enumerate", "List states, transforms or measurements");
  en->add_option("--d", o.d, "prime dimension")->required();
  en->add_option("--n", o.n, "degrees of freedom")->required();
  en->add_option("--what", o.what, "states | transforms | measurements")->check(CLI::IsMember({"states", "transforms", "measurements"}));

  auto* sim = app.add_subcommand("simulate", "Run a prepare/transform/measure scenario");
  sim->add_option("--scenario", o.scenario, "scenario JSON file")->required();

  auto* ren = app.add_subcommand("render", "Draw a support or outcome partition on the phase-space grid");
  ren->add_option("--scenario", o.scenario, "scenario JSON file");
  ren->add_option("--what", o.what, "state | measurement (with --scenario)")->check(CLI::IsMember({"states", "state", "measurement"}));
  ren->add_option("--d", o.d, "prime dimension");
  ren->add_option("--n", o.n, "degrees of freedom");
  ren->add_option("--state", o.state, "inline state JSON, e.g. {\"V\":[[1,0]],\"values\":[0]}");

  auto* acc = app.add_subcommand("accept", "Run acceptance suites");
  acc->add_option("--suite", o.suite, "all | equivalence | inequivalence | algebra")
      ->check(CLI::IsMember({"all", "equivalence", "inequivalence", "algebra"}));
  acc->add_option("--d", o.suite_d, "restrict the equivalence suite to one odd prime");

  for (auto* sub : {en, sim, ren, acc}) {
    sub->add_option("--format", o.format, sub == ren ? "ascii | svg" : "json | text");
    sub->add_option("--out", o.out, "write output to a file");
    sub->add_option("--max-dim", o.max_dim, "Hilbert space dimension cap")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*en) return cmd_enumerate(o);
    if (*sim) return cmd_simulate(o);
    if (*ren) {
      if (!o.format.empty() && o.format != "ascii" && o.format != "svg") throw std::invalid_argument("--format must be ascii or svg");
      return cmd_render(o);
    }
    return cmd_accept(o);
  } catch (const SizeCapExceeded& e) {
    std::cerr << "size cap: " << e.what() << "\n";
    return kSizeCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
}
