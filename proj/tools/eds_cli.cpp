#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eds/dsl.hpp"
#include "eds/report.hpp"

using namespace eds;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kInput = 2, kInternal = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json = false;

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_scenario(const std::string& s) {
  for (const auto& n : scenario_names())
    if (n == s) return true;
  return false;
}

void print_scenario(const ScenarioReport& r) {
  std::cout << "scenario " << r.id << (r.ok() ? "  ok" : "  MISMATCH") << "  (" << r.seconds << " s)\n";
  for (const auto& [k, v] : r.identities) std::cout << "  " << k << " = " << v << "\n";
  for (const auto& c : r.checks) {
    std::cout << "  [" << (c.ok ? "ok" : "FAIL") << "] " << c.name << ": " << c.computed;
    if (!c.ok) std::cout << "   expected " << c.expected;
    std::cout << "\n";
  }
  for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
}

void print_involutivity(const InvolutivityReport& r) {
  std::cout << "s0 " << r.s0 << "\ncharacters";
  for (int c : r.characters) std::cout << " " << c;
  std::cout << "\nintegral element dimension " << r.integral_dim << "\nsum i*s_i " << r.cartan_sum
            << "\ntorsion " << (r.torsion_was_zero ? "zero" : r.torsion_absorbed ? "absorbed" : "not absorbable")
            << "\ninvolutive " << (r.cartan_ok ? "yes" : "no") << "\ngenerality " << r.generality.first
            << " functions of " << r.generality.second << " variables\n";
  if (!r.torsion_witness.empty()) std::cout << "torsion witness " << r.torsion_witness << "\n";
  if (r.unstable) std::cout << "warning: characters differ across trials\n";
  if (r.nongeneric) std::cout << "warning: rank varies across sample points\n";
}

// identities <file|scenario>
int cmd_identities(const std::string& target, const std::vector<std::string>& solve, bool with_functions) {
  if (is_scenario(target)) {
    ScenarioReport r = run_scenario(target);
    Json j{{"kind", "identities"}, {"source", target}, {"identities", Json::array()}, {"ok", r.ok()}};
    for (const auto& [k, v] : r.identities) j["identities"].push_back({{"symbol", k}, {"value", v}});
    if (g_json) {
      emit(j);
    } else {
      for (const auto& [k, v] : r.identities) std::cout << k << " = " << v << "\n";
    }
    return r.ok() ? kOk : kMismatch;
  }
  SystemDocument doc = parse_document(read_text(target));
  for (const auto& w : doc.warnings)
    std::cerr << target << ":" << w.line << ":" << w.col << ": warning: " << w.message << "\n";
  CoframedSpace& S = doc.space;
  std::vector<int> unknowns;
  for (const auto& n : solve) {
    parse_expr(n, S);
    int v = S.ws().find(n);
    if (v < 0) throw InputError("unknown symbol '" + n + "'");
    unknowns.push_back(v);
  }
  Json j{{"kind", "identities"}, {"source", target}, {"identities", Json::array()}};
  auto add = [&](const std::string& k, const std::string& v) {
    j["identities"].push_back({{"symbol", k}, {"value", v}});
    if (!g_json) std::cout << k << " = " << v << "\n";
  };
  if (!unknowns.empty())
    for (const auto& id : derive_identities(S, unknowns, with_functions ? std::nullopt
                                                                         : std::optional<std::vector<int>>(std::vector<int>{})))
      add(S.ws().name(id.symbol), S.str(id.value));
  // What is left of d^2 = 0 after the solved identities.
  for (int i = 0; i < S.dim(); ++i) {
    if (!S.has_drule(i)) continue;
    Form r = S.normal(S.d(S.d(Form::basis(i))));
    if (!r.zero()) add("d(d " + S.coframe()[static_cast<size_t>(i)] + ")", S.str(r));
  }
  for (int f : S.declared_functions()) {
    Form r = d_square_residual(f, S);
    if (!r.zero()) add("d(d " + S.ws().name(f) + ")", S.str(r));
  }
  if (g_json) emit(j);
  return kOk;
}

struct SysPins {
  std::string scenario, prefix;
};

// involutivity <file|scenario:name>
int cmd_involutivity(const std::string& target, int trials, std::uint64_t seed, bool symbolic) {
  LinearPfaffianSystem sys;
  std::optional<SysPins> pins;
  if (target.rfind("scenario:", 0) == 0) {
    std::string name = target.substr(9);
    static const std::map<std::string, SysPins> table = {{"landsberg", {"landsberg_ik", ""}},
                                                         {"frame_bundle", {"prolonged_frame_bundle", ""}},
                                                         {"jet_lc", {"jet_lc", "derived_"}},
                                                         {"jet_lc_printed", {"jet_lc", "printed_"}}};
    auto it = table.find(name);
    if (it == table.end()) throw InputError("unknown scenario system '" + name + "'");
    sys = scenario_system(name);
    pins = it->second;
  } else {
    SystemDocument doc = parse_document(read_text(target));
    if (!doc.has_system()) throw InputError(target + " declares no Pfaffian system");
    for (const auto& w : doc.warnings)
      std::cerr << target << ":" << w.line << ":" << w.col << ": warning: " << w.message << "\n";
    sys = doc.system();
  }
  InvolutivityReport r = cartan_test(sys, trials, seed, symbolic);
  bool ok = true;
  if (pins) {
    std::ifstream in(default_expected_path());
    Json all = Json::parse(in);
    const Json& p = all.at(pins->scenario);
    auto want = [&](const std::string& k) { return p.at(pins->prefix + k).at("expected"); };
    ok = want("characters").get<std::vector<int>>() == r.characters &&
         want("integral_dim").get<int>() == r.integral_dim &&
         want("generality").get<std::vector<int>>() == std::vector<int>{r.generality.first, r.generality.second};
  }
  if (g_json) {
    Json j = to_json(sys, r);
    j["source"] = target;
    emit(j);
  } else {
    print_involutivity(r);
    if (pins) std::cout << (ok ? "matches pinned values\n" : "MISMATCH against pinned values\n");
  }
  return ok ? kOk : kMismatch;
}

int cmd_scenario(const std::string& name, const ScenarioOptions& o) {
  std::vector<std::string> names;
  if (name == "all") {
    names = scenario_names();
  } else {
    if (!is_scenario(name)) throw InputError("unknown scenario '" + name + "'");
    names = {name};
  }
  bool ok = true;
  Json list{{"kind", "list"}, {"reports", Json::array()}};
  for (const auto& n : names) {
    ScenarioReport r = run_scenario(n, o);
    ok = ok && r.ok();
    if (g_json)
      list["reports"].push_back(to_json(r));
    else
      print_scenario(r);
  }
  if (g_json) {
    list["ok"] = ok;
    emit(names.size() == 1 ? list["reports"][0] : list);
  }
  return ok ? kOk : kMismatch;
}

int cmd_solve_lc(int order, std::uint64_t seed, const std::string& free_path, const std::string& variant) {
  if (order < 2) throw InputError("--order must be at least 2");
  CVariant v = variant == "paper" ? CVariant::Printed : CVariant::Derived;
  FreeData f = free_path.empty() ? random_free_data(order, seed) : deserialize_free_data(read_text(free_path));
  JetState s;
  try {
    s = solve_forward(f, order, seed, v);
  } catch (const CompatibilityFailure& e) {
    throw InputError(e.what());
  }
  Json j = to_json(s);
  j["seed"] = seed;
  bool ok = j["residuals_zero"].get<bool>();
  if (g_json) {
    emit(j);
  } else {
    std::cout << serialize(s);
    std::cout << "# residuals through order " << order - 2 << (ok ? " vanish" : " DO NOT vanish") << "\n";
    std::cout << "# witnesses mbar_10 = " << s.mb.get(1, 0).get_str() << ", mbar_01 = " << s.mb.get(0, 1).get_str()
              << "\n";
  }
  return ok ? kOk : kMismatch;
}

struct UnicornArgs {
  std::string source = "cosh";
  std::string grid;
  double h = 1e-3, tol = 1e-4;
  int fd_order = 2, order = 6;
  std::uint64_t seed = kDefaultSeed;
  std::string m2 = "pulled";
  bool points = false;
};

int cmd_verify_unicorn(const UnicornArgs& a) {
  GridSpec g;
  if (a.source == "cosh") g.radius = 0.5;
  if (!a.grid.empty()) {
    char c1, c2, c3;
    std::istringstream is(a.grid);
    if (!(is >> g.n1 >> c1 >> g.n2 >> c2 >> g.nt >> c3 >> g.radius) || c1 != ',' || c2 != ',' || c3 != ',' ||
        g.n1 < 1 || g.n2 < 1 || g.nt < 1 || g.radius <= 0)
      throw InputError("--grid expects n1,n2,nt,radius");
  }
  UnicornSource src;
  if (a.source == "flat")
    src = flat_source();
  else if (a.source == "cosh")
    src = cosh_source();
  else
    src = jet_source(solve_forward(random_free_data(a.order, a.seed), a.order, a.seed), g.radius);
  M2Mode mode = a.m2 == "framed" ? M2Mode::Framed : M2Mode::Pulled;
  VerificationReport r = verify_structure(build_normal_form(src, mode), g, a.h, a.tol, a.fd_order);
  if (g_json) {
    Json j = to_json(r, a.points);
    j["m2"] = a.m2;
    emit(j);
  } else {
    std::cout << "source " << r.source << ", grid " << g.n1 << "x" << g.n2 << "x" << g.nt << " on |z| <= " << g.radius
              << ", h " << r.h << ", fd order " << r.fd_order << "\n"
              << "max residual " << r.max_residual << " (tol " << std::max(r.tol, r.tail) << ")\n"
              << "max residual on t = 0 " << r.max_residual_t0 << ", step-halving ratio " << r.ratio << " (t = 0: "
              << r.ratio_t0 << ")\n"
              << "max |J| " << r.max_J << "\nmin |det W| " << r.min_abs_det << "\n"
              << "max |I| " << r.max_I << ", max |I1| " << r.max_I1 << "\n"
              << "flags:" << (r.riemannian ? " riemannian" : "") << (r.berwald ? " berwald" : "")
              << (r.nontrivial ? " nontrivial" : "") << "\n"
              << (r.passed ? "structure equations hold\n" : "structure equations FAIL\n");
  }
  return r.passed ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exterior differential systems toolkit"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "structured JSON output");

  std::string target;
  std::vector<std::string> solve;
  auto* ident = app.add_subcommand("identities", "d^2 = 0 identities of a .eds file or a scenario");
  ident->add_option("target", target, "file or scenario name")->required();
  ident->add_option("--solve", solve, "derived symbols to solve for")->delimiter(',');
  bool with_functions = false;
  ident->add_flag("--with-functions", with_functions, "also solve the d^2 = 0 residuals of declared functions");

  int trials = 5;
  std::uint64_t seed = kDefaultSeed;
  bool symbolic = false;
  auto* inv = app.add_subcommand("involutivity", "Cartan test of a .eds file or scenario:<name>");
  inv->add_option("target", target, "file or scenario:landsberg|frame_bundle|jet_lc|jet_lc_printed")->required();
  inv->add_option("--trials", trials)->check(CLI::Range(1, 100));
  inv->add_option("--seed", seed);
  inv->add_flag("--symbolic", symbolic);

  ScenarioOptions so;
  auto* scen = app.add_subcommand("scenario", "run a pinned scenario or all of them");
  scen->add_option("name", target, "scenario name or all")->required();
  scen->add_option("--seed", so.seed);
  scen->add_option("--trials", so.trials)->check(CLI::Range(1, 100));
  scen->add_option("--expected", so.expected_path, "pinned values file");

  int order = 6;
  std::string free_path, variant = "derived";
  auto* slc = app.add_subcommand("solve-lc", "formal power series solution of (L), (C)");
  slc->add_option("--order", order);
  slc->add_option("--seed", seed);
  slc->add_option("--free-data", free_path)->check(CLI::ExistingFile);
  slc->add_option("--variant", variant)->check(CLI::IsMember({"derived", "paper"}));

  UnicornArgs ua;
  auto* vu = app.add_subcommand("verify-unicorn", "finite-difference check of the unicorn normal form");
  vu->set_help_flag("--help", "print this help message and exit");
  vu->add_option("--source", ua.source)->check(CLI::IsMember({"flat", "cosh", "jet"}));
  vu->add_option("--grid", ua.grid, "n1,n2,nt,radius");
  vu->add_option("--h", ua.h)->check(CLI::PositiveNumber);
  vu->add_option("--tol", ua.tol)->check(CLI::PositiveNumber);
  vu->add_option("--fd-order", ua.fd_order)->check(CLI::IsMember({2, 4}));
  vu->add_option("--order", ua.order, "jet order for --source jet");
  vu->add_option("--seed", ua.seed);
  vu->add_option("--m2", ua.m2, "pulled (displayed normal form) or framed")->check(CLI::IsMember({"pulled", "framed"}));
  vu->add_flag("--points", ua.points, "include per-point data in JSON");

  auto* audit = app.add_subcommand("audit-c2", "re-derive (C), (L) in coordinates and compare with the printed forms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    bool json = std::any_of(argv + 1, argv + argc, [](const char* a) { return std::string(a) == "--json"; });
    if (json && e.get_exit_code() != 0) {
      emit(error_json("input", e.what()));
      return kInput;
    }
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*ident) return cmd_identities(target, solve, with_functions);
    if (*inv) return cmd_involutivity(target, trials, seed, symbolic);
    if (*scen) return cmd_scenario(target, so);
    if (*slc) return cmd_solve_lc(order, seed, free_path, variant);
    if (*vu) return cmd_verify_unicorn(ua);
    if (*audit) return cmd_scenario("pullback_audit", so);
  } catch (const ParseError& e) {
    if (g_json) emit(error_json("input", e.what()));
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    if (g_json) emit(error_json("input", e.what()));
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    if (g_json) emit(error_json("input", e.what()));
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    if (g_json) emit(error_json("internal", e.what()));
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
