#include "eds/report.hpp"

namespace eds {

namespace {

std::string q_str(const Q& q) { return q.get_str(); }

}  // namespace

Json to_json(const LinearPfaffianSystem& sys, const InvolutivityReport& r) {
  Json j;
  j["kind"] = "involutivity";
  j["s0"] = r.s0;
  j["characters"] = r.characters;
  j["integral_dim"] = r.integral_dim;
  j["cartan_sum"] = r.cartan_sum;
  j["involutive"] = r.cartan_ok;
  j["torsion_absorbed"] = r.torsion_absorbed;
  j["torsion_was_zero"] = r.torsion_was_zero;
  if (!r.torsion_witness.empty()) j["torsion_witness"] = r.torsion_witness;
  j["generality"] = {r.generality.first, r.generality.second};
  j["trials"] = r.trials;
  j["seeds"] = r.seeds;
  j["unstable"] = r.unstable;
  j["nongeneric"] = r.nongeneric;
  const CoframedSpace& S = r.absorbed.gens.empty() ? sys.space : r.absorbed.space;
  Json tab = Json::array();
  const auto& A = r.decomposition.A;
  for (size_t a = 0; a < A.size(); ++a)
    for (size_t e = 0; e < A[a].size(); ++e)
      for (size_t i = 0; i < A[a][e].size(); ++i)
        if (!A[a][e][i].zero())
          tab.push_back({{"a", a + 1}, {"eps", e + 1}, {"i", i + 1}, {"value", S.str(A[a][e][i])}});
  j["tableau"] = tab;
  Json rel = Json::array();
  for (const auto& [u, v] : r.integral.relations) rel.push_back({{"unknown", S.ws().name(u)}, {"value", S.str(v)}});
  j["relations"] = rel;
  return j;
}

Json to_json(const ScenarioReport& r) {
  Json j;
  j["kind"] = "scenario";
  j["id"] = r.id;
  j["ok"] = r.ok();
  Json ids = Json::array();
  for (const auto& [k, v] : r.identities) ids.push_back({{"symbol", k}, {"value", v}});
  j["identities"] = ids;
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(
        {{"name", c.name}, {"ok", c.ok}, {"computed", c.computed}, {"expected", c.expected}, {"anchor", c.anchor}});
  j["checks"] = checks;
  Json sys = Json::array();
  for (const auto& [name, ir] : r.systems) {
    Json s;
    s["name"] = name;
    s["characters"] = ir.characters;
    s["integral_dim"] = ir.integral_dim;
    s["involutive"] = ir.cartan_ok;
    s["generality"] = {ir.generality.first, ir.generality.second};
    sys.push_back(s);
  }
  j["systems"] = sys;
  j["notes"] = r.notes;
  j["seconds"] = r.seconds;
  return j;
}

Json to_json(const JetState& s) {
  Json j;
  j["kind"] = "jets";
  j["order"] = s.N;
  j["variant"] = s.variant == CVariant::Derived ? "derived" : "paper";
  auto coeffs = [&](const Series& f) {
    Json a = Json::array();
    for (int n = 0; n <= s.N; ++n)
      for (int b = 0; b <= n; ++b)
        if (f.at(n - b, b) != 0) a.push_back({{"a", n - b}, {"b", b}, {"value", q_str(f.at(n - b, b))}});
    return a;
  };
  j["mbar"] = coeffs(s.mb);
  j["u"] = coeffs(s.u);
  bool zero = true;
  for (const auto& r : residual_jets(s)) zero = zero && r == 0;
  j["residuals_zero"] = zero;
  j["witness_m10"] = q_str(s.mb.get(1, 0));
  j["witness_m01"] = q_str(s.mb.get(0, 1));
  return j;
}

Json to_json(const VerificationReport& r, bool with_points) {
  Json j;
  j["kind"] = "unicorn";
  j["source"] = r.source;
  j["grid"] = {{"n1", r.grid.n1}, {"n2", r.grid.n2}, {"nt", r.grid.nt}, {"radius", r.grid.radius}};
  j["h"] = r.h;
  j["tol"] = r.tol;
  j["fd_order"] = r.fd_order;
  j["max_residual"] = r.max_residual;
  j["max_residual_half_step"] = r.max_residual_half;
  j["ratio"] = r.ratio;
  j["max_residual_t0"] = r.max_residual_t0;
  j["ratio_t0"] = r.ratio_t0;
  j["max_J"] = r.max_J;
  j["min_abs_det"] = r.min_abs_det;
  j["tail"] = r.tail;
  j["max_I"] = r.max_I;
  j["max_I1"] = r.max_I1;
  j["max_I3"] = r.max_I3;
  j["max_K2"] = r.max_K2;
  j["flags"] = {{"riemannian", r.riemannian}, {"berwald", r.berwald}, {"nontrivial", r.nontrivial}};
  j["passed"] = r.passed;
  if (with_points) {
    Json pts = Json::array();
    for (const auto& p : r.points)
      pts.push_back({{"z1", p.z1}, {"z2", p.z2}, {"t", p.t}, {"residual", p.residual}, {"J", p.J}, {"I", p.I}, {"K", p.K}});
    j["points"] = pts;
  }
  return j;
}

Json error_json(const std::string& kind, const std::string& message) {
  return {{"kind", "error"}, {"error", kind}, {"message", message}};
}

std::string schema_path() { return std::string(EDS_DATA_DIR) + "/report.schema.json"; }

}  // namespace eds
