#include <doctest.h>

#include <algorithm>

#include "eds/pfaffian.hpp"
#include "eds/scenarios.hpp"

using namespace eds;

namespace {

const Check& check(const ScenarioReport& r, const std::string& name) {
  auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const Check& c) { return c.name == name; });
  REQUIRE_MESSAGE(it != r.checks.end(), name);
  return *it;
}

void all_ok(const ScenarioReport& r) {
  for (const auto& c : r.checks) CHECK_MESSAGE(c.ok, r.id << "/" << c.name << ": " << c.computed << " vs " << c.expected);
  CHECK(r.ok());
}

int weighted(const std::vector<int>& s) {
  int sum = 0;
  for (size_t i = 0; i < s.size(); ++i) sum += static_cast<int>(i + 1) * s[i];
  return sum;
}

}  // namespace

TEST_CASE("finsler identities") {
  auto r = scenario_finsler_identities();
  all_ok(r);
  CHECK(check(r, "J").computed == "I2");
  CHECK(check(r, "K3").computed.find("-I*K") == 0);
}

TEST_CASE("contact checks") { all_ok(scenario_contact_checks()); }

TEST_CASE("landsberg system") {
  auto r = scenario_landsberg_ik();
  all_ok(r);
  // dimension from the linear solve, characters from the flags: independent routes
  auto rep = cartan_test(landsberg_system());
  CHECK(rep.characters == std::vector<int>{2, 2, 0});
  CHECK(rep.integral_dim == 6);
  CHECK(weighted(rep.characters) == rep.integral_dim);
  CHECK(rep.generality == std::pair<int, int>{2, 2});
}

TEST_CASE("prolonged frame bundle") {
  auto r = scenario_prolonged_frame_bundle();
  all_ok(r);
  CHECK(!r.notes.empty());
  const InvolutivityReport* rep = nullptr;
  for (const auto& [name, s] : r.systems)
    if (rep == nullptr) rep = &s;
  REQUIRE(rep != nullptr);
  CHECK(rep->characters == std::vector<int>{13, 8, 3});
  CHECK(rep->integral_dim == 38);
  CHECK(weighted(rep->characters) == 38);
  CHECK(rep->generality == std::pair<int, int>{3, 3});
  CHECK_FALSE(rep->unstable);
}

TEST_CASE("coframe change") {
  auto r = scenario_coframe_change();
  all_ok(r);
  CHECK(check(r, "I").ok);
  CHECK(check(r, "K").ok);
  CHECK(check(r, "k").ok);
}

TEST_CASE("pullback audit flags the printed curvature condition") {
  auto r = scenario_pullback_audit();
  all_ok(r);
  // the printed form differs from the derived one, the check passes because it reports that
  CHECK(check(r, "condC_derived_minus_printed").computed != "0");
  CHECK(check(r, "hodge_opposite_sign_fails").ok);
}

TEST_CASE("jet system for both curvature variants") {
  auto r = scenario_jet_lc();
  all_ok(r);
  for (CVariant v : {CVariant::Derived, CVariant::Printed}) {
    auto rep = cartan_test(jet_lc_system(v));
    CHECK(rep.characters == std::vector<int>{4, 0});
    CHECK(rep.integral_dim == 4);
    CHECK(rep.cartan_ok);
    CHECK(rep.generality == std::pair<int, int>{4, 1});
  }
}

TEST_CASE("run_scenario dispatch") {
  CHECK(scenario_names().size() == 7);
  CHECK(run_scenario("contact_checks").ok());
  CHECK_THROWS(run_scenario("nope"));
}
