#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eds/exterior.hpp"
#include "eds/pfaffian.hpp"

namespace eds {

// Which curvature condition (C) to impose downstairs in coordinates.
// Derived: m_22 = g2 m_2 - g1 m_1 + m (u^2 + div g)
// Printed: m_22 = g2 m_2 - g1 m_1 + u^2 + div g
enum class CVariant { Derived, Printed };

struct Check {
  std::string name;
  bool ok = false;
  std::string computed;
  std::string expected;
  std::string anchor;
};

struct ScenarioReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> identities;
  std::vector<std::pair<std::string, InvolutivityReport>> systems;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  double seconds = 0;
  bool ok() const;
};

struct ScenarioOptions {
  std::uint64_t seed = kDefaultSeed;
  int trials = 5;
  bool symbolic = false;
  CVariant variant = CVariant::Derived;
  std::string expected_path;  // empty: the shipped data/expected.json
};

// Spaces and systems, usable on their own.
CoframedSpace finsler_space();  // generalized Finsler: I, J, K generic
CoframedSpace landsberg_space(bool with_ricci = true);
LinearPfaffianSystem landsberg_system();
LinearPfaffianSystem frame_bundle_system();
LinearPfaffianSystem jet_lc_system(CVariant variant);

ScenarioReport scenario_finsler_identities(const ScenarioOptions& o = {});
ScenarioReport scenario_contact_checks(const ScenarioOptions& o = {});
ScenarioReport scenario_landsberg_ik(const ScenarioOptions& o = {});
ScenarioReport scenario_prolonged_frame_bundle(const ScenarioOptions& o = {});
ScenarioReport scenario_coframe_change(const ScenarioOptions& o = {});
ScenarioReport scenario_pullback_audit(const ScenarioOptions& o = {});
ScenarioReport scenario_jet_lc(const ScenarioOptions& o = {});

const std::vector<std::string>& scenario_names();
ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& o = {});
// Builds the named scenario's primary Pfaffian system (landsberg, frame_bundle, jet_lc, jet_lc_printed).
LinearPfaffianSystem scenario_system(const std::string& name);

std::string default_expected_path();

}  // namespace eds
