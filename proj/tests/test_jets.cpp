#include <doctest.h>

#include <cmath>

#include "eds/jets.hpp"

using namespace eds;

namespace {

bool all_zero(const std::vector<Q>& r) {
  for (const auto& q : r)
    if (q != 0) return false;
  return true;
}

bool same_through(const JetState& a, const JetState& b, int N) {
  for (int n = 0; n <= N; ++n)
    for (int j = 0; j <= n; ++j)
      if (a.mb.get(n - j, j) != b.mb.get(n - j, j) || a.u.get(n - j, j) != b.u.get(n - j, j)) return false;
  return true;
}

JetState constant_state(int N, const Q& mb, CVariant v) {
  JetState s;
  s.N = N;
  s.mb = Series::constant(N, mb);
  s.u = Series::constant(N, Q(1));
  s.variant = v;
  return s;
}

}  // namespace

TEST_CASE("series arithmetic") {
  Series x(4);
  x.at(1, 0) = 1;
  Series one = Series::constant(4, Q(1));
  Series g = (one - x).inverse();  // geometric
  for (int a = 0; a <= 4; ++a) CHECK(g.get(a, 0) == Q(1));
  CHECK((g * (one - x)).get(3, 0) == Q(0));
  CHECK(x.diff(0).get(0, 0) == Q(1));
  CHECK(x.diff(0).order() == 3);
  CHECK_THROWS_AS(x.inverse(), SingularSeries);
}

TEST_CASE("residuals of hand-checked states") {
  // cosh z2 with u = 1 solves the derived pair
  CHECK(all_zero(residual_jets(cosh_state(8))));

  // mbar = 1: (C) misses by the constant mbar u^2, (L) holds
  auto res = labelled_residuals(constant_state(4, Q(1), CVariant::Derived));
  bool c_first = false;
  for (const auto& r : res) {
    if (r.label.rfind("L", 0) == 0) CHECK(r.value == 0);
    if (r.label == "C(0,0)") {
      c_first = true;
      CHECK(r.value == Q(-1));
    }
    if (r.label.rfind("C", 0) == 0 && r.label != "C(0,0)") CHECK(r.value == 0);
  }
  CHECK(c_first);

  // printed (C) wants mbar_22 = u^2 = 1: mbar = 1 + z2^2/2
  JetState p = constant_state(6, Q(1), CVariant::Printed);
  p.mb.at(0, 2) = Q(1, 2);
  CHECK(all_zero(residual_jets(p)));

  JetState z = constant_state(3, Q(1), CVariant::Derived);
  z.u.at(0, 0) = 0;
  CHECK_THROWS_AS(residual_jets(z), SingularSeries);
}

TEST_CASE("solve_forward reproduces cosh") {
  JetState s = solve_forward(cosh_free_data(8), 8);
  CHECK(same_through(s, cosh_state(8), 8));
}

TEST_CASE("random free data solves exactly with witnesses") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    JetState s = solve_forward(random_free_data(6, seed), 6, seed);
    CHECK(residual_jets(s).size() > 0);
    CHECK(all_zero(residual_jets(s)));
    CHECK(s.mb.get(1, 0) != 0);
    CHECK(s.mb.get(0, 1) != 0);
    CHECK(s.u.get(0, 0) > 0);
  }
}

TEST_CASE("order consistency") {
  for (std::uint64_t seed : {2u, 7u}) {
    JetState s8 = solve_forward(random_free_data(8, seed), 8, seed);
    JetState s6 = solve_forward(random_free_data(6, seed), 6, seed);
    CHECK(same_through(s8, s6, 6));
  }
}

TEST_CASE("incompatible free data names the coefficient") {
  FreeData f = random_free_data(6, 1);
  f.mb_z2.resize(7);
  for (auto& x : f.mb_z2)
    if (!x) x = Q(1);
  try {
    solve_forward(f, 6, 1);
    FAIL("expected a compatibility failure");
  } catch (const CompatibilityFailure& e) {
    CHECK(e.order > 0);
    CHECK(e.equation.rfind("L", 0) == 0);
    CHECK(e.adjust.find("mbar_z2") != std::string::npos);
  }
}

TEST_CASE("precondition errors") {
  FreeData f = random_free_data(4, 3);
  f.u[0] = Q(-1);
  CHECK_THROWS_AS(solve_forward(f, 4, 3), std::invalid_argument);
  f.u[0] = Q(0);
  CHECK_THROWS_AS(solve_forward(f, 4, 3), std::invalid_argument);
}

TEST_CASE("sampling") {
  JetState c = cosh_state(8);
  JetSample o = sample(c, 0, 0, 0.5);
  CHECK(o.mb == 1.0);
  CHECK(o.mb_z2 == 0.0);
  CHECK(o.u == 1.0);
  JetSample h = sample(c, 0, 0.5, 0.5);
  CHECK(std::abs(h.mb - std::cosh(0.5)) < 1e-6);
  CHECK(std::abs(h.mb_z2 - std::sinh(0.5)) < 1e-5);

  JetState s = solve_forward(random_free_data(6, 4), 6, 4);
  JetSample z = sample(s, 0, 0, 0.1);
  CHECK(z.mb == s.mb.get(0, 0).get_d());
  CHECK(z.mb_z1 == s.mb.get(1, 0).get_d());
  CHECK(z.mb_z2 == s.mb.get(0, 1).get_d());
  CHECK(z.u_z1 == s.u.get(1, 0).get_d());
  CHECK(z.u_z2 == s.u.get(0, 1).get_d());
}

TEST_CASE("serialization round trip") {
  JetState s = solve_forward(random_free_data(5, 9), 5, 9);
  JetState r = deserialize(serialize(s));
  CHECK(r.N == s.N);
  CHECK(r.variant == s.variant);
  CHECK(same_through(r, s, 5));

  FreeData f = random_free_data(5, 9);
  FreeData g = deserialize_free_data(serialize(f));
  CHECK(g.mb == f.mb);
  CHECK(g.u == f.u);
  CHECK(g.axis == f.axis);
  CHECK_THROWS_AS(deserialize("N 2\nbogus 1 2\n"), std::invalid_argument);
}
