#include <doctest.h>

#include <random>

#include "eds/linalg.hpp"
#include "eds/pfaffian.hpp"

using namespace eds;

namespace {

struct Syms {
  Workspace ws;
  int x = ws.declare("x"), y = ws.declare("y"), m = ws.declare("m"), m3 = ws.declare("m3"), m33 = ws.declare("m33");
  int I = ws.declare("I"), K = ws.declare("K");
  RatExpr s(int v) const { return RatExpr::sym(v); }
};

// Random polynomial in three variables with small integer coefficients.
RatExpr random_poly(std::mt19937_64& rng, const std::vector<int>& vars) {
  std::uniform_int_distribution<int> c(-5, 5), e(0, 2), n(1, 4);
  RatExpr out;
  int terms = n(rng);
  for (int t = 0; t < terms; ++t) {
    RatExpr mono = RatExpr(c(rng));
    for (int v : vars) mono *= RatExpr::sym(v).pow(e(rng));
    out += mono;
  }
  return out;
}

RatExpr random_rat(std::mt19937_64& rng, const std::vector<int>& vars) {
  RatExpr d = random_poly(rng, vars);
  while (d.zero()) d = random_poly(rng, vars);
  return random_poly(rng, vars) / d;
}

}  // namespace

TEST_CASE("normalize cancels common factors") {
  Syms S;
  RatExpr x = S.s(S.x);
  CHECK((x * x - 1) / (x - 1) == x + 1);
  CHECK((RatExpr(0) / (RatExpr(5) * S.s(S.m))).zero());
  CHECK((S.s(S.I) * S.s(S.K)) / S.s(S.K) == S.s(S.I));
  CHECK_THROWS_AS(RatExpr(Poly(1), Poly()), MalformedExpression);
}

TEST_CASE("normalized denominators have positive leading coefficient") {
  Syms S;
  RatExpr e = S.s(S.x) / (RatExpr(-2) * S.s(S.y));
  CHECK(e.den().lead().c > 0);
  CHECK(e == -S.s(S.x) / (RatExpr(2) * S.s(S.y)));
}

TEST_CASE("evaluate") {
  Syms S;
  CHECK((S.s(S.m3) / S.s(S.m)).eval({{S.m, 2}, {S.m3, 6}}) == 3);
  CHECK((1 - S.s(S.m33) / S.s(S.m)).eval({{S.m, 1}, {S.m33, 1}}) == 0);
  RatExpr q = (S.s(S.x) + S.s(S.y)) / (S.s(S.x) - S.s(S.y));
  CHECK_THROWS_AS(q.eval({{S.x, 1}, {S.y, 1}}), EvaluationSingularity);
}

TEST_CASE("unit circle relation reduces c^2") {
  Workspace ws;
  int c = ws.declare("c"), s = ws.declare("s");
  ws.declare_unit_circle(c, s);
  RatExpr C = RatExpr::sym(c), Sn = RatExpr::sym(s);
  CHECK(ws.reduce(C * C + Sn * Sn) == RatExpr(1));
}

TEST_CASE("ring laws on 200 random triples") {
  Syms S;
  std::mt19937_64 rng(kDefaultSeed);
  std::vector<int> vars{S.x, S.y, S.m};
  for (int t = 0; t < 200; ++t) {
    RatExpr a = random_rat(rng, vars), b = random_rat(rng, vars), c = random_rat(rng, vars);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * (b * c) == (a * b) * c);
    CHECK(a + b == b + a);
    CHECK(normalize(normalize(a)) == normalize(a));
    std::map<int, Q> at{{S.x, Q(3, 7)}, {S.y, Q(-5, 11)}, {S.m, Q(13, 2)}};
    try {
      CHECK((a * b).eval(at) == a.eval(at) * b.eval(at));
    } catch (const EvaluationSingularity&) {
    }
  }
}

TEST_CASE("solve_linear: identity system") {
  Mat A{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  Vec b{1, 2, 3};
  LinearSolution s = solve_linear(A, b);
  CHECK(s.consistent);
  CHECK(s.nullity() == 0);
  CHECK(s.particular == Vec{1, 2, 3});
}

TEST_CASE("solve_linear: symbolic 2x2 agrees with Cramer") {
  Workspace ws;
  RatExpr a = RatExpr::sym(ws.declare("a")), b = RatExpr::sym(ws.declare("b")), c = RatExpr::sym(ws.declare("c")),
          d = RatExpr::sym(ws.declare("d")), e = RatExpr::sym(ws.declare("e")), f = RatExpr::sym(ws.declare("f"));
  LinearSolution s = solve_linear({{a, b}, {c, d}}, {e, f});
  REQUIRE(s.consistent);
  RatExpr det = a * d - b * c;
  CHECK(s.particular[0] == (e * d - b * f) / det);
  CHECK(s.particular[1] == (a * f - e * c) / det);
}

TEST_CASE("solve_linear: inconsistent and underdetermined systems") {
  LinearSolution bad = solve_linear({{1, 1}, {2, 2}}, {1, 3});
  CHECK_FALSE(bad.consistent);
  LinearSolution under = solve_linear({{1, 1, 0}}, {2});
  CHECK(under.consistent);
  CHECK(under.nullity() == 2);
}

TEST_CASE("solve_linear solutions satisfy A x = b on random rational systems") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    std::uniform_int_distribution<int> dim(1, 5), val(-4, 4);
    int r = dim(rng), c = dim(rng);
    Mat A(static_cast<size_t>(r), Vec(static_cast<size_t>(c)));
    Vec x(static_cast<size_t>(c));
    for (auto& v : x) v = RatExpr(Q(val(rng), 3));
    for (auto& row : A)
      for (auto& v : row) v = RatExpr(val(rng));
    Vec b = mat_vec(A, x);
    LinearSolution s = solve_linear(A, b);
    REQUIRE(s.consistent);
    CHECK(mat_vec(A, s.particular) == b);
    for (const auto& n : s.nullspace)
      for (const auto& v : mat_vec(A, n)) CHECK(v.zero());
  }
}

TEST_CASE("rank and exact rational solve") {
  CHECK(rank_q({{1, 2}, {2, 4}}) == 1);
  QSolution s = solve_q({{2, 0}, {0, 4}}, {1, 1});
  CHECK(s.particular == QVec{Q(1, 2), Q(1, 4)});
  CHECK_FALSE(invert({{1, 2}, {2, 4}}).has_value());
}
