#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eds/field.hpp"
#include "eds/pfaffian.hpp"
#include "eds/scenarios.hpp"

namespace eds {

struct SingularSeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CompatibilityFailure : std::runtime_error {
  CompatibilityFailure(int order, std::string equation, std::string adjust);
  int order;
  std::string equation;  // e.g. "L(2,0)"
  std::string adjust;    // free coefficient to change
};

// Truncated bivariate power series sum c[a,b] z1^a z2^b, a+b <= N.
class Series {
 public:
  Series() = default;
  explicit Series(int N) : N_(N), c_(static_cast<size_t>((N + 1) * (N + 2) / 2)) {}
  static Series constant(int N, const Q& v);

  int order() const { return N_; }
  Q& at(int a, int b) { return c_[idx(a, b)]; }
  const Q& at(int a, int b) const { return c_[idx(a, b)]; }
  // Zero outside the triangle.
  Q get(int a, int b) const;

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series operator*(const Q& s) const;
  Series diff(int var) const;  // var 0 -> z1, 1 -> z2; order drops by one
  Series inverse() const;      // throws SingularSeries if c[0,0] = 0
  Series truncate(int N) const;

  double eval(double z1, double z2) const;
  // Largest |c| z^(a+b) over the top order, at radius r.
  double tail(double r) const;

 private:
  size_t idx(int a, int b) const;
  int N_ = -1;
  std::vector<Q> c_;
};

struct JetState {
  int N = 0;
  Series mb, u;
  CVariant variant = CVariant::Derived;
};

// Free data on the line z2 = 0, coefficients of z1^a.
// mb_z2 is constrained by (L) above order 0; unset entries are solved for, set ones are checked.
// axis holds u(0, z2) coefficients of z2^b for b >= 2, the direction (L),(C) leave open.
struct FreeData {
  std::vector<std::optional<Q>> mb, mb_z2, u, u_z2, axis;
};

// Coefficients through total order N-2 of (L) then (C), each ordered by (a+b, b).
std::vector<Q> residual_jets(const JetState& s);
// Same, split by equation with labels.
struct JetResidual {
  std::string label;
  Q value;
};
std::vector<JetResidual> labelled_residuals(const JetState& s);

JetState solve_forward(const FreeData& f, int N, std::uint64_t seed = kDefaultSeed,
                       CVariant variant = CVariant::Derived);
// Random admissible free data: integers in [-3,3], u(0,0) > 0, mb(0,0), mb_1(0), mb_2(0) nonzero.
FreeData random_free_data(int N, std::uint64_t seed = kDefaultSeed);
FreeData cosh_free_data(int N);
JetState cosh_state(int N);

struct JetSample {
  double mb = 0, mb_z1 = 0, mb_z2 = 0, u = 0, u_z1 = 0, u_z2 = 0;
  double radius = 0;  // truncation radius used
  double tail = 0;    // top-order term magnitude at that radius
};
JetSample sample(const JetState& s, double z1, double z2, double h_bound);

std::string serialize(const JetState& s);
JetState deserialize(const std::string& text);
std::string serialize(const FreeData& f);
FreeData deserialize_free_data(const std::string& text);

}  // namespace eds
