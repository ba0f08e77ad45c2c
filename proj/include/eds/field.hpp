#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eds {

using Q = mpq_class;

struct MalformedExpression : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvaluationSingularity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SymKind { Base, Derived, Coordinate, Auxiliary };

struct Symbol {
  std::string name;
  SymKind kind = SymKind::Base;
  int parent = -1;        // root symbol for derived functions
  std::vector<int> word;  // direction indices (1-based), application order
};

// Exponent vector stored sparsely: (variable, exponent) sorted by variable.
using Mono = std::vector<std::pair<int, int>>;

int mono_degree(const Mono& m);
// Graded lexicographic; lower variable index ranks higher. Returns <0, 0, >0.
int grlex_cmp(const Mono& a, const Mono& b);
Mono mono_mul(const Mono& a, const Mono& b);
std::optional<Mono> mono_div(const Mono& a, const Mono& b);
int mono_exp(const Mono& m, int var);

struct Term {
  Mono m;
  Q c;
};

class Poly {
 public:
  Poly() = default;
  Poly(const Q& c);
  Poly(long c) : Poly(Q(c)) {}
  static Poly var(int v, int e = 1);
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return t_; }
  bool zero() const { return t_.empty(); }
  bool is_const() const { return t_.empty() || (t_.size() == 1 && t_[0].m.empty()); }
  Q const_value() const { return t_.empty() ? Q(0) : (t_.back().m.empty() ? t_.back().c : Q(0)); }
  bool is_monomial() const { return t_.size() == 1; }
  const Term& lead() const { return t_.front(); }
  int total_degree() const;
  int degree_in(int v) const;
  std::vector<int> vars() const;
  bool has_var(int v) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Q& c) const;
  Poly times_mono(const Mono& m, const Q& c) const;
  Poly pow(int e) const;
  Poly diff(int v) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // Coefficients of v^0, v^1, ... as polynomials free of v.
  std::vector<Poly> coeffs_in(int v) const;
  static Poly from_coeffs(int v, const std::vector<Poly>& cs);

  Q eval(const std::map<int, Q>& at) const;
  double eval_double(const std::map<int, double>& at) const;

 private:
  std::vector<Term> t_;  // grlex descending, no zero coefficients
};

std::optional<Poly> exact_div(const Poly& a, const Poly& b);
Poly monic(const Poly& p);
Poly poly_gcd(const Poly& a, const Poly& b);

class RatExpr {
 public:
  RatExpr() : den_(1) {}
  RatExpr(const Q& c) : num_(c), den_(1) {}
  RatExpr(long c) : RatExpr(Q(c)) {}
  RatExpr(const Poly& p) : num_(p), den_(1) {}
  // Normalizing constructor; throws MalformedExpression on zero denominator.
  RatExpr(const Poly& n, const Poly& d);
  static RatExpr sym(int v) { return RatExpr(Poly::var(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool zero() const { return num_.zero(); }
  bool is_const() const { return num_.is_const() && den_.is_const(); }
  Q const_value() const { return num_.const_value() / den_.const_value(); }
  std::vector<int> vars() const;
  bool has_var(int v) const { return num_.has_var(v) || den_.has_var(v); }

  RatExpr operator-() const;
  friend RatExpr operator+(const RatExpr& a, const RatExpr& b);
  friend RatExpr operator-(const RatExpr& a, const RatExpr& b);
  friend RatExpr operator*(const RatExpr& a, const RatExpr& b);
  friend RatExpr operator/(const RatExpr& a, const RatExpr& b);
  RatExpr& operator+=(const RatExpr& o) { return *this = *this + o; }
  RatExpr& operator-=(const RatExpr& o) { return *this = *this - o; }
  RatExpr& operator*=(const RatExpr& o) { return *this = *this * o; }
  RatExpr pow(int e) const;
  RatExpr diff(int v) const;

  bool operator==(const RatExpr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatExpr& o) const { return !(*this == o); }

  Q eval(const std::map<int, Q>& at) const;
  double eval_double(const std::map<int, double>& at) const;

 private:
  struct Raw {};
  RatExpr(Raw, Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {}
  friend RatExpr normalize(const RatExpr& e);
  Poly num_;
  Poly den_;
};

RatExpr normalize(const RatExpr& e);
RatExpr substitute(const RatExpr& e, const std::map<int, RatExpr>& s);
RatExpr substitute(const Poly& p, const std::map<int, RatExpr>& s);

class Workspace {
 public:
  int declare(const std::string& name, SymKind kind = SymKind::Base);
  int ensure(const std::string& name, SymKind kind = SymKind::Base);
  // Symbol for the derivative of `parent` along direction `dir` (1-based).
  // Symmetric words are sorted, which identifies mixed partials.
  int derived(int parent, int dir, bool symmetric = false);
  int find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) >= 0; }
  const Symbol& sym(int v) const { return syms_.at(static_cast<size_t>(v)); }
  const std::string& name(int v) const { return sym(v).name; }
  size_t size() const { return syms_.size(); }
  int root(int v) const;
  std::vector<int> word(int v) const;
  int lookup_derived(int root, const std::vector<int>& word) const;

  // c^2 + s^2 = 1; normalization replaces c^2 by 1 - s^2.
  void declare_unit_circle(int c, int s);
  Poly reduce(const Poly& p) const;
  RatExpr reduce(const RatExpr& e) const;

  std::string str(const Poly& p) const;
  std::string str(const RatExpr& e) const;

 private:
  std::vector<Symbol> syms_;
  std::map<std::string, int> by_name_;
  std::map<std::pair<int, std::vector<int>>, int> derived_;
  std::vector<std::pair<int, int>> circles_;
};

}  // namespace eds
