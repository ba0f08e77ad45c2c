#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eds/field.hpp"

namespace eds {

struct IncompleteStructure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Mask = std::uint64_t;

constexpr Mask bit(int i) { return Mask(1) << i; }
Mask mask_of(const std::vector<int>& idx);
std::vector<int> indices(Mask m);
// Sign of e_a ^ e_b relative to the sorted product; 0 if they overlap.
int wedge_sign(Mask a, Mask b);

// Exterior form over a coframe; indices are 0-based coframe positions.
class Form {
 public:
  Form() = default;
  explicit Form(int degree) : deg_(degree) {}
  static Form scalar(const RatExpr& f);
  static Form basis(int i);
  static Form one(const std::vector<std::pair<int, RatExpr>>& terms);

  int degree() const { return deg_; }
  bool zero() const { return c_.empty(); }
  const std::map<Mask, RatExpr>& terms() const { return c_; }
  RatExpr coeff(Mask m) const;
  // Coefficient at an index tuple in any order; the permutation sign is applied.
  RatExpr coeff(const std::vector<int>& idx) const;
  RatExpr at(int i) const { return coeff(bit(i)); }
  void add(Mask m, const RatExpr& c);
  void set(Mask m, const RatExpr& c);

  Form operator-() const;
  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const RatExpr& f, const Form& a);
  bool operator==(const Form& o) const { return deg_ == o.deg_ && c_ == o.c_; }
  bool operator!=(const Form& o) const { return !(*this == o); }

  Form map(const std::function<RatExpr(const RatExpr&)>& fn) const;

 private:
  int deg_ = 0;
  std::map<Mask, RatExpr> c_;
};

Form wedge(const Form& a, const Form& b);
Form wedge(std::initializer_list<Form> fs);
// Replace each basis element e_i by images[i] (a linear change of coframe).
Form substitute_basis(const Form& f, const std::vector<Form>& images);
Form substitute(const Form& f, const std::map<int, RatExpr>& s);

class CoframedSpace {
 public:
  CoframedSpace();
  CoframedSpace(std::vector<std::string> coframe, bool coordinate_mode = false,
                std::shared_ptr<Workspace> ws = nullptr);
  // Copies share the workspace; caches are not copied.
  CoframedSpace(const CoframedSpace& o);
  CoframedSpace& operator=(const CoframedSpace& o);

  Workspace& ws() const { return *ws_; }
  std::shared_ptr<Workspace> ws_ptr() const { return ws_; }
  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& coframe() const { return names_; }
  int index_of(const std::string& name) const;
  bool coordinate_mode() const { return coordinate_; }
  RatExpr sym(const std::string& name) const { return RatExpr::sym(ws_->find(name)); }
  Form e(const std::string& name) const { return Form::basis(index_of(name)); }

  // Copy with closed coframe elements appended.
  CoframedSpace extended(const std::vector<std::string>& extra) const;

  // Declarations
  void set_drule(int i, const Form& two_form);
  void close(int i) { set_drule(i, Form(2)); }
  bool has_drule(int i) const { return drules_.at(static_cast<size_t>(i)).has_value(); }
  int function(const std::string& name, const Form& differential);
  void set_differential(int v, const Form& differential);
  // Function whose derivatives along `dirs` (0-based; all if empty) are fresh derived symbols.
  int generic(const std::string& name, std::vector<int> dirs = {});
  int coordinate(const std::string& name, int i);
  int constant(const std::string& name);
  void add_rewrite(int v, const RatExpr& image);
  void add_rewrite(const std::string& name, const RatExpr& image) { add_rewrite(ws_->find(name), image); }
  const std::vector<std::pair<int, RatExpr>>& rewrites() const { return rewrites_; }
  bool has_rewrite(int v) const { return rewrite_at_.count(v) > 0; }
  std::vector<int> declared_functions() const;
  bool is_generic(int v) const;
  void seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

  // Derived symbol f_dir (dir 0-based); created on demand.
  int derivative(int v, int dir) const;

  RatExpr normal(const RatExpr& e) const;
  Form normal(const Form& f) const;
  Form dsym(int v) const;
  Form d(const RatExpr& f) const;
  Form d(const Form& f) const;
  // Directional derivative of f along the dual of e_dir.
  RatExpr partial(const RatExpr& f, int dir) const;

  std::string str(const Form& f) const;
  std::string str(const RatExpr& e) const { return ws_->str(e); }

 private:
  std::optional<RatExpr> resolve(int v, int depth) const;
  RatExpr normal(const RatExpr& e, int depth) const;
  Form dsym(int v, int depth) const;
  Form dbasis(Mask m) const;
  void invalidate();

  std::shared_ptr<Workspace> ws_;
  std::vector<std::string> names_;
  bool coordinate_ = false;
  bool sealed_ = false;
  std::vector<std::optional<Form>> drules_;
  std::map<int, Form> fdiffs_;
  std::map<int, std::vector<int>> generic_;  // root -> directions
  std::set<int> constants_;
  std::vector<std::pair<int, RatExpr>> rewrites_;
  std::map<int, RatExpr> rewrite_at_;

  mutable std::recursive_mutex mu_;
  mutable std::map<int, std::optional<RatExpr>> resolved_;
  mutable std::map<int, Form> dsym_cache_;
  mutable std::map<Mask, Form> dbasis_cache_;
};

// d(d f) for a function symbol; zero iff its Ricci identities are encoded.
Form d_square_residual(int f, const CoframedSpace& space);

struct Identity {
  int symbol;
  RatExpr value;
};

// Solves the d^2 = 0 residuals of every coframe element and of `sources`
// (default: all declared functions) for `unknowns`, longest index word first,
// and installs the solutions as rewrites.
std::vector<Identity> derive_identities(CoframedSpace& space, std::vector<int> unknowns,
                                        std::optional<std::vector<int>> sources = std::nullopt);

}  // namespace eds
