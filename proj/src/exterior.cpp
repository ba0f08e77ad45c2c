#include "eds/exterior.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "eds/linalg.hpp"

namespace eds {

namespace {
constexpr int kRewriteDepth = 64;
}

Mask mask_of(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= bit(i);
  return m;
}

std::vector<int> indices(Mask m) {
  std::vector<int> out;
  while (m) {
    int i = std::countr_zero(m);
    out.push_back(i);
    m &= m - 1;
  }
  return out;
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  Mask bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb &= bb - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

// ---------------------------------------------------------------- Form

Form Form::scalar(const RatExpr& f) {
  Form r(0);
  if (!f.zero()) r.c_[0] = f;
  return r;
}

Form Form::basis(int i) {
  Form r(1);
  r.c_[bit(i)] = RatExpr(1);
  return r;
}

Form Form::one(const std::vector<std::pair<int, RatExpr>>& terms) {
  Form r(1);
  for (const auto& [i, c] : terms) r.add(bit(i), c);
  return r;
}

RatExpr Form::coeff(Mask m) const {
  auto it = c_.find(m);
  return it == c_.end() ? RatExpr() : it->second;
}

RatExpr Form::coeff(const std::vector<int>& idx) const {
  Mask m = 0;
  int sign = 1;
  for (int i : idx) {
    int s = wedge_sign(m, bit(i));
    if (s == 0) return RatExpr();
    sign *= s;
    m |= bit(i);
  }
  RatExpr c = coeff(m);
  return sign < 0 ? -c : c;
}

void Form::add(Mask m, const RatExpr& c) {
  if (c.zero()) return;
  auto it = c_.find(m);
  if (it == c_.end()) {
    c_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.zero()) c_.erase(it);
}

void Form::set(Mask m, const RatExpr& c) {
  if (c.zero())
    c_.erase(m);
  else
    c_[m] = c;
}

Form Form::operator-() const {
  Form r(deg_);
  for (const auto& [m, c] : c_) r.c_.emplace(m, -c);
  return r;
}

Form& Form::operator+=(const Form& o) {
  if (o.zero()) return *this;
  if (zero()) deg_ = o.deg_;
  if (deg_ != o.deg_) throw MalformedExpression("adding forms of different degree");
  for (const auto& [m, c] : o.c_) add(m, c);
  return *this;
}

Form& Form::operator-=(const Form& o) { return *this += -o; }

Form operator*(const RatExpr& f, const Form& a) {
  Form r(a.deg_);
  if (f.zero()) return r;
  for (const auto& [m, c] : a.c_) r.add(m, f * c);
  return r;
}

Form Form::map(const std::function<RatExpr(const RatExpr&)>& fn) const {
  Form r(deg_);
  for (const auto& [m, c] : c_) r.add(m, fn(c));
  return r;
}

Form wedge(const Form& a, const Form& b) {
  Form r(a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      RatExpr p = ca * cb;
      r.add(ma | mb, s > 0 ? p : -p);
    }
  return r;
}

Form wedge(std::initializer_list<Form> fs) {
  Form r = Form::scalar(RatExpr(1));
  for (const auto& f : fs) r = wedge(r, f);
  return r;
}

Form substitute_basis(const Form& f, const std::vector<Form>& images) {
  Form r(f.degree());
  for (const auto& [m, c] : f.terms()) {
    Form acc = Form::scalar(c);
    for (int i : indices(m)) {
      acc = wedge(acc, images.at(static_cast<size_t>(i)));
      if (acc.zero()) break;
    }
    r += acc;
  }
  return r;
}

Form substitute(const Form& f, const std::map<int, RatExpr>& s) {
  return f.map([&](const RatExpr& c) { return substitute(c, s); });
}

// ---------------------------------------------------------------- space

CoframedSpace::CoframedSpace() : ws_(std::make_shared<Workspace>()) {}

CoframedSpace::CoframedSpace(std::vector<std::string> coframe, bool coordinate_mode,
                             std::shared_ptr<Workspace> ws)
    : ws_(ws ? std::move(ws) : std::make_shared<Workspace>()),
      names_(std::move(coframe)),
      coordinate_(coordinate_mode) {
  if (names_.empty()) throw MalformedExpression("coframe must not be empty");
  if (names_.size() > 64) throw MalformedExpression("coframe dimension above 64 is not supported");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw MalformedExpression("duplicate coframe names");
  drules_.resize(names_.size());
  if (coordinate_)
    for (auto& r : drules_) r = Form(2);
}

CoframedSpace::CoframedSpace(const CoframedSpace& o) { *this = o; }

CoframedSpace& CoframedSpace::operator=(const CoframedSpace& o) {
  if (this == &o) return *this;
  ws_ = o.ws_;
  names_ = o.names_;
  coordinate_ = o.coordinate_;
  sealed_ = false;
  drules_ = o.drules_;
  fdiffs_ = o.fdiffs_;
  generic_ = o.generic_;
  constants_ = o.constants_;
  rewrites_ = o.rewrites_;
  rewrite_at_ = o.rewrite_at_;
  invalidate();
  return *this;
}

CoframedSpace CoframedSpace::extended(const std::vector<std::string>& extra) const {
  CoframedSpace out(*this);
  for (const auto& nm : extra) {
    if (std::find(out.names_.begin(), out.names_.end(), nm) != out.names_.end())
      throw MalformedExpression("duplicate coframe names");
    out.names_.push_back(nm);
    out.drules_.emplace_back(Form(2));
  }
  if (out.names_.size() > 64) throw MalformedExpression("coframe dimension above 64 is not supported");
  return out;
}

int CoframedSpace::index_of(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw MalformedExpression("unknown coframe element " + name);
}

void CoframedSpace::invalidate() {
  std::lock_guard lk(mu_);
  resolved_.clear();
  dsym_cache_.clear();
  dbasis_cache_.clear();
}

void CoframedSpace::set_drule(int i, const Form& f) {
  if (!f.zero() && f.degree() != 2) throw MalformedExpression("structure equation must be a 2-form");
  drules_.at(static_cast<size_t>(i)) = f.zero() ? Form(2) : f;
  invalidate();
}

int CoframedSpace::function(const std::string& name, const Form& differential) {
  int v = ws_->ensure(name);
  set_differential(v, differential);
  return v;
}

void CoframedSpace::set_differential(int v, const Form& differential) {
  if (!differential.zero() && differential.degree() != 1)
    throw MalformedExpression("differential of " + ws_->name(v) + " must be a 1-form");
  fdiffs_[v] = differential.zero() ? Form(1) : differential;
  invalidate();
}

int CoframedSpace::generic(const std::string& name, std::vector<int> dirs) {
  int v = ws_->ensure(name);
  if (dirs.empty())
    for (int i = 0; i < dim(); ++i) dirs.push_back(i);
  generic_[v] = std::move(dirs);
  invalidate();
  return v;
}

int CoframedSpace::coordinate(const std::string& name, int i) {
  int v = ws_->ensure(name, SymKind::Coordinate);
  set_differential(v, Form::basis(i));
  return v;
}

int CoframedSpace::constant(const std::string& name) {
  int v = ws_->ensure(name, SymKind::Auxiliary);
  constants_.insert(v);
  invalidate();
  return v;
}

void CoframedSpace::add_rewrite(int v, const RatExpr& image) {
  if (v < 0) throw MalformedExpression("rewrite for an undeclared symbol");
  if (rewrite_at_.count(v)) throw MalformedExpression("duplicate rewrite for " + ws_->name(v));
  rewrites_.emplace_back(v, image);
  rewrite_at_.emplace(v, image);
  invalidate();
}

std::vector<int> CoframedSpace::declared_functions() const {
  std::vector<int> out;
  for (const auto& [v, f] : fdiffs_)
    if (ws_->sym(v).kind != SymKind::Coordinate) out.push_back(v);
  for (const auto& [v, d] : generic_) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool CoframedSpace::is_generic(int v) const { return generic_.count(ws_->root(v)) > 0; }

int CoframedSpace::derivative(int v, int dir) const {
  std::lock_guard lk(mu_);
  return ws_->derived(v, dir + 1, coordinate_);
}

std::optional<RatExpr> CoframedSpace::resolve(int v, int depth) const {
  if (depth > kRewriteDepth)
    throw StructureInconsistency("rewrite depth cap exceeded at " + ws_->name(v));
  {
    std::lock_guard lk(mu_);
    auto it = resolved_.find(v);
    if (it != resolved_.end()) return it->second;
  }
  std::optional<RatExpr> out;
  auto rw = rewrite_at_.find(v);
  if (rw != rewrite_at_.end()) {
    out = normal(rw->second, depth + 1);
  } else {
    const Symbol& s = ws_->sym(v);
    if (s.kind == SymKind::Derived && !s.word.empty()) {
      std::vector<int> pw(s.word.begin(), s.word.end() - 1);
      int parent = pw.empty() ? s.parent : ws_->lookup_derived(s.parent, pw);
      if (parent >= 0) {
        if (auto img = resolve(parent, depth + 1)) {
          Form df = d(*img);
          out = normal(df.at(s.word.back() - 1), depth + 1);
        }
      }
    }
  }
  std::lock_guard lk(mu_);
  resolved_[v] = out;
  return out;
}

RatExpr CoframedSpace::normal(const RatExpr& e) const { return normal(e, 0); }

RatExpr CoframedSpace::normal(const RatExpr& e, int depth) const {
  if (e.is_const()) return e;
  std::map<int, RatExpr> sub;
  for (int v : e.vars())
    if (auto img = resolve(v, depth + 1)) sub.emplace(v, *img);
  RatExpr r = sub.empty() ? e : substitute(e, sub);
  return ws_->reduce(r);
}

Form CoframedSpace::normal(const Form& f) const {
  return f.map([&](const RatExpr& c) { return normal(c); });
}

Form CoframedSpace::dsym(int v) const { return dsym(v, 0); }

Form CoframedSpace::dsym(int v, int depth) const {
  {
    std::lock_guard lk(mu_);
    auto it = dsym_cache_.find(v);
    if (it != dsym_cache_.end()) return it->second;
  }
  Form out(1);
  if (auto img = resolve(v, depth + 1)) {
    out = d(*img);
  } else if (auto it = fdiffs_.find(v); it != fdiffs_.end()) {
    out = normal(it->second);
  } else if (constants_.count(v)) {
    out = Form(1);
  } else if (auto g = generic_.find(ws_->root(v)); g != generic_.end()) {
    for (int dir : g->second) out.add(bit(dir), normal(RatExpr::sym(derivative(v, dir))));
  } else {
    throw IncompleteStructure("no differential rule for symbol " + ws_->name(v));
  }
  std::lock_guard lk(mu_);
  dsym_cache_[v] = out;
  return out;
}

Form CoframedSpace::d(const RatExpr& f0) const {
  Form r(1);
  RatExpr f = normal(f0);
  if (f.is_const()) return r;
  for (int v : f.vars()) {
    Form dv = dsym(v);
    if (dv.zero()) continue;
    RatExpr p = f.diff(v);
    if (p.zero()) continue;
    r += p * dv;
  }
  return normal(r);
}

Form CoframedSpace::dbasis(Mask m) const {
  {
    std::lock_guard lk(mu_);
    auto it = dbasis_cache_.find(m);
    if (it != dbasis_cache_.end()) return it->second;
  }
  auto idx = indices(m);
  Form out(static_cast<int>(idx.size()) + 1);
  for (size_t j = 0; j < idx.size(); ++j) {
    const auto& rule = drules_.at(static_cast<size_t>(idx[j]));
    if (!rule) throw IncompleteStructure("no structure equation for " + names_[static_cast<size_t>(idx[j])]);
    if (rule->zero()) continue;
    Mask left = 0, right = 0;
    for (size_t k = 0; k < j; ++k) left |= bit(idx[k]);
    for (size_t k = j + 1; k < idx.size(); ++k) right |= bit(idx[k]);
    Form l(static_cast<int>(j));
    l.add(left, RatExpr(1));
    Form rr(static_cast<int>(idx.size() - j - 1));
    rr.add(right, RatExpr(1));
    Form t = wedge(wedge(l, *rule), rr);
    out += (j % 2 == 0) ? t : -t;
  }
  out = normal(out);
  std::lock_guard lk(mu_);
  dbasis_cache_[m] = out;
  return out;
}

Form CoframedSpace::d(const Form& f) const {
  Form r(f.degree() + 1);
  for (const auto& [m, c] : f.terms()) {
    Form dc = d(c);
    if (!dc.zero()) {
      Form em(f.degree());
      em.add(m, RatExpr(1));
      r += wedge(dc, em);
    }
    if (m != 0) {
      Form db = dbasis(m);
      if (!db.zero()) r += c * db;
    }
  }
  return normal(r);
}

RatExpr CoframedSpace::partial(const RatExpr& f, int dir) const { return d(f).at(dir); }

std::string CoframedSpace::str(const Form& f) const {
  if (f.zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    std::string cs = ws_->str(c);
    bool neg = !cs.empty() && cs[0] == '-' && c.num().terms().size() == 1;
    if (neg) cs = cs.substr(1);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    std::string basis;
    for (int i : indices(m)) basis += (basis.empty() ? "" : "^") + names_[static_cast<size_t>(i)];
    if (basis.empty()) {
      os << cs;
    } else if (cs == "1") {
      os << basis;
    } else {
      bool compound = cs.find_first_of("+-") != std::string::npos && cs.front() != '(';
      os << (compound ? "(" + cs + ")" : cs) << "*" << basis;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- identities

Form d_square_residual(int f, const CoframedSpace& space) {
  return space.normal(space.d(space.dsym(f)));
}

namespace {

std::vector<RatExpr> residual_coefficients(const CoframedSpace& space, const std::vector<int>& sources) {
  std::vector<RatExpr> out;
  auto collect = [&](const Form& r) {
    for (const auto& [m, c] : r.terms()) out.push_back(c);
  };
  for (int i = 0; i < space.dim(); ++i) collect(space.d(space.d(Form::basis(i))));
  for (int f : sources) collect(d_square_residual(f, space));
  return out;
}

}  // namespace

std::vector<Identity> derive_identities(CoframedSpace& space, std::vector<int> unknowns,
                                        std::optional<std::vector<int>> sources_opt) {
  std::vector<int> sources = sources_opt ? *sources_opt : space.declared_functions();
  std::stable_sort(unknowns.begin(), unknowns.end(), [&](int a, int b) {
    return space.ws().word(a).size() > space.ws().word(b).size();
  });
  for (int u : unknowns)
    if (space.has_rewrite(u))
      throw MalformedExpression("unknown " + space.ws().name(u) + " already has a rewrite");

  // Unknowns must stay symbolic while the residuals are formed.
  auto eqs = residual_coefficients(space, sources);

  const size_t n = unknowns.size();
  Mat A;
  Vec b;
  std::map<int, RatExpr> zero_sub;
  for (int u : unknowns) zero_sub.emplace(u, RatExpr());
  for (const auto& r : eqs) {
    std::vector<RatExpr> row(n);
    bool any = false;
    for (size_t k = 0; k < n; ++k) {
      row[k] = r.diff(unknowns[k]);
      if (row[k].zero()) continue;
      any = true;
      for (int u : unknowns)
        if (row[k].has_var(u))
          throw StructureInconsistency("residual is not affine in " + space.ws().name(u));
    }
    RatExpr rhs = -substitute(r, zero_sub);
    if (!any && rhs.zero()) continue;
    A.push_back(std::move(row));
    b.push_back(space.normal(rhs));
  }
  if (A.empty()) return {};
  auto sol = solve_linear(A, b);
  if (!sol.consistent) {
    throw StructureInconsistency("d^2 residuals are inconsistent: " +
                                 space.ws().str(b[static_cast<size_t>(sol.inconsistent_row)]) + " = 0 cannot hold");
  }
  std::vector<Identity> out;
  for (int pc : sol.pivots) {
    RatExpr val = sol.particular[static_cast<size_t>(pc)];
    for (size_t k = 0; k < sol.free_vars.size(); ++k) {
      const RatExpr& coef = sol.nullspace[k][static_cast<size_t>(pc)];
      if (!coef.zero()) val += coef * RatExpr::sym(unknowns[static_cast<size_t>(sol.free_vars[k])]);
    }
    out.push_back({unknowns[static_cast<size_t>(pc)], val});
  }
  for (const auto& id : out) space.add_rewrite(id.symbol, id.value);
  return out;
}

}  // namespace eds
