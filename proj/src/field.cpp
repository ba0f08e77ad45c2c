#include "eds/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace eds {

int mono_degree(const Mono& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

int grlex_cmp(const Mono& a, const Mono& b) {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db ? -1 : 1;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int va = i < a.size() ? a[i].first : INT32_MAX;
    int vb = j < b.size() ? b[j].first : INT32_MAX;
    if (va == vb) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
      ++i;
      ++j;
    } else if (va < vb) {
      return 1;
    } else {
      return -1;
    }
  }
  return 0;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  r.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      r.push_back(a[i++]);
    } else {
      r.push_back(b[j++]);
    }
  }
  while (i < a.size()) r.push_back(a[i++]);
  while (j < b.size()) r.push_back(b[j++]);
  return r;
}

std::optional<Mono> mono_div(const Mono& a, const Mono& b) {
  Mono r;
  size_t i = 0;
  for (const auto& [v, e] : b) {
    while (i < a.size() && a[i].first < v) r.push_back(a[i++]);
    if (i == a.size() || a[i].first != v || a[i].second < e) return std::nullopt;
    if (a[i].second > e) r.emplace_back(v, a[i].second - e);
    ++i;
  }
  while (i < a.size()) r.push_back(a[i++]);
  return r;
}

int mono_exp(const Mono& m, int var) {
  for (const auto& [v, e] : m)
    if (v == var) return e;
  return 0;
}

namespace {

bool term_greater(const Term& a, const Term& b) { return grlex_cmp(a.m, b.m) > 0; }

// Sorts and merges like monomials, dropping zeros.
std::vector<Term> canonical(std::vector<Term> ts) {
  std::sort(ts.begin(), ts.end(), term_greater);
  std::vector<Term> out;
  out.reserve(ts.size());
  for (auto& t : ts) {
    if (!out.empty() && out.back().m == t.m) {
      out.back().c += t.c;
    } else {
      if (!out.empty() && sgn(out.back().c) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().c) == 0) out.pop_back();
  return out;
}

}  // namespace

Poly::Poly(const Q& c) {
  if (sgn(c) == 0) return;
  Q v = c;
  v.canonicalize();  // mpq_class(6, 3) is not canonical on construction
  t_.push_back({{}, v});
}

Poly Poly::var(int v, int e) {
  Poly p;
  if (e == 0) return Poly(1);
  p.t_.push_back({{{v, e}}, Q(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Poly p;
  p.t_ = canonical(std::move(terms));
  return p;
}

int Poly::total_degree() const { return t_.empty() ? -1 : mono_degree(t_.front().m); }

int Poly::degree_in(int v) const {
  int d = t_.empty() ? -1 : 0;
  for (const auto& t : t_) d = std::max(d, mono_exp(t.m, v));
  return d;
}

std::vector<int> Poly::vars() const {
  std::vector<int> vs;
  for (const auto& t : t_)
    for (const auto& [v, e] : t.m) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool Poly::has_var(int v) const {
  for (const auto& t : t_)
    for (const auto& [w, e] : t.m)
      if (w == v) return true;
  return false;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.t_.empty()) return *this;
  if (t_.empty()) return *this = o;
  std::vector<Term> r;
  r.reserve(t_.size() + o.t_.size());
  size_t i = 0, j = 0;
  while (i < t_.size() && j < o.t_.size()) {
    int c = grlex_cmp(t_[i].m, o.t_[j].m);
    if (c > 0) {
      r.push_back(std::move(t_[i++]));
    } else if (c < 0) {
      r.push_back(o.t_[j++]);
    } else {
      Q s = t_[i].c + o.t_[j].c;
      if (sgn(s) != 0) r.push_back({std::move(t_[i].m), s});
      ++i;
      ++j;
    }
  }
  while (i < t_.size()) r.push_back(std::move(t_[i++]));
  while (j < o.t_.size()) r.push_back(o.t_[j++]);
  t_ = std::move(r);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.zero() || b.zero()) return Poly();
  if (b.is_const()) return a.scaled(b.const_value());
  if (a.is_const()) return b.scaled(a.const_value());
  std::vector<Term> ts;
  ts.reserve(a.terms().size() * b.terms().size());
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) ts.push_back({mono_mul(x.m, y.m), x.c * y.c});
  return Poly::from_terms(std::move(ts));
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::scaled(const Q& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::times_mono(const Mono& m, const Q& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({mono_mul(t.m, m), t.c * c});
  return r;  // multiplying by a monomial preserves the order
}

Poly Poly::pow(int e) const {
  Poly r(1), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::diff(int v) const {
  std::vector<Term> ts;
  for (const auto& t : t_) {
    for (size_t k = 0; k < t.m.size(); ++k) {
      if (t.m[k].first != v) continue;
      Mono m = t.m;
      int e = m[k].second;
      if (e == 1)
        m.erase(m.begin() + static_cast<long>(k));
      else
        m[k].second = e - 1;
      ts.push_back({std::move(m), t.c * e});
    }
  }
  return from_terms(std::move(ts));
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (size_t i = 0; i < t_.size(); ++i)
    if (t_[i].m != o.t_[i].m || t_[i].c != o.t_[i].c) return false;
  return true;
}

std::vector<Poly> Poly::coeffs_in(int v) const {
  std::vector<std::vector<Term>> buckets(static_cast<size_t>(std::max(0, degree_in(v)) + 1));
  for (const auto& t : t_) {
    Mono m;
    int e = 0;
    for (const auto& p : t.m) {
      if (p.first == v)
        e = p.second;
      else
        m.push_back(p);
    }
    buckets[static_cast<size_t>(e)].push_back({std::move(m), t.c});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Poly Poly::from_coeffs(int v, const std::vector<Poly>& cs) {
  std::vector<Term> ts;
  for (size_t e = 0; e < cs.size(); ++e) {
    Mono xm;
    if (e > 0) xm.push_back({v, static_cast<int>(e)});
    for (const auto& t : cs[e].terms()) ts.push_back({mono_mul(t.m, xm), t.c});
  }
  return from_terms(std::move(ts));
}

Q Poly::eval(const std::map<int, Q>& at) const {
  Q s = 0;
  for (const auto& t : t_) {
    Q p = t.c;
    for (const auto& [v, e] : t.m) {
      auto it = at.find(v);
      if (it == at.end()) throw MalformedExpression("evaluation point misses a symbol");
      Q b = it->second;
      for (int k = 0; k < e; ++k) p *= b;
    }
    s += p;
  }
  return s;
}

double Poly::eval_double(const std::map<int, double>& at) const {
  double s = 0;
  for (const auto& t : t_) {
    double p = t.c.get_d();
    for (const auto& [v, e] : t.m) {
      auto it = at.find(v);
      if (it == at.end()) throw MalformedExpression("evaluation point misses a symbol");
      p *= std::pow(it->second, e);
    }
    s += p;
  }
  return s;
}

std::optional<Poly> exact_div(const Poly& a, const Poly& b) {
  if (b.zero()) throw MalformedExpression("division by the zero polynomial");
  if (a.zero()) return Poly();
  if (b.is_const()) return a.scaled(1 / b.const_value());
  Poly r = a;
  std::vector<Term> q;
  const Term& lb = b.lead();
  while (!r.zero()) {
    const Term& lr = r.lead();
    auto m = mono_div(lr.m, lb.m);
    if (!m) return std::nullopt;
    Q c = lr.c / lb.c;
    r -= b.times_mono(*m, c);
    q.push_back({std::move(*m), c});
  }
  return Poly::from_terms(std::move(q));
}

Poly monic(const Poly& p) {
  if (p.zero()) return p;
  return p.scaled(1 / p.lead().c);
}

namespace {

Poly mono_content(const Poly& p) {
  Mono g = p.terms().front().m;
  for (const auto& t : p.terms()) {
    Mono ng;
    for (const auto& [v, e] : g) {
      int f = mono_exp(t.m, v);
      if (f > 0) ng.emplace_back(v, std::min(e, f));
    }
    g = std::move(ng);
    if (g.empty()) break;
  }
  return Poly::from_terms({{g, Q(1)}});
}

Poly content_in(const Poly& p, int v) {
  Poly g;
  for (const auto& c : p.coeffs_in(v)) {
    if (c.zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_const()) return Poly(1);
  }
  return g;
}

using UPoly = std::vector<Poly>;

void trim(UPoly& u) {
  while (!u.empty() && u.back().zero()) u.pop_back();
}

UPoly prem(UPoly a, const UPoly& b) {
  const Poly& lb = b.back();
  size_t db = b.size() - 1;
  trim(a);
  while (!a.empty() && a.size() - 1 >= db) {
    Poly la = a.back();
    size_t shift = a.size() - 1 - db;
    for (auto& c : a) c *= lb;
    for (size_t k = 0; k < b.size(); ++k) a[k + shift] -= la * b[k];
    trim(a);
  }
  return a;
}

Poly primitive_in(const Poly& p, int v) {
  Poly c = content_in(p, v);
  if (c.is_const()) return p;
  return *exact_div(p, c);
}

}  // namespace

namespace {

// Integer content bookkeeping: scale p to a primitive polynomial over Z.
Poly integral_primitive(const Poly& p, mpz_class* content = nullptr) {
  mpz_class l = 1, g = 0;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
  for (const auto& t : p.terms()) {
    mpz_class n = t.c.get_num() * (l / t.c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (content) *content = g;
  return p.scaled(Q(l) / Q(g));
}

mpz_class max_norm(const Poly& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms()) {
    mpz_class a = abs(t.c.get_num());
    if (a > m) m = a;
  }
  return m;
}

Poly eval_var(const Poly& p, int v, const mpz_class& x) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    Mono m;
    mpz_class f = 1;
    for (const auto& [w, e] : t.m) {
      if (w == v) mpz_pow_ui(f.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(e));
      else m.emplace_back(w, e);
    }
    out.push_back({std::move(m), t.c * Q(f)});
  }
  return Poly::from_terms(std::move(out));
}

// Inverse of eval_var: symmetric x-adic digits become coefficients of v.
Poly interpolate(Poly h, int v, const mpz_class& x) {
  std::vector<Poly> cs;
  mpz_class half = x / 2;
  for (int guard = 0; !h.zero() && guard < 4096; ++guard) {
    std::vector<Term> dig;
    for (const auto& t : h.terms()) {
      mpz_class c = t.c.get_num();
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      if (r > half) r -= x;
      if (r != 0) dig.push_back({t.m, Q(r)});
    }
    Poly g = Poly::from_terms(std::move(dig));
    h = (h - g).scaled(Q(1) / Q(x));
    cs.push_back(std::move(g));
  }
  if (!h.zero()) return Poly();
  return Poly::from_coeffs(v, cs);
}

// Heuristic gcd on primitive integer polynomials; nullopt when it gives up.
std::optional<Poly> heu_gcd(const Poly& f, const Poly& g, int depth = 0) {
  if (f.is_const() || g.is_const()) {
    mpz_class a = f.is_const() ? abs(f.const_value().get_num()) : mpz_class(0);
    mpz_class b = g.is_const() ? abs(g.const_value().get_num()) : mpz_class(0);
    if (f.is_const() && g.is_const()) {
      mpz_class r;
      mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      return Poly(Q(r));
    }
    // constant vs polynomial: gcd of the constant with the content
    mpz_class c;
    integral_primitive(f.is_const() ? g : f, &c);
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), c.get_mpz_t(), (f.is_const() ? a : b).get_mpz_t());
    return Poly(Q(r));
  }
  if (depth > 64) return std::nullopt;
  mpz_class cf, cg;
  Poly pf = integral_primitive(f, &cf), pg = integral_primitive(g, &cg);
  mpz_class cont;
  mpz_gcd(cont.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());

  auto vf = pf.vars(), vg = pg.vars();
  std::vector<int> vs;
  std::set_union(vf.begin(), vf.end(), vg.begin(), vg.end(), std::back_inserter(vs));
  int x = vs.front();

  mpz_class nf = max_norm(pf), ng = max_norm(pg);
  mpz_class B = 2 * (nf < ng ? nf : ng) + 29;
  mpz_class sq = sqrt(B);
  mpz_class xi = B < 99 * sq ? B : 99 * sq;
  mpz_class lf = abs(pf.lead().c.get_num()), lg = abs(pg.lead().c.get_num());
  mpz_class alt = 2 * (nf / lf < ng / lg ? nf / lf : ng / lg) + 2;
  if (alt > xi) xi = alt;

  for (int i = 0; i < 6; ++i) {
    Poly ff = eval_var(pf, x, xi), gg = eval_var(pg, x, xi);
    if (!ff.zero() && !gg.zero()) {
      auto h = heu_gcd(ff, gg, depth + 1);
      if (!h) return std::nullopt;
      Poly cand = interpolate(*h, x, xi);
      if (!cand.zero()) {
        cand = integral_primitive(cand);
        if (exact_div(pf, cand) && exact_div(pg, cand)) return cand.scaled(Q(cont));
      }
      for (const Poly* src : {&ff, &gg}) {
        auto cof = exact_div(*src, *h);
        if (!cof) continue;
        Poly ci = interpolate(*cof, x, xi);
        if (ci.zero()) continue;
        const Poly& whole = (src == &ff) ? pf : pg;
        auto hh = exact_div(whole, ci);
        if (!hh) continue;
        Poly hp = integral_primitive(*hh);
        if (exact_div(pf, hp) && exact_div(pg, hp)) return hp.scaled(Q(cont));
      }
    }
    mpz_class r4 = sqrt(sqrt(xi));
    xi = xi * 73794 * r4 / 27011;
  }
  return std::nullopt;
}

Poly prs_gcd(const Poly& a0, const Poly& b0);

}  // namespace

Poly poly_gcd(const Poly& a0, const Poly& b0) {
  if (a0.zero()) return monic(b0);
  if (b0.zero()) return monic(a0);
  if (a0.is_const() || b0.is_const()) return Poly(1);
  if (a0.is_monomial() || b0.is_monomial()) {
    Poly ma = mono_content(a0), mb = mono_content(b0);
    Poly sum = ma + mb;
    return mono_content(sum);
  }
  if (auto q = exact_div(a0, b0)) return monic(b0);
  if (auto q = exact_div(b0, a0)) return monic(a0);
  if (auto h = heu_gcd(integral_primitive(a0), integral_primitive(b0))) return monic(*h);
  return prs_gcd(a0, b0);
}

namespace {

Poly prs_gcd(const Poly& a0, const Poly& b0) {
  Poly a = a0, b = b0;
  Poly ma = mono_content(a), mb = mono_content(b);
  Poly mg = mono_content(ma + mb);
  if (!ma.is_const()) a = *exact_div(a, ma);
  if (!mb.is_const()) b = *exact_div(b, mb);

  auto va = a.vars(), vb = b.vars();
  for (int v : va)
    if (!std::binary_search(vb.begin(), vb.end(), v)) return monic(mg * poly_gcd(content_in(a, v), b));
  for (int v : vb)
    if (!std::binary_search(va.begin(), va.end(), v)) return monic(mg * poly_gcd(a, content_in(b, v)));
  if (va.empty()) return monic(mg);

  // Main variable: the one of least degree keeps the PRS short.
  int x = va.front();
  int best = INT32_MAX;
  for (int v : va) {
    int d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      x = v;
    }
  }
  Poly ca = content_in(a, x), cb = content_in(b, x);
  Poly c = poly_gcd(ca, cb);
  if (!ca.is_const()) a = *exact_div(a, ca);
  if (!cb.is_const()) b = *exact_div(b, cb);

  UPoly ua = a.coeffs_in(x), ub = b.coeffs_in(x);
  if (ua.size() < ub.size()) std::swap(ua, ub);
  while (true) {
    if (ub.size() == 1) return monic(mg * c);
    UPoly r = prem(ua, ub);
    if (r.empty()) break;
    Poly rp = primitive_in(Poly::from_coeffs(x, r), x);
    ua = std::move(ub);
    ub = rp.coeffs_in(x);
    trim(ub);
  }
  Poly g = primitive_in(Poly::from_coeffs(x, ub), x);
  return monic(mg * c * g);
}

}  // namespace

// ---------------------------------------------------------------- RatExpr

RatExpr::RatExpr(const Poly& n, const Poly& d) {
  if (d.zero()) throw MalformedExpression("zero denominator");
  *this = normalize(RatExpr(Raw{}, n, d));
}

RatExpr normalize(const RatExpr& e) {
  if (e.den().zero()) throw MalformedExpression("zero denominator");
  if (e.num().zero()) return RatExpr();
  Poly n = e.num(), d = e.den();
  if (!d.is_const()) {
    Poly g = poly_gcd(n, d);
    if (!g.is_const()) {
      n = *exact_div(n, g);
      d = *exact_div(d, g);
    }
  }
  Q lc = d.lead().c;
  if (lc != 1) {
    n = n.scaled(1 / lc);
    d = d.scaled(1 / lc);
  }
  RatExpr r;
  r.num_ = std::move(n);
  r.den_ = std::move(d);
  return r;
}

std::vector<int> RatExpr::vars() const {
  auto a = num_.vars(), b = den_.vars();
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

RatExpr RatExpr::operator-() const { return RatExpr(Raw{}, -num_, den_); }

RatExpr operator+(const RatExpr& a, const RatExpr& b) {
  if (a.zero()) return b;
  if (b.zero()) return a;
  if (a.den_ == b.den_) {
    if (a.den_.is_const()) return RatExpr(RatExpr::Raw{}, a.num_ + b.num_, a.den_);
    return normalize(RatExpr(RatExpr::Raw{}, a.num_ + b.num_, a.den_));
  }
  if (a.den_.is_const() && b.den_.is_const())
    return RatExpr(RatExpr::Raw{}, a.num_.scaled(b.den_.const_value()) + b.num_.scaled(a.den_.const_value()),
                   Poly(a.den_.const_value() * b.den_.const_value()));
  Poly g = poly_gcd(a.den_, b.den_);
  Poly da = a.den_, db = b.den_;
  if (!g.is_const()) {
    da = *exact_div(da, g);
    db = *exact_div(db, g);
  }
  Poly n = a.num_ * db + b.num_ * da;
  Poly d = a.den_ * db;
  if (g.is_const()) {
    Q lc = d.lead().c;
    return RatExpr(RatExpr::Raw{}, n.scaled(1 / lc), d.scaled(1 / lc));
  }
  return normalize(RatExpr(RatExpr::Raw{}, n, d));
}

RatExpr operator-(const RatExpr& a, const RatExpr& b) { return a + (-b); }

RatExpr operator*(const RatExpr& a, const RatExpr& b) {
  if (a.zero() || b.zero()) return RatExpr();
  if (a.den_.is_const() && b.den_.is_const()) {
    Poly n = a.num_ * b.num_;
    return RatExpr(RatExpr::Raw{}, n.scaled(1 / (a.den_.const_value() * b.den_.const_value())), Poly(1));
  }
  Poly g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
  Poly an = a.num_, bd = b.den_, bn = b.num_, ad = a.den_;
  if (!g1.is_const()) {
    an = *exact_div(an, g1);
    bd = *exact_div(bd, g1);
  }
  if (!g2.is_const()) {
    bn = *exact_div(bn, g2);
    ad = *exact_div(ad, g2);
  }
  Poly n = an * bn, d = ad * bd;
  Q lc = d.lead().c;
  return RatExpr(RatExpr::Raw{}, n.scaled(1 / lc), d.scaled(1 / lc));
}

RatExpr operator/(const RatExpr& a, const RatExpr& b) {
  if (b.zero()) throw MalformedExpression("division by zero expression");
  return a * RatExpr(RatExpr::Raw{}, b.den_, b.num_);
}

RatExpr RatExpr::pow(int e) const {
  if (e < 0) return RatExpr(1) / pow(-e);
  return RatExpr(Raw{}, num_.pow(e), den_.pow(e));
}

RatExpr RatExpr::diff(int v) const {
  if (!has_var(v)) return RatExpr();
  if (den_.is_const()) return RatExpr(Raw{}, num_.diff(v).scaled(1 / den_.const_value()), Poly(1));
  Poly n = num_.diff(v) * den_ - num_ * den_.diff(v);
  return RatExpr(n, den_ * den_);
}

Q RatExpr::eval(const std::map<int, Q>& at) const {
  Q d = den_.eval(at);
  if (sgn(d) == 0) throw EvaluationSingularity("denominator vanishes at the evaluation point");
  return num_.eval(at) / d;
}

double RatExpr::eval_double(const std::map<int, double>& at) const {
  return num_.eval_double(at) / den_.eval_double(at);
}

RatExpr substitute(const Poly& p, const std::map<int, RatExpr>& s) {
  bool touched = false;
  for (int v : p.vars())
    if (s.count(v)) touched = true;
  if (!touched) return RatExpr(p);
  // Group terms by the substituted part to reuse powers.
  std::map<int, std::vector<RatExpr>> powers;
  auto power = [&](int v, int e) -> const RatExpr& {
    auto& ps = powers[v];
    if (ps.empty()) ps.push_back(RatExpr(1));
    while (static_cast<int>(ps.size()) <= e) ps.push_back(ps.back() * s.at(v));
    return ps[static_cast<size_t>(e)];
  };
  std::map<Mono, std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    Mono kept, subst;
    for (const auto& pe : t.m) (s.count(pe.first) ? subst : kept).push_back(pe);
    groups[subst].push_back({kept, t.c});
  }
  RatExpr out;
  for (auto& [sm, ts] : groups) {
    RatExpr f(1);
    for (const auto& [v, e] : sm) f = f * power(v, e);
    out = out + f * RatExpr(Poly::from_terms(ts));
  }
  return out;
}

RatExpr substitute(const RatExpr& e, const std::map<int, RatExpr>& s) {
  RatExpr n = substitute(e.num(), s);
  if (e.den().is_const()) return n * RatExpr(Q(1) / e.den().const_value());
  return n / substitute(e.den(), s);
}

// ---------------------------------------------------------------- Workspace

int Workspace::declare(const std::string& name, SymKind kind) {
  if (by_name_.count(name)) throw MalformedExpression("duplicate symbol '" + name + "'");
  syms_.push_back({name, kind, -1, {}});
  int id = static_cast<int>(syms_.size()) - 1;
  by_name_[name] = id;
  return id;
}

int Workspace::ensure(const std::string& name, SymKind kind) {
  int id = find(name);
  return id >= 0 ? id : declare(name, kind);
}

int Workspace::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

int Workspace::root(int v) const {
  const Symbol& s = sym(v);
  return s.kind == SymKind::Derived ? s.parent : v;
}

std::vector<int> Workspace::word(int v) const { return sym(v).word; }

int Workspace::lookup_derived(int r, const std::vector<int>& w) const {
  if (w.empty()) return r;
  auto it = derived_.find({r, w});
  return it == derived_.end() ? -1 : it->second;
}

int Workspace::derived(int parent, int dir, bool symmetric) {
  int r = root(parent);
  std::vector<int> w = word(parent);
  w.push_back(dir);
  if (symmetric) std::sort(w.begin(), w.end());
  int found = lookup_derived(r, w);
  if (found >= 0) return found;
  const std::string& rn = name(r);
  bool digits_ok = !rn.empty() && !std::isdigit(static_cast<unsigned char>(rn.back()));
  for (int d : w)
    if (d > 9) digits_ok = false;
  std::string nm = rn;
  if (!digits_ok) nm += "_";
  for (size_t k = 0; k < w.size(); ++k) {
    if (!digits_ok && k > 0 && w[k] > 9) nm += ".";
    nm += std::to_string(w[k]);
  }
  if (by_name_.count(nm)) throw MalformedExpression("derived symbol name clash: " + nm);
  syms_.push_back({nm, SymKind::Derived, r, w});
  int id = static_cast<int>(syms_.size()) - 1;
  by_name_[nm] = id;
  derived_[{r, w}] = id;
  return id;
}

void Workspace::declare_unit_circle(int c, int s) { circles_.emplace_back(c, s); }

Poly Workspace::reduce(const Poly& p) const {
  if (circles_.empty()) return p;
  Poly cur = p;
  for (const auto& [c, s] : circles_) {
    if (cur.degree_in(c) < 2) continue;
    auto cs = cur.coeffs_in(c);
    // c^k -> c^(k mod 2) (1 - s^2)^(k div 2)
    Poly one_minus = Poly(1) - Poly::var(s, 2);
    Poly even, odd;
    for (size_t k = 0; k < cs.size(); ++k) {
      Poly part = cs[k] * one_minus.pow(static_cast<int>(k / 2));
      if (k % 2 == 0)
        even += part;
      else
        odd += part;
    }
    cur = even + odd * Poly::var(c);
  }
  return cur;
}

RatExpr Workspace::reduce(const RatExpr& e) const {
  if (circles_.empty()) return e;
  return RatExpr(reduce(e.num()), reduce(e.den()));
}

namespace {

std::string qstr(const Q& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

std::string Workspace::str(const Poly& p) const {
  if (p.zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Q c = t.c;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string mono;
    for (const auto& [v, e] : t.m) {
      if (!mono.empty()) mono += "*";
      mono += name(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += qstr(c);
    } else if (c == 1) {
      out += mono;
    } else {
      out += qstr(c) + "*" + mono;
    }
  }
  return out;
}

std::string Workspace::str(const RatExpr& e) const {
  std::string n = str(e.num());
  if (e.den().is_const() && e.den().const_value() == 1) return n;
  std::string d = str(e.den());
  if (e.num().terms().size() > 1) n = "(" + n + ")";
  const auto& dt = e.den().terms();
  bool bare = dt.size() == 1 && dt[0].c == 1 && dt[0].m.size() == 1 && dt[0].m[0].second == 1;
  if (!bare && !e.den().is_const()) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace eds
