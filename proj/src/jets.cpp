#include "eds/jets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace eds {

CompatibilityFailure::CompatibilityFailure(int order_, std::string equation_, std::string adjust_)
    : std::runtime_error("free data incompatible at order " + std::to_string(order_) + ": equation " + equation_ +
                         " cannot hold; adjust " + adjust_),
      order(order_),
      equation(std::move(equation_)),
      adjust(std::move(adjust_)) {}

// ---------------------------------------------------------------- Series

size_t Series::idx(int a, int b) const {
  if (a < 0 || b < 0 || a + b > N_) throw std::out_of_range("series index out of range");
  const int n = a + b;
  return static_cast<size_t>(n * (n + 1) / 2 + b);
}

Series Series::constant(int N, const Q& v) {
  Series s(N);
  s.at(0, 0) = v;
  return s;
}

Q Series::get(int a, int b) const {
  if (a < 0 || b < 0 || a + b > N_) return Q(0);
  return c_[idx(a, b)];
}

Series Series::operator+(const Series& o) const {
  Series r(std::min(N_, o.N_));
  for (int n = 0; n <= r.N_; ++n)
    for (int b = 0; b <= n; ++b) r.at(n - b, b) = get(n - b, b) + o.get(n - b, b);
  return r;
}

Series Series::operator-(const Series& o) const { return *this + o * Q(-1); }

Series Series::operator*(const Q& s) const {
  Series r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

Series Series::operator*(const Series& o) const {
  Series r(std::min(N_, o.N_));
  for (int n1 = 0; n1 <= r.N_; ++n1)
    for (int b1 = 0; b1 <= n1; ++b1) {
      const Q& x = get(n1 - b1, b1);
      if (x == 0) continue;
      for (int n2 = 0; n1 + n2 <= r.N_; ++n2)
        for (int b2 = 0; b2 <= n2; ++b2) {
          const Q& y = o.get(n2 - b2, b2);
          if (y != 0) r.at(n1 - b1 + n2 - b2, b1 + b2) += x * y;
        }
    }
  return r;
}

Series Series::diff(int var) const {
  Series r(std::max(N_ - 1, 0));
  if (N_ == 0) return r;
  for (int n = 0; n <= r.N_; ++n)
    for (int b = 0; b <= n; ++b) {
      int a = n - b;
      r.at(a, b) = var == 0 ? Q(a + 1) * get(a + 1, b) : Q(b + 1) * get(a, b + 1);
    }
  return r;
}

Series Series::inverse() const {
  if (get(0, 0) == 0) throw SingularSeries("series has zero constant term and no inverse");
  Series v(N_);
  Q inv0 = 1 / get(0, 0);
  v.at(0, 0) = inv0;
  for (int n = 1; n <= N_; ++n)
    for (int b = 0; b <= n; ++b) {
      int a = n - b;
      Q s = 0;
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) {
          if (i == 0 && j == 0) continue;
          const Q& x = get(i, j);
          if (x != 0) s += x * v.get(a - i, b - j);
        }
      v.at(a, b) = -inv0 * s;
    }
  return v;
}

Series Series::truncate(int N) const {
  Series r(std::min(N, N_));
  for (int n = 0; n <= r.N_; ++n)
    for (int b = 0; b <= n; ++b) r.at(n - b, b) = get(n - b, b);
  return r;
}

double Series::eval(double z1, double z2) const {
  double s = 0;
  for (int n = 0; n <= N_; ++n)
    for (int b = 0; b <= n; ++b) {
      const Q& c = get(n - b, b);
      if (c != 0) s += c.get_d() * std::pow(z1, n - b) * std::pow(z2, b);
    }
  return s;
}

double Series::tail(double r) const {
  double m = 0;
  for (int b = 0; b <= N_; ++b) m = std::max(m, std::abs(get(N_ - b, b).get_d()));
  return m * std::pow(r, N_) * (N_ + 1);
}

// ---------------------------------------------------------------- residuals

namespace {

struct Residuals {
  Series L, C;
};

Residuals compute_residuals(const JetState& s) {
  const Series& mb = s.mb;
  const Series& u = s.u;
  Series ui = u.inverse();
  Series mb1 = mb.diff(0), mb2 = mb.diff(1), u1 = u.diff(0), u2 = u.diff(1);
  Series g1 = u1 * ui, g2 = u2 * ui;
  Series divg = (u1.diff(0) + u2.diff(1)) * ui - (u1 * u1 + u2 * u2) * ui * ui;
  Residuals r;
  r.L = mb1.diff(1) - (g1 * mb2 + g2 * mb1);
  Series rhs = g2 * mb2 - g1 * mb1;
  if (s.variant == CVariant::Derived)
    rhs = rhs + mb * (u * u + divg);
  else
    rhs = rhs + u * u + divg;
  r.C = mb2.diff(1) - rhs;
  return r;
}

std::string label(const char* eq, int a, int b) {
  return std::string(eq) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

std::mt19937_64 order_rng(std::uint64_t seed, int n) {
  return std::mt19937_64(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n + 1)));
}

Q draw(std::mt19937_64& rng, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> d(lo, hi);
  return Q(d(rng));
}

Q draw_nonzero(std::mt19937_64& rng) {
  Q v;
  do v = draw(rng);
  while (v == 0);
  return v;
}

std::optional<Q> entry(const std::vector<std::optional<Q>>& v, int k) {
  if (k < 0 || k >= static_cast<int>(v.size())) return std::nullopt;
  return v[static_cast<size_t>(k)];
}

}  // namespace

std::vector<JetResidual> labelled_residuals(const JetState& s) {
  std::vector<JetResidual> out;
  if (s.N < 2) return out;
  Residuals r = compute_residuals(s);
  for (const auto& [eq, ser] : {std::pair<const char*, const Series*>{"L", &r.L}, {"C", &r.C}})
    for (int n = 0; n <= s.N - 2; ++n)
      for (int b = 0; b <= n; ++b) out.push_back({label(eq, n - b, b), ser->get(n - b, b)});
  return out;
}

std::vector<Q> residual_jets(const JetState& s) {
  std::vector<Q> out;
  for (auto& r : labelled_residuals(s)) out.push_back(r.value);
  return out;
}

// ---------------------------------------------------------------- solver

JetState solve_forward(const FreeData& f, int N, std::uint64_t seed, CVariant variant) {
  auto u00 = entry(f.u, 0), m00 = entry(f.mb, 0);
  if (!u00 || *u00 <= 0) throw std::invalid_argument("free data needs u(0,0) > 0");
  if (!m00 || *m00 == 0) throw std::invalid_argument("free data needs mbar(0,0) != 0");
  if (N < 0) throw std::invalid_argument("negative truncation order");
  JetState s;
  s.N = N;
  s.variant = variant;
  s.mb = Series(N);
  s.u = Series(N);
  s.mb.at(0, 0) = *m00;
  s.u.at(0, 0) = *u00;

  for (int n = 1; n <= N; ++n) {
    std::mt19937_64 rng = order_rng(seed, n);
    // (is_mb, a, b) slots of order n
    struct Slot {
      bool mb;
      int a, b;
      std::optional<Q> given;
      std::string name;
    };
    std::vector<Slot> fixed, solved, open;
    auto add = [&](bool mb, int a, int b, std::optional<Q> given, std::string name, bool preferred_free) {
      Slot sl{mb, a, b, given, std::move(name)};
      if (given)
        fixed.push_back(sl);
      else if (preferred_free)
        open.push_back(sl);
      else
        solved.push_back(sl);
    };
    for (int b = 0; b <= n; ++b) {
      int a = n - b;
      if (b == 0)
        add(true, a, b, entry(f.mb, a), "mbar coefficient z1^" + std::to_string(a), true);
      else if (b == 1)
        add(true, a, b, entry(f.mb_z2, a), "mbar_z2 coefficient z1^" + std::to_string(a), n == 1);
      else
        add(true, a, b, std::nullopt, "", false);
    }
    for (int b = 0; b <= n; ++b) {
      int a = n - b;
      if (b == 0)
        add(false, a, b, entry(f.u, a), "u coefficient z1^" + std::to_string(a), true);
      else if (b == 1)
        add(false, a, b, entry(f.u_z2, a), "u_z2 coefficient z1^" + std::to_string(a), true);
      else if (a == 0)
        add(false, a, b, entry(f.axis, b), "u coefficient z2^" + std::to_string(b), true);
      else
        add(false, a, b, std::nullopt, "", false);
    }
    // Unknowns: solved first so that elimination leaves the preferred-free slots free.
    std::vector<Slot> unk = solved;
    unk.insert(unk.end(), open.begin(), open.end());

    JetState w;
    w.N = n;
    w.variant = variant;
    w.mb = s.mb.truncate(n);
    w.u = s.u.truncate(n);
    auto set = [&](const Slot& sl, const Q& v) { (sl.mb ? w.mb : w.u).at(sl.a, sl.b) = v; };
    for (const auto& sl : fixed) set(sl, *sl.given);
    for (const auto& sl : unk) set(sl, Q(0));

    if (n < 2) {
      for (const auto& sl : unk) set(sl, draw(rng));
      for (int b = 0; b <= n; ++b) {
        s.mb.at(n - b, b) = w.mb.at(n - b, b);
        s.u.at(n - b, b) = w.u.at(n - b, b);
      }
      continue;
    }

    // Equations at order n-2 are affine in the order-n jets.
    auto top = [&](const JetState& st) {
      std::vector<JetResidual> all = labelled_residuals(st), out;
      for (auto& r : all) {
        int a = 0, b = 0;
        std::sscanf(r.label.c_str() + 2, "%d,%d", &a, &b);
        if (a + b == n - 2) out.push_back(r);
      }
      return out;
    };
    auto r0 = top(w);
    QMat A(r0.size(), QVec(unk.size()));
    QVec rhs(r0.size());
    for (size_t i = 0; i < r0.size(); ++i) rhs[i] = -r0[i].value;
    for (size_t j = 0; j < unk.size(); ++j) {
      set(unk[j], Q(1));
      auto rj = top(w);
      for (size_t i = 0; i < r0.size(); ++i) A[i][j] = rj[i].value - r0[i].value;
      set(unk[j], Q(0));
    }
    QSolution sol = solve_q(A, rhs);
    if (!sol.consistent) {
      // first equation whose addition breaks consistency
      QMat A2;
      QVec b2;
      for (size_t i = 0; i < A.size(); ++i) {
        A2.push_back(A[i]);
        b2.push_back(rhs[i]);
        if (!solve_q(A2, b2).consistent) {
          std::string adjust = "free data of order " + std::to_string(n);
          for (const auto& sl : fixed)
            if (sl.mb && sl.b == 1) adjust = sl.name;
          throw CompatibilityFailure(n, r0[i].label, adjust);
        }
      }
      throw CompatibilityFailure(n, "?", "free data of order " + std::to_string(n));
    }
    QVec x = sol.particular;
    for (size_t q = 0; q < sol.free_vars.size(); ++q) {
      Q t = draw(rng);
      for (size_t j = 0; j < x.size(); ++j) x[j] += t * sol.nullspace[q][j];
    }
    for (size_t j = 0; j < unk.size(); ++j) set(unk[j], x[j]);
    for (int b = 0; b <= n; ++b) {
      s.mb.at(n - b, b) = w.mb.at(n - b, b);
      s.u.at(n - b, b) = w.u.at(n - b, b);
    }
  }
  return s;
}

FreeData random_free_data(int N, std::uint64_t seed) {
  FreeData f;
  f.mb.resize(static_cast<size_t>(N + 1));
  f.u.resize(static_cast<size_t>(N + 1));
  f.u_z2.resize(static_cast<size_t>(std::max(N, 1)));
  f.mb_z2.resize(1);
  for (int n = 0; n <= N; ++n) {
    // separate stream from the solver's per-order draws
    std::mt19937_64 rng = order_rng(~seed, n);
    if (n == 0) {
      f.mb[0] = draw_nonzero(rng);
      f.u[0] = draw(rng, 1, 3);
      f.mb_z2[0] = draw_nonzero(rng);
      f.u_z2[0] = draw(rng);
      continue;
    }
    f.mb[static_cast<size_t>(n)] = n == 1 ? draw_nonzero(rng) : draw(rng);
    f.u[static_cast<size_t>(n)] = draw(rng);
    if (n < N) f.u_z2[static_cast<size_t>(n)] = draw(rng);
  }
  return f;
}

FreeData cosh_free_data(int N) {
  FreeData f;
  for (int k = 0; k <= N; ++k) {
    f.mb.push_back(Q(k == 0 ? 1 : 0));
    f.u.push_back(Q(k == 0 ? 1 : 0));
    f.mb_z2.push_back(Q(0));
    f.u_z2.push_back(Q(0));
    f.axis.push_back(Q(0));
  }
  return f;
}

JetState cosh_state(int N) {
  JetState s;
  s.N = N;
  s.mb = Series(N);
  s.u = Series::constant(N, Q(1));
  mpz_class fact = 1;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) fact *= k;
    if (k % 2 == 0) s.mb.at(0, k) = Q(1) / Q(fact);
  }
  return s;
}

JetSample sample(const JetState& s, double z1, double z2, double h_bound) {
  JetSample o;
  o.mb = s.mb.eval(z1, z2);
  o.u = s.u.eval(z1, z2);
  if (s.N > 0) {
    o.mb_z1 = s.mb.diff(0).eval(z1, z2);
    o.mb_z2 = s.mb.diff(1).eval(z1, z2);
    o.u_z1 = s.u.diff(0).eval(z1, z2);
    o.u_z2 = s.u.diff(1).eval(z1, z2);
  }
  o.radius = h_bound;
  o.tail = std::max(s.mb.tail(h_bound), s.u.tail(h_bound));
  return o;
}

// ---------------------------------------------------------------- text form

std::string serialize(const JetState& s) {
  std::ostringstream os;
  os << "N " << s.N << "\n";
  os << "variant " << (s.variant == CVariant::Derived ? "derived" : "paper") << "\n";
  for (const auto& [name, ser] : {std::pair<const char*, const Series*>{"mb", &s.mb}, {"u", &s.u}})
    for (int n = 0; n <= s.N; ++n)
      for (int b = 0; b <= n; ++b) os << name << " " << n - b << " " << b << " " << ser->get(n - b, b).get_str() << "\n";
  return os.str();
}

JetState deserialize(const std::string& text) {
  JetState s;
  std::istringstream in(text);
  std::string line;
  bool have_n = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "N") {
      ls >> s.N;
      s.mb = Series(s.N);
      s.u = Series(s.N);
      have_n = true;
    } else if (key == "variant") {
      std::string v;
      ls >> v;
      s.variant = v == "paper" ? CVariant::Printed : CVariant::Derived;
    } else if (key == "mb" || key == "u") {
      if (!have_n) throw std::invalid_argument("jet table: coefficient row before N at line " + std::to_string(lineno));
      int a = -1, b = -1;
      std::string v;
      ls >> a >> b >> v;
      if (ls.fail() || a < 0 || b < 0 || a + b > s.N)
        throw std::invalid_argument("jet table: bad row at line " + std::to_string(lineno));
      Q q(v);
      q.canonicalize();
      (key == "mb" ? s.mb : s.u).at(a, b) = q;
    } else {
      throw std::invalid_argument("jet table: unknown key '" + key + "' at line " + std::to_string(lineno));
    }
  }
  if (!have_n) throw std::invalid_argument("jet table: missing N");
  return s;
}

namespace {
const char* kLines[] = {"mb", "mb_z2", "u", "u_z2", "axis"};
std::vector<std::optional<Q>>* line_of(FreeData& f, const std::string& k) {
  if (k == "mb") return &f.mb;
  if (k == "mb_z2") return &f.mb_z2;
  if (k == "u") return &f.u;
  if (k == "u_z2") return &f.u_z2;
  if (k == "axis") return &f.axis;
  return nullptr;
}
}  // namespace

std::string serialize(const FreeData& f) {
  std::ostringstream os;
  FreeData& g = const_cast<FreeData&>(f);
  for (const char* k : kLines) {
    const auto& v = *line_of(g, k);
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i]) os << k << " " << i << " " << v[i]->get_str() << "\n";
  }
  return os.str();
}

FreeData deserialize_free_data(const std::string& text) {
  FreeData f;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, v;
    int k = -1;
    ls >> key >> k >> v;
    auto* dst = line_of(f, key);
    if (!dst || ls.fail() || k < 0)
      throw std::invalid_argument("free data: bad row at line " + std::to_string(lineno));
    if (dst->size() <= static_cast<size_t>(k)) dst->resize(static_cast<size_t>(k + 1));
    Q q(v);
    q.canonicalize();
    (*dst)[static_cast<size_t>(k)] = q;
  }
  return f;
}

}  // namespace eds
