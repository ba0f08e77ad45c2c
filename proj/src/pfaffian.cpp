#include "eds/pfaffian.hpp"

#include <algorithm>
#include <sstream>

namespace eds {

Q random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-999, 998);
  std::uniform_int_distribution<int> den(1, 50);
  int n = num(rng);
  if (n >= 0) ++n;  // skip zero
  Q q(n, den(rng));
  q.canonicalize();
  return q;
}

std::map<int, Q> random_point(const std::set<int>& syms, std::mt19937_64& rng) {
  std::map<int, Q> out;
  for (int v : syms) out.emplace(v, random_rational(rng));
  return out;
}

std::set<int> symbols_of(const Form& f) {
  std::set<int> out;
  for (const auto& [m, c] : f.terms())
    for (int v : c.vars()) out.insert(v);
  return out;
}

bool Decomposition::torsion_free() const {
  for (const auto& a : T)
    for (const auto& row : a)
      for (const auto& c : row)
        if (!c.zero()) return false;
  return true;
}

namespace {

std::vector<const Form*> all_rows(const LinearPfaffianSystem& sys) {
  std::vector<const Form*> rows;
  for (const auto& f : sys.gens) rows.push_back(&f);
  for (const auto& f : sys.indep) rows.push_back(&f);
  for (const auto& f : sys.compl_) rows.push_back(&f);
  return rows;
}

Mat basis_matrix(const LinearPfaffianSystem& sys) {
  auto rows = all_rows(sys);
  const int n = sys.space.dim();
  if (static_cast<int>(rows.size()) != n) {
    std::ostringstream os;
    os << "system has " << rows.size() << " forms for a coframe of dimension " << n;
    throw MalformedExpression(os.str());
  }
  Mat M(static_cast<size_t>(n), Vec(static_cast<size_t>(n)));
  for (int r = 0; r < n; ++r) {
    const Form& f = *rows[static_cast<size_t>(r)];
    if (!f.zero() && f.degree() != 1) throw MalformedExpression("system forms must be 1-forms");
    for (const auto& [m, c] : f.terms()) M[static_cast<size_t>(r)][static_cast<size_t>(std::countr_zero(m))] = c;
  }
  return M;
}

std::set<int> symbols_of(const Mat& M) {
  std::set<int> out;
  for (const auto& row : M)
    for (const auto& c : row)
      for (int v : c.vars()) out.insert(v);
  return out;
}

template <class F>
auto with_retries(std::mt19937_64& rng, const std::set<int>& syms, F&& fn) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    auto pt = random_point(syms, rng);
    try {
      return fn(pt);
    } catch (const EvaluationSingularity&) {
    }
  }
  throw RetryExhausted("all 20 random specializations were singular");
}

Form eval_form(const Form& f, const std::map<int, Q>& pt) {
  return f.map([&](const RatExpr& c) { return RatExpr(c.eval(pt)); });
}

}  // namespace

void check_adapted(const LinearPfaffianSystem& sys, std::uint64_t seed) {
  Mat M = basis_matrix(sys);
  auto syms = symbols_of(M);
  std::mt19937_64 rng(seed);
  const size_t n = M.size();
  for (int p = 0; p < 3; ++p) {
    int r = with_retries(rng, syms, [&](const std::map<int, Q>& pt) {
      QMat E(n, QVec(n));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) E[i][j] = M[i][j].eval(pt);
      return rank_q(E);
    });
    if (r != static_cast<int>(n))
      throw MalformedExpression("gens, independence and complement do not span the coframe");
  }
}

Decomposition decompose(const LinearPfaffianSystem& sys) {
  const CoframedSpace& S = sys.space;
  Mat M = basis_matrix(sys);
  auto inv = invert(M);
  if (!inv) throw MalformedExpression("gens, independence and complement are not a coframe");
  const int n = S.dim(), s0 = sys.s0(), k = sys.k(), np = sys.npi();
  std::vector<Form> images(static_cast<size_t>(n), Form(1));
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < n; ++c) images[static_cast<size_t>(j)].add(bit(c), (*inv)[static_cast<size_t>(j)][static_cast<size_t>(c)]);

  Decomposition dec;
  dec.inverse = std::move(*inv);
  dec.A.assign(static_cast<size_t>(s0), std::vector<Vec>(static_cast<size_t>(np), Vec(static_cast<size_t>(k))));
  dec.T.assign(static_cast<size_t>(s0), std::vector<Vec>(static_cast<size_t>(k), Vec(static_cast<size_t>(k))));
  const Mask gen_mask = s0 ? (bit(s0) - 1) : 0;
  for (int a = 0; a < s0; ++a) {
    Form D = S.d(sys.gens[static_cast<size_t>(a)]);
    Form R = substitute_basis(D, images);
    for (const auto& [m, c0] : R.terms()) {
      if (m & gen_mask) continue;
      RatExpr c = S.normal(c0);
      if (c.zero()) continue;
      auto idx = indices(m);
      int p = idx[0] - s0, q = idx[1] - s0;
      if (p < k && q < k) {
        dec.T[static_cast<size_t>(a)][static_cast<size_t>(p)][static_cast<size_t>(q)] = c;
        dec.T[static_cast<size_t>(a)][static_cast<size_t>(q)][static_cast<size_t>(p)] = -c;
      } else if (p < k) {
        // omega^p ^ pi^e = -pi^e ^ omega^p
        dec.A[static_cast<size_t>(a)][static_cast<size_t>(q - k)][static_cast<size_t>(p)] = -c;
      } else {
        std::ostringstream os;
        os << "d" << (sys.gen_names.size() > static_cast<size_t>(a) ? sys.gen_names[static_cast<size_t>(a)] : "theta" + std::to_string(a + 1))
           << " has a nonzero pi^" << (p - k + 1) << " ^ pi^" << (q - k + 1) << " coefficient " << S.str(c);
        throw NotLinear(os.str());
      }
    }
  }
  return dec;
}

bool verify_decomposition(const LinearPfaffianSystem& sys, const Decomposition& dec, std::uint64_t seed,
                          int points) {
  const CoframedSpace& S = sys.space;
  const int s0 = sys.s0(), k = sys.k(), np = sys.npi();
  std::vector<Form> diffs;
  for (int a = 0; a < s0; ++a) {
    Form E(2);
    for (int e = 0; e < np; ++e)
      for (int i = 0; i < k; ++i) {
        const RatExpr& c = dec.A[static_cast<size_t>(a)][static_cast<size_t>(e)][static_cast<size_t>(i)];
        if (!c.zero()) E += c * wedge(sys.compl_[static_cast<size_t>(e)], sys.indep[static_cast<size_t>(i)]);
      }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const RatExpr& c = dec.T[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (!c.zero()) E += c * wedge(sys.indep[static_cast<size_t>(i)], sys.indep[static_cast<size_t>(j)]);
      }
    diffs.push_back(S.normal(S.d(sys.gens[static_cast<size_t>(a)]) - E));
  }
  if (S.dim() <= 12) {
    Form G = Form::scalar(RatExpr(1));
    for (const auto& g : sys.gens) G = wedge(G, g);
    for (const auto& df : diffs)
      if (!S.normal(wedge(df, G)).zero()) return false;
    return true;
  }
  std::set<int> syms;
  for (const auto& f : diffs)
    for (int v : symbols_of(f)) syms.insert(v);
  for (const auto& g : sys.gens)
    for (int v : symbols_of(g)) syms.insert(v);
  std::mt19937_64 rng(seed);
  for (int p = 0; p < points; ++p) {
    bool ok = with_retries(rng, syms, [&](const std::map<int, Q>& pt) {
      Form G = Form::scalar(RatExpr(1));
      for (const auto& g : sys.gens) G = wedge(G, eval_form(g, pt));
      for (const auto& df : diffs)
        if (!wedge(eval_form(df, pt), G).zero()) return false;
      return true;
    });
    if (!ok) return false;
  }
  return true;
}

AbsorbResult absorb(const LinearPfaffianSystem& sys, const Decomposition& dec) {
  const int s0 = sys.s0(), k = sys.k(), np = sys.npi();
  AbsorbResult out;
  out.system = sys;
  out.shift.assign(static_cast<size_t>(np), Vec(static_cast<size_t>(k)));
  if (dec.torsion_free()) {
    out.absorbed = true;
    return out;
  }
  // A^a_{ei} x^e_j - A^a_{ej} x^e_i = T^a_{ij}, unknown x^e_j at column e*k + j
  Mat M;
  Vec b;
  std::vector<std::tuple<int, int, int>> origin;
  for (int a = 0; a < s0; ++a)
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Vec row(static_cast<size_t>(np * k));
        for (int e = 0; e < np; ++e) {
          const auto& Ae = dec.A[static_cast<size_t>(a)][static_cast<size_t>(e)];
          if (!Ae[static_cast<size_t>(i)].zero()) row[static_cast<size_t>(e * k + j)] += Ae[static_cast<size_t>(i)];
          if (!Ae[static_cast<size_t>(j)].zero()) row[static_cast<size_t>(e * k + i)] -= Ae[static_cast<size_t>(j)];
        }
        M.push_back(std::move(row));
        b.push_back(dec.T[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)]);
        origin.emplace_back(a, i, j);
      }
  LinearSolution sol = M.empty() || np == 0 ? LinearSolution{} : solve_linear(M, b);
  if (np == 0) {
    sol.consistent = false;
    for (size_t r = 0; r < b.size(); ++r)
      if (!b[r].zero()) {
        sol.inconsistent_row = static_cast<int>(r);
        break;
      }
  }
  if (!sol.consistent) {
    auto [a, i, j] = origin[static_cast<size_t>(sol.inconsistent_row)];
    out.witness_a = a;
    out.witness_i = i;
    out.witness_j = j;
    out.witness = dec.T[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (out.witness.zero()) {
      // the obstruction is a combination; report the first nonzero torsion entry instead
      for (size_t r = 0; r < b.size() && out.witness.zero(); ++r)
        if (!b[r].zero()) {
          std::tie(out.witness_a, out.witness_i, out.witness_j) = origin[r];
          out.witness = b[r];
        }
    }
    return out;
  }
  out.absorbed = true;
  for (int e = 0; e < np; ++e) {
    Form pi = sys.compl_[static_cast<size_t>(e)];
    for (int j = 0; j < k; ++j) {
      RatExpr x = sys.space.normal(sol.particular[static_cast<size_t>(e * k + j)]);
      out.shift[static_cast<size_t>(e)][static_cast<size_t>(j)] = x;
      if (!x.zero()) pi -= x * sys.indep[static_cast<size_t>(j)];
    }
    out.system.compl_[static_cast<size_t>(e)] = sys.space.normal(pi);
  }
  return out;
}

namespace {

int rank_over(const std::vector<Vec>& rows, size_t cols) {
  if (rows.empty() || cols == 0) return 0;
  Vec zero(rows.size());
  return static_cast<int>(solve_linear(rows, zero).pivots.size());
}

}  // namespace

namespace {

std::set<int> tableau_symbols(const Tensor3& A) {
  std::set<int> syms;
  for (const auto& a : A)
    for (const auto& e : a)
      for (const auto& c : e)
        for (int v : c.vars()) syms.insert(v);
  return syms;
}

// Characters of A read against the flag whose i-th vector is column i of g.
std::vector<int> flag_characters(const Tensor3& A, const QMat& g, std::mt19937_64& rng, bool symbolic) {
  const size_t s0 = A.size();
  const size_t np = s0 ? A[0].size() : 0;
  const size_t k = (s0 && np) ? A[0][0].size() : 0;
  std::vector<int> prof;
  if (symbolic) {
    std::vector<Vec> rows;
    for (size_t i = 0; i < k; ++i) {
      for (size_t a = 0; a < s0; ++a) {
        Vec row(np);
        for (size_t e = 0; e < np; ++e)
          for (size_t l = 0; l < k; ++l)
            if (!A[a][e][l].zero() && sgn(g[l][i]) != 0) row[e] += A[a][e][l] * RatExpr(g[l][i]);
        rows.push_back(std::move(row));
      }
      prof.push_back(rank_over(rows, np));
    }
  } else {
    prof = with_retries(rng, tableau_symbols(A), [&](const std::map<int, Q>& pt) {
      std::vector<std::vector<std::vector<Q>>> Av(s0, std::vector<std::vector<Q>>(np, std::vector<Q>(k)));
      for (size_t a = 0; a < s0; ++a)
        for (size_t e = 0; e < np; ++e)
          for (size_t l = 0; l < k; ++l) Av[a][e][l] = A[a][e][l].zero() ? Q(0) : A[a][e][l].eval(pt);
      std::vector<int> pr;
      QMat rows;
      for (size_t i = 0; i < k; ++i) {
        for (size_t a = 0; a < s0; ++a) {
          QVec row(np, Q(0));
          for (size_t e = 0; e < np; ++e)
            for (size_t l = 0; l < k; ++l)
              if (sgn(Av[a][e][l]) != 0) row[e] += Av[a][e][l] * g[l][i];
          rows.push_back(std::move(row));
        }
        pr.push_back(np ? rank_q(rows) : 0);
      }
      return pr;
    });
  }
  std::vector<int> sv(k);
  for (size_t i = 0; i < k; ++i) sv[i] = prof[i] - (i ? prof[i - 1] : 0);
  return sv;
}

size_t tableau_k(const Tensor3& A) {
  return (!A.empty() && !A[0].empty()) ? A[0][0].size() : 0;
}

}  // namespace

CharacterResult characters(const Tensor3& A, int trials, std::uint64_t seed, bool symbolic) {
  if (trials < 1) throw MalformedExpression("characters needs at least one trial");
  CharacterResult out;
  const size_t k = tableau_k(A);
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    std::mt19937_64 rng(s);
    std::uniform_int_distribution<int> entry(-9, 9);
    QMat g;
    do {
      g.assign(k, QVec(k));
      for (auto& row : g)
        for (auto& x : row) x = entry(rng);
    } while (k > 0 && rank_q(g) != static_cast<int>(k));
    out.trial_s.push_back(flag_characters(A, g, rng, symbolic));
    out.seeds.push_back(s);
  }
  // A generic flag maximizes every partial sum s_1 + ... + s_j, so the best trial is the
  // lexicographic maximum. A componentwise max can mix a degenerate flag into the result.
  out.s = *std::max_element(out.trial_s.begin(), out.trial_s.end());
  int attained = static_cast<int>(std::count(out.trial_s.begin(), out.trial_s.end(), out.s));
  out.unstable = trials > 1 && attained < 2;
  return out;
}

std::vector<int> unflagged_characters(const Tensor3& A, std::uint64_t seed) {
  const size_t k = tableau_k(A);
  QMat g(k, QVec(k, Q(0)));
  for (size_t i = 0; i < k; ++i) g[i][i] = 1;
  std::mt19937_64 rng(seed);
  return flag_characters(A, g, rng, false);
}

std::string unknown_name(const std::string& prefix, int eps, int i) {
  std::string sep = (eps > 9 || i > 9) ? "_" : "";
  return prefix + std::to_string(eps) + sep + std::to_string(i);
}

IntegralElements integral_elements(const LinearPfaffianSystem& sys, const Decomposition& dec,
                                   std::uint64_t seed, bool symbolic, const std::string& prefix) {
  const int s0 = sys.s0(), k = sys.k(), np = sys.npi();
  IntegralElements out;
  out.unknowns = np * k;
  // rows (a, i<j): A^a_{ei} P^e_j - A^a_{ej} P^e_i + T^a_{ij} = 0
  Mat M;
  Vec rhs;
  for (int a = 0; a < s0; ++a)
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Vec row(static_cast<size_t>(out.unknowns));
        for (int e = 0; e < np; ++e) {
          const auto& Ae = dec.A[static_cast<size_t>(a)][static_cast<size_t>(e)];
          row[static_cast<size_t>(e * k + j)] += Ae[static_cast<size_t>(i)];
          row[static_cast<size_t>(e * k + i)] -= Ae[static_cast<size_t>(j)];
        }
        M.push_back(std::move(row));
        rhs.push_back(-dec.T[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)]);
      }
  std::set<int> syms = symbols_of(M);
  for (const auto& c : rhs)
    for (int v : c.vars()) syms.insert(v);
  std::mt19937_64 rng(seed);
  for (int p = 0; p < 3; ++p) {
    int r = M.empty() ? 0 : with_retries(rng, syms, [&](const std::map<int, Q>& pt) {
      QMat E(M.size(), QVec(static_cast<size_t>(out.unknowns)));
      for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M[i].size(); ++j) E[i][j] = M[i][j].zero() ? Q(0) : M[i][j].eval(pt);
      return rank_q(E);
    });
    out.ranks.push_back(r);
  }
  out.nongeneric = !std::all_of(out.ranks.begin(), out.ranks.end(), [&](int r) { return r == out.ranks[0]; });
  int rank = *std::max_element(out.ranks.begin(), out.ranks.end());
  out.dim = out.unknowns - rank;

  if (symbolic || out.unknowns <= 32) {
    out.symbolic = true;
    Workspace& ws = sys.space.ws();
    for (int e = 0; e < np; ++e)
      for (int i = 0; i < k; ++i) out.unknown_syms.push_back(ws.ensure(unknown_name(prefix, e + 1, i + 1), SymKind::Auxiliary));
    if (M.empty()) {
      out.free_syms = out.unknown_syms;
      return out;
    }
    auto sol = solve_linear(M, rhs);
    if (!sol.consistent) throw StructureInconsistency("integral-element equations are inconsistent");
    for (int f : sol.free_vars) out.free_syms.push_back(out.unknown_syms[static_cast<size_t>(f)]);
    for (int pc : sol.pivots) {
      RatExpr val = sol.particular[static_cast<size_t>(pc)];
      for (size_t q = 0; q < sol.free_vars.size(); ++q) {
        const RatExpr& c = sol.nullspace[q][static_cast<size_t>(pc)];
        if (!c.zero()) val += c * RatExpr::sym(out.unknown_syms[static_cast<size_t>(sol.free_vars[q])]);
      }
      out.relations.emplace_back(out.unknown_syms[static_cast<size_t>(pc)], sys.space.normal(val));
    }
  }
  return out;
}

InvolutivityReport cartan_test(const LinearPfaffianSystem& sys, int trials, std::uint64_t seed, bool symbolic) {
  check_adapted(sys, seed);
  InvolutivityReport rep;
  rep.s0 = sys.s0();
  Decomposition dec = decompose(sys);
  rep.torsion_was_zero = dec.torsion_free();
  AbsorbResult ab = absorb(sys, dec);
  rep.torsion_absorbed = ab.absorbed;
  rep.shift = ab.shift;
  rep.absorbed = ab.system;
  Decomposition dec2 = dec;
  if (ab.absorbed && !rep.torsion_was_zero) {
    dec2 = decompose(ab.system);
    if (!dec2.torsion_free()) throw StructureInconsistency("absorption left residual torsion");
  } else if (!ab.absorbed) {
    std::ostringstream os;
    os << "T^" << ab.witness_a + 1 << "_" << ab.witness_i + 1 << ab.witness_j + 1 << " = "
       << sys.space.str(ab.witness);
    rep.torsion_witness = os.str();
  }
  rep.decomposition = dec;
  auto ch = characters(dec.A, trials, seed, symbolic);
  rep.characters = ch.s;
  rep.trials = ch.trial_s;
  rep.seeds = ch.seeds;
  rep.unstable = ch.unstable;
  for (size_t i = 0; i < ch.s.size(); ++i) rep.cartan_sum += static_cast<int>(i + 1) * ch.s[i];
  for (size_t i = ch.s.size(); i-- > 0;)
    if (ch.s[i] != 0) {
      rep.generality = {ch.s[i], static_cast<int>(i + 1)};
      break;
    }
  if (ab.absorbed) {
    rep.integral = integral_elements(ab.system, dec2, seed, symbolic);
    rep.integral_dim = rep.integral.dim;
    rep.nongeneric = rep.integral.nongeneric;
    rep.cartan_ok = rep.integral_dim == rep.cartan_sum;
  }
  return rep;
}

LinearPfaffianSystem prolong_step(const LinearPfaffianSystem& sys, const IntegralElements& ie) {
  if (!ie.symbolic) throw MalformedExpression("prolongation needs symbolic integral elements");
  const int k = sys.k(), np = sys.npi();
  Workspace& ws = sys.space.ws();
  std::vector<std::string> extra;
  for (int v : ie.free_syms) extra.push_back("d" + ws.name(v));
  LinearPfaffianSystem out;
  out.space = sys.space.extended(extra);
  const int base = sys.space.dim();
  for (size_t q = 0; q < ie.free_syms.size(); ++q) out.space.coordinate(ws.name(ie.free_syms[q]), base + static_cast<int>(q));
  std::map<int, RatExpr> rel(ie.relations.begin(), ie.relations.end());
  out.gens = sys.gens;
  out.gen_names = sys.gen_names;
  for (int e = 0; e < np; ++e) {
    Form g = sys.compl_[static_cast<size_t>(e)];
    std::string nm = e < static_cast<int>(sys.compl_names.size()) ? sys.compl_names[static_cast<size_t>(e)]
                                                                    : "pi" + std::to_string(e + 1);
    for (int i = 0; i < k; ++i) {
      int u = ie.unknown_syms[static_cast<size_t>(e * k + i)];
      auto it = rel.find(u);
      RatExpr P = it == rel.end() ? RatExpr::sym(u) : it->second;
      if (P.zero()) continue;
      g -= P * sys.indep[static_cast<size_t>(i)];
      std::string in = i < static_cast<int>(sys.indep_names.size()) ? sys.indep_names[static_cast<size_t>(i)]
                                                                     : "omega" + std::to_string(i + 1);
      nm += " - (" + ws.str(P) + ")*" + in;
    }
    out.gens.push_back(out.space.normal(g));
    out.gen_names.push_back(nm);
  }
  out.indep = sys.indep;
  out.indep_names = sys.indep_names;
  for (size_t q = 0; q < ie.free_syms.size(); ++q) {
    out.compl_.push_back(Form::basis(base + static_cast<int>(q)));
    out.compl_names.push_back(extra[q]);
  }
  return out;
}

}  // namespace eds
