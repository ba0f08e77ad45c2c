#include "eds/linalg.hpp"

#include <algorithm>

namespace eds {

LinearSolution solve_linear(const Mat& A, const Vec& b) {
  const size_t m = A.size();
  const size_t n = m ? A[0].size() : 0;
  if (b.size() != m) throw MalformedExpression("solve_linear: right-hand side size mismatch");
  Mat M(m, Vec(n + 1));
  std::vector<int> origin(m);
  for (size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw MalformedExpression("solve_linear: ragged matrix");
    for (size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
    M[i][n] = b[i];
    origin[i] = static_cast<int>(i);
  }

  LinearSolution sol;
  RatExpr prev(1);
  size_t r = 0;
  for (size_t c = 0; c < n && r < m; ++c) {
    size_t p = r;
    while (p < m && M[p][c].zero()) ++p;
    if (p == m) continue;
    std::swap(M[p], M[r]);
    std::swap(origin[p], origin[r]);
    const RatExpr piv = M[r][c];
    for (size_t i = r + 1; i < m; ++i) {
      const RatExpr f = M[i][c];
      for (size_t j = c + 1; j <= n; ++j) {
        if (f.zero()) {
          if (!M[i][j].zero() && piv != prev) M[i][j] = piv * M[i][j] / prev;
        } else if (M[r][j].zero()) {
          if (!M[i][j].zero()) M[i][j] = piv * M[i][j] / prev;
        } else {
          M[i][j] = (piv * M[i][j] - f * M[r][j]) / prev;
        }
      }
      M[i][c] = RatExpr();
    }
    prev = piv;
    sol.pivots.push_back(static_cast<int>(c));
    ++r;
  }

  for (size_t i = r; i < m; ++i) {
    if (!M[i][n].zero()) {
      sol.consistent = false;
      sol.inconsistent_row = origin[i];
      return sol;
    }
  }

  std::vector<bool> is_pivot(n, false);
  for (int c : sol.pivots) is_pivot[static_cast<size_t>(c)] = true;
  for (size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) sol.free_vars.push_back(static_cast<int>(j));

  auto back = [&](Vec x, bool with_rhs) {
    for (size_t k = r; k-- > 0;) {
      size_t c = static_cast<size_t>(sol.pivots[k]);
      RatExpr acc = with_rhs ? M[k][n] : RatExpr();
      for (size_t j = c + 1; j < n; ++j)
        if (!M[k][j].zero() && !x[j].zero()) acc -= M[k][j] * x[j];
      x[c] = acc / M[k][c];
    }
    return x;
  };

  sol.particular = back(Vec(n), true);
  for (int f : sol.free_vars) {
    Vec x(n);
    x[static_cast<size_t>(f)] = RatExpr(1);
    sol.nullspace.push_back(back(std::move(x), false));
  }
  return sol;
}

QSolution solve_q(const QMat& A, const QVec& b) {
  const size_t m = A.size();
  const size_t n = m ? A[0].size() : 0;
  QMat M(m, QVec(n + 1));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
    M[i][n] = b[i];
  }
  QSolution sol;
  size_t r = 0;
  for (size_t c = 0; c < n && r < m; ++c) {
    size_t p = r;
    while (p < m && sgn(M[p][c]) == 0) ++p;
    if (p == m) continue;
    std::swap(M[p], M[r]);
    Q inv = 1 / M[r][c];
    for (size_t j = c; j <= n; ++j) M[r][j] *= inv;
    for (size_t i = 0; i < m; ++i) {
      if (i == r || sgn(M[i][c]) == 0) continue;
      Q f = M[i][c];
      for (size_t j = c; j <= n; ++j)
        if (sgn(M[r][j]) != 0) M[i][j] -= f * M[r][j];
    }
    sol.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < m; ++i)
    if (sgn(M[i][n]) != 0) {
      sol.consistent = false;
      return sol;
    }
  std::vector<bool> is_pivot(n, false);
  for (int c : sol.pivots) is_pivot[static_cast<size_t>(c)] = true;
  for (size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) sol.free_vars.push_back(static_cast<int>(j));
  sol.particular.assign(n, Q(0));
  for (size_t k = 0; k < r; ++k) sol.particular[static_cast<size_t>(sol.pivots[k])] = M[k][n];
  for (int f : sol.free_vars) {
    QVec v(n, Q(0));
    v[static_cast<size_t>(f)] = 1;
    for (size_t k = 0; k < r; ++k) v[static_cast<size_t>(sol.pivots[k])] = -M[k][static_cast<size_t>(f)];
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

int rank_q(QMat M) {
  const size_t m = M.size();
  const size_t n = m ? M[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < n && r < m; ++c) {
    size_t p = r;
    while (p < m && sgn(M[p][c]) == 0) ++p;
    if (p == m) continue;
    std::swap(M[p], M[r]);
    for (size_t i = r + 1; i < m; ++i) {
      if (sgn(M[i][c]) == 0) continue;
      Q f = M[i][c] / M[r][c];
      for (size_t j = c; j < n; ++j)
        if (sgn(M[r][j]) != 0) M[i][j] -= f * M[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

std::optional<Mat> invert(const Mat& M0) {
  const size_t n = M0.size();
  Mat M = M0;
  Mat R(n, Vec(n));
  for (size_t i = 0; i < n; ++i) R[i][i] = RatExpr(1);
  std::vector<bool> used(n, false);
  std::vector<size_t> row_of_col(n);
  for (size_t c = 0; c < n; ++c) {
    size_t best = n;
    for (size_t i = 0; i < n; ++i) {
      if (used[i] || M[i][c].zero()) continue;
      if (best == n) best = i;
      if (M[i][c].is_const()) {
        best = i;
        break;
      }
    }
    if (best == n) return std::nullopt;
    used[best] = true;
    row_of_col[c] = best;
    RatExpr inv = RatExpr(1) / M[best][c];
    if (inv != RatExpr(1)) {
      for (size_t j = 0; j < n; ++j) {
        if (!M[best][j].zero()) M[best][j] = M[best][j] * inv;
        if (!R[best][j].zero()) R[best][j] = R[best][j] * inv;
      }
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == best || M[i][c].zero()) continue;
      RatExpr f = M[i][c];
      for (size_t j = 0; j < n; ++j) {
        if (!M[best][j].zero()) M[i][j] = M[i][j] - f * M[best][j];
        if (!R[best][j].zero()) R[i][j] = R[i][j] - f * R[best][j];
      }
    }
  }
  Mat out(n);
  for (size_t c = 0; c < n; ++c) out[c] = R[row_of_col[c]];
  return out;
}

Vec mat_vec(const Mat& A, const Vec& x) {
  Vec y(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      if (!A[i][j].zero() && !x[j].zero()) y[i] += A[i][j] * x[j];
  return y;
}

}  // namespace eds
