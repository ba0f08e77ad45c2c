#pragma once

#include <optional>
#include <vector>

#include "eds/field.hpp"

namespace eds {

using Mat = std::vector<std::vector<RatExpr>>;
using Vec = std::vector<RatExpr>;
using QMat = std::vector<std::vector<Q>>;
using QVec = std::vector<Q>;

struct LinearSolution {
  bool consistent = true;
  Vec particular;              // free variables set to 0
  std::vector<Vec> nullspace;  // one vector per free variable
  std::vector<int> pivots;
  std::vector<int> free_vars;
  int inconsistent_row = -1;   // original row index witnessing inconsistency
  size_t nullity() const { return nullspace.size(); }
};

// Fraction-free (Bareiss) elimination over the rational-expression field.
// Pivot: first row holding a nonzero entry in the current column.
LinearSolution solve_linear(const Mat& A, const Vec& b);

struct QSolution {
  bool consistent = true;
  QVec particular;
  std::vector<QVec> nullspace;
  std::vector<int> pivots;
  std::vector<int> free_vars;
};

QSolution solve_q(const QMat& A, const QVec& b);
int rank_q(QMat A);

// Inverse by Gauss-Jordan, preferring constant pivots; nullopt if singular.
std::optional<Mat> invert(const Mat& M);

Vec mat_vec(const Mat& A, const Vec& x);

}  // namespace eds
