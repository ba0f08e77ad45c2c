#include "eds/unicorn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eds {

std::pair<double, double> gamma_from_christoffel(const std::array<double, 8>& G) {
  auto g = [&](int j, int k, int l) { return G[static_cast<size_t>((j - 1) * 4 + (k - 1) * 2 + (l - 1))]; };
  return {0.5 * (g(1, 1, 1) + g(2, 1, 2)), 0.5 * (g(1, 2, 1) + g(2, 2, 2))};
}

double gauss_curvature(const std::function<double(double, double)>& u, double z1, double z2, double h) {
  auto lg = [&](double a, double b) {
    double v = u(a, b);
    if (!(v > 0)) throw DomainError("conformal factor u must be positive");
    return std::log(v);
  };
  double c = lg(z1, z2);
  double lap = (lg(z1 + h, z2) + lg(z1 - h, z2) + lg(z1, z2 + h) + lg(z1, z2 - h) - 4 * c) / (h * h);
  double u0 = u(z1, z2);
  return -lap / (u0 * u0);
}

UnicornSource flat_source() {
  return {"flat", [](double, double) { return SourceValues{1, 0, 0, 1, 0, 0}; }, 0};
}

UnicornSource cosh_source() {
  return {"cosh", [](double, double z2) { return SourceValues{std::cosh(z2), 0, std::sinh(z2), 1, 0, 0}; }, 0};
}

UnicornSource jet_source(const JetState& s, double radius) {
  UnicornSource src;
  src.kind = "jet";
  src.tail = sample(s, 0, 0, radius).tail;
  src.eval = [s](double z1, double z2) {
    JetSample v = sample(s, z1, z2, 0);
    return SourceValues{v.mb, v.mb_z1, v.mb_z2, v.u, v.u_z1, v.u_z2};
  };
  return src;
}

namespace {

double m2_of(const SourceValues& v, M2Mode mode, double t) {
  if (mode == M2Mode::Pulled) return v.mb_z2 / v.u;
  return (std::sin(t) * v.mb_z1 + std::cos(t) * v.mb_z2) / v.u;
}

}  // namespace

Mat3 CoframeField::W(double z1, double z2, double t) const {
  SourceValues v = source.eval(z1, z2);
  if (v.mb == 0) throw DomainError("mbar vanishes: the normal form is singular");
  if (!(v.u > 0)) throw DomainError("conformal factor u must be positive");
  const double c = std::cos(t), s = std::sin(t), m = v.mb, u = v.u;
  const double m2 = m2_of(v, mode, t);
  // *d(log u) = -(u_2/u) dz1 + (u_1/u) dz2
  const double st1 = -v.u_z2 / u, st2 = v.u_z1 / u;
  const double k = u * m2 / m;
  Mat3 W{};
  W[0] = {(-st1 - k * c) / m, (-st2 + k * s) / m, 1 / m};
  W[1] = {u * c / m, -u * s / m, 0};
  W[2] = {u * s, u * c, 0};
  return W;
}

double CoframeField::I(double z1, double z2, double t) const {
  SourceValues v = source.eval(z1, z2);
  return -2 * m2_of(v, mode, t) / v.mb;
}

double CoframeField::K(double z1, double z2, double) const {
  SourceValues v = source.eval(z1, z2);
  return v.mb * v.mb;
}

CoframeField build_normal_form(const UnicornSource& src, M2Mode mode) {
  CoframeField f;
  f.source = src;
  f.mode = mode;
  f.W(0, 0, 0);  // surfaces singular data early
  return f;
}

namespace {

using Vec3 = std::array<double, 3>;

template <class F>
auto central(const F& f, const Vec3& x, int k, double h, int order) {
  auto at = [&](double d) {
    Vec3 y = x;
    y[static_cast<size_t>(k)] += d;
    return f(y);
  };
  auto comb = [](auto a, auto b, double wa, double wb) {
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < a[i].size(); ++j) a[i][j] = wa * a[i][j] + wb * b[i][j];
    return a;
  };
  if (order == 4) {
    auto p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
    auto d1 = comb(p1, m1, 1, -1), d2 = comb(p2, m2, 1, -1);
    return comb(d1, d2, 8 / (12 * h), -1 / (12 * h));
  }
  auto p1 = at(h), m1 = at(-h);
  return comb(p1, m1, 1 / (2 * h), -1 / (2 * h));
}

double det3(const Mat3& A) {
  return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
         A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
}

Mat3 inv3(const Mat3& A) {
  double d = det3(A);
  Mat3 B{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      B[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          (A[static_cast<size_t>(i1)][static_cast<size_t>(j1)] * A[static_cast<size_t>(i2)][static_cast<size_t>(j2)] -
           A[static_cast<size_t>(i1)][static_cast<size_t>(j2)] * A[static_cast<size_t>(i2)][static_cast<size_t>(j1)]) /
          d;
    }
  return B;
}

// Full antisymmetric 2-form as a matrix in the dx basis.
using Two = Mat3;

Two wedge1(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  Two r{};
  for (size_t j = 0; j < 3; ++j)
    for (size_t k = 0; k < 3; ++k) r[j][k] = a[j] * b[k] - a[k] * b[j];
  return r;
}

// B_ab = beta(e_a, e_b) with e_a the columns of E = W^{-1}.
Two in_frame(const Two& beta, const Mat3& E) {
  Two B{};
  for (size_t a = 0; a < 3; ++a)
    for (size_t b = 0; b < 3; ++b) {
      double s = 0;
      for (size_t j = 0; j < 3; ++j)
        for (size_t k = 0; k < 3; ++k) s += beta[j][k] * E[j][a] * E[k][b];
      B[a][b] = s;
    }
  return B;
}

// Exterior derivatives of the rows of W as full antisymmetric matrices.
template <class WF>
std::array<Two, 3> d_rows(const WF& Wf, const Vec3& x, double h, int order) {
  std::array<Mat3, 3> dW;  // dW[k][i][j] = d W_ij / d x^k
  for (int k = 0; k < 3; ++k) dW[static_cast<size_t>(k)] = central(Wf, x, k, h, order);
  std::array<Two, 3> dw{};
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j)
      for (size_t k = 0; k < 3; ++k) dw[i][j][k] = dW[j][i][k] - dW[k][i][j];
  return dw;
}

Two lin(const Two& a, const Two& b, double s) {
  Two r = a;
  for (size_t j = 0; j < 3; ++j)
    for (size_t k = 0; k < 3; ++k) r[j][k] += s * b[j][k];
  return r;
}

double max_upper(const Two& B) {
  double m = 0;
  for (size_t a = 0; a < 3; ++a)
    for (size_t b = a + 1; b < 3; ++b) m = std::max(m, std::abs(B[a][b]));
  return m;
}

PointResidual evaluate(const CoframeField& F, double z1, double z2, double t, double h, int order) {
  Vec3 x{z1, z2, t};
  auto Wf = [&](const Vec3& y) { return F.W(y[0], y[1], y[2]); };
  std::array<Two, 3> dw = d_rows(Wf, x, h, order);
  Mat3 W = F.W(z1, z2, t);
  Mat3 E = inv3(W);
  const double I = F.I(z1, z2, t), K = F.K(z1, z2, t);
  auto w = [&](int a, int b) { return wedge1(W[static_cast<size_t>(a)], W[static_cast<size_t>(b)]); };
  Two r1 = lin(lin(dw[0], w(0, 2), I), w(1, 2), -1);
  Two r2 = lin(dw[1], w(0, 2), 1);
  Two r3 = lin(dw[2], w(0, 1), -K);
  PointResidual p;
  p.z1 = z1;
  p.z2 = z2;
  p.t = t;
  p.I = I;
  p.K = K;
  p.det = det3(W);
  const Two* rs[3] = {&r1, &r2, &r3};
  for (size_t e = 0; e < 3; ++e) {
    Two B = in_frame(*rs[e], E);
    p.residual[e] = max_upper(B);
    if (e == 2) p.J = -B[0][2];
  }
  // dI, dK in the omega basis: f_a = df(e_a)
  auto grad = [&](auto fn) {
    auto scalar = [&](const Vec3& y) { return std::array<std::array<double, 1>, 1>{{{fn(y)}}}; };
    Vec3 g{};
    for (int k = 0; k < 3; ++k) g[static_cast<size_t>(k)] = central(scalar, x, k, h, order)[0][0];
    Vec3 out{};
    for (size_t a = 0; a < 3; ++a)
      for (size_t j = 0; j < 3; ++j) out[a] += g[j] * E[j][a];
    return out;
  };
  Vec3 dI = grad([&](const Vec3& y) { return F.I(y[0], y[1], y[2]); });
  Vec3 dK = grad([&](const Vec3& y) { return F.K(y[0], y[1], y[2]); });
  p.I1 = dI[0];
  p.I3 = dI[2];
  p.K2 = dK[1];
  return p;
}

std::vector<double> axis(int n, double r) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? 0.0 : -r + 2 * r * i / (n - 1));
  return v;
}

}  // namespace

VerificationReport verify_structure(const CoframeField& field, const GridSpec& grid, double h, double tol,
                                    int fd_order) {
  VerificationReport rep;
  rep.source = field.source.kind;
  rep.grid = grid;
  rep.h = h;
  rep.tol = tol;
  rep.fd_order = fd_order;
  rep.tail = field.source.tail;
  rep.min_abs_det = INFINITY;
  for (double z1 : axis(grid.n1, grid.radius))
    for (double z2 : axis(grid.n2, grid.radius))
      for (int k = 0; k < grid.nt; ++k) {
        double t = 2 * std::numbers::pi * k / grid.nt;
        PointResidual p = evaluate(field, z1, z2, t, h, fd_order);
        PointResidual q = evaluate(field, z1, z2, t, h / 2, fd_order);
        for (double r : p.residual) {
          if (!std::isfinite(r)) throw DomainError("non-finite finite-difference value");
          rep.max_residual = std::max(rep.max_residual, r);
          if (k == 0) rep.max_residual_t0 = std::max(rep.max_residual_t0, r);
        }
        for (double r : q.residual) {
          rep.max_residual_half = std::max(rep.max_residual_half, r);
          if (k == 0) rep.max_residual_t0_half = std::max(rep.max_residual_t0_half, r);
        }
        rep.max_J = std::max(rep.max_J, std::abs(p.J));
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(p.det));
        rep.max_I = std::max(rep.max_I, std::abs(p.I));
        rep.max_I1 = std::max(rep.max_I1, std::abs(p.I1));
        rep.max_I3 = std::max(rep.max_I3, std::abs(p.I3));
        rep.max_K2 = std::max(rep.max_K2, std::abs(p.K2));
        rep.points.push_back(p);
      }
  rep.ratio = rep.max_residual_half > 0 ? rep.max_residual / rep.max_residual_half : 0;
  rep.ratio_t0 = rep.max_residual_t0_half > 0 ? rep.max_residual_t0 / rep.max_residual_t0_half : 0;
  if (rep.min_abs_det < 1e-8) throw DomainError("coframe degenerates on the grid");
  nontriviality(rep);
  const double bound = std::max(tol, rep.tail);
  rep.passed = rep.max_residual <= bound && rep.max_J <= tol;
  return rep;
}

double riemannian_frame_residual(const UnicornSource& src, const GridSpec& grid, double h, int fd_order) {
  auto Wf = [&](const Vec3& y) {
    SourceValues v = src.eval(y[0], y[1]);
    if (!(v.u > 0)) throw DomainError("conformal factor u must be positive");
    const double c = std::cos(y[2]), s = std::sin(y[2]), u = v.u;
    Mat3 W{};
    W[0] = {u * c, -u * s, 0};
    W[1] = {u * s, u * c, 0};
    W[2] = {v.u_z2 / u, -v.u_z1 / u, 1};  // dt - *d(log u)
    return W;
  };
  auto uf = [&](double a, double b) { return src.eval(a, b).u; };
  double worst = 0;
  for (double z1 : axis(grid.n1, grid.radius))
    for (double z2 : axis(grid.n2, grid.radius))
      for (int k = 0; k < grid.nt; ++k) {
        Vec3 x{z1, z2, 2 * std::numbers::pi * k / grid.nt};
        std::array<Two, 3> dw = d_rows(Wf, x, h, fd_order);
        Mat3 W = Wf(x);
        Mat3 E = inv3(W);
        double R = gauss_curvature(uf, z1, z2, h);
        Two r1 = lin(dw[0], wedge1(W[1], W[2]), -1);
        Two r2 = lin(dw[1], wedge1(W[2], W[0]), -1);
        Two r3 = lin(dw[2], wedge1(W[0], W[1]), -R);
        for (const Two* r : {&r1, &r2, &r3}) worst = std::max(worst, max_upper(in_frame(*r, E)));
      }
  return worst;
}

void nontriviality(VerificationReport& r, double eps) {
  r.riemannian = r.max_I < eps;
  r.berwald = !r.riemannian && r.max_I1 < eps;
  r.nontrivial = !r.riemannian && r.max_I1 >= eps;
}

}  // namespace eds
