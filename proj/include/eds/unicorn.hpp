#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eds/jets.hpp"

namespace eds {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// gamma_i = (G^1_{i1} + G^2_{i2}) / 2; G[(j-1)*4 + (k-1)*2 + (l-1)] = G^j_{kl}.
std::pair<double, double> gamma_from_christoffel(const std::array<double, 8>& G);

// -(1/u^2) Laplacian(log u) by central differences.
double gauss_curvature(const std::function<double(double, double)>& u, double z1, double z2, double h);

struct SourceValues {
  double mb = 0, mb_z1 = 0, mb_z2 = 0, u = 0, u_z1 = 0, u_z2 = 0;
};

struct UnicornSource {
  std::string kind;  // flat, cosh, jet
  std::function<SourceValues(double, double)> eval;
  double tail = 0;  // truncation estimate for jet sources at the grid radius
};

UnicornSource flat_source();
UnicornSource cosh_source();
UnicornSource jet_source(const JetState& s, double radius);

// How the upstairs m~_2 entering the normal form is evaluated.
// Pulled: the pullback of (1/u) dmbar/dz2, as in the displayed normal form.
// Framed: the alpha^2-derivative of m~ = mbar, i.e. sin t mbar_1 + cos t mbar_2.
enum class M2Mode { Pulled, Framed };

using Mat3 = std::array<std::array<double, 3>, 3>;

struct CoframeField {
  UnicornSource source;
  M2Mode mode = M2Mode::Pulled;
  // rows omega^1..3, columns dz1, dz2, dt
  Mat3 W(double z1, double z2, double t) const;
  double I(double z1, double z2, double t) const;
  double K(double z1, double z2, double t) const;
};

CoframeField build_normal_form(const UnicornSource& src, M2Mode mode = M2Mode::Pulled);

struct GridSpec {
  int n1 = 5, n2 = 5, nt = 8;
  double radius = 0.1;  // |z1|, |z2| <= radius; t = 2 pi k / nt
};

struct PointResidual {
  double z1 = 0, z2 = 0, t = 0;
  std::array<double, 3> residual{};  // max |coefficient| in the omega basis, per structure equation
  double J = 0;                      // omega^1^omega^3 coefficient of d omega^3 - K omega^1^omega^2, negated
  double I = 0, K = 0, I1 = 0, I3 = 0, K2 = 0, det = 0;
};

struct VerificationReport {
  std::string source;
  GridSpec grid;
  double h = 0, tol = 0;
  int fd_order = 2;
  std::vector<PointResidual> points;
  double max_residual = 0;
  double max_J = 0;
  double max_residual_t0 = 0;  // over the t = 0 slice
  double max_residual_half = 0;  // same grid at h/2
  double ratio = 0;              // max_residual / max_residual_half
  double max_residual_t0_half = 0;
  double ratio_t0 = 0;
  double min_abs_det = 0;
  double tail = 0;
  double max_I = 0, max_I1 = 0, max_I3 = 0, max_K2 = 0;
  bool riemannian = false, berwald = false, nontrivial = false;
  bool passed = false;  // max residual within max(tol, tail), max J within tol
};

VerificationReport verify_structure(const CoframeField& field, const GridSpec& grid = {}, double h = 1e-3,
                                    double tol = 1e-4, int fd_order = 2);
// Residual of the orthonormal frame bundle equations d a1 = a2^a3, d a2 = a3^a1, d a3 = R a1^a2
// for a1 + i a2 = u e^{it}(dz1 + i dz2)-type frames and a3 = dt - *d(log u). Guards the sign of *.
double riemannian_frame_residual(const UnicornSource& src, const GridSpec& grid = {}, double h = 1e-3,
                                 int fd_order = 2);
// Sets the Riemannian / Berwald / non-trivial flags from the I, I1 fields of a report.
void nontriviality(VerificationReport& report, double eps = 1e-6);

}  // namespace eds
