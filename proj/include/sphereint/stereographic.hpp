#ifndef SPHEREINT_STEREOGRAPHIC_HPP
#define SPHEREINT_STEREOGRAPHIC_HPP

#include <functional>

#include "sphereint/ultraspherical.hpp"

// Stereographic projection S^d \ {N} -> R^d for zonal/radial functions, the
// conformal pushforward u(y) = (1-z)^(-(d-2)/2) v(x), and numerical checks of
// the associated energy identities and Aubin-Talenti computations.

namespace sphereint {

struct SpherePoint {
  double z;    // latitude coordinate, z in [-1, 1]
  double rho;  // distance to the axis, rho = sqrt(1 - z^2)
};

struct PlanePoint {
  double r;  // |x|; the S^{d-1} direction is preserved by the projection
};

/// r = sqrt((1+z)/(1-z)); the North Pole z = 1 is excluded.
PlanePoint project(const SpherePoint& y);

/// z = (r^2-1)/(r^2+1), rho = 2r/(r^2+1).
SpherePoint inverse_project(const PlanePoint& x);

using RadialFn = std::function<double(double)>;

/// Conformal weight (1-z)^(-(d-2)/2) (identically 1 for d <= 2).
double conformal_factor(double z, int d);

/// Nodal pushforward of a radial plane function to a zonal sphere function.
ZonalFunction pushforward_to_sphere(const RadialFn& v, int d, const GridPtr& grid);

/// Nodal inverse: values v(r(z_i)) recovered from a zonal u.
Eigen::VectorXd pushforward_to_plane(const ZonalFunction& u);

struct EnergyIdentityReport {
  double gradient_rel = 0;  // int |grad u|^2 dw + a* int u^2 dw  vs  int |grad v|^2 dx
  double mass_rel = 0;      // int u^2 dw  vs  int v^2 (2/(1+|x|^2))^2 dx
  double lq_rel = 0;        // int u^q dw  vs  int v^q (2/(1+|x|^2))^(d-(d-2)q/2) dx
  double combined_rel = 0;  // gradient identity with alpha in place of alpha_*
};

/// Verify the conformal energy identities for a decaying radial profile by
/// two independent quadratures (ultraspherical grid vs adaptive Gauss-Kronrod
/// on the half-line). Requires d >= 3 and the analytic derivative of v.
EnergyIdentityReport energy_identity_check(const RadialFn& v, const RadialFn& dv, double alpha,
                                           double q, int d, int grid_N = 256);

/// delta(d, eps) = int_0^inf (eps/(eps^2+r^2))^(d-2) r^(d-1)/(1+r^2)^2 dr.
double aubin_talenti_delta(int d, double eps);

/// Upper bound on the critical quotient along the Aubin-Talenti family:
/// Q_alpha[u_eps] = alpha_* + 4 |S^{d-1}| kappa_{2*,d}^{-1} (alpha-alpha_*)
///                  delta(d,eps) / |v_1|_{2*}^2.
double aubin_talenti_quotient_bound(int d, double eps, double alpha);

/// |v_eps|_{2*}^2 on R^d (independent of eps); used by the quotient bound.
double aubin_talenti_critical_norm_sq(int d);

/// Adaptive Gauss-Kronrod integral of f over [0, inf)  (exposed for tests).
double half_line_integral(const RadialFn& f);

}  // namespace sphereint

#endif
