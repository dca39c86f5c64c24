#ifndef SPHEREINT_CONSTANTS_HPP
#define SPHEREINT_CONSTANTS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

// Closed-form geometric constants on the unit d-sphere and the exponent
// algebra shared by every other module.

namespace sphereint {

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

inline bool is_infinite_q(double q) { return std::isinf(q) && q > 0; }

/// Thrown when an iterative solver fails to converge; carries diagnostics text.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when input data (grids, tables, files) are inconsistent or invalid.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
/// accurate to better than 1e-13 relative error for x > 0. The duplication
/// formula Gamma(x) Gamma(x+1/2) = 2^(1-2x) sqrt(pi) Gamma(2x) is checked in
/// the unit tests.
double gamma_fn(double x);

/// Natural log of Gamma(x), x > 0.
double log_gamma(double x);

/// Surface area |S^d| = 2 pi^((d+1)/2) / Gamma((d+1)/2) of the unit d-sphere.
double sphere_surface(int d);

/// Normalization Z_d = sqrt(pi) Gamma(d/2) / Gamma((d+1)/2) of the zonal
/// probability measure dnu_d = Z_d^{-1} (1-z^2)^(d/2-1) dz on [-1,1].
double z_normalization(int d);

/// kappa_{q,d} = |S^d|^(1-2/q). The sentinel q = +infinity is accepted only
/// for d = 1 (where kappa_{inf,1} = 2 pi enters the Keller-Lieb-Thirring
/// asymptotics); it is rejected for d >= 2.
double kappa(double q, int d);

/// Best constant S_d in the Sobolev inequality on R^d, d >= 3, evaluated by
/// the Gamma-function closed form and cross-checked internally against the
/// |S^d|-based form.
double sobolev_constant(int d);

/// Exponent bundle attached to a pair (d, q), q != 2. The branch is selected
/// by the sign of q-2:
///   q > 2: p = q/(q-2), gamma = p - d/2, theta = d(q-2)/(2q)   (delta = NaN)
///   q < 2: p = q/(2-q), gamma = p + d/2, delta = 2q/(2d-q(d-2)) (theta = NaN)
struct ProblemParams {
  int d = 0;
  double q = 0;
  double p = 0;
  double gamma = 0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double alpha_star = 0;   // d(d-2)/4, zero for d <= 2
  double q_critical = 0;   // 2* = 2d/(d-2) for d >= 3, +inf for d <= 2

  bool supercritical() const { return q > 2; }
};

ProblemParams exponents(int d, double q);

/// Critical Sobolev exponent 2* (infinity sentinel for d <= 2).
double q_critical(int d);

/// alpha_* = d(d-2)/4.
double alpha_star(int d);

/// The closed-form geometric constants for a pair (d, q).
struct GeometryConstants {
  double sphere_surface = 0;
  double kappa = 0;
  double Z_d = 0;
  double sobolev = std::numeric_limits<double>::quiet_NaN();  // d >= 3 only
};

GeometryConstants geometry_constants(int d, double q);

}  // namespace sphereint

#endif
