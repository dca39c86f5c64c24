#ifndef SPHEREINT_EUCLIDEAN_HPP
#define SPHEREINT_EUCLIDEAN_HPP

#include <Eigen/Core>
#include <vector>

#include "sphereint/constants.hpp"

// Euclidean Gagliardo-Nirenberg-Sobolev constants by radial ODE shooting:
//   K_{q,d}  = inf (|grad v|_2^2 + |v|_2^2) / |v|_q^2          (q > 2)
//   K*_{q,d} = inf (|grad v|_2^2 + |v|_q^2) / |v|_2^2          (q < 2)
// and the one bound state Keller-Lieb-Thirring constants derived from them.

namespace sphereint {

struct ShootingOptions {
  double r_max = 25.0;         // grid extent; tail appended analytically
  int grid_points = 8192;      // uniform nodes of the final fixed-step pass
  double series_start = 1e-4;  // leave r = 0 by the even series expansion
  double decay_tol = 1e-10;    // required smallness of w at r_max
  double switch_tol = 1e-7;    // hand over to the asymptotic tail below this
  double residual_tol = 1e-8;  // max-norm EL residual on interior nodes
  int max_bisections = 200;
};

/// Radial profile w(r) on a uniform grid over [0, r_max].
struct RadialProfile {
  Eigen::VectorXd r_nodes;
  Eigen::VectorXd values;
  int d = 0;
  double q = 0;
  double central_value = 0;
  double support_radius = 0;  // last radius resolved by the integrator
};

struct GnsResult {
  double constant = 0;
  RadialProfile profile;
  struct Norms {
    double grad_sq = 0;  // |grad w|_2^2
    double l2_sq = 0;    // |w|_2^2
    double lq_sq = 0;    // |w|_q^2
    double lq_q = 0;     // |w|_q^q
  } norms;
  struct Diagnostics {
    int shooting_iterations = 0;
    double el_residual = 0;        // max-norm ODE residual on interior nodes
    double norm_identity_rel = 0;  // |grad w|^2 + |w|^2 vs |w|_q^q (q > 2)
    double scaling_derivative = 0; // d/dlambda of the quotient at lambda = 1 (q < 2)
  } diagnostics;
};

/// Ground state of w'' + (d-1) w'/r - w + w^(q-1) = 0, w'(0) = 0, w(inf) = 0,
/// positive and strictly decreasing, found by bisection shooting on w(0).
/// Requires 2 < q < 2* (q < infinity when d <= 2).
RadialProfile ground_state_radial(int d, double q, const ShootingOptions& opts = {});

/// K_{q,d}. Endpoints dispatch to closed forms: (q = infinity, d = 1) returns
/// 2 (Agmon), q = 2* returns 1/S_d... see body: the H^1 infimum at q = 2* is
/// the Sobolev constant S_d itself.
GnsResult gns_constant(double q, int d, const ShootingOptions& opts = {});

/// Prefactor reduction K_{q,d} = theta^-theta (1-theta)^-(1-theta) K_GN(q).
double gns_scaling_reduce(double K_GN, double q, int d);

/// Optimal rescaling lambda_star = sqrt(theta/(1-theta)) |v|_2 / |grad v|_2.
double scaling_lambda_star(double theta, double l2_norm, double grad_norm);

/// K*_{q,d} for q in (0,2): one shooting solve of the canonical Euler-Lagrange
/// equation followed by the closed-form rescaling to the stationary dilation.
GnsResult dual_gns_constant(double q, int d, const ShootingOptions& opts = {});

/// Memoized constants (shooting solves are deterministic and pure).
double gns_constant_cached(double q, int d);
double dual_gns_constant_cached(double q, int d);

enum class KltBranch { negative_potential, positive_potential };

/// L^1_{gamma,d} = K_{q,d}^-p (negative branch) or
/// L^1_{-gamma,d} = (K*_{q,d})^-gamma (positive branch, gamma > d/2).
double klt_constant(double gamma, int d, KltBranch branch,
                    const ShootingOptions& opts = {});

/// Norms of a radial function given as nodal data on the profile grid
/// (composite quadrature; used by tests and the scaling identities).
double radial_integral(const RadialProfile& p, const Eigen::VectorXd& integrand);

}  // namespace sphereint

#endif
