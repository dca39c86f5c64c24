#ifndef SPHEREINT_SPECTRAL_HPP
#define SPHEREINT_SPECTRAL_HPP

#include <string>

#include "sphereint/sphere_constants.hpp"
#include "sphereint/ultraspherical.hpp"

// First eigenvalue of -Delta -/+ V for zonal potentials and verification of
// the sharp bounds |lambda_1(-Delta-V)| <= alpha(|V_+|_p),
// lambda_1(-Delta+W) >= nu(beta), and the exponential (log-Sobolev) bound.

namespace sphereint {

struct Potential {
  enum class Kind { constant, nodal, table };
  Kind kind = Kind::constant;
  double constant_value = 0;
  ZonalFunction nodal_values;     // Kind::nodal
  Eigen::VectorXd table_z;        // Kind::table (from CSV)
  Eigen::VectorXd table_values;
  double equality_alpha = std::numeric_limits<double>::quiet_NaN();
  double equality_nu = std::numeric_limits<double>::quiet_NaN();

  static Potential constant(double c);
  static Potential nodal(ZonalFunction f);
  static Potential table(Eigen::VectorXd z, Eigen::VectorXd values);

  /// Materialize nodal values on a grid. Nodal potentials must live on a
  /// compatible grid (same d and N); tables are interpolated barycentrically.
  Eigen::VectorXd values_on(const GridPtr& grid) const;
};

/// Two-column CSV (z,value) with a header row.
Potential potential_from_csv(const std::string& path);

/// Smallest eigenvalue of -Delta - V (sign = minus) or -Delta + V (plus) on
/// zonal functions. For sign = plus the potential must be positive on nodes.
double lambda1(const Potential& pot, Sign sign, const GridPtr& grid);

/// Eigenvalue plus mass-normalized ground state.
std::pair<double, Eigen::VectorXd> lambda1_with_vector(const Potential& pot, Sign sign,
                                                       const GridPtr& grid);

/// The optimal potential V = mu u^(q-2) built from the normalized minimizer
/// of mu at alpha(mu); constant V = mu on the rigidity line. |V|_p = mu.
Potential equality_potential(double mu_val, int d, double q, const MinimizeOptions& opts = {});

/// Positive-potential analogue W = beta u^(q-2) from the nu(beta) minimizer.
Potential dual_equality_potential(double beta, int d, double q,
                                  const MinimizeOptions& opts = {});

/// Candidate optimal W = -(alpha/p) log u^2 from the xi(alpha) minimizer,
/// normalized so that int e^(-pW/alpha) dsigma = 1.
Potential logsob_optimal_potential(double alpha, int d, double p,
                                   const MinimizeOptions& opts = {});

struct EigenReport {
  double lambda1 = 0;
  double bound = 0;               // alpha(|V+|_p), nu(beta), or the log bound
  double slack = 0;               // sign-adjusted: >= 0 when the bound holds
  double norm = 0;                // |V+|_p or beta = |W^-1|_p^-1
  // d-omega corollary forms
  bool small_norm_branch = false;
  double domega_lhs = std::numeric_limits<double>::quiet_NaN();
  double domega_rhs = std::numeric_limits<double>::quiet_NaN();
  double semiclassical_ratio = std::numeric_limits<double>::quiet_NaN();
  // exponential bound pieces (logsob_report)
  double log_lhs = std::numeric_limits<double>::quiet_NaN();
  double log_rhs = std::numeric_limits<double>::quiet_NaN();
};

/// Theorem 1 verification: |lambda_1(-Delta-V)| vs alpha(|V_+|_p), the small
/// norm d-omega form when |V|_p <= d(p-1)/2, and the semiclassical ratio
/// |lambda_1|^gamma / (L^1_{gamma,d} int V^(gamma+d/2) dw) otherwise.
EigenReport klt_report(const Potential& V, double p, int d, const GridPtr& grid,
                       const MinimizeOptions& opts = {});

/// Theorem 2 verification: lambda_1(-Delta+W) vs nu(beta), beta = |W^-1|_p^-1.
EigenReport dual_klt_report(const Potential& W, double p, int d, const GridPtr& grid,
                            const MinimizeOptions& opts = {});

/// Exponential bound of the q = 2 family:
///   e^(-lambda_1(-Delta+W)/alpha) <= (alpha/xi(alpha)) (int e^(-pW/alpha))^(1/p).
/// slack is the logarithmic gap (>= 0 when the bound holds).
EigenReport logsob_report(const Potential& W, double alpha, double p, int d, const GridPtr& grid,
                          const MinimizeOptions& opts = {});

enum class PotentialConstraint { nonnegative, positive, free_sign };

/// Deterministic random zonal potential: a low-degree Gegenbauer expansion
/// with decaying coefficients, shifted/clipped to meet the sign constraint.
ZonalFunction random_zonal_potential(const GridPtr& grid, int degree, unsigned seed,
                                     PotentialConstraint constraint, double amplitude = 1.0);

}  // namespace sphereint

#endif
