#ifndef SPHEREINT_SPHERE_CONSTANTS_HPP
#define SPHEREINT_SPHERE_CONSTANTS_HPP

#include <optional>

#include "sphereint/ultraspherical.hpp"

// Optimal interpolation constants on S^d:
//   mu(alpha):  |grad u|^2 + alpha |u|^2 >= mu(alpha) |u|_q^2      (q > 2)
//   nu(beta):   |grad u|^2 + beta |u|_q^2 >= nu(beta) |u|_2^2      (q < 2)
//   xi(alpha):  the logarithmic-Sobolev constant of the q = 2 family
// together with the rigidity line branches, the critical plateau, the
// two-sided bounds mu_-/mu_+, the semiclassical asymptote, and the inverse
// function alpha(mu).

namespace sphereint {

enum class ConstantBranch { exact_line, critical_plateau, minimized };

const char* to_string(ConstantBranch b);

struct MinimizeOptions {
  int grid_N = 128;
  int max_N = 1024;
  int max_iterations = 20000;
  int stagnation_window = 50;
  double stagnation_tol = 1e-10;
  bool newton_polish = true;
  // warm start used by continuation (alpha_of_mu, sweeps)
  std::optional<ZonalFunction> initial_guess = std::nullopt;
};

struct ConstantResult {
  double value = 0;
  ConstantBranch branch = ConstantBranch::minimized;
  std::optional<ZonalFunction> minimizer = std::nullopt;  // |u|_q = 1 (mu, nu), |u|_2 = 1 (xi)
  struct Diagnostics {
    int iterations = 0;
    double quotient_residual = 0;  // stagnation level of the final quotient
    double el_residual = 0;        // max-norm Euler-Lagrange residual
    int grid_size = 0;
  } diagnostics;
};

/// mu(alpha) with the branch logic: the rigidity line for
/// alpha <= d/(q-2), the plateau min(alpha, alpha_*) for q = 2*, and the
/// zonal minimization otherwise. Accepts q = infinity when d = 1 (sup-norm
/// quotient, computed from the constrained quadratic form).
ConstantResult mu(double alpha, int d, double q, const MinimizeOptions& opts = {});

/// Raw zonal minimization of F_alpha with no branch shortcuts (used to
/// verify rigidity and the critical plateau numerically).
ConstantResult minimize_interpolation_quotient(double alpha, int d, double q,
                                               const MinimizeOptions& opts = {});

/// Single-branch lower bound (d/(s-2))^theta alpha^(1-theta) with
/// theta = s(q-2)/(q(s-2)); requires q < s and alpha > d/(s-2).
double mu_lower(double alpha, int d, double q, double s);

/// Best available lower bound: the line value alpha when alpha <= d/(q-2),
/// otherwise the maximum of mu_lower over an s-grid (s up to 2* when d >= 3).
double mu_lower_best(double alpha, int d, double q);

/// mu_+(alpha) = inf over eps in (0,1) of the 1+eps*z test-function quotient
/// h_alpha(eps); equals alpha for alpha <= d/(q-2) and is < alpha beyond.
double mu_upper(double alpha, int d, double q);

/// Semiclassical asymptote (K_{q,d}/kappa_{q,d}) alpha^(1-theta).
double mu_asymptotic(double alpha, int d, double q);

/// Inverse of mu: the line below d/(q-2), otherwise a safeguarded secant
/// solve of mu(alpha) = mu_val. Rejects q = 2* past the plateau.
double alpha_of_mu(double mu_val, int d, double q, const MinimizeOptions& opts = {});

/// Like alpha_of_mu but also returns the minimizer at the solved alpha.
struct AlphaOfMu {
  double alpha = 0;
  ConstantResult at_alpha;
};
AlphaOfMu alpha_of_mu_detailed(double mu_val, int d, double q, const MinimizeOptions& opts = {});

/// nu(beta) for q in (0,2): the rigidity line for q in [1,2) and
/// beta <= d/(2-q), otherwise minimization over nonnegative zonal functions.
ConstantResult nu(double beta, int d, double q, const MinimizeOptions& opts = {});

/// Asymptote K*_{q,d} (kappa_{q,d} beta)^delta for beta large.
double nu_asymptotic(double beta, int d, double q);

/// xi(alpha) = alpha exp(J_min/p) where J_min is the infimum over |u|_2 = 1
/// of p log(1 + dirichlet(u)/alpha) - int u^2 log u^2. Requires
/// p > max(1, d/2).
ConstantResult xi(double alpha, int d, double p, const MinimizeOptions& opts = {});

/// Theorem bounds for d = p = 1: mu <= alpha(mu) <= mu + pi^2 mu^2.
std::pair<double, double> alpha_bounds_d1(double mu_val);

}  // namespace sphereint

#endif
