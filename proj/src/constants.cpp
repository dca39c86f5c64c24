#include "sphereint/constants.hpp"

#include <cmath>

namespace sphereint {

namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set). Relative accuracy is
// a few 1e-15 on the real positive axis.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_series(double x) {
  double s = kLanczos[0];
  for (int i = 1; i < 9; ++i) s += kLanczos[i] / (x + i);
  return s;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0)) throw std::domain_error("gamma_fn: requires x > 0");
  if (x < 0.5) {
    // reflection keeps the series argument away from the pole
    return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_series(z);
}

double log_gamma(double x) {
  if (!(x > 0)) throw std::domain_error("log_gamma: requires x > 0");
  if (x < 0.5) return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(lanczos_series(z));
}

double sphere_surface(int d) {
  if (d < 1) throw std::domain_error("sphere_surface: requires d >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * (d + 1)) / gamma_fn(0.5 * (d + 1));
}

double z_normalization(int d) {
  if (d < 1) throw std::domain_error("z_normalization: requires d >= 1");
  return std::sqrt(M_PI) * gamma_fn(0.5 * d) / gamma_fn(0.5 * (d + 1));
}

double kappa(double q, int d) {
  if (d < 1) throw std::domain_error("kappa: requires d >= 1");
  if (is_infinite_q(q)) {
    if (d != 1) throw std::domain_error("kappa: q = infinity is only meaningful for d = 1");
    return sphere_surface(1);
  }
  if (!(q > 0)) throw std::domain_error("kappa: requires q > 0");
  return std::pow(sphere_surface(d), 1.0 - 2.0 / q);
}

double sobolev_constant(int d) {
  if (d < 3) throw std::domain_error("sobolev_constant: requires d >= 3 (2* = infinity below)");
  const double surface_form = 4.0 / (d * (d - 2.0) * std::pow(sphere_surface(d), 2.0 / d));
  const double gamma_form =
      std::exp((2.0 / d) * (log_gamma(d) - log_gamma(0.5 * d))) / (M_PI * d * (d - 2.0));
  if (std::abs(surface_form - gamma_form) > 1e-12 * gamma_form)
    throw std::logic_error("sobolev_constant: closed forms disagree");
  return gamma_form;
}

double q_critical(int d) {
  if (d < 1) throw std::domain_error("q_critical: requires d >= 1");
  return d >= 3 ? 2.0 * d / (d - 2.0) : kInfiniteExponent;
}

double alpha_star(int d) {
  if (d < 1) throw std::domain_error("alpha_star: requires d >= 1");
  return 0.25 * d * (d - 2.0);
}

ProblemParams exponents(int d, double q) {
  if (d < 1) throw std::domain_error("exponents: requires d >= 1");
  if (!(q > 0)) throw std::domain_error("exponents: requires q > 0");
  if (q == 2.0)
    throw std::domain_error("exponents: q = 2 has no p-branch (use the log-Sobolev family instead)");

  ProblemParams pp;
  pp.d = d;
  pp.q = q;
  pp.alpha_star = alpha_star(d);
  pp.q_critical = q_critical(d);
  if (is_infinite_q(q)) {
    // q -> infinity limit of the q > 2 branch (d = 1 in practice)
    pp.p = 1.0;
    pp.gamma = 1.0 - 0.5 * d;
    pp.theta = 0.5 * d;
    return pp;
  }
  if (q > 2.0) {
    if (d >= 3 && q > pp.q_critical + 1e-12)
      throw std::domain_error("exponents: q exceeds the critical exponent 2*");
    pp.p = q / (q - 2.0);
    pp.gamma = pp.p - 0.5 * d;
    pp.theta = d * (q - 2.0) / (2.0 * q);
  } else {
    pp.p = q / (2.0 - q);
    pp.gamma = pp.p + 0.5 * d;
    pp.delta = 2.0 * q / (2.0 * d - q * (d - 2.0));
  }
  return pp;
}

GeometryConstants geometry_constants(int d, double q) {
  GeometryConstants g;
  g.sphere_surface = sphere_surface(d);
  g.kappa = kappa(q, d);
  g.Z_d = z_normalization(d);
  if (d >= 3) g.sobolev = sobolev_constant(d);
  return g;
}

}  // namespace sphereint
