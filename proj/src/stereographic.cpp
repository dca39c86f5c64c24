#include "sphereint/stereographic.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>

namespace sphereint {

namespace {

double angular_factor(int d) { return 2.0 * std::pow(M_PI, 0.5 * d) / gamma_fn(0.5 * d); }

struct GslFn {
  const RadialFn* f;
};

double gsl_trampoline(double x, void* params) {
  return (*static_cast<GslFn*>(params)->f)(x);
}

// One shared workspace per call; GSL error handling is by return code.
double qagiu(const RadialFn& f, double a) {
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
  GslFn params{&f};
  gsl_function F{&gsl_trampoline, &params};
  double result = 0.0, abserr = 0.0;
  const int status =
      gsl_integration_qagiu(&F, a, 1e-12, 1e-11, 4096, ws, &result, &abserr);
  gsl_integration_workspace_free(ws);
  gsl_set_error_handler(old);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw data_error("half-line quadrature failed (divergent or irregular integrand)");
  return result;
}

}  // namespace

PlanePoint project(const SpherePoint& y) {
  if (!(y.z < 1.0)) throw std::domain_error("project: the North Pole z = 1 has no image");
  if (y.z < -1.0) throw std::domain_error("project: z outside [-1, 1)");
  return {std::sqrt((1.0 + y.z) / (1.0 - y.z))};
}

SpherePoint inverse_project(const PlanePoint& x) {
  if (!(x.r >= 0.0)) throw std::domain_error("inverse_project: requires r >= 0");
  const double r2 = x.r * x.r;
  return {(r2 - 1.0) / (r2 + 1.0), 2.0 * x.r / (r2 + 1.0)};
}

double conformal_factor(double z, int d) {
  if (d <= 2) return 1.0;
  return std::pow(1.0 - z, -0.5 * (d - 2.0));
}

ZonalFunction pushforward_to_sphere(const RadialFn& v, int d, const GridPtr& grid) {
  return ZonalFunction::sample(grid, [&](double z) {
    const double r = project({z, std::sqrt(std::max(0.0, 1.0 - z * z))}).r;
    return conformal_factor(z, d) * v(r);
  });
}

Eigen::VectorXd pushforward_to_plane(const ZonalFunction& u) {
  if (!u.grid) throw data_error("pushforward_to_plane: missing grid");
  const int d = u.grid->dimension();
  Eigen::VectorXd v(u.grid->size());
  for (int i = 0; i < u.grid->size(); ++i)
    v[i] = u.values[i] / conformal_factor(u.grid->nodes()[i], d);
  return v;
}

double half_line_integral(const RadialFn& f) { return qagiu(f, 0.0); }

EnergyIdentityReport energy_identity_check(const RadialFn& v, const RadialFn& dv, double alpha,
                                           double q, int d, int grid_N) {
  if (d < 3) throw std::domain_error("energy_identity_check: requires d >= 3");
  auto grid = JacobiGrid::build(d, grid_N);
  const double surface = sphere_surface(d);
  const double sphere_dm1 = angular_factor(d);

  // sphere side (d-omega normalization = |S^d| times the dsigma quadrature)
  ZonalFunction u = pushforward_to_sphere(v, d, grid);
  const double u_grad = surface * dirichlet_form(u);
  const double u_mass = surface * u.values.cwiseAbs2().dot(grid->weights());
  double u_lq = 0.0;
  for (int i = 0; i < grid_N; ++i)
    u_lq += grid->weights()[i] * std::pow(std::abs(u.values[i]), q);
  u_lq *= surface;

  // plane side by adaptive quadrature
  const double v_grad = sphere_dm1 * qagiu([&](double r) {
    const double g = dv(r);
    return g * g * std::pow(r, d - 1.0);
  }, 0.0);
  const double v_mass = sphere_dm1 * qagiu([&](double r) {
    const double w = 2.0 / (1.0 + r * r);
    const double val = v(r);
    return val * val * w * w * std::pow(r, d - 1.0);
  }, 0.0);
  const double lq_exponent = d - 0.5 * (d - 2.0) * q;
  const double v_lq = sphere_dm1 * qagiu([&](double r) {
    const double w = 2.0 / (1.0 + r * r);
    return std::pow(std::abs(v(r)), q) * std::pow(w, lq_exponent) * std::pow(r, d - 1.0);
  }, 0.0);

  const double astar = alpha_star(d);
  EnergyIdentityReport rep;
  rep.gradient_rel = std::abs(u_grad + astar * u_mass - v_grad) / v_grad;
  rep.mass_rel = std::abs(u_mass - v_mass) / v_mass;
  rep.lq_rel = std::abs(u_lq - v_lq) / v_lq;
  const double lhs = u_grad + alpha * u_mass;
  const double rhs = v_grad + (alpha - astar) * v_mass;
  rep.combined_rel = std::abs(lhs - rhs) / std::abs(rhs);
  return rep;
}

double aubin_talenti_delta(int d, double eps) {
  if (d < 3) throw std::domain_error("aubin_talenti_delta: requires d >= 3");
  if (!(eps > 0.0)) throw std::domain_error("aubin_talenti_delta: requires eps > 0");
  return qagiu([=](double r) {
    return std::pow(eps / (eps * eps + r * r), d - 2.0) * std::pow(r, d - 1.0) /
           ((1.0 + r * r) * (1.0 + r * r));
  }, 0.0);
}

double aubin_talenti_critical_norm_sq(int d) {
  const double qc = q_critical(d);
  const double integral = qagiu([=](double r) {
    return std::pow(1.0 + r * r, -double(d)) * std::pow(r, d - 1.0);
  }, 0.0);
  return std::pow(angular_factor(d) * integral, 2.0 / qc);
}

double aubin_talenti_quotient_bound(int d, double eps, double alpha) {
  const double astar = alpha_star(d);
  const double coeff = 4.0 * angular_factor(d) / kappa(q_critical(d), d);
  return astar + coeff * (alpha - astar) * aubin_talenti_delta(d, eps) /
                     aubin_talenti_critical_norm_sq(d);
}

}  // namespace sphereint
