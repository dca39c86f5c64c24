#include "sphereint/sphere_constants.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "sphereint/euclidean.hpp"

namespace sphereint {

const char* to_string(ConstantBranch b) {
  switch (b) {
    case ConstantBranch::exact_line: return "exact_line";
    case ConstantBranch::critical_plateau: return "critical_plateau";
    case ConstantBranch::minimized: return "minimized";
  }
  return "unknown";
}

namespace {

constexpr double kPowerFloor = 1e-12;

double guarded_pow(double u, double e) {
  // |u|^e with the base floored away from 0 for negative exponents
  const double a = std::abs(u);
  if (e >= 0.0) return std::pow(a, e);
  return std::pow(std::max(a, kPowerFloor), e);
}

// ---------------------------------------------------------------------------
// Projected-gradient engine (Barzilai-Borwein steps, Armijo backtracking,
// renormalization after every step).

struct PgOutcome {
  Eigen::VectorXd u;
  double value = 0;
  int iterations = 0;
  double stagnation = 0;
};

template <class Obj>
PgOutcome pg_minimize(const Obj& obj, Eigen::VectorXd u, const MinimizeOptions& o, int max_iters) {
  obj.normalize(u);
  double F = obj.value(u);
  Eigen::VectorXd g(u.size()), gv(u.size());
  obj.gradient(u, F, g);
  double eta = 0.5 / (1.0 + g.norm());

  std::deque<double> window;
  PgOutcome out;
  int it = 0;
  for (; it < max_iters; ++it) {
    const double gg = g.squaredNorm();
    if (gg < 1e-28) break;

    double step = std::clamp(eta, 1e-14, 1e6);
    Eigen::VectorXd v;
    double Fv = F;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      v = u - step * g;
      obj.normalize(v);
      Fv = obj.value(v);
      if (Fv <= F - 1e-6 * step * gg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    obj.gradient(v, Fv, gv);
    const Eigen::VectorXd du = v - u;
    const Eigen::VectorXd dg = gv - g;
    const double curv = du.dot(dg);
    eta = curv > 1e-30 ? du.squaredNorm() / curv : 2.0 * step;

    u = std::move(v);
    F = Fv;
    g = gv;

    window.push_back(F);
    if (static_cast<int>(window.size()) > o.stagnation_window) {
      const double drop = window.front() - F;
      window.pop_front();
      if (drop < o.stagnation_tol * std::max(1.0, std::abs(F))) break;
    }
  }
  out.u = std::move(u);
  out.value = F;
  out.iterations = it;
  out.stagnation = window.empty() ? 0.0 : window.front() - F;
  return out;
}

// ---------------------------------------------------------------------------
// Objective families.

// F_alpha[u] = (u' S u + alpha |u|_2^2) / |u|_q^2 with |u|_q = 1 enforced.
struct MuObjective {
  const JacobiGrid& g;
  double alpha;
  double q;

  void normalize(Eigen::VectorXd& u) const {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += g.weights()[i] * std::pow(std::abs(u[i]), q);
    u /= std::pow(acc, 1.0 / q);
  }
  double value(const Eigen::VectorXd& u) const {
    const double l2 = u.cwiseAbs2().dot(g.weights());
    return u.dot(g.stiffness() * u) + alpha * l2;
  }
  void gradient(const Eigen::VectorXd& u, double F, Eigen::VectorXd& grad) const {
    grad = 2.0 * (g.stiffness() * u);
    for (int i = 0; i < u.size(); ++i) {
      const double w = g.weights()[i];
      grad[i] += 2.0 * alpha * w * u[i] -
                 2.0 * F * w * guarded_pow(u[i], q - 2.0) * u[i];
    }
  }
};

// (u' S u + beta |u|_q^2) / |u|_2^2 over u >= 0, |u|_2 = 1 enforced.
struct NuObjective {
  const JacobiGrid& g;
  double beta;
  double q;

  void normalize(Eigen::VectorXd& u) const {
    u = u.cwiseMax(0.0);
    const double l2 = u.cwiseAbs2().dot(g.weights());
    u /= std::sqrt(l2);
  }
  double lq_mass(const Eigen::VectorXd& u) const {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i)
      acc += g.weights()[i] * (u[i] > 0 ? std::pow(u[i], q) : 0.0);
    return acc;
  }
  double value(const Eigen::VectorXd& u) const {
    return u.dot(g.stiffness() * u) + beta * std::pow(lq_mass(u), 2.0 / q);
  }
  void gradient(const Eigen::VectorXd& u, double F, Eigen::VectorXd& grad) const {
    grad = 2.0 * (g.stiffness() * u);
    const double mass = lq_mass(u);
    const double prefactor = 2.0 * beta * std::pow(mass, (2.0 - q) / q);
    for (int i = 0; i < u.size(); ++i) {
      const double w = g.weights()[i];
      const double power = u[i] > 0 ? guarded_pow(u[i], q - 1.0) : 0.0;
      grad[i] += prefactor * w * power - 2.0 * F * w * u[i];
    }
  }
};

// J[u] = p log(1 + u' S u / alpha) - int u^2 log u^2, |u|_2 = 1 enforced.
struct XiObjective {
  const JacobiGrid& g;
  double alpha;
  double p;

  void normalize(Eigen::VectorXd& u) const {
    const double l2 = u.cwiseAbs2().dot(g.weights());
    u /= std::sqrt(l2);
  }
  double value(const Eigen::VectorXd& u) const {
    const double D = u.dot(g.stiffness() * u);
    double entropy = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double u2 = u[i] * u[i];
      if (u2 > 0.0) entropy += g.weights()[i] * u2 * std::log(u2);
    }
    return p * std::log1p(D / alpha) - entropy;
  }
  void gradient(const Eigen::VectorXd& u, double /*F*/, Eigen::VectorXd& grad) const {
    const Eigen::VectorXd Su = g.stiffness() * u;
    const double D = u.dot(Su);
    grad = (2.0 * p / (alpha + D)) * Su;
    for (int i = 0; i < u.size(); ++i) {
      const double u2 = u[i] * u[i];
      const double ent = u2 > 0.0 ? 2.0 * u[i] * (std::log(u2) + 1.0) : 0.0;
      grad[i] -= g.weights()[i] * ent;
    }
  }
};

// ---------------------------------------------------------------------------
// Seeds and concentration handling.

std::vector<Eigen::VectorXd> make_seeds(const GridPtr& grid, double strength,
                                        const std::optional<ZonalFunction>& warm) {
  std::vector<Eigen::VectorXd> seeds;
  if (warm && warm->grid) {
    if (warm->grid->size() == grid->size() && warm->grid->dimension() == grid->dimension())
      seeds.push_back(warm->values);
    else
      seeds.push_back(barycentric_resample(warm->grid->nodes(), warm->values, grid->nodes()));
    return seeds;  // warm starts skip the multi-start sweep
  }
  const auto& z = grid->nodes();
  for (double eps : {0.1, 0.3, 0.6})
    seeds.push_back(Eigen::VectorXd::Ones(z.size()) + eps * z);
  // concentrated seed for the semiclassical regime
  const double k = std::max(4.0, 0.25 * strength);
  seeds.push_back(((z.array() - 1.0) * k).exp().matrix());
  return seeds;
}

int boundary_layer_nodes(const Eigen::VectorXd& u) {
  const double peak = u.cwiseAbs().maxCoeff();
  int count = 0;
  for (int i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) >= 0.5 * peak) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Newton polish of the mu Euler-Lagrange system
//   S u + alpha W u - mu W |u|^(q-2) u = 0,   int w |u|^q = 1.

bool newton_polish_mu(const JacobiGrid& g, double alpha, double q, Eigen::VectorXd& u,
                      double& F, double& residual) {
  const int N = static_cast<int>(u.size());
  Eigen::VectorXd un = u;
  double mu_val = F;
  const Eigen::MatrixXd& S = g.stiffness();
  const Eigen::VectorXd& w = g.weights();

  auto el_residual = [&](const Eigen::VectorXd& v, double m) {
    Eigen::VectorXd G = S * v;
    for (int i = 0; i < N; ++i)
      G[i] += alpha * w[i] * v[i] - m * w[i] * guarded_pow(v[i], q - 2.0) * v[i];
    double worst = 0.0;
    const double scale = m * std::pow(v.cwiseAbs().maxCoeff(), q - 1.0) + alpha;
    for (int i = 0; i < N; ++i) worst = std::max(worst, std::abs(G[i] / w[i]) / scale);
    return worst;
  };

  bool ok = false;
  for (int it = 0; it < 12; ++it) {
    Eigen::VectorXd pw(N), pw1(N);
    for (int i = 0; i < N; ++i) {
      pw[i] = guarded_pow(un[i], q - 2.0) * un[i];   // |u|^(q-2) u
      pw1[i] = guarded_pow(un[i], q - 2.0);          // |u|^(q-2)
    }
    Eigen::VectorXd G = S * un;
    double c = -1.0;
    for (int i = 0; i < N; ++i) {
      G[i] += alpha * w[i] * un[i] - mu_val * w[i] * pw[i];
      c += w[i] * std::pow(std::abs(un[i]), q);
    }
    const double gn = G.cwiseAbs().maxCoeff() / (1.0 + mu_val);
    if (gn < 1e-14 && std::abs(c) < 1e-14) {
      ok = true;
      break;
    }

    Eigen::MatrixXd M(N + 1, N + 1);
    M.topLeftCorner(N, N) = S;
    for (int i = 0; i < N; ++i) {
      M(i, i) += alpha * w[i] - mu_val * (q - 1.0) * w[i] * pw1[i];
      M(i, N) = -w[i] * pw[i];
      M(N, i) = q * w[i] * pw[i];
    }
    M(N, N) = 0.0;
    Eigen::VectorXd rhs(N + 1);
    rhs.head(N) = -G;
    rhs[N] = -c;
    const Eigen::VectorXd delta = M.partialPivLu().solve(rhs);
    if (!delta.allFinite()) break;

    double damp = 1.0;
    const double umax = un.cwiseAbs().maxCoeff();
    const double dmax = delta.head(N).cwiseAbs().maxCoeff();
    if (dmax > 0.5 * umax) damp = 0.5 * umax / dmax;
    un += damp * delta.head(N);
    mu_val += damp * delta[N];
    ok = true;
  }
  if (!ok) return false;

  MuObjective obj{g, alpha, q};
  obj.normalize(un);
  const double Fn = obj.value(un);
  if (!std::isfinite(Fn) || Fn > F * (1.0 + 1e-12)) return false;
  u = std::move(un);
  F = Fn;
  residual = el_residual(u, F);
  return true;
}

double mu_el_residual(const JacobiGrid& g, double alpha, double q, const Eigen::VectorXd& u,
                      double mu_val) {
  const int N = static_cast<int>(u.size());
  Eigen::VectorXd G = g.stiffness() * u;
  double worst = 0.0;
  const double scale = mu_val * std::pow(u.cwiseAbs().maxCoeff(), q - 1.0) + alpha;
  for (int i = 0; i < N; ++i) {
    G[i] += alpha * g.weights()[i] * u[i] -
            mu_val * g.weights()[i] * guarded_pow(u[i], q - 2.0) * u[i];
    worst = std::max(worst, std::abs(G[i] / g.weights()[i]) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Shared multi-start + grid-refinement driver.

enum class Family { mu_family, nu_family, xi_family };

ConstantResult run_minimization(Family fam, double parameter, int d, double q_or_p,
                                const MinimizeOptions& opts) {
  int N = opts.grid_N;
  GridPtr grid = JacobiGrid::cached(d, N);

  auto minimize_on = [&](const GridPtr& g, const std::optional<ZonalFunction>& warm,
                         int iters) -> PgOutcome {
    PgOutcome best;
    best.value = std::numeric_limits<double>::infinity();
    for (auto& seed : make_seeds(g, parameter, warm)) {
      PgOutcome run;
      switch (fam) {
        case Family::mu_family:
          run = pg_minimize(MuObjective{*g, parameter, q_or_p}, seed, opts, iters);
          break;
        case Family::nu_family:
          run = pg_minimize(NuObjective{*g, parameter, q_or_p}, seed, opts, iters);
          break;
        case Family::xi_family:
          run = pg_minimize(XiObjective{*g, parameter, q_or_p}, seed, opts, iters);
          break;
      }
      if (run.value < best.value) {
        best.u = std::move(run.u);
        best.value = run.value;
        best.stagnation = run.stagnation;
      }
      best.iterations += run.iterations;
    }
    return best;
  };

  PgOutcome best = minimize_on(grid, opts.initial_guess, opts.max_iterations);

  // automatic refinement when the minimizer concentrates
  while (boundary_layer_nodes(best.u) < 8 && 2 * N <= opts.max_N) {
    N *= 2;
    auto finer = JacobiGrid::cached(d, N);
    ZonalFunction coarse(grid, best.u);
    PgOutcome refined = minimize_on(finer, coarse, std::min(opts.max_iterations, 4000));
    refined.iterations += best.iterations;
    grid = finer;
    best = std::move(refined);
  }

  ConstantResult res;
  res.branch = ConstantBranch::minimized;
  res.diagnostics.iterations = best.iterations;
  res.diagnostics.quotient_residual = best.stagnation;
  res.diagnostics.grid_size = N;

  if (fam == Family::mu_family) {
    double F = best.value;
    double residual = mu_el_residual(*grid, parameter, q_or_p, best.u, F);
    if (opts.newton_polish) newton_polish_mu(*grid, parameter, q_or_p, best.u, F, residual);
    res.value = F;
    res.diagnostics.el_residual = residual;
    res.minimizer = ZonalFunction(grid, best.u);
  } else if (fam == Family::nu_family) {
    res.value = best.value;
    // report the minimizer in the |u|_q = 1 normalization, under which the
    // Euler-Lagrange equation reads -Delta u + beta u^(q-1) = nu u
    Eigen::VectorXd u = best.u;
    double lq = 0.0;
    for (int i = 0; i < u.size(); ++i)
      lq += grid->weights()[i] * (u[i] > 0 ? std::pow(u[i], q_or_p) : 0.0);
    u /= std::pow(lq, 1.0 / q_or_p);
    Eigen::VectorXd G = grid->stiffness() * u;
    double worst = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double power = u[i] > 0 ? std::pow(u[i], q_or_p - 1.0) : 0.0;
      G[i] += grid->weights()[i] * (parameter * power - best.value * u[i]);
      worst = std::max(worst, std::abs(G[i] / grid->weights()[i]) /
                                  (parameter + best.value));
    }
    res.diagnostics.el_residual = worst;
    res.minimizer = ZonalFunction(grid, std::move(u));
  } else {
    res.value = best.value;  // J_min; caller converts to xi
    res.minimizer = ZonalFunction(grid, best.u);
  }
  return res;
}

ConstantResult line_result(double value, const GridPtr& grid) {
  ConstantResult res;
  res.value = value;
  res.branch = ConstantBranch::exact_line;
  res.minimizer = ZonalFunction(grid, Eigen::VectorXd::Ones(grid->size()));
  res.diagnostics.grid_size = grid->size();
  return res;
}

bool q_is_critical(int d, double q) {
  return d >= 3 && std::abs(q - q_critical(d)) < 1e-12;
}

void validate_mu_inputs(double alpha, int d, double q) {
  if (!(alpha > 0)) throw std::domain_error("mu: requires alpha > 0");
  if (d < 1) throw std::domain_error("mu: requires d >= 1");
  if (is_infinite_q(q)) {
    if (d != 1) throw std::domain_error("mu: q = infinity requires d = 1");
    return;
  }
  if (!(q > 2)) throw std::domain_error("mu: requires q > 2");
  if (d >= 3 && q > q_critical(d) + 1e-12)
    throw std::domain_error("mu: q exceeds the critical exponent 2*");
}

// d = 1, q = infinity: the quotient uses the sup norm, so
// mu(alpha) = min over peak nodes of the constrained quadratic minimum
// 1 / (A^{-1})_{ii} with A the discrete form of -Delta + alpha.
ConstantResult mu_sup_norm_d1(double alpha, const MinimizeOptions& opts) {
  const int N = std::min(opts.max_N,
                         std::max(opts.grid_N, 32 + 16 * static_cast<int>(std::sqrt(alpha))));
  auto grid = JacobiGrid::cached(1, N);
  Eigen::MatrixXd A = grid->stiffness();
  for (int i = 0; i < N; ++i) A(i, i) += alpha * grid->weights()[i];
  const Eigen::MatrixXd inv = A.llt().solve(Eigen::MatrixXd::Identity(N, N));
  int peak = 0;
  for (int i = 1; i < N; ++i)
    if (inv(i, i) > inv(peak, peak)) peak = i;

  ConstantResult res;
  res.value = 1.0 / inv(peak, peak);
  res.branch = ConstantBranch::minimized;
  Eigen::VectorXd u = inv.col(peak) / inv(peak, peak);
  res.minimizer = ZonalFunction(grid, std::move(u));
  res.diagnostics.grid_size = N;
  return res;
}

}  // namespace

ConstantResult minimize_interpolation_quotient(double alpha, int d, double q,
                                               const MinimizeOptions& opts) {
  validate_mu_inputs(alpha, d, q);
  if (d == 1 && is_infinite_q(q)) return mu_sup_norm_d1(alpha, opts);
  auto res = run_minimization(Family::mu_family, alpha, d, q, opts);
  if (!std::isfinite(res.value) || res.value <= 0)
    throw solver_error("minimize_interpolation_quotient: minimization failed");
  return res;
}

ConstantResult mu(double alpha, int d, double q, const MinimizeOptions& opts) {
  validate_mu_inputs(alpha, d, q);
  if (d == 1 && is_infinite_q(q)) return mu_sup_norm_d1(alpha, opts);

  if (q_is_critical(d, q)) {
    const double astar = alpha_star(d);
    if (alpha <= astar) return line_result(alpha, JacobiGrid::cached(d, opts.grid_N));
    ConstantResult res;
    res.value = astar;  // exact plateau; no H^1 optimizer exists here
    res.branch = ConstantBranch::critical_plateau;
    res.diagnostics.grid_size = opts.grid_N;
    return res;
  }

  if (alpha <= d / (q - 2.0)) return line_result(alpha, JacobiGrid::cached(d, opts.grid_N));
  return minimize_interpolation_quotient(alpha, d, q, opts);
}

double mu_lower(double alpha, int d, double q, double s) {
  if (!(q > 2)) throw std::domain_error("mu_lower: requires q > 2");
  if (!(s > q)) throw std::domain_error("mu_lower: requires s > q");
  if (d >= 3 && s > q_critical(d) + 1e-12)
    throw std::domain_error("mu_lower: s exceeds the critical exponent 2*");
  if (!(alpha > d / (s - 2.0)))
    throw std::domain_error("mu_lower: this branch requires alpha > d/(s-2)");
  const double theta = s * (q - 2.0) / (q * (s - 2.0));
  return std::pow(d / (s - 2.0), theta) * std::pow(alpha, 1.0 - theta);
}

double mu_lower_best(double alpha, int d, double q) {
  if (!(q > 2)) throw std::domain_error("mu_lower_best: requires q > 2");
  if (!(alpha > 0)) throw std::domain_error("mu_lower_best: requires alpha > 0");
  if (alpha <= d / (q - 2.0)) return alpha;  // the rigidity line is exact here
  const double s_max = (d >= 3) ? q_critical(d) : std::max(4.0 * q, 50.0);
  double best = 0.0;
  const int n = 400;
  for (int i = 1; i <= n; ++i) {
    const double t = double(i) / n;
    const double s = q * std::pow(s_max / q, t);  // geometric sweep in (q, s_max]
    if (!(s > q) || !(alpha > d / (s - 2.0))) continue;
    const double theta = s * (q - 2.0) / (q * (s - 2.0));
    best = std::max(best, std::pow(d / (s - 2.0), theta) * std::pow(alpha, 1.0 - theta));
  }
  return best;
}

double mu_upper(double alpha, int d, double q) {
  if (!(alpha > 0)) throw std::domain_error("mu_upper: requires alpha > 0");
  if (!(q > 2)) throw std::domain_error("mu_upper: requires q > 2");
  if (d >= 3 && !(q < q_critical(d))) throw std::domain_error("mu_upper: requires q < 2*");
  if (alpha <= d / (q - 2.0)) return alpha;  // infimum attained as eps -> 0

  auto grid = JacobiGrid::cached(d, 96);
  const double m2 = 1.0 / (d + 1.0);
  auto h = [&](double eps) {
    if (eps == 0.0) return alpha;
    double lq = 0.0;
    for (int i = 0; i < grid->size(); ++i)
      lq += grid->weights()[i] * std::pow(std::abs(1.0 + eps * grid->nodes()[i]), q);
    return (alpha + (d + alpha) * eps * eps * m2) / std::pow(lq, 2.0 / q);
  };

  // coarse scan, then golden-section refinement of the bracketing interval
  const double hi_end = 1.0 - 1e-9;
  const int n_scan = 128;
  int best_i = 0;
  double best_h = alpha;
  for (int i = 0; i <= n_scan; ++i) {
    const double eps = hi_end * i / n_scan;
    const double val = h(eps);
    if (val < best_h) {
      best_h = val;
      best_i = i;
    }
  }
  double a = hi_end * std::max(0, best_i - 1) / n_scan;
  double b = hi_end * std::min(n_scan, best_i + 1) / n_scan;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = h(x1), f2 = h(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = h(x2);
    }
  }
  return std::min(h(0.5 * (a + b)), alpha);
}

double mu_asymptotic(double alpha, int d, double q) {
  if (!(alpha > 0)) throw std::domain_error("mu_asymptotic: requires alpha > 0");
  const auto pp = exponents(d, q);
  if (!pp.supercritical() || (d >= 3 && !(q < q_critical(d))))
    throw std::domain_error("mu_asymptotic: requires q in (2, 2*)");
  return gns_constant_cached(q, d) / kappa(q, d) * std::pow(alpha, 1.0 - pp.theta);
}

AlphaOfMu alpha_of_mu_detailed(double mu_val, int d, double q, const MinimizeOptions& opts) {
  if (!(mu_val > 0)) throw std::domain_error("alpha_of_mu: requires mu > 0");
  if (q_is_critical(d, q)) {
    if (mu_val >= alpha_star(d))
      throw std::domain_error("alpha_of_mu: no inverse past the critical plateau");
    return {mu_val, line_result(mu_val, JacobiGrid::cached(d, opts.grid_N))};
  }

  const bool sup_norm = (d == 1 && is_infinite_q(q));
  if (!sup_norm && mu_val <= d / (q - 2.0))
    return {mu_val, line_result(mu_val, JacobiGrid::cached(d, opts.grid_N))};

  MinimizeOptions local = opts;
  ConstantResult last;
  auto eval = [&](double a) {
    ConstantResult r = sup_norm ? mu_sup_norm_d1(a, local)
                                : minimize_interpolation_quotient(a, d, q, local);
    if (!sup_norm) local.initial_guess = r.minimizer;  // warm start the continuation
    last = r;
    return r.value - mu_val;
  };

  // bracket: mu(mu_val) <= mu_val; the upper end comes from the cheap lower
  // bound (sup-norm case: the d = p = 1 theorem bound)
  double lo = mu_val;
  double hi;
  if (sup_norm) {
    hi = mu_val + M_PI * M_PI * mu_val * mu_val + 1.0;
  } else {
    hi = 2.0 * mu_val;
    int guard = 0;
    while (mu_lower_best(hi, d, q) < mu_val) {
      hi *= 2.0;
      if (++guard > 200) throw solver_error("alpha_of_mu: failed to bracket");
    }
  }

  double f_lo = eval(lo);
  if (std::abs(f_lo) < 1e-11 * mu_val) return {lo, last};
  double f_hi = eval(hi);
  int guard = 0;
  while (f_hi < 0.0) {  // defensive: the bound is not attained on the grid
    hi *= 1.5;
    f_hi = eval(hi);
    if (++guard > 60) throw solver_error("alpha_of_mu: upper bracket failed");
  }

  // Illinois (safeguarded secant) on the increasing function mu(alpha)-mu_val
  double a = lo, fa = f_lo, b = hi, fb = f_hi;
  double root = b;
  for (int it = 0; it < 80; ++it) {
    root = b - fb * (b - a) / (fb - fa);
    const double l = std::min(a, b), r = std::max(a, b);
    if (!(root > l) || !(root < r)) root = 0.5 * (l + r);
    const double fr = eval(root);
    if (std::abs(fr) < 1e-10 * mu_val || (r - l) < 1e-10 * r) {
      return {root, last};
    }
    if (fr * fb < 0.0) {
      a = b;
      fa = fb;
    } else {
      fa *= 0.5;  // Illinois damping keeps the bracket moving
    }
    b = root;
    fb = fr;
  }
  return {root, last};
}

double alpha_of_mu(double mu_val, int d, double q, const MinimizeOptions& opts) {
  return alpha_of_mu_detailed(mu_val, d, q, opts).alpha;
}

ConstantResult nu(double beta, int d, double q, const MinimizeOptions& opts) {
  if (!(beta > 0)) throw std::domain_error("nu: requires beta > 0");
  if (!(q > 0) || !(q < 2)) throw std::domain_error("nu: requires q in (0, 2)");
  if (d < 1) throw std::domain_error("nu: requires d >= 1");

  if (q >= 1.0 && beta <= d / (2.0 - q))
    return line_result(beta, JacobiGrid::cached(d, opts.grid_N));

  auto res = run_minimization(Family::nu_family, beta, d, q, opts);
  if (!std::isfinite(res.value) || res.value <= 0) throw solver_error("nu: minimization failed");
  res.value = std::min(res.value, beta);  // constants are admissible test functions
  return res;
}

double nu_asymptotic(double beta, int d, double q) {
  if (!(beta > 0)) throw std::domain_error("nu_asymptotic: requires beta > 0");
  const auto pp = exponents(d, q);
  if (pp.supercritical()) throw std::domain_error("nu_asymptotic: requires q < 2");
  return dual_gns_constant_cached(q, d) * std::pow(kappa(q, d) * beta, pp.delta);
}

ConstantResult xi(double alpha, int d, double p, const MinimizeOptions& opts) {
  if (!(alpha > 0)) throw std::domain_error("xi: requires alpha > 0");
  if (!(p > std::max(1.0, 0.5 * d))) throw std::domain_error("xi: requires p > max(1, d/2)");

  auto res = run_minimization(Family::xi_family, alpha, d, p, opts);
  const double j_min = std::min(res.value, 0.0);  // u = 1 always achieves J = 0
  res.value = alpha * std::exp(j_min / p);
  if (j_min > -1e-12) {
    res.value = alpha;
    res.branch = ConstantBranch::exact_line;
  }
  return res;
}

std::pair<double, double> alpha_bounds_d1(double mu_val) {
  if (!(mu_val > 0)) throw std::domain_error("alpha_bounds_d1: requires mu > 0");
  return {mu_val, mu_val + M_PI * M_PI * mu_val * mu_val};
}

}  // namespace sphereint
