#include "sphereint/euclidean.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace sphereint {

namespace {

// |S^{d-1}|, valid down to d = 1 (two-point sphere S^0 has measure 2).
double angular_factor(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / gamma_fn(0.5 * d);
}

// Radial Euler-Lagrange equations in canonical form:
//   primal (q > 2):  w'' + (d-1) w'/r = w - w^(q-1)
//   dual   (q < 2):  v'' + (d-1) v'/r = v^(q-1) - v
struct OdeSetup {
  int d;
  double q;
  bool dual;

  double power(double w) const {
    if (w <= 0.0) return 0.0;
    return std::pow(w, q - 1.0);
  }
  // curvature term g(w) = w'' at the origin times d
  double g(double w) const {
    const double p = power(w);
    return dual ? p - w : w - p;
  }
};

// State: w, w', and the running quadrature of |w'|^2 r^(d-1), w^2 r^(d-1),
// |w|^q r^(d-1).
struct OdeState {
  double r;
  double w;
  double wp;
  double grad;
  double mass;
  double lq;
};

void rhs(const OdeSetup& s, double r, const double y[5], double dy[5]) {
  const double w = y[0], wp = y[1];
  dy[0] = wp;
  dy[1] = s.g(w) - (s.d - 1.0) * wp / r;
  const double rpow = std::pow(r, s.d - 1.0);
  dy[2] = wp * wp * rpow;
  dy[3] = w * w * rpow;
  dy[4] = (w > 0 ? std::pow(w, s.q) : 0.0) * rpow;
}

// One Cash-Karp RK45 step; returns the embedded error estimate on (w, w').
double ck_step(const OdeSetup& s, double r, const double y[5], double h, double out[5]) {
  static constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
  static constexpr double b21 = 1.0 / 5;
  static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                          b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
  static constexpr double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                          d5 = 277.0 / 14336, d6 = 1.0 / 4;

  double k1[5], k2[5], k3[5], k4[5], k5[5], k6[5], t[5];
  rhs(s, r, y, k1);
  for (int i = 0; i < 5; ++i) t[i] = y[i] + h * b21 * k1[i];
  rhs(s, r + a2 * h, t, k2);
  for (int i = 0; i < 5; ++i) t[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
  rhs(s, r + a3 * h, t, k3);
  for (int i = 0; i < 5; ++i) t[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
  rhs(s, r + a4 * h, t, k4);
  for (int i = 0; i < 5; ++i)
    t[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
  rhs(s, r + a5 * h, t, k5);
  for (int i = 0; i < 5; ++i)
    t[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
  rhs(s, r + a6 * h, t, k6);

  double err = 0.0;
  for (int i = 0; i < 5; ++i) {
    out[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
    const double lo = y[i] + h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
    if (i < 2) err = std::max(err, std::abs(out[i] - lo));
  }
  return err;
}

enum class ShotOutcome { overshoot, undershoot, decayed, inconclusive };

struct ShotResult {
  ShotOutcome outcome = ShotOutcome::inconclusive;
  OdeState final{};
  std::vector<OdeState> trace;  // filled only when recording
};

ShotResult shoot(const OdeSetup& s, double a, const ShootingOptions& opts, bool record) {
  ShotResult res;
  // series start; the (d-1)/r term is regular once r0 > 0
  const double curvature = std::abs(s.g(a)) / s.d;
  double r0 = opts.series_start;
  if (curvature > 0) r0 = std::min(r0, 0.01 * std::sqrt(std::max(a, 1.0) / curvature));
  const double g0 = s.g(a) / s.d;

  double y[5];
  double r = r0;
  y[0] = a + 0.5 * g0 * r0 * r0;
  y[1] = g0 * r0;
  y[2] = g0 * g0 * std::pow(r0, s.d + 2.0) / (s.d + 2.0);
  y[3] = a * a * std::pow(r0, double(s.d)) / s.d;
  y[4] = std::pow(a, s.q) * std::pow(r0, double(s.d)) / s.d;

  const double h_max = 0.02;
  double h = std::min(h_max, 0.1 * r0);
  const double tol = 1e-12;
  // the dual contact is polynomial, not exponential, so the floor can sit
  // much lower without hitting the e^r error growth of the primal tail
  const double floor_w = s.dual ? 1e-9 : opts.switch_tol;

  auto push = [&](const double yy[5]) {
    if (record) res.trace.push_back({r, yy[0], yy[1], yy[2], yy[3], yy[4]});
  };
  push(y);

  int steps = 0;
  const int max_steps = 4'000'000;
  while (r < opts.r_max && steps++ < max_steps) {
    h = std::min({h, h_max, opts.r_max - r});
    double ynew[5];
    const double err = ck_step(s, r, y, h, ynew);
    const double scale = tol * (std::abs(y[0]) + std::abs(h * y[1]) + 1e-30);
    if (err > scale && h > 1e-14) {
      h = std::max(1e-14, 0.9 * h * std::pow(scale / err, 0.25));
      continue;
    }
    r += h;
    for (int i = 0; i < 5; ++i) y[i] = ynew[i];
    push(y);
    if (err > 0) h = std::min(h_max, 0.9 * h * std::pow(scale / err, 0.2));

    if (y[0] <= 0.0) {
      res.outcome = ShotOutcome::overshoot;
      break;
    }
    if (y[1] >= 0.0 && r > 4.0 * r0) {
      res.outcome = ShotOutcome::undershoot;
      break;
    }
    if (y[0] < floor_w) {
      // genuine decay only: the exponential tail has |w'| ~ w, the dual
      // contact has |w'|^2 ~ (2/q) w^q; a plunge through the floor has a
      // much larger slope and must keep integrating until it crosses zero
      const double ref = y[0] * y[0] + std::pow(y[0], s.q);
      if (y[1] * y[1] <= 100.0 * ref) {
        res.outcome = ShotOutcome::decayed;
        break;
      }
    }
  }
  res.final = {r, y[0], y[1], y[2], y[3], y[4]};
  return res;
}

struct BisectionOutcome {
  double a = 0;
  int iterations = 0;
};

// Bisection on the central value. The admissible well requires
// a > (q/2)^(1/(q-2)) for the primal branch and a > (2/q)^(1/(2-q)) for the
// dual one; below that threshold every shot is an undershoot.
BisectionOutcome bisect_central_value(const OdeSetup& s, const ShootingOptions& opts) {
  const double threshold =
      s.dual ? std::pow(2.0 / s.q, 1.0 / (2.0 - s.q)) : std::pow(0.5 * s.q, 1.0 / (s.q - 2.0));
  // For d = 1 there is no friction and the root sits exactly at the
  // threshold; start the bracket just below it.
  double lo = threshold * (1.0 - 1e-9);
  double hi = std::max(2.0 * threshold, threshold + 1.0);

  int iters = 0;
  while (shoot(s, hi, opts, false).outcome != ShotOutcome::overshoot) {
    hi *= 2.0;
    if (++iters > 60) throw solver_error("ground_state_radial: no overshoot bracket found");
  }
  if (shoot(s, lo, opts, false).outcome == ShotOutcome::overshoot)
    throw solver_error("ground_state_radial: bracket degenerate at the well threshold");

  while ((hi - lo) > 5e-16 * hi && iters < opts.max_bisections) {
    const double mid = 0.5 * (lo + hi);
    const auto cls = shoot(s, mid, opts, false).outcome;
    ++iters;
    if (cls == ShotOutcome::decayed) {
      // rode below the decay floor without turning or crossing: within
      // floor^2/scale of the separatrix, which is as sharp as bisection gets
      return {mid, iters};
    }
    if (cls == ShotOutcome::overshoot)
      hi = mid;
    else
      lo = mid;
  }
  return {0.5 * (lo + hi), iters};
}

// Max-norm Euler-Lagrange residual over interior nodes, from a local quintic
// Hermite rebuild of w'' (independent of the integrator's own derivatives).
// Normalized by the local magnitude of the equation terms.
double el_residual(const OdeSetup& s, const std::vector<OdeState>& tr) {
  double worst = 0.0;
  for (size_t i = 1; i + 1 < tr.size(); ++i) {
    // quintic through (w, w') at the three surrounding nodes, in local
    // coordinates t = r - r_i
    const double ts[3] = {tr[i - 1].r - tr[i].r, 0.0, tr[i + 1].r - tr[i].r};
    Eigen::Matrix<double, 6, 6> V;
    Eigen::Matrix<double, 6, 1> b;
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 6; ++j) {
        V(2 * k, j) = std::pow(ts[k], double(j));
        V(2 * k + 1, j) = j == 0 ? 0.0 : j * std::pow(ts[k], j - 1.0);
      }
      b[2 * k] = tr[i - 1 + k].w;
      b[2 * k + 1] = tr[i - 1 + k].wp;
    }
    const Eigen::Matrix<double, 6, 1> coef = V.fullPivLu().solve(b);
    const double wpp = 2.0 * coef[2];

    const double r = tr[i].r, w = tr[i].w, wp = tr[i].wp;
    const double res = wpp + (s.d - 1.0) * wp / r - s.g(w);
    const double scale = 1.0 + std::abs(w) + s.power(std::abs(w)) + std::abs((s.d - 1.0) * wp / r);
    worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

struct SolvedState {
  RadialProfile profile;
  double grad_sq = 0, l2_sq = 0, lq_q = 0;  // full R^d integrals
  int iterations = 0;
  double residual = 0;
  std::vector<OdeState> trace;
};

SolvedState solve_ground_state(int d, double q, bool dual, const ShootingOptions& opts) {
  const OdeSetup setup{d, q, dual};
  // ground states spread like 1/|q-2| as q -> 2: extend the domain so the
  // exponential tail (primal) or the contact point (dual) stays inside
  ShootingOptions local = opts;
  local.r_max = std::max(opts.r_max, 25.0 + 3.0 / std::abs(q - 2.0));
  const auto root = bisect_central_value(setup, local);
  auto shot = shoot(setup, root.a, local, true);

  // truncate anything past a terminal event so the stored profile is positive
  // and decreasing
  auto& tr = shot.trace;
  while (tr.size() > 1 && (tr.back().w <= 0.0 || tr.back().wp > 0.0)) tr.pop_back();
  if (tr.size() < 8) throw solver_error("ground_state_radial: degenerate trajectory");

  SolvedState out;
  out.iterations = root.iterations;
  const OdeState last = tr.back();
  const double sphere = angular_factor(d);

  double grad = last.grad, mass = last.mass, lq = last.lq;
  const int n_trace = static_cast<int>(tr.size());

  Eigen::VectorXd r_nodes, values;
  if (!dual) {
    // attach the asymptotic tail w ~ C e^-r r^-(d-1)/2 and its norm content
    const double ra = last.r;
    const double C = last.w * std::exp(ra) * std::pow(ra, 0.5 * (d - 1.0));
    const double tail_sq = 0.5 * last.w * last.w * std::pow(ra, d - 1.0);
    grad += tail_sq;
    mass += tail_sq;
    lq += std::pow(last.w, q) * std::pow(ra, d - 1.0) / q;

    const double dr_tail = 0.05;
    const int n_tail = std::max(0, static_cast<int>(std::ceil((local.r_max - ra) / dr_tail)));
    r_nodes.resize(n_trace + n_tail);
    values.resize(n_trace + n_tail);
    for (int i = 0; i < n_trace; ++i) {
      r_nodes[i] = tr[i].r;
      values[i] = tr[i].w;
    }
    for (int j = 1; j <= n_tail; ++j) {
      const double r = std::min(ra + j * dr_tail, local.r_max);
      r_nodes[n_trace + j - 1] = r;
      values[n_trace + j - 1] = C * std::exp(-r) * std::pow(r, -0.5 * (d - 1.0));
    }
  } else {
    // compactly supported profile: pad with zeros up to r_max
    const double ra = last.r;
    const double dr_tail = 0.05;
    const int n_tail = std::max(0, static_cast<int>(std::ceil((local.r_max - ra) / dr_tail)));
    r_nodes.resize(n_trace + n_tail);
    values.resize(n_trace + n_tail);
    for (int i = 0; i < n_trace; ++i) {
      r_nodes[i] = tr[i].r;
      values[i] = tr[i].w;
    }
    for (int j = 1; j <= n_tail; ++j) {
      r_nodes[n_trace + j - 1] = std::min(ra + j * dr_tail, local.r_max);
      values[n_trace + j - 1] = 0.0;
    }
  }

  out.profile.r_nodes = std::move(r_nodes);
  out.profile.values = std::move(values);
  out.profile.d = d;
  out.profile.q = q;
  out.profile.central_value = root.a;
  out.profile.support_radius = last.r;
  out.grad_sq = sphere * grad;
  out.l2_sq = sphere * mass;
  out.lq_q = sphere * lq;
  out.residual = el_residual(setup, tr);
  out.trace = std::move(tr);
  return out;
}

void require_subcritical(int d, double q) {
  const double qc = q_critical(d);
  if (!(q > 2.0) || (d >= 3 && !(q < qc)))
    throw std::domain_error("requires 2 < q < 2*");
}

}  // namespace

RadialProfile ground_state_radial(int d, double q, const ShootingOptions& opts) {
  if (d < 1) throw std::domain_error("ground_state_radial: requires d >= 1");
  require_subcritical(d, q);
  return solve_ground_state(d, q, false, opts).profile;
}

GnsResult gns_constant(double q, int d, const ShootingOptions& opts) {
  if (d < 1) throw std::domain_error("gns_constant: requires d >= 1");
  GnsResult res;

  if (is_infinite_q(q)) {
    // Agmon: K_{inf,1} = 2, attained by e^-|x|
    if (d != 1) throw std::domain_error("gns_constant: q = infinity requires d = 1");
    res.constant = 2.0;
    const int n = 2001;
    res.profile.r_nodes.setLinSpaced(n, 0.0, opts.r_max);
    res.profile.values = (-res.profile.r_nodes).array().exp();
    res.profile.d = 1;
    res.profile.q = q;
    res.profile.central_value = 1.0;
    res.profile.support_radius = opts.r_max;
    res.norms = {1.0, 1.0, 1.0, 1.0};
    return res;
  }

  const double qc = q_critical(d);
  if (d >= 3 && q == qc) {
    // critical endpoint: the infimum of the defining quotient is 1/S_d,
    // approached by concentrating Aubin-Talenti profiles (not attained in H^1)
    res.constant = 1.0 / sobolev_constant(d);
    const int n = 2001;
    res.profile.r_nodes.setLinSpaced(n, 0.0, opts.r_max);
    res.profile.values =
        (1.0 + res.profile.r_nodes.array().square()).pow(-0.5 * (d - 2.0));
    res.profile.d = d;
    res.profile.q = q;
    res.profile.central_value = 1.0;
    res.profile.support_radius = opts.r_max;
    return res;
  }

  require_subcritical(d, q);
  auto solved = solve_ground_state(d, q, false, opts);
  res.profile = std::move(solved.profile);
  res.norms.grad_sq = solved.grad_sq;
  res.norms.l2_sq = solved.l2_sq;
  res.norms.lq_q = solved.lq_q;
  res.norms.lq_sq = std::pow(solved.lq_q, 2.0 / q);
  res.constant = (res.norms.grad_sq + res.norms.l2_sq) / res.norms.lq_sq;
  res.diagnostics.shooting_iterations = solved.iterations;
  res.diagnostics.el_residual = solved.residual;
  res.diagnostics.norm_identity_rel =
      std::abs(res.norms.grad_sq + res.norms.l2_sq - res.norms.lq_q) / res.norms.lq_q;
  return res;
}

double gns_scaling_reduce(double K_GN, double q, int d) {
  const double theta = exponents(d, q).theta;
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::domain_error("gns_scaling_reduce: theta outside (0,1)");
  return std::pow(theta, -theta) * std::pow(1.0 - theta, -(1.0 - theta)) * K_GN;
}

double scaling_lambda_star(double theta, double l2_norm, double grad_norm) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::domain_error("scaling_lambda_star: theta outside (0,1)");
  return std::sqrt(theta / (1.0 - theta)) * l2_norm / grad_norm;
}

GnsResult dual_gns_constant(double q, int d, const ShootingOptions& opts) {
  if (d < 1) throw std::domain_error("dual_gns_constant: requires d >= 1");
  if (!(q > 0.0) || !(q < 2.0)) throw std::domain_error("dual_gns_constant: requires 0 < q < 2");

  auto solved = solve_ground_state(d, q, true, opts);
  const double G = solved.grad_sq;
  const double M = solved.l2_sq;
  const double P = solved.lq_q;                // int |v|^q dx
  const double Q = std::pow(P, 2.0 / q);       // |v|_q^2
  const double s = d * (2.0 - q) / q;

  // stationary dilation of R(B) = B^2 G/M + B^(d - 2d/q) Q/M
  const double B = std::pow(s * Q / (2.0 * G), 1.0 / (s + 2.0));
  const double Kstar = B * B * G / M + std::pow(B, -s) * Q / M;

  GnsResult res;
  res.constant = Kstar;
  // minimizer at the stationary scale, L2-normalized
  const double A = std::pow(B, 0.5 * d) / std::sqrt(M);
  res.profile = solved.profile;
  res.profile.r_nodes /= B;
  res.profile.values *= A;
  res.profile.central_value = solved.profile.central_value * A;
  res.profile.support_radius = solved.profile.support_radius / B;
  res.norms.grad_sq = B * B * G / M;           // after normalization |v|_2 = 1
  res.norms.l2_sq = 1.0;
  res.norms.lq_sq = std::pow(B, -s) * Q / M;
  res.norms.lq_q = std::pow(res.norms.lq_sq, 0.5 * q);
  res.diagnostics.shooting_iterations = solved.iterations;
  res.diagnostics.el_residual = solved.residual;
  // Pohozaev stationarity of the canonical profile: 2G = s int |v|^q dx
  res.diagnostics.scaling_derivative = (2.0 * G - s * P) / M;
  return res;
}

namespace {

double memoized(std::map<std::pair<int, double>, double>& cache, std::mutex& m, int d, double q,
                double (*compute)(double, int)) {
  const auto key = std::make_pair(d, q);
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double value = compute(q, d);
  std::lock_guard<std::mutex> lock(m);
  cache.emplace(key, value);
  return value;
}

}  // namespace

double gns_constant_cached(double q, int d) {
  static std::map<std::pair<int, double>, double> cache;
  static std::mutex m;
  return memoized(cache, m, d, q,
                  [](double qq, int dd) { return gns_constant(qq, dd).constant; });
}

double dual_gns_constant_cached(double q, int d) {
  static std::map<std::pair<int, double>, double> cache;
  static std::mutex m;
  return memoized(cache, m, d, q,
                  [](double qq, int dd) { return dual_gns_constant(qq, dd).constant; });
}

double klt_constant(double gamma, int d, KltBranch branch, const ShootingOptions& opts) {
  if (d < 1) throw std::domain_error("klt_constant: requires d >= 1");
  if (branch == KltBranch::negative_potential) {
    const bool ok = (d >= 3 && gamma >= 0.0) || (d == 2 && gamma > 0.0) || (d == 1 && gamma >= 0.5);
    if (!ok) throw std::domain_error("klt_constant: gamma outside the admissible range");
    const double p = gamma + 0.5 * d;
    const double q = (p == 1.0) ? kInfiniteExponent : 2.0 * p / (p - 1.0);
    return std::pow(gns_constant(q, d, opts).constant, -p);
  }
  if (!(gamma > 0.5 * d))
    throw std::domain_error("klt_constant: positive branch requires gamma > d/2");
  const double p = gamma - 0.5 * d;
  const double q = 2.0 * p / (p + 1.0);
  return std::pow(dual_gns_constant(q, d, opts).constant, -gamma);
}

double radial_integral(const RadialProfile& p, const Eigen::VectorXd& integrand) {
  if (integrand.size() != p.r_nodes.size())
    throw data_error("radial_integral: size mismatch");
  // composite trapezoid on the (nonuniform) profile grid, d-dim measure
  const double sphere = angular_factor(p.d);
  double acc = 0.0;
  for (int i = 0; i + 1 < p.r_nodes.size(); ++i) {
    const double h = p.r_nodes[i + 1] - p.r_nodes[i];
    const double f0 = integrand[i] * std::pow(p.r_nodes[i], p.d - 1.0);
    const double f1 = integrand[i + 1] * std::pow(p.r_nodes[i + 1], p.d - 1.0);
    acc += 0.5 * h * (f0 + f1);
  }
  return sphere * acc;
}

}  // namespace sphereint
