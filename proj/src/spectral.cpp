#include "sphereint/spectral.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sphereint/euclidean.hpp"

namespace sphereint {

namespace {

double lp_norm_dsigma(const GridPtr& g, const Eigen::VectorXd& v, double p) {
  double acc = 0.0;
  for (int i = 0; i < g->size(); ++i)
    acc += g->weights()[i] * std::pow(std::abs(v[i]), p);
  return std::pow(acc, 1.0 / p);
}

double gegenbauer_normalized(int k, double lam, double z) {
  // C_k^lam(z) / C_k^lam(1), by the three-term recurrence; for d = 1
  // (lam = 0) the Chebyshev normalization T_k is used instead.
  if (k == 0) return 1.0;
  if (lam == 0.0) return std::cos(k * std::acos(std::clamp(z, -1.0, 1.0)));
  double cm1 = 1.0, c0 = 2.0 * lam * z;
  for (int n = 2; n <= k; ++n) {
    const double c1 = (2.0 * z * (n + lam - 1.0) * c0 - (n + 2.0 * lam - 2.0) * cm1) / n;
    cm1 = c0;
    c0 = c1;
  }
  double nm1 = 1.0, n0 = 2.0 * lam;
  for (int n = 2; n <= k; ++n) {
    const double n1 = (2.0 * (n + lam - 1.0) * n0 - (n + 2.0 * lam - 2.0) * nm1) / n;
    nm1 = n0;
    n0 = n1;
  }
  return c0 / n0;
}

}  // namespace

Potential Potential::constant(double c) {
  Potential p;
  p.kind = Kind::constant;
  p.constant_value = c;
  return p;
}

Potential Potential::nodal(ZonalFunction f) {
  Potential p;
  p.kind = Kind::nodal;
  p.nodal_values = std::move(f);
  return p;
}

Potential Potential::table(Eigen::VectorXd z, Eigen::VectorXd values) {
  Potential p;
  p.kind = Kind::table;
  p.table_z = std::move(z);
  p.table_values = std::move(values);
  return p;
}

Eigen::VectorXd Potential::values_on(const GridPtr& grid) const {
  if (!grid) throw data_error("Potential::values_on: missing grid");
  switch (kind) {
    case Kind::constant:
      return Eigen::VectorXd::Constant(grid->size(), constant_value);
    case Kind::nodal: {
      if (!nodal_values.grid) throw data_error("Potential: nodal values without a grid");
      if (nodal_values.grid == grid) return nodal_values.values;
      if (nodal_values.grid->dimension() != grid->dimension() ||
          nodal_values.grid->size() != grid->size())
        throw data_error("Potential: nodal grid mismatch");
      return nodal_values.values;
    }
    case Kind::table:
      return barycentric_resample(table_z, table_values, grid->nodes());
  }
  throw data_error("Potential: unknown kind");
}

Potential potential_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("potential_from_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("potential_from_csv: empty file");
  // header row is required; reject a numeric-looking first line
  {
    std::istringstream probe(line);
    double x;
    if (probe >> x) throw data_error("potential_from_csv: missing header row");
  }
  std::vector<double> zs, vs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double z, v;
    if (!(row >> z >> v))
      throw data_error("potential_from_csv: malformed row " + std::to_string(lineno));
    if (!(z > -1.0) || !(z < 1.0))
      throw data_error("potential_from_csv: z outside (-1,1) at row " + std::to_string(lineno));
    zs.push_back(z);
    vs.push_back(v);
  }
  if (zs.size() < 2) throw data_error("potential_from_csv: needs at least two rows");
  Eigen::VectorXd z(zs.size()), v(vs.size());
  for (size_t i = 0; i < zs.size(); ++i) {
    z[i] = zs[i];
    v[i] = vs[i];
  }
  return Potential::table(std::move(z), std::move(v));
}

std::pair<double, Eigen::VectorXd> lambda1_with_vector(const Potential& pot, Sign sign,
                                                       const GridPtr& grid) {
  const Eigen::VectorXd v = pot.values_on(grid);
  if (sign == Sign::plus && v.minCoeff() <= 0.0)
    throw std::domain_error("lambda1: positive-potential branch requires V > 0 on nodes");
  ZonalFunction zf(grid, v);
  return pencil_ground_state(assemble_schrodinger(zf, sign));
}

double lambda1(const Potential& pot, Sign sign, const GridPtr& grid) {
  return lambda1_with_vector(pot, sign, grid).first;
}

Potential equality_potential(double mu_val, int d, double q, const MinimizeOptions& opts) {
  if (!(mu_val > 0)) throw std::domain_error("equality_potential: requires mu > 0");
  if (is_infinite_q(q))
    throw std::domain_error("equality_potential: requires a finite subcritical q");
  if (d >= 3 && !(q < q_critical(d)))
    throw std::domain_error("equality_potential: requires subcritical q");
  if (mu_val <= d / (q - 2.0)) {
    Potential p = Potential::constant(mu_val);
    p.equality_alpha = mu_val;
    return p;
  }
  const AlphaOfMu inv = alpha_of_mu_detailed(mu_val, d, q, opts);
  if (!inv.at_alpha.minimizer) throw solver_error("equality_potential: minimizer unavailable");
  const ZonalFunction& u = *inv.at_alpha.minimizer;
  Eigen::VectorXd V(u.values.size());
  for (int i = 0; i < V.size(); ++i) V[i] = mu_val * std::pow(std::abs(u.values[i]), q - 2.0);
  Potential p = Potential::nodal(ZonalFunction(u.grid, std::move(V)));
  p.equality_alpha = inv.alpha;
  return p;
}

Potential dual_equality_potential(double beta, int d, double q, const MinimizeOptions& opts) {
  if (!(beta > 0)) throw std::domain_error("dual_equality_potential: requires beta > 0");
  if (!(q > 0) || !(q < 2)) throw std::domain_error("dual_equality_potential: requires q in (0,2)");
  if (q >= 1.0 && beta <= d / (2.0 - q)) {
    Potential p = Potential::constant(beta);
    p.equality_nu = beta;
    return p;
  }
  const ConstantResult res = nu(beta, d, q, opts);
  if (!res.minimizer) throw solver_error("dual_equality_potential: minimizer unavailable");
  const ZonalFunction& u = *res.minimizer;  // |u|_q = 1, EL: -Lap u + beta u^(q-1) = nu u
  Eigen::VectorXd W(u.values.size());
  for (int i = 0; i < W.size(); ++i) {
    const double base = std::max(u.values[i], 1e-12);
    W[i] = beta * std::pow(base, q - 2.0);  // q < 2: exponent negative, W > 0
  }
  Potential p = Potential::nodal(ZonalFunction(u.grid, std::move(W)));
  p.equality_nu = res.value;
  return p;
}

Potential logsob_optimal_potential(double alpha, int d, double p, const MinimizeOptions& opts) {
  const ConstantResult res = xi(alpha, d, p, opts);
  if (!res.minimizer) throw solver_error("logsob_optimal_potential: minimizer unavailable");
  const ZonalFunction& u = *res.minimizer;  // |u|_2 = 1
  Eigen::VectorXd W(u.values.size());
  for (int i = 0; i < W.size(); ++i) {
    const double u2 = std::max(u.values[i] * u.values[i], 1e-280);
    W[i] = -(alpha / p) * std::log(u2);  // int e^(-pW/alpha) = int u^2 = 1
  }
  Potential pot = Potential::nodal(ZonalFunction(u.grid, std::move(W)));
  pot.equality_alpha = alpha;
  return pot;
}

EigenReport klt_report(const Potential& V, double p, int d, const GridPtr& grid,
                       const MinimizeOptions& opts) {
  const bool general = p > std::max(1.0, 0.5 * d);
  const bool critical_clause = (d >= 3 && p == 0.5 * d);
  const bool one_dim_clause = (d == 1 && p == 1.0);
  if (!general && !critical_clause && !one_dim_clause)
    throw std::domain_error("klt_report: inadmissible (p, d)");

  const Eigen::VectorXd v = V.values_on(grid);
  const Eigen::VectorXd vplus = v.cwiseMax(0.0);
  const double mu_norm = lp_norm_dsigma(grid, vplus, p);
  const double surface = sphere_surface(d);

  EigenReport rep;
  rep.norm = mu_norm;
  rep.lambda1 = lambda1(V, Sign::minus, grid);
  const double lam_abs = std::max(0.0, -rep.lambda1);

  const double line_end = 0.5 * d * (p - 1.0);
  if (critical_clause) {
    // p = d/2 (q = 2*): alpha(mu) = mu holds only on [0, alpha_*]
    if (mu_norm > alpha_star(d))
      throw std::domain_error("klt_report: p = d/2 admits only |V|_p <= alpha_* (no inverse beyond)");
    rep.bound = mu_norm;
  } else {
    const double q = (p == 1.0) ? kInfiniteExponent : 2.0 * p / (p - 1.0);
    rep.bound = alpha_of_mu(mu_norm, d, q, opts);
  }
  rep.slack = rep.bound - lam_abs;

  // d-omega corollary forms; gamma = p - d/2
  const double gamma = p - 0.5 * d;
  double vp_domega = 0.0;
  for (int i = 0; i < grid->size(); ++i)
    vp_domega += grid->weights()[i] * std::pow(vplus[i], p);
  vp_domega *= surface;
  if (mu_norm <= line_end || critical_clause) {
    rep.small_norm_branch = true;
    rep.domega_lhs = std::pow(lam_abs, p);
    rep.domega_rhs = vp_domega;
  }
  if (gamma > 0.0) {
    const double L = klt_constant(gamma, d, KltBranch::negative_potential);
    rep.semiclassical_ratio = std::pow(lam_abs, gamma) / (L * vp_domega);
  }
  return rep;
}

EigenReport dual_klt_report(const Potential& W, double p, int d, const GridPtr& grid,
                            const MinimizeOptions& opts) {
  if (!(p > 0)) throw std::domain_error("dual_klt_report: requires p > 0");
  const Eigen::VectorXd w = W.values_on(grid);
  if (w.minCoeff() <= 0.0)
    throw std::domain_error("dual_klt_report: requires W > 0 everywhere on nodes");

  const double inv_norm = lp_norm_dsigma(grid, w.cwiseInverse(), p);
  const double beta = 1.0 / inv_norm;
  const double q = 2.0 * p / (p + 1.0);

  EigenReport rep;
  rep.norm = beta;
  rep.lambda1 = lambda1(W, Sign::plus, grid);
  rep.bound = nu(beta, d, q, opts).value;
  rep.slack = rep.lambda1 - rep.bound;

  // d-omega corollary forms; gamma = p + d/2
  const double gamma = p + 0.5 * d;
  const double surface = sphere_surface(d);
  double winv_domega = 0.0;
  for (int i = 0; i < grid->size(); ++i)
    winv_domega += grid->weights()[i] * std::pow(w[i], 0.5 * d - gamma);
  winv_domega *= surface;
  if (p >= 1.0 && beta <= 0.5 * d * (p + 1.0)) {
    rep.small_norm_branch = true;
    rep.domega_lhs = std::pow(rep.lambda1, 0.5 * d - gamma);
    rep.domega_rhs = winv_domega;
  }
  const double L = klt_constant(gamma, d, KltBranch::positive_potential);
  rep.semiclassical_ratio = std::pow(rep.lambda1, -gamma) / (L * winv_domega);
  return rep;
}

EigenReport logsob_report(const Potential& W, double alpha, double p, int d, const GridPtr& grid,
                          const MinimizeOptions& opts) {
  if (!(alpha > 0)) throw std::domain_error("logsob_report: requires alpha > 0");
  if (!(p > std::max(1.0, 0.5 * d)))
    throw std::domain_error("logsob_report: requires p > max(1, d/2)");

  const Eigen::VectorXd w = W.values_on(grid);
  // lambda_1 of -Delta + W; W may change sign, so assemble directly
  ZonalFunction zf(grid, w);
  const double lam = pencil_ground_state(assemble_schrodinger(zf, Sign::plus)).first;

  double exp_int = 0.0;
  for (int i = 0; i < grid->size(); ++i)
    exp_int += grid->weights()[i] * std::exp(-p * w[i] / alpha);
  if (!std::isfinite(exp_int)) throw data_error("logsob_report: e^(-pW/alpha) not integrable");

  const double xi_val = xi(alpha, d, p, opts).value;

  EigenReport rep;
  rep.lambda1 = lam;
  rep.norm = exp_int;
  rep.bound = xi_val;
  rep.log_lhs = -lam / alpha;
  rep.log_rhs = std::log(alpha / xi_val) + std::log(exp_int) / p;
  rep.slack = rep.log_rhs - rep.log_lhs;
  return rep;
}

ZonalFunction random_zonal_potential(const GridPtr& grid, int degree, unsigned seed,
                                     PotentialConstraint constraint, double amplitude) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double lam = 0.5 * (grid->dimension() - 1.0);
  std::vector<double> coeff(degree + 1);
  for (int k = 0; k <= degree; ++k) coeff[k] = unif(rng) / (1.0 + k);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid->size());
  for (int i = 0; i < grid->size(); ++i)
    for (int k = 0; k <= degree; ++k)
      v[i] += coeff[k] * gegenbauer_normalized(k, lam, grid->nodes()[i]);
  v *= amplitude;

  switch (constraint) {
    case PotentialConstraint::nonnegative:
      v = v.cwiseMax(0.0);
      break;
    case PotentialConstraint::positive:
      v.array() += 0.25 * amplitude - v.minCoeff();
      break;
    case PotentialConstraint::free_sign:
      break;
  }
  return ZonalFunction(grid, std::move(v));
}

}  // namespace sphereint
