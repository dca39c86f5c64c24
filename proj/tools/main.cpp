// Command-line front end: closed-form constants, Euclidean GNS constants,
// the sphere constant curves and their sweeps, and spectral verification
// reports. Exit codes: 0 success, 1 inequality violation, 2 solver failure,
// 3 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sphereint/constants.hpp"
#include "sphereint/euclidean.hpp"
#include "sphereint/spectral.hpp"
#include "sphereint/sphere_constants.hpp"
#include "sphereint/sweep.hpp"

using namespace sphereint;

namespace {

void print_kv(const char* key, double value) {
  std::printf("%s,%s\n", key, format_full(value).c_str());
}

Potential parse_potential(const std::string& text, int d, double q,
                          const MinimizeOptions& opts) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--potential", "expected const:C, file:PATH or equality:MU");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "const") return Potential::constant(std::stod(arg));
  if (kind == "file") return potential_from_csv(arg);
  if (kind == "equality") return equality_potential(std::stod(arg), d, q, opts);
  throw CLI::ValidationError("--potential", "unknown kind '" + kind + "'");
}

int run_verify(int d, double p, int trials, int grid_N, unsigned seed, double tol) {
  auto grid = JacobiGrid::cached(d, grid_N);
  MinimizeOptions opts;
  opts.grid_N = grid_N;
  int failures = 0;
  const double q_dual = 2.0 * p / (p + 1.0);

  for (int t = 0; t < trials; ++t) {
    const double amplitude = 0.5 + 0.35 * t;
    {
      auto V = Potential::nodal(random_zonal_potential(grid, 6, seed + 11 * t,
                                                       PotentialConstraint::nonnegative,
                                                       amplitude * 3.0));
      const auto rep = klt_report(V, p, d, grid, opts);
      const bool ok = rep.slack >= -tol;
      std::printf("%s negative-potential bound: |lambda1|=%.12g alpha(|V|_p)=%.12g slack=%.3g\n",
                  ok ? "PASS" : "FAIL", std::abs(rep.lambda1), rep.bound, rep.slack);
      if (!ok) ++failures;
    }
    {
      auto W = Potential::nodal(random_zonal_potential(grid, 6, seed + 11 * t + 3,
                                                       PotentialConstraint::positive,
                                                       amplitude * 2.0));
      const auto rep = dual_klt_report(W, p, d, grid, opts);
      const bool ok = rep.slack >= -tol;
      std::printf("%s positive-potential bound: lambda1=%.12g nu(beta)=%.12g slack=%.3g\n",
                  ok ? "PASS" : "FAIL", rep.lambda1, rep.bound, rep.slack);
      if (!ok) ++failures;
    }
    {
      auto W = Potential::nodal(random_zonal_potential(grid, 6, seed + 11 * t + 7,
                                                       PotentialConstraint::free_sign, amplitude));
      const auto rep = logsob_report(W, 2.0 + t, p, d, grid, opts);
      const bool ok = rep.slack >= -tol;
      std::printf("%s exponential bound: log-slack=%.3g\n", ok ? "PASS" : "FAIL", rep.slack);
      if (!ok) ++failures;
    }
  }
  if (failures > 0) {
    std::printf("%d check(s) failed\n", failures);
    return 1;
  }
  std::printf("all %d checks passed\n", 3 * trials);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal interpolation constants and Schrodinger eigenvalue bounds on S^d"};
  app.require_subcommand(1);

  int d = 3;
  double q = 3.0, p = 3.0, alpha = 1.0, beta = 1.0, mu_val = 1.0;
  int grid_N = 128, steps = 40, jobs = 1, trials = 20;
  unsigned seed = 12345;
  double tol = 1e-7, sweep_min = 0.5, sweep_max = 20.0;
  std::string out_path, spacing = "log", potential_text = "const:1", sign_text = "neg";
  std::string plot_script;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--d", d, "sphere dimension");
    cmd->add_option("--grid", grid_N, "ultraspherical grid size N");
    cmd->add_option("--tol", tol, "verification tolerance");
  };

  auto* c_constants = app.add_subcommand("constants", "closed-form geometric constants");
  add_common(c_constants);
  c_constants->add_option("--q", q, "exponent q");

  auto* c_gns = app.add_subcommand("gns", "Euclidean GNS constant K_{q,d}");
  add_common(c_gns);
  c_gns->add_option("--q", q, "exponent q > 2 (or 'inf' handled via --q-inf)");

  auto* c_dual = app.add_subcommand("dual-gns", "dual GNS constant K*_{q,d}");
  add_common(c_dual);
  c_dual->add_option("--q", q, "exponent q in (0,2)");

  auto* c_mu = app.add_subcommand("mu", "optimal constant mu(alpha)");
  add_common(c_mu);
  c_mu->add_option("--q", q);
  c_mu->add_option("--alpha", alpha)->required();

  auto* c_nu = app.add_subcommand("nu", "optimal constant nu(beta)");
  add_common(c_nu);
  c_nu->add_option("--q", q);
  c_nu->add_option("--beta", beta)->required();

  auto* c_xi = app.add_subcommand("xi", "log-Sobolev constant xi(alpha)");
  add_common(c_xi);
  c_xi->add_option("--p", p);
  c_xi->add_option("--alpha", alpha)->required();

  auto* c_inv = app.add_subcommand("alpha-of-mu", "inverse constant alpha(mu)");
  add_common(c_inv);
  c_inv->add_option("--q", q);
  c_inv->add_option("--mu", mu_val)->required();

  auto* c_musweep = app.add_subcommand("mu-sweep", "sweep alpha -> mu with bounds (CSV)");
  add_common(c_musweep);
  c_musweep->add_option("--q", q);
  c_musweep->add_option("--min", sweep_min);
  c_musweep->add_option("--max", sweep_max);
  c_musweep->add_option("--steps", steps);
  c_musweep->add_option("--spacing", spacing)->check(CLI::IsMember({"linear", "log"}));
  c_musweep->add_option("--out", out_path);
  c_musweep->add_option("--jobs", jobs);
  c_musweep->add_option("--plot-script", plot_script, "write a gnuplot script to this path");

  auto* c_ratiosweep = app.add_subcommand("ratio-sweep", "sweep alpha -> mu/mu_asymp (CSV)");
  add_common(c_ratiosweep);
  c_ratiosweep->add_option("--q", q);
  c_ratiosweep->add_option("--min", sweep_min);
  c_ratiosweep->add_option("--max", sweep_max);
  c_ratiosweep->add_option("--steps", steps);
  c_ratiosweep->add_option("--spacing", spacing)->check(CLI::IsMember({"linear", "log"}));
  c_ratiosweep->add_option("--out", out_path);
  c_ratiosweep->add_option("--jobs", jobs);
  c_ratiosweep->add_option("--plot-script", plot_script);

  auto* c_eigen = app.add_subcommand("eigen", "eigenvalue verification report");
  add_common(c_eigen);
  c_eigen->add_option("--q", q);
  c_eigen->add_option("--p", p);
  c_eigen->add_option("--potential", potential_text, "const:C | file:PATH | equality:MU");
  c_eigen->add_option("--sign", sign_text)->check(CLI::IsMember({"neg", "pos"}));
  c_eigen->add_option("--alpha", alpha, "alpha for the exponential bound report");

  auto* c_verify = app.add_subcommand("verify", "randomized property suite");
  add_common(c_verify);
  c_verify->add_option("--p", p);
  c_verify->add_option("--trials", trials);
  c_verify->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  MinimizeOptions opts;
  opts.grid_N = grid_N;

  try {
    if (c_constants->parsed()) {
      const auto g = geometry_constants(d, q);
      print_kv("sphere_surface", g.sphere_surface);
      print_kv("Z_d", g.Z_d);
      print_kv("kappa", g.kappa);
      if (d >= 3) print_kv("sobolev", g.sobolev);
      if (q != 2.0) {
        const auto pp = exponents(d, q);
        print_kv("p", pp.p);
        print_kv("gamma", pp.gamma);
        if (pp.supercritical()) print_kv("theta", pp.theta);
        else print_kv("delta", pp.delta);
        print_kv("alpha_star", pp.alpha_star);
        print_kv("q_critical", pp.q_critical);
      }
      return 0;
    }
    if (c_gns->parsed()) {
      const auto res = gns_constant(q, d);
      print_kv("K", res.constant);
      print_kv("central_value", res.profile.central_value);
      print_kv("el_residual", res.diagnostics.el_residual);
      return 0;
    }
    if (c_dual->parsed()) {
      const auto res = dual_gns_constant(q, d);
      print_kv("K_star", res.constant);
      print_kv("central_value", res.profile.central_value);
      print_kv("scaling_derivative", res.diagnostics.scaling_derivative);
      return 0;
    }
    if (c_mu->parsed()) {
      const auto res = mu(alpha, d, q, opts);
      print_kv("mu", res.value);
      std::printf("branch,%s\n", to_string(res.branch));
      print_kv("mu_lower", mu_lower_best(alpha, d, q));
      if (!is_infinite_q(q) && (d < 3 || q < q_critical(d))) {
        print_kv("mu_upper", mu_upper(alpha, d, q));
        print_kv("mu_asymp", mu_asymptotic(alpha, d, q));
      }
      return 0;
    }
    if (c_nu->parsed()) {
      const auto res = nu(beta, d, q, opts);
      print_kv("nu", res.value);
      std::printf("branch,%s\n", to_string(res.branch));
      print_kv("nu_asymp", nu_asymptotic(beta, d, q));
      return 0;
    }
    if (c_xi->parsed()) {
      const auto res = xi(alpha, d, p, opts);
      print_kv("xi", res.value);
      std::printf("branch,%s\n", to_string(res.branch));
      return 0;
    }
    if (c_inv->parsed()) {
      print_kv("alpha", alpha_of_mu(mu_val, d, q, opts));
      return 0;
    }
    if (c_musweep->parsed() || c_ratiosweep->parsed()) {
      SweepSpec spec;
      spec.family = c_musweep->parsed() ? SweepFamily::mu : SweepFamily::ratio;
      spec.d = d;
      spec.q = q;
      spec.min = sweep_min;
      spec.max = sweep_max;
      spec.steps = steps;
      spec.log_spacing = (spacing == "log");
      spec.grid_N = grid_N;
      spec.jobs = jobs;
      spec.tol = tol;
      spec.out_path = out_path;
      const auto res = run_sweep(spec);
      if (out_path.empty()) std::fputs(res.csv.c_str(), stdout);
      if (!plot_script.empty()) {
        std::ofstream f(plot_script);
        f << plot_script_for(spec, out_path.empty() ? "sweep.csv" : out_path);
      }
      return res.exit_code;
    }
    if (c_eigen->parsed()) {
      auto grid = JacobiGrid::cached(d, grid_N);
      const Potential pot = parse_potential(potential_text, d, q, opts);
      const EigenReport rep = (sign_text == "neg") ? klt_report(pot, p, d, grid, opts)
                                                   : dual_klt_report(pot, p, d, grid, opts);
      print_kv("lambda1", rep.lambda1);
      print_kv("bound", rep.bound);
      print_kv("slack", rep.slack);
      print_kv("norm", rep.norm);
      if (rep.small_norm_branch) {
        print_kv("domega_lhs", rep.domega_lhs);
        print_kv("domega_rhs", rep.domega_rhs);
      }
      if (std::isfinite(rep.semiclassical_ratio))
        print_kv("semiclassical_ratio", rep.semiclassical_ratio);
      return rep.slack >= -tol ? 0 : 1;
    }
    if (c_verify->parsed()) return run_verify(d, p, trials, grid_N, seed, tol);
  } catch (const solver_error& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 3;
}
