#include "sphereint/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

namespace sphereint {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

struct Row {
  std::string text;
  bool ok = true;
  bool violated = false;
};

double grid_point(const SweepSpec& spec, int i) {
  const double t = spec.steps <= 1 ? 0.0 : double(i) / (spec.steps - 1);
  if (spec.log_spacing) return spec.min * std::pow(spec.max / spec.min, t);
  return spec.min + (spec.max - spec.min) * t;
}

Row mu_row(const SweepSpec& spec, double alpha) {
  Row row;
  std::ostringstream os;
  os << format_full(alpha) << ',';
  try {
    MinimizeOptions opts;
    opts.grid_N = spec.grid_N;
    const ConstantResult res = mu(alpha, spec.d, spec.q, opts);
    const double lower = mu_lower_best(alpha, spec.d, spec.q);
    const double upper = mu_upper(alpha, spec.d, spec.q);
    const double asymp = mu_asymptotic(alpha, spec.d, spec.q);
    os << format_full(res.value) << ',' << format_full(lower) << ',' << format_full(upper) << ','
       << format_full(asymp) << ',' << to_string(res.branch) << ',';
    if (lower - spec.tol <= res.value && res.value <= upper + spec.tol) {
      os << "ok";
    } else {
      os << "violation";
      row.violated = true;
    }
  } catch (const std::exception&) {
    os << "nan,nan,nan,nan,none,solver_error";
    row.ok = false;
  }
  row.text = os.str();
  return row;
}

Row ratio_row(const SweepSpec& spec, double alpha) {
  Row row;
  std::ostringstream os;
  os << format_full(alpha) << ',';
  try {
    MinimizeOptions opts;
    opts.grid_N = spec.grid_N;
    const double value = mu(alpha, spec.d, spec.q, opts).value;
    os << format_full(value / mu_asymptotic(alpha, spec.d, spec.q)) << ",ok";
  } catch (const std::exception&) {
    os << "nan,solver_error";
    row.ok = false;
  }
  row.text = os.str();
  return row;
}

Row nu_row(const SweepSpec& spec, double beta) {
  Row row;
  std::ostringstream os;
  os << format_full(beta) << ',';
  try {
    MinimizeOptions opts;
    opts.grid_N = spec.grid_N;
    const ConstantResult res = nu(beta, spec.d, spec.q, opts);
    os << format_full(res.value) << ',' << format_full(nu_asymptotic(beta, spec.d, spec.q)) << ','
       << to_string(res.branch) << ',';
    if (res.value <= beta + spec.tol) {
      os << "ok";
    } else {
      os << "violation";
      row.violated = true;
    }
  } catch (const std::exception&) {
    os << "nan,nan,none,solver_error";
    row.ok = false;
  }
  row.text = os.str();
  return row;
}

Row xi_row(const SweepSpec& spec, double alpha) {
  Row row;
  std::ostringstream os;
  os << format_full(alpha) << ',';
  try {
    MinimizeOptions opts;
    opts.grid_N = spec.grid_N;
    const ConstantResult res = xi(alpha, spec.d, spec.q, opts);
    os << format_full(res.value) << ',' << to_string(res.branch) << ',';
    if (res.value <= alpha + spec.tol) {
      os << "ok";
    } else {
      os << "violation";
      row.violated = true;
    }
  } catch (const std::exception&) {
    os << "nan,none,solver_error";
    row.ok = false;
  }
  row.text = os.str();
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (!(spec.min < spec.max)) throw std::domain_error("run_sweep: requires min < max");
  if (spec.steps < 2) throw std::domain_error("run_sweep: requires steps >= 2");

  std::vector<Row> rows(spec.steps);
  std::atomic<int> next{0};
  const int jobs = std::max(1, spec.jobs);
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= spec.steps) return;
      const double x = grid_point(spec, i);
      switch (spec.family) {
        case SweepFamily::mu: rows[i] = mu_row(spec, x); break;
        case SweepFamily::ratio: rows[i] = ratio_row(spec, x); break;
        case SweepFamily::nu: rows[i] = nu_row(spec, x); break;
        case SweepFamily::xi: rows[i] = xi_row(spec, x); break;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  std::ostringstream csv;
  switch (spec.family) {
    case SweepFamily::mu: csv << "alpha,mu,mu_lower,mu_upper,mu_asymp,branch,status\n"; break;
    case SweepFamily::ratio: csv << "alpha,ratio,status\n"; break;
    case SweepFamily::nu: csv << "beta,nu,nu_asymp,branch,status\n"; break;
    case SweepFamily::xi: csv << "alpha,xi,branch,status\n"; break;
  }
  bool violated = false;
  for (const auto& row : rows) {
    csv << row.text << '\n';
    if (!row.ok) ++out.rows_failed;
    if (row.violated) violated = true;
  }
  out.csv = csv.str();
  out.exit_code = out.rows_failed > 0 ? 2 : (violated ? 1 : 0);

  if (!spec.out_path.empty()) {
    std::ofstream file(spec.out_path, std::ios::binary);
    if (!file) throw data_error("run_sweep: cannot write " + spec.out_path);
    file << out.csv;
  }
  return out;
}

std::string plot_script_for(const SweepSpec& spec, const std::string& csv_path) {
  std::ostringstream os;
  os << "set datafile separator ','\nset key left top\nset logscale x\n";
  switch (spec.family) {
    case SweepFamily::mu:
      os << "plot '" << csv_path << "' using 1:2 with lines title 'mu', \\\n"
         << "     '" << csv_path << "' using 1:3 with lines title 'mu_-', \\\n"
         << "     '" << csv_path << "' using 1:4 with lines title 'mu_+', \\\n"
         << "     '" << csv_path << "' using 1:5 with lines title 'mu_asymp', \\\n"
         << "     x with lines dashtype 2 title 'alpha'\n";
      break;
    case SweepFamily::ratio:
      os << "plot '" << csv_path << "' using 1:2 with lines title 'mu/mu_asymp', 1 dashtype 2\n";
      break;
    case SweepFamily::nu:
      os << "plot '" << csv_path << "' using 1:2 with lines title 'nu', \\\n"
         << "     '" << csv_path << "' using 1:3 with lines title 'nu_asymp', x dashtype 2\n";
      break;
    case SweepFamily::xi:
      os << "plot '" << csv_path << "' using 1:2 with lines title 'xi', x dashtype 2\n";
      break;
  }
  return os.str();
}

}  // namespace sphereint
