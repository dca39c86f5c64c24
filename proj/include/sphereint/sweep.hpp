#ifndef SPHEREINT_SWEEP_HPP
#define SPHEREINT_SWEEP_HPP

#include <string>

#include "sphereint/sphere_constants.hpp"

// Parameter sweeps over the constant curves, emitted as deterministic CSV
// (17 significant digits, fixed row order regardless of worker scheduling).

namespace sphereint {

enum class SweepFamily { mu, nu, xi, ratio };

struct SweepSpec {
  SweepFamily family = SweepFamily::mu;
  int d = 3;
  double q = 3.0;  // or p for the xi family
  double min = 0.5;
  double max = 20.0;
  int steps = 40;
  bool log_spacing = false;
  int grid_N = 128;
  int jobs = 1;
  double tol = 1e-6;
  std::string out_path;  // empty: do not write a file
};

struct SweepResult {
  int exit_code = 0;  // 0 ok, 1 inequality violation, 2 solver failure
  std::string csv;
  int rows_failed = 0;
};

SweepResult run_sweep(const SweepSpec& spec);

/// Full-precision decimal formatting used for all CSV payloads.
std::string format_full(double x);

/// Companion gnuplot script referencing a sweep CSV.
std::string plot_script_for(const SweepSpec& spec, const std::string& csv_path);

}  // namespace sphereint

#endif
