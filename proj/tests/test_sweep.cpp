#include "doctest.h"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "sphereint/sweep.hpp"

using namespace sphereint;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("mu sweep: line branch rows are exact, sandwich holds") {
  SweepSpec spec;
  spec.family = SweepFamily::mu;
  spec.d = 3;
  spec.q = 3.0;
  spec.min = 0.5;
  spec.max = 8.0;
  spec.steps = 8;
  spec.log_spacing = true;
  spec.grid_N = 96;
  const auto res = run_sweep(spec);
  CHECK(res.exit_code == 0);

  const auto rows = parse_csv(res.csv);
  CHECK(rows[0] == std::vector<std::string>{"alpha", "mu", "mu_lower", "mu_upper", "mu_asymp",
                                            "branch", "status"});
  for (size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    const double alpha = std::stod(rows[i][0]);
    const double mu_val = std::stod(rows[i][1]);
    const double lo = std::stod(rows[i][2]);
    const double hi = std::stod(rows[i][3]);
    CHECK(rows[i][6] == "ok");
    CHECK(lo - 1e-6 <= mu_val);
    CHECK(mu_val <= hi + 1e-6);
    if (alpha <= 3.0) {
      CHECK(mu_val == alpha);
      CHECK(rows[i][5] == "exact_line");
    }
  }
}

TEST_CASE("ratio sweep: increasing toward 1") {
  SweepSpec spec;
  spec.family = SweepFamily::ratio;
  spec.d = 3;
  spec.q = 3.0;
  spec.min = 10.0;
  spec.max = 40.0;
  spec.steps = 4;
  spec.log_spacing = true;
  spec.grid_N = 96;
  const auto res = run_sweep(spec);
  CHECK(res.exit_code == 0);
  const auto rows = parse_csv(res.csv);
  double prev = 0.0;
  for (size_t i = 1; i < rows.size(); ++i) {
    const double ratio = std::stod(rows[i][1]);
    CHECK(ratio > prev - 1e-3);
    CHECK(ratio < 1.0);
    prev = ratio;
  }
}

TEST_CASE("degenerate two-step sweep is well formed") {
  SweepSpec spec;
  spec.family = SweepFamily::mu;
  spec.d = 3;
  spec.q = 3.0;
  spec.min = 1.0;
  spec.max = 1.0 + 1e-6;
  spec.steps = 2;
  spec.grid_N = 64;
  const auto res = run_sweep(spec);
  const auto rows = parse_csv(res.csv);
  CHECK(rows.size() == 3);  // header + 2 rows
  CHECK(res.exit_code == 0);
}

TEST_CASE("reruns are byte identical, including multi-job runs") {
  SweepSpec spec;
  spec.family = SweepFamily::mu;
  spec.d = 3;
  spec.q = 3.0;
  spec.min = 2.0;
  spec.max = 6.0;
  spec.steps = 6;
  spec.grid_N = 64;
  const auto a = run_sweep(spec);
  const auto b = run_sweep(spec);
  CHECK(a.csv == b.csv);
  spec.jobs = 2;
  const auto c = run_sweep(spec);
  CHECK(a.csv == c.csv);
}

TEST_CASE("nu and xi sweeps emit their headers") {
  SweepSpec spec;
  spec.family = SweepFamily::nu;
  spec.d = 3;
  spec.q = 1.2;
  spec.min = 1.0;
  spec.max = 5.0;
  spec.steps = 3;
  spec.grid_N = 64;
  auto res = run_sweep(spec);
  CHECK(parse_csv(res.csv)[0][0] == "beta");
  CHECK(res.exit_code == 0);

  spec.family = SweepFamily::xi;
  spec.q = 3.0;  // p for the xi family
  spec.min = 2.0;
  spec.max = 8.0;
  res = run_sweep(spec);
  CHECK(parse_csv(res.csv)[0][1] == "xi");
  CHECK(res.exit_code == 0);
}

TEST_CASE("invalid specs are rejected") {
  SweepSpec spec;
  spec.min = 2.0;
  spec.max = 1.0;
  CHECK_THROWS_AS(run_sweep(spec), std::domain_error);
  spec.max = 3.0;
  spec.steps = 1;
  CHECK_THROWS_AS(run_sweep(spec), std::domain_error);
}

TEST_CASE("format_full survives a parse round trip") {
  for (double x : {1.0 / 3.0, 6.02214076e23, -2.5e-17, 0.75}) {
    CHECK(std::stod(format_full(x)) == x);
  }
}

TEST_CASE("plot script references the csv") {
  SweepSpec spec;
  spec.family = SweepFamily::mu;
  const auto script = plot_script_for(spec, "out.csv");
  CHECK(script.find("out.csv") != std::string::npos);
  CHECK(script.find("mu_asymp") != std::string::npos);
}
