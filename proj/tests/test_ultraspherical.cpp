#include "doctest.h"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "sphereint/constants.hpp"
#include "sphereint/ultraspherical.hpp"

using namespace sphereint;

namespace {

// Moment oracle: int z^k dnu_d = B((k+1)/2, d/2) / B(1/2, d/2) for even k,
// 0 for odd k (Beta-function computation, independent of the quadrature).
double moment_oracle(int k, int d) {
  if (k % 2 == 1) return 0.0;
  const double num = std::exp(log_gamma(0.5 * (k + 1)) + log_gamma(0.5 * d) -
                              log_gamma(0.5 * (k + 1) + 0.5 * d));
  const double den = std::exp(log_gamma(0.5) + log_gamma(0.5 * d) - log_gamma(0.5 + 0.5 * d));
  return num / den;
}

// Gegenbauer polynomial C_k^lam by the three-term recurrence (spectrum oracle).
double gegenbauer(int k, double lam, double z) {
  if (k == 0) return 1.0;
  double cm1 = 1.0, c0 = 2.0 * lam * z;
  if (lam == 0.0) c0 = 2.0 * z;  // not used here; guards the d=1 edge
  for (int n = 2; n <= k; ++n) {
    const double c1 = (2.0 * z * (n + lam - 1.0) * c0 - (n + 2.0 * lam - 2.0) * cm1) / n;
    cm1 = c0;
    c0 = c1;
  }
  return k == 0 ? 1.0 : c0;
}

}  // namespace

TEST_CASE("grid weights form a probability measure") {
  for (int d : {1, 2, 3, 5, 9}) {
    auto g = JacobiGrid::build(d, 64);
    CHECK(std::abs(g->weights().sum() - 1.0) < 1e-12);
    CHECK(g->weights().minCoeff() > 0.0);
    CHECK(g->nodes().minCoeff() > -1.0);
    CHECK(g->nodes().maxCoeff() < 1.0);
  }
  CHECK_THROWS_AS(JacobiGrid::build(3, 4), std::domain_error);
  CHECK_THROWS_AS(JacobiGrid::build(0, 32), std::domain_error);
}

TEST_CASE("quadrature is exact up to the design degree") {
  const int N = 12;
  for (int d : {1, 2, 3, 4}) {
    auto g = JacobiGrid::build(d, N);
    for (int k = 0; k <= 2 * N - 1; ++k) {
      double acc = 0.0;
      for (int i = 0; i < N; ++i) acc += g->weights()[i] * std::pow(g->nodes()[i], k);
      CHECK(std::abs(acc - moment_oracle(k, d)) < 1e-12);
    }
  }
}

TEST_CASE("differentiation annihilates constants and differentiates polynomials") {
  auto g = JacobiGrid::build(3, 48);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g->size());
  // exact up to roundoff in the O(N^2)-sized entries
  CHECK((g->differentiation() * ones).cwiseAbs().maxCoeff() < 1e-11);

  Eigen::VectorXd z3(g->size()), dz3(g->size());
  for (int i = 0; i < g->size(); ++i) {
    const double z = g->nodes()[i];
    z3[i] = z * z * z;
    dz3[i] = 3.0 * z * z;
  }
  CHECK(((g->differentiation() * z3) - dz3).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("integrate: moment examples") {
  for (int d : {1, 2, 3, 7}) {
    auto g = JacobiGrid::build(d, 48);
    auto f1 = ZonalFunction::sample(g, [](double z) { return 1.0 + z * z; });
    CHECK(integrate(f1) == doctest::Approx(1.0 + 1.0 / (d + 1.0)).epsilon(1e-12));
    auto f2 = ZonalFunction::sample(g, [](double z) { return z * z * z; });
    CHECK(std::abs(integrate(f2)) < 1e-14);
    auto f3 = ZonalFunction::sample(g, [](double z) { return 1.0 - z * z; });
    CHECK(integrate(f3) == doctest::Approx(d / (d + 1.0)).epsilon(1e-12));
    auto fz = ZonalFunction::sample(g, [](double z) { return z; });
    CHECK(std::abs(integrate(fz)) < 1e-14);
  }
}

TEST_CASE("integrate rejects NaN data") {
  auto g = JacobiGrid::build(3, 16);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g->size());
  v[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(integrate(ZonalFunction(g, v)), data_error);
}

TEST_CASE("dirichlet form examples") {
  for (int d : {1, 2, 3, 5}) {
    auto g = JacobiGrid::build(d, 48);
    auto c = ZonalFunction::sample(g, [](double) { return 4.2; });
    CHECK(dirichlet_form(c) < 1e-24);
    auto z = ZonalFunction::sample(g, [](double t) { return t; });
    CHECK(dirichlet_form(z) == doctest::Approx(d / (d + 1.0)).epsilon(1e-12));
    // Rayleigh quotient of the first nonconstant zonal harmonic: -Delta z = d z
    const double l2 = integrate(ZonalFunction::sample(g, [](double t) { return t * t; }));
    CHECK(dirichlet_form(z) / l2 == doctest::Approx(double(d)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_quotient") {
  auto g = JacobiGrid::build(3, 64);
  const int d = 3;
  auto one = ZonalFunction::sample(g, [](double) { return 1.0; });
  for (double alpha : {0.5, 2.0, 11.0}) {
    CHECK(evaluate_quotient(one, alpha, 3.0) == doctest::Approx(alpha).epsilon(1e-14));
  }

  // 1 + eps z reproduces h_alpha(eps) from the refined upper estimate
  const double q = 3.0, alpha = 7.0;
  for (double eps : {0.05, 0.3, 0.8}) {
    auto f = ZonalFunction::sample(g, [eps](double z) { return 1.0 + eps * z; });
    auto fq = ZonalFunction::sample(g, [eps, q](double z) { return std::pow(std::abs(1.0 + eps * z), q); });
    const double m2 = 1.0 / (d + 1.0);
    const double h = (alpha + (d + alpha) * eps * eps * m2) / std::pow(integrate(fq), 2.0 / q);
    CHECK(evaluate_quotient(f, alpha, q) == doctest::Approx(h).epsilon(1e-12));
  }

  // 0-homogeneity
  auto f = ZonalFunction::sample(g, [](double z) { return 1.0 + 0.4 * z + 0.2 * z * z; });
  const double base = evaluate_quotient(f, 2.0, 3.0);
  for (double c : {0.1, 7.0}) {
    ZonalFunction fc(g, (c * f.values).eval());
    CHECK(std::abs(evaluate_quotient(fc, 2.0, 3.0) - base) < 1e-12 * base);
  }

  Eigen::VectorXd zero = Eigen::VectorXd::Zero(g->size());
  CHECK_THROWS_AS(evaluate_quotient(ZonalFunction(g, zero), 1.0, 3.0), std::domain_error);
}

TEST_CASE("schrodinger pencil: structure and free spectrum") {
  for (int d : {2, 3}) {
    auto g = JacobiGrid::build(d, 64);
    auto V0 = ZonalFunction::sample(g, [](double) { return 0.0; });
    auto pencil = assemble_schrodinger(V0, Sign::minus);

    CHECK((pencil.A - pencil.A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd(pencil.mass.asDiagonal()));
    CHECK(llt.info() == Eigen::Success);

    const Eigen::VectorXd evs = pencil_eigenvalues(pencil);
    CHECK(std::abs(evs[0]) < 1e-10);
    for (int k = 1; k <= 3; ++k) {
      const double exact = k * (k + d - 1.0);
      CHECK(std::abs(evs[k] - exact) < 1e-6 * exact);
    }

    auto [lam0, u0] = pencil_ground_state(pencil);
    CHECK(std::abs(lam0) < 1e-10);
    const double spread = u0.maxCoeff() - u0.minCoeff();
    CHECK(spread < 1e-8);  // constant eigenvector

    // eigenvector of the first excited state matches the Gegenbauer C_1 ~ z
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        pencil.mass.cwiseSqrt().cwiseInverse().asDiagonal() * pencil.A *
        pencil.mass.cwiseSqrt().cwiseInverse().asDiagonal());
    Eigen::VectorXd v1 = pencil.mass.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().col(1);
    Eigen::VectorXd geg(g->size());
    for (int i = 0; i < g->size(); ++i) geg[i] = gegenbauer(1, 0.5 * (d - 1.0), g->nodes()[i]);
    const double cosang = std::abs(v1.dot(geg)) / (v1.norm() * geg.norm());
    CHECK(cosang > 1.0 - 1e-8);
  }
}

TEST_CASE("schrodinger pencil: constant shift") {
  auto g = JacobiGrid::build(3, 48);
  const double c = 1.7;
  auto V = ZonalFunction::sample(g, [c](double) { return c; });
  auto lam_minus = pencil_eigenvalues(assemble_schrodinger(V, Sign::minus))[0];
  CHECK(std::abs(lam_minus + c) < 1e-10);
  auto lam_plus = pencil_eigenvalues(assemble_schrodinger(V, Sign::plus))[0];
  CHECK(std::abs(lam_plus - c) < 1e-10);
}

TEST_CASE("grid convergence of smooth functionals") {
  auto f = [](double z) { return std::exp(z) * (1.0 + 0.3 * z * z); };
  for (int d : {2, 3}) {
    auto g1 = JacobiGrid::build(d, 64);
    auto g2 = JacobiGrid::build(d, 80);
    const double i1 = integrate(ZonalFunction::sample(g1, f));
    const double i2 = integrate(ZonalFunction::sample(g2, f));
    CHECK(std::abs(i1 - i2) < 1e-10);
    const double d1 = dirichlet_form(ZonalFunction::sample(g1, f));
    const double d2 = dirichlet_form(ZonalFunction::sample(g2, f));
    CHECK(std::abs(d1 - d2) < 1e-10);
  }
}

TEST_CASE("discrete Poincare inequality") {
  for (int d : {1, 2, 3, 6}) {
    auto g = JacobiGrid::build(d, 64);
    // a handful of deterministic mean-zero test functions
    for (int s = 0; s < 5; ++s) {
      auto f = ZonalFunction::sample(g, [s](double z) {
        return std::sin((1.0 + s) * z) + 0.2 * s * z * z * z;
      });
      const double mean = integrate(f);
      f.values.array() -= mean;
      const double l2 = f.values.cwiseAbs2().dot(g->weights());
      CHECK(dirichlet_form(f) >= d * l2 - 1e-9);
    }
  }
}
