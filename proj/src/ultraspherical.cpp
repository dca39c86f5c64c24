#include "sphereint/ultraspherical.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace sphereint {

namespace {

// Recurrence coefficients of the monic Jacobi polynomials for the weight
// (1-x)^a (1+x)^b; Golub-Welsch turns them into nodes and weights.
void jacobi_recurrence(int N, double a, double b, Eigen::VectorXd& alpha, Eigen::VectorXd& beta) {
  alpha.resize(N);
  beta.resize(N);
  const double apb = a + b;
  alpha[0] = (b - a) / (apb + 2.0);
  beta[0] = 0.0;  // unused; the total mass is normalized away
  for (int k = 1; k < N; ++k) {
    const double t = 2.0 * k + apb;
    alpha[k] = (b * b - a * a) / (t * (t + 2.0));
    if (k == 1)
      beta[k] = 4.0 * (a + 1.0) * (b + 1.0) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
    else
      beta[k] = 4.0 * k * (k + a) * (k + b) * (k + apb) / (t * t * (t + 1.0) * (t - 1.0));
  }
}

}  // namespace

std::shared_ptr<const JacobiGrid> JacobiGrid::build(int d, int N) {
  if (d < 1) throw std::domain_error("JacobiGrid: requires d >= 1");
  if (N < 8) throw std::domain_error("JacobiGrid: requires N >= 8");

  const double lam = 0.5 * d - 1.0;  // a = b = d/2 - 1
  Eigen::VectorXd alpha, beta;
  jacobi_recurrence(N, lam, lam, alpha, beta);

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    T(k, k) = alpha[k];
    if (k + 1 < N) {
      const double off = std::sqrt(beta[k + 1]);
      T(k, k + 1) = off;
      T(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success) throw solver_error("JacobiGrid: Golub-Welsch eigensolve failed");

  auto grid = std::shared_ptr<JacobiGrid>(new JacobiGrid());
  grid->d_ = d;
  grid->N_ = N;
  grid->nodes_ = es.eigenvalues();
  grid->weights_.resize(N);
  // weights w_i = mu0 * q_{1i}^2 with mu0 = 1 (probability normalization)
  for (int i = 0; i < N; ++i) {
    const double q1 = es.eigenvectors()(0, i);
    grid->weights_[i] = q1 * q1;
  }

  // Barycentric differentiation matrix. Only ratios of the barycentric
  // weights enter, so they are formed in log space to avoid underflow at
  // large N.
  Eigen::VectorXd logw(N);
  Eigen::VectorXd sign(N);
  for (int j = 0; j < N; ++j) {
    double s = 1.0, lw = 0.0;
    for (int k = 0; k < N; ++k) {
      if (k == j) continue;
      const double diff = grid->nodes_[j] - grid->nodes_[k];
      lw -= std::log(std::abs(diff));
      if (diff < 0) s = -s;
    }
    logw[j] = lw;
    sign[j] = s;
  }
  grid->diff_.resize(N, N);
  for (int i = 0; i < N; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const double ratio = sign[j] * sign[i] * std::exp(logw[j] - logw[i]);
      const double dij = ratio / (grid->nodes_[i] - grid->nodes_[j]);
      grid->diff_(i, j) = dij;
      rowsum += dij;
    }
    grid->diff_(i, i) = -rowsum;  // exact annihilation of constants
  }
  return grid;
}

std::shared_ptr<const JacobiGrid> JacobiGrid::cached(int d, int N) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::shared_ptr<const JacobiGrid>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_pair(d, N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto grid = build(d, N);
  cache.emplace(key, grid);
  return grid;
}

const Eigen::MatrixXd& JacobiGrid::stiffness() const {
  std::call_once(stiffness_once_, [this] {
    Eigen::VectorXd wnu(N_);
    for (int i = 0; i < N_; ++i) wnu[i] = weights_[i] * (1.0 - nodes_[i] * nodes_[i]);
    stiffness_ = diff_.transpose() * wnu.asDiagonal() * diff_;
    // symmetrize away the last bits of roundoff
    stiffness_ = 0.5 * (stiffness_ + stiffness_.transpose()).eval();
  });
  return stiffness_;
}

namespace {

void check_data(const ZonalFunction& f) {
  if (!f.grid) throw data_error("ZonalFunction: missing grid");
  if (f.values.size() != f.grid->size()) throw data_error("ZonalFunction: size mismatch");
  if (!f.values.allFinite()) throw data_error("ZonalFunction: non-finite nodal values");
}

}  // namespace

double integrate(const ZonalFunction& f) {
  check_data(f);
  return f.grid->weights().dot(f.values);
}

double dirichlet_form(const ZonalFunction& f) {
  check_data(f);
  const Eigen::VectorXd df = f.grid->differentiation() * f.values;
  double acc = 0.0;
  for (int i = 0; i < f.grid->size(); ++i) {
    const double z = f.grid->nodes()[i];
    acc += f.grid->weights()[i] * (1.0 - z * z) * df[i] * df[i];
  }
  return acc;
}

double norm_q(const ZonalFunction& f, double q) {
  check_data(f);
  if (is_infinite_q(q)) return f.values.cwiseAbs().maxCoeff();
  if (!(q > 0)) throw std::domain_error("norm_q: requires q > 0");
  double acc = 0.0;
  for (int i = 0; i < f.grid->size(); ++i)
    acc += f.grid->weights()[i] * std::pow(std::abs(f.values[i]), q);
  return std::pow(acc, 1.0 / q);
}

double evaluate_quotient(const ZonalFunction& f, double alpha, double q) {
  check_data(f);
  if (!(alpha > 0)) throw std::domain_error("evaluate_quotient: requires alpha > 0");
  if (!(q > 0)) throw std::domain_error("evaluate_quotient: requires q > 0");
  const double nq = norm_q(f, q);
  if (nq == 0.0) throw std::domain_error("evaluate_quotient: f is identically zero");
  const double l2 = f.values.cwiseAbs2().dot(f.grid->weights());
  return (dirichlet_form(f) + alpha * l2) / (nq * nq);
}

SchrodingerPencil assemble_schrodinger(const ZonalFunction& V, Sign sign) {
  check_data(V);
  SchrodingerPencil pencil;
  pencil.grid = V.grid;
  pencil.A = V.grid->stiffness();
  const double s = (sign == Sign::minus) ? -1.0 : 1.0;
  for (int i = 0; i < V.grid->size(); ++i)
    pencil.A(i, i) += s * V.grid->weights()[i] * V.values[i];
  pencil.mass = V.grid->weights();
  return pencil;
}

namespace {

Eigen::MatrixXd mass_scaled(const SchrodingerPencil& pencil) {
  const Eigen::VectorXd mhalf = pencil.mass.cwiseSqrt().cwiseInverse();
  return mhalf.asDiagonal() * pencil.A * mhalf.asDiagonal();
}

}  // namespace

Eigen::VectorXd pencil_eigenvalues(const SchrodingerPencil& pencil) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass_scaled(pencil), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw solver_error("pencil_eigenvalues: eigensolve failed");
  return es.eigenvalues();
}

std::pair<double, Eigen::VectorXd> pencil_ground_state(const SchrodingerPencil& pencil) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass_scaled(pencil));
  if (es.info() != Eigen::Success) throw solver_error("pencil_ground_state: eigensolve failed");
  Eigen::VectorXd u = pencil.mass.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().col(0);
  const double l2 = u.cwiseAbs2().dot(pencil.mass);
  u /= std::sqrt(l2);
  if (u.sum() < 0) u = -u;
  return {es.eigenvalues()[0], u};
}

Eigen::VectorXd barycentric_resample(const Eigen::VectorXd& x, const Eigen::VectorXd& f,
                                     const Eigen::VectorXd& t) {
  const int n = static_cast<int>(x.size());
  if (f.size() != n || n < 2) throw data_error("barycentric_resample: bad data sizes");
  // log-scaled barycentric weights (only ratios matter)
  Eigen::VectorXd logw(n), sign(n);
  for (int j = 0; j < n; ++j) {
    double s = 1.0, lw = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double diff = x[j] - x[k];
      if (diff == 0.0) throw data_error("barycentric_resample: duplicate abscissae");
      lw -= std::log(std::abs(diff));
      if (diff < 0) s = -s;
    }
    logw[j] = lw;
    sign[j] = s;
  }
  const double lw0 = logw.maxCoeff();

  Eigen::VectorXd out(t.size());
  for (int i = 0; i < t.size(); ++i) {
    double num = 0.0, den = 0.0;
    bool exact = false;
    for (int j = 0; j < n; ++j) {
      const double diff = t[i] - x[j];
      if (diff == 0.0) {
        out[i] = f[j];
        exact = true;
        break;
      }
      const double wj = sign[j] * std::exp(logw[j] - lw0);
      num += wj / diff * f[j];
      den += wj / diff;
    }
    if (!exact) out[i] = num / den;
  }
  return out;
}

}  // namespace sphereint
