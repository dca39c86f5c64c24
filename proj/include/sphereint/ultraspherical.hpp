#ifndef SPHEREINT_ULTRASPHERICAL_HPP
#define SPHEREINT_ULTRASPHERICAL_HPP

#include <Eigen/Core>
#include <memory>
#include <mutex>

#include "sphereint/constants.hpp"

// Zonal functions on S^d reduce to functions of z in [-1,1] integrated
// against the probability measure dnu_d = Z_d^{-1} (1-z^2)^(d/2-1) dz, with
// Dirichlet form  int |f'|^2 (1-z^2) dnu_d.  This module provides the
// Gauss-Jacobi quadrature grid, barycentric spectral differentiation, and the
// assembly of the discrete Schrodinger pencil for -Delta -/+ V on zonal
// functions.

namespace sphereint {

class JacobiGrid {
 public:
  /// Gauss-Jacobi nodes/weights for the weight (1-z^2)^(d/2-1), normalized so
  /// the weights sum to 1, plus the spectral differentiation matrix on the
  /// same nodes. Requires d >= 1 and N >= 8.
  static std::shared_ptr<const JacobiGrid> build(int d, int N);

  /// Process-wide memoized build (grids are immutable and shareable).
  static std::shared_ptr<const JacobiGrid> cached(int d, int N);

  int dimension() const { return d_; }
  int size() const { return N_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& differentiation() const { return diff_; }

  /// Stiffness matrix S = D^T diag(w_i (1-z_i^2)) D of the Dirichlet form;
  /// built lazily on first use and cached (grids are logically immutable).
  const Eigen::MatrixXd& stiffness() const;

 private:
  JacobiGrid() = default;
  int d_ = 0;
  int N_ = 0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd diff_;
  mutable std::once_flag stiffness_once_;
  mutable Eigen::MatrixXd stiffness_;
};

using GridPtr = std::shared_ptr<const JacobiGrid>;

/// Nodal values of a zonal function on a shared grid.
struct ZonalFunction {
  GridPtr grid;
  Eigen::VectorXd values;

  ZonalFunction() = default;
  ZonalFunction(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {}

  /// Sample a function of z at the grid nodes.
  template <class F>
  static ZonalFunction sample(const GridPtr& g, F&& f) {
    Eigen::VectorXd v(g->size());
    for (int i = 0; i < g->size(); ++i) v[i] = f(g->nodes()[i]);
    return ZonalFunction(g, std::move(v));
  }
};

/// Quadrature value of int f dnu_d. Rejects non-finite nodal data.
double integrate(const ZonalFunction& f);

/// int |f'|^2 (1-z^2) dnu_d  (the H^1 seminorm of the zonal function on S^d).
double dirichlet_form(const ZonalFunction& f);

/// (int |f|^q dnu_d)^(1/q); for q = infinity, the nodal max norm.
double norm_q(const ZonalFunction& f, double q);

/// F_alpha[f] = (dirichlet_form(f) + alpha int f^2) / (int |f|^q)^(2/q);
/// 0-homogeneous in f. Requires f != 0.
double evaluate_quotient(const ZonalFunction& f, double alpha, double q);

enum class Sign { minus, plus };

/// Discrete pencil (A, M) for the quadratic form of -Delta -/+ V on zonal
/// functions: A = S -/+ diag(w V), M = diag(w). Both dsigma-normalized.
struct SchrodingerPencil {
  GridPtr grid;
  Eigen::MatrixXd A;
  Eigen::VectorXd mass;  // diagonal of M
};

SchrodingerPencil assemble_schrodinger(const ZonalFunction& V, Sign sign);

/// All generalized eigenvalues of the pencil in increasing order.
Eigen::VectorXd pencil_eigenvalues(const SchrodingerPencil& pencil);

/// Smallest generalized eigenvalue and its (mass-normalized) eigenvector.
std::pair<double, Eigen::VectorXd> pencil_ground_state(const SchrodingerPencil& pencil);

/// Barycentric Lagrange interpolation through the data (x_j, f_j), evaluated
/// at the points t_i. Exact at the data nodes.
Eigen::VectorXd barycentric_resample(const Eigen::VectorXd& x, const Eigen::VectorXd& f,
                                     const Eigen::VectorXd& t);

}  // namespace sphereint

#endif
