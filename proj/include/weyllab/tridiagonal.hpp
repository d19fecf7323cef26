#pragma once

#include <cstddef>
#include <vector>

#include "weyllab/model_spaces.hpp"
#include "weyllab/spectrum.hpp"

namespace weyllab {

/// Symmetrized conservative discretization of the weighted Dirichlet form
///   int u'^2 sin^p t dt  against  int u^2 sin^p t dt
/// on a uniform vertex grid of [0, pi] with natural boundary closure.
/// The symmetric matrix is M^{-1/2} K M^{-1/2} with K the stiffness matrix and
/// M = diag(node_weights) the lumped masses.
struct TridiagonalForm {
  double exponent = 0.0;
  std::vector<double> nodes;
  std::vector<double> node_weights;
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const noexcept { return diag.size(); }
};

/// `nodes` grid points including both endpoints, spacing pi / (nodes - 1).
/// Lumped masses are exact integrals of the weight over dual cells, so they
/// stay positive at the endpoints even when the weight vanishes there.
TridiagonalForm assemble_form(const WeightedInterval& space, int nodes);

/// Number of eigenvalues of the symmetric matrix strictly below x.
std::size_t sturm_count(const TridiagonalForm& form, double x);

/// Lowest `count` eigenvalues by Sturm bisection, each bracketed to width <= tol.
std::vector<double> tridiag_eigenvalue_list(const TridiagonalForm& form, std::size_t count, double tol);
Spectrum tridiag_eigenvalues(const TridiagonalForm& form, std::size_t count, double tol);

/// Eigenvalues plus eigenfunctions sampled at the nodes, orthonormal in the
/// weighted inner product sum_j w_j u(x_j) v(x_j). Vector i is stored in
/// functions[i * size .. (i + 1) * size).
struct EigenPairs {
  std::vector<double> values;
  std::vector<double> functions;
  std::size_t size = 0;

  const double* function(std::size_t i) const noexcept { return functions.data() + i * size; }
};

/// Inverse iteration (3 sweeps) on top of the bisection eigenvalues.
EigenPairs tridiag_eigenpairs(const TridiagonalForm& form, std::size_t count, double tol,
                              unsigned threads = 1);

}  // namespace weyllab
