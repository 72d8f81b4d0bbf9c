#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esqpt/model.hpp"

namespace esqpt {

/// Eigenvalues of a bandwidth-2 symmetric matrix together with the projections
/// <v_k | x_j> of a set of tracked vectors x_j onto its eigenvectors v_k.
///
/// The matrix is reduced to tridiagonal form by Givens bulge chasing and the
/// tridiagonal problem is solved by implicit QL. Every rotation is applied to the
/// tracked vectors instead of to an eigenvector matrix, so tracking m vectors costs
/// O(n^2 + n^2 m) time and O(n m) memory. Tracking the n unit vectors yields
/// the full eigenvector matrix.
struct BandEigenResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> projections;  // row-major, eigenvalues.size() x n_tracked
  std::size_t n_tracked = 0;

  double projection(std::size_t k, std::size_t j) const { return projections[k * n_tracked + j]; }
};

/// Throws NumericalFailure if QL does not converge.
BandEigenResult band_eigen(const BandedHamiltonian& h, std::span<const std::vector<double>> tracked);

/// Eigenvalues only.
std::vector<double> band_eigenvalues(const BandedHamiltonian& h);

/// Tridiagonal reduction, exposed for tests: on return `tracked` holds Q^T x for each
/// tracked vector, where Q^T H Q is the returned tridiagonal matrix.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n-1
};
Tridiagonal reduce_to_tridiagonal(const BandedHamiltonian& h, std::vector<double>& tracked_rowmajor,
                                  std::size_t n_tracked);

/// Implicit QL on a tridiagonal matrix. `tracked_rowmajor` (n x m) is rotated along,
/// so that on return row k holds the projections onto eigenvector k (unsorted).
/// Returns eigenvalues in the same (unsorted) order.
std::vector<double> tridiagonal_ql(Tridiagonal t, std::vector<double>& tracked_rowmajor, std::size_t n_tracked);

/// Lowest eigenpair by shifted inverse iteration with a banded Cholesky factorisation.
/// `start` selects the initial vector; components that are exactly zero stay zero
/// when the matrix does not couple them (used for parity-resolved ground states).
struct Eigenpair {
  double value = 0;
  std::vector<double> vector;
};
Eigenpair lowest_eigenpair(const BandedHamiltonian& h, double lowest_eigenvalue_estimate,
                           const std::vector<double>& start);

}  // namespace esqpt
