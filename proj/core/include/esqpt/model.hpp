#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace esqpt {

/// One point of the environment/coupling parameter space.
///
/// The environment Hamiltonian is  alpha n_t - (1-alpha)/N Q Q  with
/// Q = s't + t's + omega t't, and the qubit adds lambda n_t on its |1> branch.
/// Values are validated once at construction; accessors never re-check.
class ModelParams {
 public:
  /// Throws InvalidSpec unless n_bosons >= 1, alpha in [0,1], omega >= 0, lambda >= 0.
  ModelParams(double alpha, double omega, double lambda, long n_bosons);

  double alpha() const { return alpha_; }
  double omega() const { return omega_; }
  double lambda() const { return lambda_; }
  long n_bosons() const { return n_; }

  /// Same point with a different qubit coupling.
  ModelParams with_lambda(double lambda) const { return {alpha_, omega_, lambda, n_}; }
  ModelParams with_n(long n_bosons) const { return {alpha_, omega_, lambda_, n_bosons}; }

  /// Flat record {alpha, omega, lambda, N}.
  std::map<std::string, std::string> to_record() const;
  /// Inverse of to_record(). Missing lambda defaults to 0; other keys are required.
  static ModelParams from_record(const std::map<std::string, std::string>& record);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  double omega_;
  double lambda_;
  long n_;
};

/// Coefficients of the generic two-level boson Hamiltonian
///   a t't + b(t's + s't) + c t's s't + d(t's t's + s't s't)
///   + e(t's t't + t't s't) + f t't t't
/// together with the constant shift `delta` that is never added to matrices.
struct STCoefficients {
  double a = 0;
  double b = 0;
  double c = 0;
  double d = 0;
  double e = 0;
  double f = 0;
  double delta = 0;
};

STCoefficients coefficients(const ModelParams& params);

/// Real symmetric matrix of bandwidth two in the Fock basis |N l>, l = 0..N.
/// Only the diagonal and the two lower sub-diagonals are stored.
struct BandedHamiltonian {
  std::vector<double> diag;      // size N+1
  std::vector<double> offdiag1;  // size N,   element (l, l+1)
  std::vector<double> offdiag2;  // size N-1, element (l, l+2)

  std::size_t dimension() const { return diag.size(); }
  /// Element (i, j); zero outside the band.
  double at(std::size_t i, std::size_t j) const;
  /// Row-major dense copy, for small dimensions and tests.
  std::vector<double> dense() const;
  /// y = H x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  /// True when every first off-diagonal is exactly zero, i.e. the matrix splits
  /// into even-l and odd-l blocks.
  bool parity_conserving() const;
};

/// Exact Fock-basis matrix of the model, without the constant shift `delta`.
BandedHamiltonian build_matrix(const ModelParams& params);

}  // namespace esqpt
