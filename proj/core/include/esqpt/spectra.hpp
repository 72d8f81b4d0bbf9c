#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "esqpt/model.hpp"

namespace esqpt {

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> ground_vector;
  /// Row k is the eigenvector of eigenvalues[k]; filled only when requested.
  std::vector<std::vector<double>> eigenvectors;
  /// w_k = <k|g>^2 for a reference vector g, when one was supplied.
  std::optional<std::vector<double>> overlap_weights;
};

/// Full spectrum of a banded Hamiltonian. The ground vector is the lowest
/// eigenvector; for parity-conserving matrices it is taken in the even-l sector,
/// which is where the exact (non-degenerate) ground state lives.
SpectrumResult eigensystem(const BandedHamiltonian& h, bool need_vectors);

/// Same, with the parameter point attached to any NumericalFailure message.
SpectrumResult eigensystem(const ModelParams& params, bool need_vectors);

/// Ground state of the matrix, parity resolved as in eigensystem().
std::vector<double> ground_state(const BandedHamiltonian& h, double lowest_eigenvalue);

/// Spectral decomposition of the H0 ground state in the eigenbasis of H1:
/// r(t) = sum_k weights[k] exp(-i energies[k] t).
struct SpectralWeights {
  std::vector<double> energies;  // eigenvalues of H1 that carry weight, ascending
  std::vector<double> weights;   // renormalised to sum 1
  std::vector<double> low_levels;  // lowest (up to) 10 eigenvalues of H1
  double dropped_mass = 0;       // total weight discarded below the cutoff
  ModelParams source{0.0, 0.0, 0.0, 1};
};

/// Weights below this are dropped from the spectral sum and the rest renormalised.
inline constexpr double kWeightCutoff = 1e-14;

/// `params` gives (alpha, omega, N) and the coupling lambda of H1.
SpectralWeights spectral_weights(const ModelParams& params);

std::complex<double> evaluate(const SpectralWeights& sw, double t);

enum class Method { exact, tda, tda2 };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct DecoherenceSignal {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  ModelParams source{0.0, 0.0, 0.0, 1};  // lambda field is the H1 coupling
  Method method = Method::exact;

  std::vector<double> modulus() const;
};

enum class Propagation { spectral_sum, chebyshev };

/// Exact decoherence factor <0,g| exp(-i H1 t) |0,g> with H0 = params at lambda = 0
/// and H1 = params at `lambda`. No global phase is removed.
/// Throws InvalidSpec if times are negative or not strictly increasing.
DecoherenceSignal decoherence_factor(const ModelParams& params, double lambda, const std::vector<double>& times,
                                     Propagation how = Propagation::spectral_sum);

void validate_time_grid(const std::vector<double>& times);

struct QubitState {
  std::complex<double> amp0;
  std::complex<double> amp1;

  /// Throws InvalidSpec unless |a|^2 + |b|^2 = 1 within 1e-12.
  QubitState(std::complex<double> a, std::complex<double> b);
};

using DensityMatrix2 = std::array<std::array<std::complex<double>, 2>, 2>;

/// Qubit reduced density matrix for decoherence factor r. Rejects |r| > 1 + 1e-8.
DensityMatrix2 reduced_density_matrix(const QubitState& qubit, std::complex<double> r);
double purity(const DensityMatrix2& rho);

/// Grid index of the first revival peak of a sampled |r(t)|.
///
/// Starting from the first interior local minimum, local maxima (strict rise then
/// strict fall over three samples) above kRevivalFloor are visited in time order;
/// the first one that is higher than the next such maximum is the revival peak.
/// If no later maximum exists the peak is accepted when it lies in the first half of
/// the window and the signal has since fallen below half its height; otherwise
/// HorizonTooShort is thrown.
std::size_t revival_peak_index(const std::vector<double>& modulus);

inline constexpr double kRevivalFloor = 1e-3;

/// Second maximum of |r(t)| read off the samples (no refinement).
double r_max(const DecoherenceSignal& signal);

struct RmaxResult {
  double value = 0;
  double time = 0;
  double horizon = 0;
};

/// Initial horizon 4 pi / Delta1 with Delta1 the mean spacing of the lowest 10 levels of H1.
double default_horizon(const SpectralWeights& sw);

/// r_max from the spectral sum: 2048-point grid over [0, horizon], revival detection,
/// golden-section refinement of the peak. The horizon is doubled (up to
/// `max_doublings` times) while the revival is incomplete.
RmaxResult r_max(const SpectralWeights& sw, int grid_points = 2048, int max_doublings = 4);

}  // namespace esqpt
