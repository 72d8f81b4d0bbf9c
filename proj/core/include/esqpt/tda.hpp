#pragma once

#include <vector>

#include "esqpt/model.hpp"
#include "esqpt/spectra.hpp"

namespace esqpt {

/// Expansion of the H0 condensate boson in the H1 deformed basis.
struct OverlapCoeffs {
  double f_gg = 1;
  double f_ge = 0;
};

OverlapCoeffs overlap_coeffs(double beta0, double beta1);

/// Diagonal elements of H in the deformed-condensate states with zero, one and two
/// excited bosons, and the derived one-phonon gap and two-phonon anharmonicity.
struct TdaElements {
  double ground = 0;      // <g|H|g>
  double one_phonon = 0;  // <e|H|e>
  double two_phonon = 0;  // <e^2|H|e^2>
  double energy0() const { return ground; }
  double delta() const { return one_phonon - ground; }
  double omega() const { return two_phonon / 2.0 - one_phonon + ground / 2.0; }
};

TdaElements tda_elements(const STCoefficients& k, long n_bosons, double beta);

struct TdaSetup {
  double beta0 = 0;
  double beta1 = 0;
  double f_gg = 1;
  double f_ge = 0;
  double e10 = 0;
  double delta_e1 = 0;
  double omega_e1 = 0;
  ModelParams h1{0.0, 0.0, 0.0, 1};  // coupled parameter point the elements refer to
};

/// Equilibrium deformations of H0 (coupling 0) and H1 (coupling lambda), their
/// overlap coefficients and the H1 elements.
TdaSetup tda_setup(const ModelParams& params, double lambda);
/// Setup from explicit deformations, for a given H1 parameter point.
TdaSetup tda_setup(const ModelParams& h1, double beta0, double beta1);

/// One-phonon closed form.
DecoherenceSignal r_tda(const TdaSetup& setup, long n_bosons, const std::vector<double>& times);

/// Binomial weights C(N,k) f_gg^{2(N-k)} f_ge^{2k}, computed in log space.
std::vector<double> binomial_weights(double f_gg, double f_ge, long n_bosons);

/// Weights below this are skipped in the anharmonic sum.
inline constexpr double kTdaWeightCutoff = 1e-18;

/// Anharmonic two-phonon extension.
DecoherenceSignal r_tda_extended(const TdaSetup& setup, long n_bosons, const std::vector<double>& times);

}  // namespace esqpt
