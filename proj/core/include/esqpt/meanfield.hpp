#pragma once

#include <optional>
#include <string>
#include <vector>

namespace esqpt {

/// Coherent-state energy per boson for real deformation beta:
///   beta^2/(1+beta^2)^2 * {5a-4 + 4 beta w (a-1) + beta^2 [a + w^2 (a-1)]}.
double energy_surface(double alpha, double omega, double beta);
/// d/dbeta of energy_surface.
double energy_surface_derivative(double alpha, double omega, double beta);

/// Surface of H1 = H0 + lambda n_t: energy_surface + lambda beta^2/(1+beta^2).
double coupled_surface(double alpha, double omega, double lambda, double beta);

enum class Phase { symmetric, broken, coexistence };
std::string to_string(Phase p);

struct MeanFieldPoint {
  double beta_e = 0;
  double energy_per_boson = 0;
  Phase phase = Phase::symmetric;
};

struct Minimization {
  MeanFieldPoint global;
  /// Distinct metastable well, separated from the global one by a barrier.
  std::optional<MeanFieldPoint> secondary;
};

/// Global minimum of the (optionally coupled) surface over beta in [-10, 10].
/// For omega = 0 the surface is even in beta and only beta >= 0 is reported.
Minimization minimize_surface(double alpha, double omega, double lambda = 0.0);

/// alpha_c = (4 + w^2)/(5 + w^2).
double critical_alpha(double omega);
/// Root in (alpha_c, 1) of the implicit spinodal equation. Throws InvalidSpec for omega <= 0.
double spinodal_alpha(double omega);
/// Residual of the spinodal equation, exposed for tests.
double spinodal_residual(double alpha, double omega);
/// Always 4/5: the curvature of the surface at beta = 0 is 2(5 alpha - 4).
double antispinodal_alpha(double omega);

/// Ground-state QPT coupling (1-alpha)(4+w^2) - alpha; absent when negative.
std::optional<double> lambda_star(double alpha, double omega);

/// lambda N beta^2/(1+beta^2).
double energy_transfer(long n_bosons, double beta, double lambda);

/// lambda solving E(beta_e)/N + lambda beta_e^2/(1+beta_e^2) = target with beta_e the
/// zero-coupling global minimiser; absent when beta_e = 0 or the root is negative.
std::optional<double> quench_coupling(double alpha, double omega, double target_energy_per_boson);

/// Coupling that carries the environment to the continuous ESQPT at E = 0.
std::optional<double> critical_coupling_continuous(double alpha, double omega);

struct PhaseSpacePoint {
  double phi;  // [0, pi]
  double xi;   // [0, 2 pi)
  PhaseSpacePoint(double phi, double xi);
};

/// Leading-order energy per boson in the coherent state with z = tan(phi/2) e^{i xi}:
///   alpha sin^2(phi/2) - (1-alpha) (sin(phi) cos(xi) + omega sin^2(phi/2))^2.
double complex_surface(double alpha, double omega, const PhaseSpacePoint& point);
/// Same without range checks, for grid sweeps.
double complex_surface_unchecked(double alpha, double omega, double phi, double xi);

struct SecondaryWell {
  double beta = 0;
  double energy_per_boson = 0;
};

/// Local minimum of the surface over beta < 0 (the xi = pi island), if one exists.
std::optional<SecondaryWell> first_order_well(double alpha, double omega);
/// Its energy per boson: the first-order ESQPT critical energy. Absent for omega = 0.
std::optional<double> first_order_critical_energy(double alpha, double omega);
std::optional<double> critical_coupling_first_order(double alpha, double omega);

struct CriticalCouplings {
  std::optional<double> lambda_star;
  std::optional<double> lambda_c2;
  std::optional<double> lambda_c1;
  std::optional<double> e_c1_per_boson;
};
CriticalCouplings critical_couplings(double alpha, double omega);

}  // namespace esqpt
