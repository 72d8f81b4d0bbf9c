#pragma once

#include <complex>
#include <vector>

#include "esqpt/model.hpp"

namespace esqpt {

/// <psi0| exp(-i H t_j) |psi0> for an increasing time grid, by Chebyshev expansion of
/// the propagator between consecutive times. Memory is O(dimension). Each step
/// truncates the expansion once Bessel coefficients drop below `tolerance`.
std::vector<std::complex<double>> chebyshev_overlaps(const BandedHamiltonian& h, const std::vector<double>& psi0,
                                                     const std::vector<double>& times, double tolerance = 1e-13);

}  // namespace esqpt
