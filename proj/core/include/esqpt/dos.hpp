#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "esqpt/model.hpp"

namespace esqpt {

/// Histogram density: density[i] * width(i) is the number of levels in bin i.
struct DensityOfStates {
  std::vector<double> bin_edges;  // ascending, size bins+1
  std::vector<double> density;
  double total_count = 0;
  /// Bins that received fewer than kMinSamplesPerBin phase-space samples (semiclassical only).
  std::size_t sparse_bins = 0;

  std::size_t bins() const { return density.size(); }
  double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
  double center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  /// sum density * width
  double integral() const;
};

inline constexpr std::size_t kDefaultBins = 200;
inline constexpr std::size_t kPhaseSpaceGrid = 2048;
inline constexpr std::size_t kMinSamplesPerBin = 10;

/// n_bins equal bins spanning [lo, hi].
std::vector<double> uniform_edges(double lo, double hi, std::size_t n_bins);

/// Histogram of the given levels, normalised to their count. Values outside the
/// edges are clamped into the end bins.
DensityOfStates histogram(std::span<const double> levels, std::vector<double> edges);

/// Eigenvalue histogram of the model over [E_min, E_max] of its spectrum.
DensityOfStates dos_exact(const ModelParams& params, std::size_t n_bins = kDefaultBins);
DensityOfStates dos_exact(const ModelParams& params, std::vector<double> edges);

/// Phase-space estimate: N * H(phi, xi) sampled on a grid x grid lattice with
/// measure (N/2) sin(phi) dphi dxi, binned and normalised to N+1 levels.
/// `workers` = 0 uses the hardware concurrency; the result does not depend on it.
DensityOfStates dos_semiclassical(const ModelParams& params, std::vector<double> edges,
                                  std::size_t grid = kPhaseSpaceGrid, unsigned workers = 0);
/// Same, over the range of the exact spectrum.
DensityOfStates dos_semiclassical(const ModelParams& params, std::size_t n_bins = kDefaultBins,
                                  std::size_t grid = kPhaseSpaceGrid, unsigned workers = 0);

struct Singularity {
  double energy = 0;
  std::size_t bin = 0;
  double score = 0;  // in units of the median absolute first difference
};

struct Singularities {
  std::optional<Singularity> cusp;
  std::optional<Singularity> jump;
};

inline constexpr double kSingularityThreshold = 5.0;
/// Bins next to the cusp that are not considered for the jump.
inline constexpr std::size_t kCuspGuard = 3;

/// Cusp: bin of maximal |second difference|, reported at the bin centre.
/// Jump: maximal upward forward difference below the cusp (outside the guard),
/// reported at the shared bin edge. Entries scoring at most
/// kSingularityThreshold median absolute differences are absent.
Singularities detect_singularities(const DensityOfStates& dos);

}  // namespace esqpt
