#include "esqpt/dos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <spdlog/spdlog.h>

#include "esqpt/banded_eigen.hpp"
#include "esqpt/error.hpp"
#include "esqpt/meanfield.hpp"
#include "esqpt/spectra.hpp"

namespace esqpt {

double DensityOfStates::integral() const {
  double s = 0;
  for (std::size_t i = 0; i < bins(); ++i) s += density[i] * width(i);
  return s;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t n_bins) {
  if (n_bins == 0) throw InvalidSpec("bin count must be positive");
  if (!(hi > lo)) hi = lo + 1.0;
  std::vector<double> e(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  e.back() = hi;
  return e;
}

namespace {

std::size_t bin_of(const std::vector<double>& edges, double x) {
  const std::size_t n = edges.size() - 1;
  if (x <= edges.front()) return 0;
  if (x >= edges.back()) return n - 1;
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw InvalidSpec("at least one bin is required");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw InvalidSpec("bin edges must be strictly increasing");
}

}  // namespace

DensityOfStates histogram(std::span<const double> levels, std::vector<double> edges) {
  check_edges(edges);
  DensityOfStates d;
  d.bin_edges = std::move(edges);
  d.density.assign(d.bin_edges.size() - 1, 0.0);
  for (double x : levels) d.density[bin_of(d.bin_edges, x)] += 1.0;
  for (std::size_t i = 0; i < d.bins(); ++i) d.density[i] /= d.width(i);
  d.total_count = static_cast<double>(levels.size());
  return d;
}

DensityOfStates dos_exact(const ModelParams& params, std::vector<double> edges) {
  const auto ev = band_eigenvalues(build_matrix(params));
  return histogram(ev, std::move(edges));
}

DensityOfStates dos_exact(const ModelParams& params, std::size_t n_bins) {
  const auto ev = band_eigenvalues(build_matrix(params));
  return histogram(ev, uniform_edges(ev.front(), ev.back(), n_bins));
}

DensityOfStates dos_semiclassical(const ModelParams& params, std::vector<double> edges, std::size_t grid,
                                  unsigned workers) {
  check_edges(edges);
  if (grid < 2) throw InvalidSpec("phase-space grid must have at least 2 points per axis");
  const std::size_t n_bins = edges.size() - 1;
  const double n = static_cast<double>(params.n_bosons());
  const double alpha = params.alpha(), omega = params.omega(), lambda = params.lambda();
  const double dphi = std::numbers::pi / static_cast<double>(grid);
  const double dxi = 2.0 * std::numbers::pi / static_cast<double>(grid);

  // Fixed row chunks merged in index order: the sum is independent of the worker count.
  constexpr std::size_t kRowsPerChunk = 32;
  const std::size_t n_chunks = (grid + kRowsPerChunk - 1) / kRowsPerChunk;
  std::vector<std::vector<double>> weight(n_chunks, std::vector<double>(n_bins, 0.0));
  std::vector<std::vector<std::size_t>> samples(n_chunks, std::vector<std::size_t>(n_bins, 0));

  std::vector<double> cos_xi(grid);
  for (std::size_t j = 0; j < grid; ++j) cos_xi[j] = std::cos((static_cast<double>(j) + 0.5) * dxi);

  auto run_chunk = [&](std::size_t c) {
    auto& w = weight[c];
    auto& cnt = samples[c];
    const std::size_t end = std::min(grid, (c + 1) * kRowsPerChunk);
    for (std::size_t i = c * kRowsPerChunk; i < end; ++i) {
      const double phi = (static_cast<double>(i) + 0.5) * dphi;
      const double sphi = std::sin(phi);
      const double occ = 0.5 * (1.0 - std::cos(phi));
      const double jac = 0.5 * n * sphi;
      for (std::size_t j = 0; j < grid; ++j) {
        const double q = sphi * cos_xi[j] + omega * occ;
        const double e = n * (alpha * occ - (1.0 - alpha) * q * q + lambda * occ);
        const std::size_t b = bin_of(edges, e);
        w[b] += jac;
        ++cnt[b];
      }
    }
  };

  unsigned nw = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  nw = static_cast<unsigned>(std::min<std::size_t>(nw, n_chunks));
  if (nw <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nw; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < n_chunks; c += nw) run_chunk(c);
      });
  }

  DensityOfStates d;
  d.bin_edges = std::move(edges);
  d.density.assign(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t c = 0; c < n_chunks; ++c)
    for (std::size_t b = 0; b < n_bins; ++b) {
      d.density[b] += weight[c][b];
      count[b] += samples[c][b];
    }
  double total = 0;
  for (double x : d.density) total += x;
  d.total_count = n + 1.0;
  for (std::size_t b = 0; b < n_bins; ++b) d.density[b] *= d.total_count / (total * d.width(b));
  d.sparse_bins = static_cast<std::size_t>(std::count_if(count.begin(), count.end(), [](std::size_t k) {
    return k < kMinSamplesPerBin;
  }));
  if (d.sparse_bins > 0)
    spdlog::warn("semiclassical density: {} of {} bins received fewer than {} phase-space samples", d.sparse_bins,
                 n_bins, kMinSamplesPerBin);
  return d;
}

DensityOfStates dos_semiclassical(const ModelParams& params, std::size_t n_bins, std::size_t grid,
                                  unsigned workers) {
  const auto ev = band_eigenvalues(build_matrix(params));
  return dos_semiclassical(params, uniform_edges(ev.front(), ev.back(), n_bins), grid, workers);
}

Singularities detect_singularities(const DensityOfStates& dos) {
  Singularities out;
  const auto& r = dos.density;
  const std::size_t n = r.size();
  if (n < 3) return out;
  std::vector<double> diff(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) diff[i] = std::abs(r[i + 1] - r[i]);
  std::vector<double> sorted = diff;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  // A perfectly flat density has no scale to compare with.
  const double scale = median > 0 ? median : std::numeric_limits<double>::infinity();

  std::size_t cusp_bin = 0;
  double best = -1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = std::abs(r[i + 1] - 2.0 * r[i] + r[i - 1]);
    if (s > best) {
      best = s;
      cusp_bin = i;
    }
  }
  const double cusp_score = best / scale;
  if (cusp_score > kSingularityThreshold) out.cusp = Singularity{dos.center(cusp_bin), cusp_bin, cusp_score};

  // Jumps are looked for below the strongest curvature feature even when it is not significant.
  const std::size_t limit = cusp_bin > kCuspGuard ? cusp_bin - kCuspGuard : 0;
  std::optional<std::size_t> jump_bin;
  double jump = 0;
  for (std::size_t i = 0; i + 1 < limit; ++i) {
    const double up = r[i + 1] - r[i];
    if (up > jump) {
      jump = up;
      jump_bin = i;
    }
  }
  if (jump_bin && jump / scale > kSingularityThreshold)
    out.jump = Singularity{dos.bin_edges[*jump_bin + 1], *jump_bin, jump / scale};
  return out;
}

}  // namespace esqpt
