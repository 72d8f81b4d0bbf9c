#include "esqpt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

#include "esqpt/banded_eigen.hpp"
#include "esqpt/error.hpp"
#include "esqpt/propagator.hpp"

namespace esqpt {

namespace {

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(alpha=" << p.alpha() << ", omega=" << p.omega() << ", lambda=" << p.lambda() << ", N=" << p.n_bosons()
     << ")";
  return os.str();
}

}  // namespace

std::vector<double> ground_state(const BandedHamiltonian& h, double lowest) {
  const std::size_t n = h.dimension();
  std::vector<double> start(n, 1.0);
  if (h.parity_conserving())
    for (std::size_t i = 1; i < n; i += 2) start[i] = 0.0;
  return lowest_eigenpair(h, lowest, start).vector;
}

SpectrumResult eigensystem(const BandedHamiltonian& h, bool need_vectors) {
  const std::size_t n = h.dimension();
  SpectrumResult out;
  if (need_vectors) {
    std::vector<std::vector<double>> unit(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) unit[i][i] = 1.0;
    BandEigenResult r = band_eigen(h, unit);
    out.eigenvalues = std::move(r.eigenvalues);
    out.eigenvectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) out.eigenvectors[k][j] = r.projection(k, j);
  } else {
    out.eigenvalues = band_eigenvalues(h);
  }
  out.ground_vector = ground_state(h, out.eigenvalues.front());
  return out;
}

SpectrumResult eigensystem(const ModelParams& params, bool need_vectors) {
  try {
    return eigensystem(build_matrix(params), need_vectors);
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(std::string(e.what()) + " at " + describe(params));
  }
}

SpectralWeights spectral_weights(const ModelParams& params) {
  try {
    const BandedHamiltonian h0 = build_matrix(params.with_lambda(0.0));
    const double e0 = band_eigenvalues(h0).front();
    const std::vector<double> g = ground_state(h0, e0);

    const BandedHamiltonian h1 = build_matrix(params);
    const std::vector<std::vector<double>> tracked{g};
    const BandEigenResult r = band_eigen(h1, tracked);

    SpectralWeights sw;
    sw.source = params;
    const std::size_t n = r.eigenvalues.size();
    sw.low_levels.assign(r.eigenvalues.begin(), r.eigenvalues.begin() + std::min<std::size_t>(10, n));
    double kept = 0.0, dropped = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = r.projection(k, 0) * r.projection(k, 0);
      if (w < kWeightCutoff) {
        dropped += w;
        continue;
      }
      sw.energies.push_back(r.eigenvalues[k]);
      sw.weights.push_back(w);
      kept += w;
    }
    if (!(kept > 0.0)) throw NumericalFailure("all spectral weights vanished");
    for (double& w : sw.weights) w /= kept;
    sw.dropped_mass = dropped;
    if (dropped > 1e-12)
      spdlog::debug("spectral weights: dropped mass {:.3e} renormalised at {}", dropped, describe(params));
    return sw;
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(std::string(e.what()) + " at " + describe(params));
  }
}

std::complex<double> evaluate(const SpectralWeights& sw, double t) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < sw.energies.size(); ++k) {
    const double phase = sw.energies[k] * t;
    re += sw.weights[k] * std::cos(phase);
    im -= sw.weights[k] * std::sin(phase);
  }
  return {re, im};
}

std::string to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::tda: return "tda";
    case Method::tda2: return "tda2";
  }
  return "exact";
}

Method method_from_string(const std::string& s) {
  if (s == "exact") return Method::exact;
  if (s == "tda") return Method::tda;
  if (s == "tda2") return Method::tda2;
  throw InvalidSpec("unknown method '" + s + "' (expected exact, tda or tda2)");
}

std::vector<double> DecoherenceSignal::modulus() const {
  std::vector<double> m(values.size());
  std::transform(values.begin(), values.end(), m.begin(), [](auto v) { return std::abs(v); });
  return m;
}

void validate_time_grid(const std::vector<double>& times) {
  if (times.empty()) throw InvalidSpec("empty time grid");
  if (!(times.front() >= 0.0)) throw InvalidSpec("time grid must start at t >= 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidSpec("time grid must be strictly increasing");
}

DecoherenceSignal decoherence_factor(const ModelParams& params, double lambda, const std::vector<double>& times,
                                     Propagation how) {
  validate_time_grid(times);
  const ModelParams p1 = params.with_lambda(lambda);
  DecoherenceSignal s;
  s.times = times;
  s.source = p1;
  s.method = Method::exact;
  if (how == Propagation::spectral_sum) {
    const SpectralWeights sw = spectral_weights(p1);
    s.values.reserve(times.size());
    for (double t : times) s.values.push_back(evaluate(sw, t));
  } else {
    try {
      const BandedHamiltonian h0 = build_matrix(params.with_lambda(0.0));
      const std::vector<double> g = ground_state(h0, band_eigenvalues(h0).front());
      s.values = chebyshev_overlaps(build_matrix(p1), g, times);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string(e.what()) + " at " + describe(p1));
    }
  }
  return s;
}

QubitState::QubitState(std::complex<double> a, std::complex<double> b) : amp0(a), amp1(b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) throw InvalidSpec("qubit state must be normalised");
}

DensityMatrix2 reduced_density_matrix(const QubitState& q, std::complex<double> r) {
  if (std::abs(r) > 1.0 + 1e-8) throw InvalidSpec("|r| exceeds 1");
  const auto a = q.amp0;
  const auto b = q.amp1;
  DensityMatrix2 rho;
  rho[0][0] = std::norm(a);
  rho[0][1] = a * std::conj(b) * r;
  rho[1][0] = std::conj(a) * b * std::conj(r);
  rho[1][1] = std::norm(b);
  return rho;
}

double purity(const DensityMatrix2& rho) {
  double p = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) p += std::norm(rho[i][j]);
  return p;
}

std::size_t revival_peak_index(const std::vector<double>& m) {
  const std::size_t n = m.size();
  std::size_t i = 1;
  while (i + 1 < n && !(m[i] < m[i - 1] && m[i] < m[i + 1])) ++i;
  if (i + 1 >= n) throw HorizonTooShort("no interior minimum of |r(t)|");

  auto is_peak = [&](std::size_t j) { return m[j] > m[j - 1] && m[j] > m[j + 1] && m[j] > kRevivalFloor; };
  std::size_t candidate = 0;
  bool have = false;
  for (std::size_t j = i + 1; j + 1 < n; ++j) {
    if (!is_peak(j)) continue;
    if (have && m[j] < m[candidate]) return candidate;
    candidate = j;
    have = true;
  }
  if (!have) throw HorizonTooShort("no revival maximum of |r(t)|");
  // Last maximum on the grid: accept it only if the revival has clearly ended and the
  // window has run at least as long again, so a larger revival just beyond it is not missed.
  if (2 * candidate > n) throw HorizonTooShort("revival candidate in the second half of the window");
  for (std::size_t j = candidate + 1; j < n; ++j)
    if (m[j] < 0.5 * m[candidate]) return candidate;
  throw HorizonTooShort("revival still in progress at the end of the window");
}

double r_max(const DecoherenceSignal& signal) {
  const std::vector<double> m = signal.modulus();
  return m[revival_peak_index(m)];
}

double default_horizon(const SpectralWeights& sw) {
  const auto& lv = sw.low_levels;
  if (lv.size() < 2) throw InvalidSpec("need at least two levels to set a time horizon");
  const double spacing = (lv.back() - lv.front()) / static_cast<double>(lv.size() - 1);
  if (!(spacing > 0.0)) throw NumericalFailure("degenerate low-lying spectrum");
  return 4.0 * std::numbers::pi / spacing;
}

RmaxResult r_max(const SpectralWeights& sw, int grid_points, int max_doublings) {
  if (grid_points < 16) throw InvalidSpec("grid too coarse");
  double horizon = default_horizon(sw);
  for (int attempt = 0;; ++attempt) {
    const int pts = grid_points << attempt;
    std::vector<double> t(pts), m(pts);
    for (int i = 0; i < pts; ++i) {
      t[i] = horizon * i / (pts - 1);
      m[i] = std::abs(evaluate(sw, t[i]));
    }
    std::size_t j = 0;
    try {
      j = revival_peak_index(m);
    } catch (const HorizonTooShort&) {
      if (attempt >= max_doublings) throw;
      horizon *= 2.0;
      continue;
    }
    // Golden-section refinement inside the bracketing samples.
    double a = t[j - 1], b = t[j + 1];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = std::abs(evaluate(sw, x1)), f2 = std::abs(evaluate(sw, x2));
    for (int it = 0; it < 60 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = std::abs(evaluate(sw, x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = std::abs(evaluate(sw, x2));
      }
    }
    RmaxResult r;
    r.horizon = horizon;
    r.value = m[j];
    r.time = t[j];
    const double tm = 0.5 * (a + b);
    const double fm = std::abs(evaluate(sw, tm));
    if (fm > r.value) {
      r.value = fm;
      r.time = tm;
    }
    return r;
  }
}

}  // namespace esqpt
