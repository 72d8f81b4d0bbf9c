#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esqpt/cache.hpp"
#include "esqpt/spectra.hpp"

namespace esqpt {

/// Runs fn(i) for i in [0, n) on at most `workers` threads (0 = hardware
/// concurrency). Results are stored by index, so the output order never depends
/// on scheduling. The first exception thrown by any task is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned workers, const std::function<T(std::size_t)>& fn);

struct LevelsTable {
  double omega = 0;
  long n_bosons = 0;
  std::vector<double> alphas;
  std::vector<std::vector<double>> levels;  // levels[i] is the spectrum at alphas[i]
};

LevelsTable levels_scan(double omega, long n_bosons, const std::vector<double>& alpha_grid, unsigned workers = 0);
/// Columns alpha,level,E.
void write_levels_csv(std::ostream& out, const LevelsTable& table);

struct HorizonPolicy {
  int grid_points = 2048;
  int max_doublings = 4;
};

struct SweepSpec {
  double alpha = 0;
  double omega = 0;
  std::vector<double> lambda_grid;
  std::vector<long> n_list;
  Method method = Method::exact;
  HorizonPolicy horizon;

  /// Throws InvalidSpec unless grids are nonempty and ascending and every N >= 10.
  void validate() const;
};

/// r_max at one parameter point, by the requested method.
double rmax_point(const ModelParams& params, Method method = Method::exact, const HorizonPolicy& horizon = {});

struct RmaxCurve {
  long n_bosons = 0;
  std::vector<double> lambdas;
  std::vector<double> rmax;
  double dip_lambda = 0;  // grid minimiser
  double dip_value = 0;
};

/// One curve per N in spec.n_list order. When `cache` is given, each point is
/// looked up before it is computed and stored afterwards.
std::vector<RmaxCurve> rmax_sweep(const SweepSpec& spec, unsigned workers = 0, const Cache* cache = nullptr);
/// Columns N,lambda,rmax.
void write_rmax_csv(std::ostream& out, const std::vector<RmaxCurve>& curves);

struct DipSearch {
  double coarse_step = 0.05;
  double fine_step = 0.005;
  double lambda_min = 0.05;
  double lambda_max = 2.5;
};

struct DipResult {
  double lambda = 0;
  double rmax = 0;
  RmaxCurve coarse;
  RmaxCurve fine;
};

/// Coarse grid over [lambda_min, lambda_max] then a fine grid of +-coarse_step
/// around the coarse minimiser.
DipResult locate_dip(double alpha, double omega, long n_bosons, const DipSearch& search = {}, unsigned workers = 0,
                     const Cache* cache = nullptr);

struct ScalingFit {
  double amplitude = 0;
  double gamma = 0;
  double stderr_gamma = 0;
  double residual = 0;  // root-mean-square residual in log space
};

/// Least squares of log r = log A - gamma log N. Throws InvalidSpec for fewer than
/// four points, mismatched lengths or nonpositive values.
ScalingFit scaling_fit(const std::vector<double>& n_list, const std::vector<double>& rmax);

struct ProbeResult {
  std::vector<double> lambdas;
  std::vector<DecoherenceSignal> traces;
  std::vector<double> rmax;
  double max_slope = 0;  // max |d r_max / d lambda| between neighbouring probes
};

ProbeResult first_order_probe(double alpha, double omega, const std::vector<double>& lambda_list, long n_bosons,
                              const std::vector<double>& times, unsigned workers = 0);

/// Local dips d_i = max(0, (r_{i-1} + r_{i+1})/2 - r_i) over interior grid points.
std::vector<double> local_dips(const std::vector<double>& rmax);

/// Run record written next to every CLI output.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> outputs;
  double runtime_seconds = 0;
  std::string to_json() const;
};

}  // namespace esqpt

#include "esqpt/detail/parallel_map.hpp"
