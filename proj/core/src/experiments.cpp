#include "esqpt/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "esqpt/banded_eigen.hpp"
#include "esqpt/error.hpp"
#include "esqpt/signal_io.hpp"
#include "esqpt/tda.hpp"

namespace esqpt {

LevelsTable levels_scan(double omega, long n_bosons, const std::vector<double>& alpha_grid, unsigned workers) {
  if (alpha_grid.empty()) throw InvalidSpec("alpha grid is empty");
  LevelsTable t;
  t.omega = omega;
  t.n_bosons = n_bosons;
  t.alphas = alpha_grid;
  // Validate every point before spawning work.
  for (double a : alpha_grid) (void)ModelParams(a, omega, 0.0, n_bosons);
  t.levels = parallel_map<std::vector<double>>(alpha_grid.size(), workers, [&](std::size_t i) {
    return band_eigenvalues(build_matrix(ModelParams(alpha_grid[i], omega, 0.0, n_bosons)));
  });
  return t;
}

void write_levels_csv(std::ostream& out, const LevelsTable& t) {
  out << "alpha,level,E\n";
  char buf[96];
  for (std::size_t i = 0; i < t.alphas.size(); ++i)
    for (std::size_t k = 0; k < t.levels[i].size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.10g,%zu,%.12g\n", t.alphas[i], k, t.levels[i][k]);
      out << buf;
    }
}

void SweepSpec::validate() const {
  if (lambda_grid.empty()) throw InvalidSpec("lambda grid is empty");
  if (n_list.empty()) throw InvalidSpec("size list is empty");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1])) throw InvalidSpec("lambda grid must be strictly ascending");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (!(n_list[i] > n_list[i - 1])) throw InvalidSpec("size list must be strictly ascending");
  for (long n : n_list)
    if (n < 10) throw InvalidSpec("environment sizes must be >= 10");
  for (double l : lambda_grid) (void)ModelParams(alpha, omega, l, n_list.front());
  if (horizon.grid_points < 16) throw InvalidSpec("time grid needs at least 16 points");
  if (horizon.max_doublings < 0) throw InvalidSpec("max doublings must be >= 0");
}

namespace {

double rmax_tda(const ModelParams& params, Method method, const HorizonPolicy& horizon) {
  const TdaSetup setup = tda_setup(params.with_lambda(0.0), params.lambda());
  if (!(std::abs(setup.delta_e1) > 0.0)) throw NumericalFailure("vanishing TDA gap; no revival time scale");
  double tmax = 4.0 * std::numbers::pi / std::abs(setup.delta_e1);
  int points = horizon.grid_points;
  for (int attempt = 0;; ++attempt) {
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = tmax * i / (points - 1);
    const DecoherenceSignal s = method == Method::tda ? r_tda(setup, params.n_bosons(), t)
                                                      : r_tda_extended(setup, params.n_bosons(), t);
    try {
      return r_max(s);
    } catch (const HorizonTooShort&) {
      if (attempt >= horizon.max_doublings) throw;
    }
    tmax *= 2.0;
    points *= 2;
  }
}

std::string point_description(const ModelParams& p, Method m, const HorizonPolicy& h) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "rmax/v1 alpha=%.17g omega=%.17g lambda=%.17g N=%ld method=%s grid=%d doublings=%d",
                p.alpha(), p.omega(), p.lambda(), p.n_bosons(), to_string(m).c_str(), h.grid_points, h.max_doublings);
  return buf;
}

RmaxCurve curve_from(long n, const std::vector<double>& lambdas, std::vector<double> values) {
  RmaxCurve c;
  c.n_bosons = n;
  c.lambdas = lambdas;
  c.rmax = std::move(values);
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.rmax.size(); ++i)
    if (c.rmax[i] < c.rmax[best]) best = i;
  c.dip_lambda = c.lambdas[best];
  c.dip_value = c.rmax[best];
  return c;
}

}  // namespace

double rmax_point(const ModelParams& params, Method method, const HorizonPolicy& horizon) {
  if (method == Method::exact) return r_max(spectral_weights(params), horizon.grid_points, horizon.max_doublings).value;
  return rmax_tda(params, method, horizon);
}

std::vector<RmaxCurve> rmax_sweep(const SweepSpec& spec, unsigned workers, const Cache* cache) {
  spec.validate();
  const std::size_t nl = spec.lambda_grid.size();
  const std::size_t total = nl * spec.n_list.size();
  // Largest sizes first keeps the pool busy until the end.
  const auto values = parallel_map<double>(total, workers, [&](std::size_t task) {
    const std::size_t in = spec.n_list.size() - 1 - task / nl;
    const std::size_t il = task % nl;
    const ModelParams p(spec.alpha, spec.omega, spec.lambda_grid[il], spec.n_list[in]);
    std::string key;
    if (cache) {
      key = Cache::key(point_description(p, spec.method, spec.horizon));
      if (auto hit = cache->get(key)) return std::stod(*hit);
    }
    const double v = rmax_point(p, spec.method, spec.horizon);
    if (cache) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      cache->put(key, buf);
    }
    return v;
  });
  std::vector<RmaxCurve> curves;
  for (std::size_t in = 0; in < spec.n_list.size(); ++in) {
    const std::size_t block = spec.n_list.size() - 1 - in;
    std::vector<double> v(values.begin() + static_cast<std::ptrdiff_t>(block * nl),
                          values.begin() + static_cast<std::ptrdiff_t>((block + 1) * nl));
    curves.push_back(curve_from(spec.n_list[in], spec.lambda_grid, std::move(v)));
  }
  return curves;
}

void write_rmax_csv(std::ostream& out, const std::vector<RmaxCurve>& curves) {
  out << "N,lambda,rmax\n";
  char buf[96];
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%ld,%.10g,%.12g\n", c.n_bosons, c.lambdas[i], c.rmax[i]);
      out << buf;
    }
}

namespace {

std::vector<double> stepped_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
  return g;
}

}  // namespace

DipResult locate_dip(double alpha, double omega, long n_bosons, const DipSearch& search, unsigned workers,
                     const Cache* cache) {
  if (!(search.coarse_step > 0 && search.fine_step > 0 && search.lambda_max > search.lambda_min))
    throw InvalidSpec("invalid dip search grid");
  SweepSpec coarse;
  coarse.alpha = alpha;
  coarse.omega = omega;
  coarse.lambda_grid = stepped_grid(search.lambda_min, search.lambda_max, search.coarse_step);
  coarse.n_list = {n_bosons};
  DipResult r;
  r.coarse = rmax_sweep(coarse, workers, cache).front();
  const double lo = std::max(search.lambda_min, r.coarse.dip_lambda - search.coarse_step);
  const double hi = std::min(search.lambda_max, r.coarse.dip_lambda + search.coarse_step);
  SweepSpec fine = coarse;
  fine.lambda_grid = stepped_grid(lo, hi, search.fine_step);
  r.fine = rmax_sweep(fine, workers, cache).front();
  r.lambda = r.fine.dip_lambda;
  r.rmax = r.fine.dip_value;
  return r;
}

ScalingFit scaling_fit(const std::vector<double>& n_list, const std::vector<double>& rmax) {
  if (n_list.size() != rmax.size()) throw InvalidSpec("sizes and r_max values differ in length");
  if (n_list.size() < 4) throw InvalidSpec("a scaling fit needs at least 4 sizes");
  const std::size_t m = n_list.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n_list[i] > 0) || !(rmax[i] > 0)) throw InvalidSpec("scaling fit requires positive sizes and r_max values");
    x[i] = std::log(n_list[i]);
    y[i] = std::log(rmax[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw InvalidSpec("scaling fit needs at least two distinct sizes");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    ssr += e * e;
  }
  ScalingFit f;
  f.gamma = -slope;
  f.amplitude = std::exp(intercept);
  f.stderr_gamma = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  f.residual = std::sqrt(ssr / static_cast<double>(m));
  return f;
}

std::vector<double> local_dips(const std::vector<double>& r) {
  std::vector<double> d;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) d.push_back(std::max(0.0, 0.5 * (r[i - 1] + r[i + 1]) - r[i]));
  return d;
}

ProbeResult first_order_probe(double alpha, double omega, const std::vector<double>& lambda_list, long n_bosons,
                              const std::vector<double>& times, unsigned workers) {
  if (lambda_list.empty()) throw InvalidSpec("lambda list is empty");
  validate_time_grid(times);
  const ModelParams base(alpha, omega, 0.0, n_bosons);
  for (double l : lambda_list) (void)base.with_lambda(l);
  ProbeResult p;
  p.lambdas = lambda_list;
  p.traces = parallel_map<DecoherenceSignal>(lambda_list.size(), workers, [&](std::size_t i) {
    return decoherence_factor(base, lambda_list[i], times);
  });
  p.rmax = parallel_map<double>(lambda_list.size(), workers, [&](std::size_t i) {
    return lambda_list[i] == 0.0 ? 1.0 : rmax_point(base.with_lambda(lambda_list[i]));
  });
  for (std::size_t i = 1; i < p.rmax.size(); ++i) {
    const double dl = lambda_list[i] - lambda_list[i - 1];
    if (dl != 0.0) p.max_slope = std::max(p.max_slope, std::abs((p.rmax[i] - p.rmax[i - 1]) / dl));
  }
  return p;
}

std::string Manifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "esqpt";
  j["version"] = version();
  j["command"] = command;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  j["outputs"] = outputs;
  j["runtime_seconds"] = runtime_seconds;
  return j.dump(2);
}

}  // namespace esqpt
