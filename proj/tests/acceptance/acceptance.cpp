// Acceptance runner. Each criterion prints one PASS/FAIL line; the exit status is
// nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esqpt/dos.hpp"
#include "esqpt/experiments.hpp"
#include "esqpt/meanfield.hpp"
#include "esqpt/model.hpp"
#include "esqpt/spectra.hpp"
#include "esqpt/tda.hpp"
#include "oracles.hpp"

using namespace esqpt;

namespace {

const double kW = 1.0 / std::numbers::sqrt2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Case {
  double alpha;
  double omega;
};

// Reference cases: four omega = 0 environments, then alpha = 1/2 with increasing omega.
const Case kCases[] = {{0.0, 0.0}, {0.4, 0.0}, {0.6, 0.0}, {0.7, 0.0}, {0.5, 0.2}, {0.5, 0.5}, {0.5, kW}, {0.5, 1.0}};
const double kTableCoupling[] = {2.0, 1.0, 0.5, 0.25, 0.83, 1.01, 1.17, 1.45};
const double kTableGamma[] = {0.247, 0.248, 0.248, 0.245, 0.255, 0.259, 0.264, 0.284};

Outcome critical_coupling_table() {
  Outcome o{true, ""};
  double worst = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto lc = critical_coupling_continuous(kCases[i].alpha, kCases[i].omega);
    if (!lc) return {false, fmt("no coupling for case %zu", i)};
    worst = std::max(worst, std::abs(*lc - kTableCoupling[i]));
    o.detail += fmt("%.4f ", *lc);
  }
  o.pass = worst <= 0.01;
  o.detail += fmt("| max deviation %.4f (tol 0.01)", worst);
  return o;
}

Outcome closed_form() {
  double worst = 0;
  for (int k = 0; k <= 7; ++k) {
    const double alpha = 0.1 * k;
    const auto lc = critical_coupling_continuous(alpha, 0.0);
    if (!lc) return {false, fmt("no coupling at alpha=%.1f", alpha)};
    worst = std::max(worst, std::abs(*lc - (4.0 - 5.0 * alpha) / 2.0));
  }
  return {worst <= 1e-10, fmt("max |lambda - (4-5a)/2| = %.2e (tol 1e-10)", worst)};
}

Outcome dip_criticality(unsigned workers) {
  Outcome o{true, ""};
  const std::size_t picks[] = {1, 6};  // (0.4, 0) and (1/2, 1/sqrt 2)
  for (std::size_t i : picks) {
    const auto [alpha, omega] = kCases[i];
    std::vector<DipResult> dips;
    for (long n : {600L, 2500L, 6400L}) dips.push_back(locate_dip(alpha, omega, n, {}, workers));
    // Grid couplings are sums of 0.005 steps; 1e-9 absorbs their rounding, not the tolerance.
    const bool located = std::abs(dips[1].lambda - kTableCoupling[i]) <= 0.02 + 1e-9;
    const bool monotone = dips[0].rmax > dips[1].rmax && dips[1].rmax > dips[2].rmax;
    o.pass = o.pass && located && monotone;
    o.detail += fmt("[a=%.2f w=%.3f: N=2500 dip at %.3f vs %.2f %s; dips (lambda, r_max) N=600 (%.3f, %.4f) "
                    "N=2500 (%.3f, %.4f) N=6400 (%.3f, %.4f) %s] ",
                    alpha, omega, dips[1].lambda, kTableCoupling[i], located ? "ok" : "off", dips[0].lambda,
                    dips[0].rmax, dips[1].lambda, dips[1].rmax, dips[2].lambda, dips[2].rmax,
                    monotone ? "decreasing" : "not decreasing");
  }
  return o;
}

Outcome finite_size_scaling(unsigned workers) {
  const std::vector<long> ladder{100, 200, 400, 800, 1600, 3200, 6400};
  std::vector<double> ns(ladder.begin(), ladder.end());
  Outcome o{true, ""};
  double gamma[8];
  for (std::size_t i = 0; i < 8; ++i) {
    const auto [alpha, omega] = kCases[i];
    const double lc = *critical_coupling_continuous(alpha, omega);
    const auto r = parallel_map<double>(ladder.size(), workers, [&](std::size_t k) {
      return rmax_point(ModelParams(alpha, omega, lc, ladder[k]));
    });
    const auto fit = scaling_fit(ns, r);
    gamma[i] = fit.gamma;
    o.detail += fmt("%.4f(%.4f) ", fit.gamma, fit.stderr_gamma);
    if (i < 4 && std::abs(fit.gamma - kTableGamma[i]) > 0.02) o.pass = false;
  }
  const double trend = gamma[7] - gamma[4];
  if (!(trend >= 0.02)) o.pass = false;
  o.detail += fmt("| omega=0 tol 0.02; trend g(w=1)-g(w=0.2) = %.4f (need >= 0.02)", trend);
  return o;
}

Outcome first_order_null(unsigned workers, long n) {
  const double alpha = 0.5, omega = kW;
  const auto cc = critical_couplings(alpha, omega);
  if (!cc.lambda_c1 || !cc.lambda_c2) return {false, "critical couplings missing"};
  auto rmax_at = [&](const std::vector<double>& lambdas) {
    return parallel_map<double>(lambdas.size(), workers,
                                [&](std::size_t k) { return rmax_point(ModelParams(alpha, omega, lambdas[k], n)); });
  };
  std::vector<double> across;
  for (int k = -10; k <= 10; ++k) across.push_back(*cc.lambda_c1 + 0.01 * k);
  const auto r1 = rmax_at(across);
  const auto dips = local_dips(r1);
  const double worst_dip = *std::max_element(dips.begin(), dips.end());

  std::vector<double> near;
  for (int k = -5; k <= 5; ++k) near.push_back(*cc.lambda_c2 + 0.01 * k);
  const auto r2 = rmax_at(near);
  const auto shoulders = rmax_at({*cc.lambda_c2 - 0.1, *cc.lambda_c2 + 0.1});
  const double depth = 0.5 * (shoulders[0] + shoulders[1]) - *std::min_element(r2.begin(), r2.end());

  double slope = 0;
  for (std::size_t k = 1; k < r1.size(); ++k) slope = std::max(slope, std::abs(r1[k] - r1[k - 1]) / 0.01);
  const bool pass = depth > 0 && worst_dip <= 0.01 * depth;
  return {pass, fmt("N=%ld lambda_c1=%.4f: max local dip %.2e, continuous dip depth %.4f, ratio %.2e (tol 1e-2), "
                    "max slope %.3f",
                    n, *cc.lambda_c1, worst_dip, depth, depth > 0 ? worst_dip / depth : INFINITY, slope)};
}

Outcome oracle_suites() {
  std::string detail;
  bool pass = true;
  auto note = [&](const char* name, double err, double tol) {
    const bool ok = err <= tol;
    pass = pass && ok;
    detail += fmt("(%s) %.1e%s ", name, err, ok ? "" : " FAIL");
  };

  double a_err = 0;
  for (int n = 1; n <= 12; ++n)
    for (double alpha : {0.0, 0.3, 0.5, 0.8, 1.0})
      for (double omega : {0.0, 0.2, kW, 1.7})
        for (double lambda : {0.0, 0.45, 2.0}) {
          const ModelParams p(alpha, omega, lambda, n);
          const Eigen::MatrixXd brute = oracle::model_matrix(alpha, omega, lambda, n) -
                                        coefficients(p).delta * Eigen::MatrixXd::Identity(n + 1, n + 1);
          const Eigen::MatrixXd built = oracle::dense(build_matrix(p));
          for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
              a_err = std::max(a_err, std::abs(built(i, j) - brute(i, j)) / std::max(1.0, std::abs(brute(i, j))));
        }
  note("a", a_err, 1e-12);

  double b_err = 0;
  std::vector<double> t;
  for (int k = 0; k < 40; ++k) t.push_back(0.6 * k);
  for (int n = 2; n <= 10; ++n)
    for (double alpha : {0.0, 0.5, 0.85})
      for (double omega : {0.0, kW}) {
        const ModelParams p(alpha, omega, 0.0, n);
        const Eigen::MatrixXd h0 = oracle::dense(build_matrix(p));
        const Eigen::VectorXd g = omega == 0.0 ? oracle::even_ground(h0) : oracle::ground(h0);
        const Eigen::MatrixXd h1 = oracle::dense(build_matrix(p.with_lambda(0.9)));
        const auto s = decoherence_factor(p, 0.9, t);
        for (std::size_t k = 0; k < t.size(); ++k)
          b_err = std::max(b_err, std::abs(s.values[k] - oracle::propagate(h1, g, t[k])));
      }
  note("b", b_err, 1e-9);

  double c_err = 0;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 1.0), uw(0.0, 2.0), ul(0.0, 3.0), ub(-2.0, 2.0);
  for (int n = 1; n <= 8; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const ModelParams p(ua(rng), uw(rng), ul(rng), n);
      const double beta = ub(rng);
      const auto k = coefficients(p);
      const auto el = tda_elements(k, n, beta);
      const Eigen::MatrixXd h = oracle::st_matrix(k, n);
      const double got[3] = {el.ground, el.one_phonon, el.two_phonon};
      for (int m = 0; m <= std::min(2, n); ++m) {
        const Eigen::VectorXd v = oracle::condensate(n, beta, m);
        c_err = std::max(c_err, std::abs(got[m] - v.dot(h * v)));
      }
    }
  note("c", c_err, 1e-10);

  double d_err = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = overlap_coeffs(ub(rng) * 2, ub(rng) * 2);
    d_err = std::max(d_err, std::abs(f.f_gg * f.f_gg + f.f_ge * f.f_ge - 1.0));
    for (long n : {1L, 10L, 100L, 1000L, 10000L}) {
      double sum = 0;
      for (double w : binomial_weights(f.f_gg, f.f_ge, n)) sum += w;
      d_err = std::max(d_err, std::abs(sum - 1.0));
    }
  }
  note("d", d_err, 1e-10);

  double e_err = 0;
  for (double alpha : {0.0, 0.3, 0.5, 0.9})
    for (double omega : {0.0, kW, 1.3})
      for (int k = 0; k <= 40; ++k) {
        const double phi = std::numbers::pi * k / 40.0;
        const double beta = std::tan(phi / 2);
        if (k == 40) continue;  // beta diverges at phi = pi
        e_err = std::max(e_err, std::abs(complex_surface_unchecked(alpha, omega, phi, 0.0) -
                                         energy_surface(alpha, omega, beta)));
        e_err = std::max(e_err, std::abs(complex_surface_unchecked(alpha, omega, phi, std::numbers::pi) -
                                         energy_surface(alpha, omega, -beta)));
      }
  note("e", e_err, 1e-12);
  return {pass, detail};
}

Outcome meanfield_landmarks() {
  const bool ac0 = critical_alpha(0.0) == 0.8;
  const bool ac1 = critical_alpha(kW) == 9.0 / 11.0 || std::abs(critical_alpha(kW) - 9.0 / 11.0) <= 1e-15;
  const double sp = spinodal_alpha(kW);
  const bool spin = std::abs(sp - 0.822559) <= 1e-5;
  double degen = 0;
  for (double w : {0.2, 0.5, kW, 1.0}) {
    const double ac = critical_alpha(w);
    degen = std::max({degen, std::abs(energy_surface(ac, w, w / 2.0)), std::abs(energy_surface(ac, w, 0.0)),
                      std::abs(energy_surface_derivative(ac, w, w / 2.0))});
  }
  const bool deg = degen <= 1e-10;
  return {ac0 && ac1 && spin && deg,
          fmt("a_c(0)=%.17g a_c(1/sqrt2)-9/11=%.1e spinodal=%.8f (0.822559 +-1e-5) degenerate-minima residual %.1e",
              critical_alpha(0.0), critical_alpha(kW) - 9.0 / 11.0, sp, degen)};
}

Outcome density_of_states() {
  const long n = 1000;
  constexpr std::size_t kCompareBins = 20;
  constexpr std::size_t kDetectBins = 50;
  Outcome o{true, ""};
  for (double omega : {0.0, kW}) {
    const ModelParams p(0.5, omega, 0.0, n);
    const auto fine = dos_exact(p, kDetectBins);
    const auto sing = detect_singularities(fine);
    const auto fine_sc = dos_semiclassical(p, fine.bin_edges);
    const auto sing_sc = detect_singularities(fine_sc);

    const bool cusp = sing.cusp && std::abs(sing.cusp->energy) <= fine.width(0);
    const bool cusp_sc = sing_sc.cusp && std::abs(sing_sc.cusp->energy) <= fine.width(0);
    bool jump_ok;
    if (omega == 0.0) {
      jump_ok = !sing.jump && !sing_sc.jump;
    } else {
      auto in_band = [n](const std::optional<Singularity>& j) {
        return j && j->energy / n >= -0.13 && j->energy / n <= -0.11;
      };
      jump_ok = in_band(sing.jump) && in_band(sing_sc.jump);
    }

    const auto ex = dos_exact(p, kCompareBins);
    const auto sc = dos_semiclassical(p, ex.bin_edges);
    std::vector<double> singular;
    if (sing.cusp) singular.push_back(sing.cusp->energy);
    if (sing.jump) singular.push_back(sing.jump->energy);
    double worst = 0;
    for (std::size_t b = 0; b < kCompareBins; ++b) {
      bool skip = false;
      for (double e : singular)
        if (e >= ex.bin_edges[b] - ex.width(b) && e <= ex.bin_edges[b + 1] + ex.width(b)) skip = true;
      if (skip) continue;
      worst = std::max(worst, std::abs(sc.density[b] - ex.density[b]) / ex.density[b]);
    }
    const bool agree = worst <= 0.05;
    o.pass = o.pass && cusp && cusp_sc && jump_ok && agree;
    o.detail += fmt("[w=%.3f: cusp %s/%s, jump %s (E/N=%s), bin deviation %.3f] ", omega, cusp ? "ok" : "missing",
                    cusp_sc ? "ok" : "missing", jump_ok ? "ok" : "wrong",
                    sing.jump ? fmt("%.4f", sing.jump->energy / n).c_str() : "none", worst);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"esqpt acceptance criteria"};
  int only = 0;
  unsigned workers = 0;
  long first_order_n = 10000;
  app.add_option("--criterion", only, "Run a single criterion (1-8); 0 runs all")->check(CLI::Range(0, 8));
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  app.add_option("--first-order-n", first_order_n, "Environment size for criterion 5")->check(CLI::Range(10L, 20000L));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"critical-coupling table", critical_coupling_table},
      {"omega=0 closed form", closed_form},
      {"dip criticality", [&] { return dip_criticality(workers); }},
      {"finite-size scaling", [&] { return finite_size_scaling(workers); }},
      {"first-order null result", [&] { return first_order_null(workers, first_order_n); }},
      {"oracle suites", oracle_suites},
      {"mean-field landmarks", meanfield_landmarks},
      {"density of states", density_of_states},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %-26s %s  %s (%.1f s)\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
