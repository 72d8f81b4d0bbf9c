#include "esqpt/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "esqpt/error.hpp"

namespace esqpt {

double energy_surface(double a, double w, double b) {
  const double b2 = b * b;
  const double q = 1.0 + b2;
  return b2 / (q * q) * (5.0 * a - 4.0 + 4.0 * b * w * (a - 1.0) + b2 * (a + w * w * (a - 1.0)));
}

double energy_surface_derivative(double a, double w, double b) {
  const double b2 = b * b;
  const double q = 1.0 + b2;
  const double u = b2 / (q * q);
  const double du = 2.0 * b * (1.0 - b2) / (q * q * q);
  const double p = 5.0 * a - 4.0 + 4.0 * b * w * (a - 1.0) + b2 * (a + w * w * (a - 1.0));
  const double dp = 4.0 * w * (a - 1.0) + 2.0 * b * (a + w * w * (a - 1.0));
  return du * p + u * dp;
}

double coupled_surface(double a, double w, double lambda, double b) {
  return energy_surface(a, w, b) + lambda * b * b / (1.0 + b * b);
}

namespace {

double coupled_derivative(double a, double w, double lambda, double b) {
  const double q = 1.0 + b * b;
  return energy_surface_derivative(a, w, b) + lambda * 2.0 * b / (q * q);
}

constexpr int kScanHalf = 1000;  // 2001 points over [-10, 10]
constexpr double kScanStep = 0.01;
constexpr double kBarrierGap = 1e-10;

double scan_beta(int i) { return static_cast<double>(i - kScanHalf) * kScanStep; }

struct Well {
  double beta;
  double energy;
  int index;
};

// Refines a grid minimum at scan index i to a stationary point.
double refine_minimum(double a, double w, double lambda, int i) {
  if (i == kScanHalf) return 0.0;  // beta = 0 is always stationary
  double lo = scan_beta(i - 1), hi = scan_beta(i + 1);
  double dlo = coupled_derivative(a, w, lambda, lo);
  double dhi = coupled_derivative(a, w, lambda, hi);
  if (dlo < 0.0 && dhi > 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (coupled_derivative(a, w, lambda, mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  // Flat bottom: golden section on the energy.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = coupled_surface(a, w, lambda, x1), f2 = coupled_surface(a, w, lambda, x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = coupled_surface(a, w, lambda, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = coupled_surface(a, w, lambda, x2);
    }
  }
  return 0.5 * (lo + hi);
}

struct Scan {
  std::vector<double> energy;  // on the full 2001-point grid
  std::vector<Well> wells;     // interior grid minima, refined
};

Scan scan_surface(double a, double w, double lambda) {
  Scan s;
  s.energy.resize(2 * kScanHalf + 1);
  for (int i = 0; i <= 2 * kScanHalf; ++i) s.energy[i] = coupled_surface(a, w, lambda, scan_beta(i));
  const int first = (w == 0.0) ? kScanHalf : 1;
  for (int i = first; i < 2 * kScanHalf; ++i) {
    const double left = (i == kScanHalf && w == 0.0) ? s.energy[i + 1] : s.energy[i - 1];
    if (s.energy[i] <= left && s.energy[i] < s.energy[i + 1]) {
      const double b = refine_minimum(a, w, lambda, i);
      s.wells.push_back({b, coupled_surface(a, w, lambda, b), i});
    }
  }
  return s;
}

// Highest grid energy strictly between two scan indices.
double barrier_between(const Scan& s, int i, int j) {
  if (i > j) std::swap(i, j);
  double top = -std::numeric_limits<double>::infinity();
  for (int k = i + 1; k < j; ++k) top = std::max(top, s.energy[k]);
  return top;
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::symmetric: return "symmetric";
    case Phase::broken: return "broken";
    case Phase::coexistence: return "coexistence";
  }
  return "symmetric";
}

Minimization minimize_surface(double a, double w, double lambda) {
  const Scan s = scan_surface(a, w, lambda);
  if (s.wells.empty()) {
    // Monotone on the scan window: the minimum sits on an edge.
    throw NumericalFailure("energy surface has no interior minimum on [-10, 10]");
  }
  std::size_t g = 0;
  for (std::size_t k = 1; k < s.wells.size(); ++k) {
    const double diff = s.wells[k].energy - s.wells[g].energy;
    // Degenerate wells (within rounding) resolve toward the deformed one.
    if (diff < -1e-14 || (std::abs(diff) <= 1e-14 && s.wells[g].beta == 0.0)) g = k;
  }
  const Well& gw = s.wells[g];

  std::optional<std::size_t> second;
  for (std::size_t k = 0; k < s.wells.size(); ++k) {
    if (k == g) continue;
    const Well& wk = s.wells[k];
    if (barrier_between(s, wk.index, gw.index) - wk.energy <= kBarrierGap) continue;
    if (!second || wk.energy < s.wells[*second].energy) second = k;
  }

  bool zero_is_min = false;
  for (std::size_t k = 0; k < s.wells.size(); ++k)
    if (k != g && s.wells[k].beta == 0.0 && barrier_between(s, s.wells[k].index, gw.index) - s.wells[k].energy > kBarrierGap)
      zero_is_min = true;

  Minimization m;
  m.global.beta_e = gw.beta;
  m.global.energy_per_boson = gw.energy;
  if (gw.beta == 0.0)
    m.global.phase = Phase::symmetric;
  else
    m.global.phase = zero_is_min ? Phase::coexistence : Phase::broken;
  if (second) {
    const Well& sw = s.wells[*second];
    MeanFieldPoint p;
    p.beta_e = sw.beta;
    p.energy_per_boson = sw.energy;
    p.phase = sw.beta == 0.0 ? Phase::symmetric : (gw.beta == 0.0 ? Phase::coexistence : Phase::broken);
    m.secondary = p;
  }
  return m;
}

double critical_alpha(double omega) {
  if (!(omega >= 0.0)) throw InvalidSpec("omega must be >= 0");
  const double w2 = omega * omega;
  return (4.0 + w2) / (5.0 + w2);
}

double spinodal_residual(double alpha, double omega) {
  const double w2 = omega * omega;
  const double am1 = alpha - 1.0;
  const double big_a = std::pow(4.0 - 3.0 * alpha + 2.0 * am1 * w2, 2);
  const double big_b = 36.0 * w2 * am1 * am1;
  // (A/B)(1 - (1 + B/A)^{3/2}), written to stay accurate as B/A -> 0 (limit -3/2).
  double rhs;
  const double x = big_b / big_a;
  if (x == 0.0)
    rhs = -1.5;
  else
    rhs = -std::expm1(1.5 * std::log1p(x)) / x;
  return 3.0 * alpha / (3.0 * alpha - 4.0) - rhs;
}

double spinodal_alpha(double omega) {
  if (!(omega > 0.0)) throw InvalidSpec("spinodal line requires omega > 0 (use critical_alpha at omega = 0)");
  double lo = critical_alpha(omega);
  double hi = 1.0;
  double flo = spinodal_residual(lo, omega);
  if (flo <= 0.0) return lo;  // lines have collapsed at this precision
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (spinodal_residual(mid, omega) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double antispinodal_alpha(double) { return 0.8; }

std::optional<double> lambda_star(double alpha, double omega) {
  const double v = (1.0 - alpha) * (4.0 + omega * omega) - alpha;
  if (v < -1e-12) return std::nullopt;
  return std::max(v, 0.0);
}

double energy_transfer(long n_bosons, double beta, double lambda) {
  return lambda * static_cast<double>(n_bosons) * beta * beta / (1.0 + beta * beta);
}

std::optional<double> quench_coupling(double alpha, double omega, double target) {
  const MeanFieldPoint g = minimize_surface(alpha, omega).global;
  if (g.beta_e == 0.0) return std::nullopt;
  const double occupation = g.beta_e * g.beta_e / (1.0 + g.beta_e * g.beta_e);
  const double lambda = (target - g.energy_per_boson) / occupation;
  if (lambda < 0.0) return std::nullopt;
  return lambda;
}

std::optional<double> critical_coupling_continuous(double alpha, double omega) {
  return quench_coupling(alpha, omega, 0.0);
}

PhaseSpacePoint::PhaseSpacePoint(double phi_, double xi_) : phi(phi_), xi(xi_) {
  if (!(phi >= 0.0 && phi <= std::numbers::pi)) throw InvalidSpec("phi must lie in [0, pi]");
  if (!(xi >= 0.0 && xi < 2.0 * std::numbers::pi)) throw InvalidSpec("xi must lie in [0, 2 pi)");
}

double complex_surface_unchecked(double a, double w, double phi, double xi) {
  const double occ = 0.5 * (1.0 - std::cos(phi));  // sin^2(phi/2)
  const double q = std::sin(phi) * std::cos(xi) + w * occ;
  return a * occ - (1.0 - a) * q * q;
}

double complex_surface(double a, double w, const PhaseSpacePoint& p) {
  return complex_surface_unchecked(a, w, p.phi, p.xi);
}

std::optional<SecondaryWell> first_order_well(double alpha, double omega) {
  if (omega == 0.0) return std::nullopt;
  const Scan s = scan_surface(alpha, omega, 0.0);
  if (s.wells.empty()) return std::nullopt;
  std::size_t g = 0;
  for (std::size_t k = 1; k < s.wells.size(); ++k)
    if (s.wells[k].energy < s.wells[g].energy) g = k;
  std::optional<SecondaryWell> best;
  for (std::size_t k = 0; k < s.wells.size(); ++k) {
    const Well& wk = s.wells[k];
    if (k == g || !(wk.beta < 0.0)) continue;
    if (barrier_between(s, wk.index, s.wells[g].index) - wk.energy <= kBarrierGap) continue;
    if (!best || wk.energy < best->energy_per_boson) best = SecondaryWell{wk.beta, wk.energy};
  }
  return best;
}

std::optional<double> first_order_critical_energy(double alpha, double omega) {
  auto w = first_order_well(alpha, omega);
  if (!w) return std::nullopt;
  return w->energy_per_boson;
}

std::optional<double> critical_coupling_first_order(double alpha, double omega) {
  auto e = first_order_critical_energy(alpha, omega);
  if (!e) return std::nullopt;
  return quench_coupling(alpha, omega, *e);
}

CriticalCouplings critical_couplings(double alpha, double omega) {
  CriticalCouplings c;
  c.lambda_star = lambda_star(alpha, omega);
  c.lambda_c2 = critical_coupling_continuous(alpha, omega);
  c.e_c1_per_boson = first_order_critical_energy(alpha, omega);
  c.lambda_c1 = critical_coupling_first_order(alpha, omega);
  return c;
}

}  // namespace esqpt
