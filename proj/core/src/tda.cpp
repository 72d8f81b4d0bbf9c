#include "esqpt/tda.hpp"

#include <cmath>
#include <complex>

#include <spdlog/spdlog.h>

#include "esqpt/meanfield.hpp"

namespace esqpt {

OverlapCoeffs overlap_coeffs(double beta0, double beta1) {
  const double norm = std::sqrt((1.0 + beta0 * beta0) * (1.0 + beta1 * beta1));
  return {(1.0 + beta0 * beta1) / norm, (beta0 - beta1) / norm};
}

TdaElements tda_elements(const STCoefficients& k, long n_bosons, double beta) {
  const double n = static_cast<double>(n_bosons);
  const double b2 = beta * beta;
  const double q = 1.0 + b2;
  const double q2 = q * q;
  const double one_body = k.a + k.c + k.f;
  const double pair_gg = (k.c + 2.0 * k.d) * b2 + 2.0 * k.e * b2 * beta + k.f * b2 * b2;
  const double pair_ee = (k.c + 2.0 * k.d) * b2 - 2.0 * k.e * beta + k.f;
  const double mixed = k.f * b2 - 2.0 * k.d * b2 + k.e * (beta - b2 * beta);
  const double exch = k.c * (1.0 - b2) * (1.0 - b2) / q2;
  const double single_e = (one_body - 2.0 * k.b * beta) / q;

  // Condensate of m ground bosons: m x (a+c+f) + 2 b m beta/q + m(m-1) pair_gg / q^2.
  auto condensate = [&](double m) {
    return one_body * b2 / q * m + 2.0 * k.b * beta / q * m + m * (m - 1.0) / q2 * pair_gg;
  };

  TdaElements el;
  el.ground = condensate(n);
  el.one_phonon = single_e + exch * (n - 1.0) + 4.0 * (n - 1.0) / q2 * mixed + condensate(n - 1.0);
  el.two_phonon = 2.0 * pair_ee / q2 + 2.0 * single_e + 2.0 * exch * (n - 2.0) + 8.0 * (n - 2.0) / q2 * mixed +
                  condensate(n - 2.0);
  return el;
}

TdaSetup tda_setup(const ModelParams& h1, double beta0, double beta1) {
  TdaSetup s;
  s.beta0 = beta0;
  s.beta1 = beta1;
  const OverlapCoeffs f = overlap_coeffs(beta0, beta1);
  s.f_gg = f.f_gg;
  s.f_ge = f.f_ge;
  const TdaElements el = tda_elements(coefficients(h1), h1.n_bosons(), beta1);
  s.e10 = el.energy0();
  s.delta_e1 = el.delta();
  s.omega_e1 = el.omega();
  s.h1 = h1;
  return s;
}

TdaSetup tda_setup(const ModelParams& params, double lambda) {
  const double beta0 = minimize_surface(params.alpha(), params.omega(), 0.0).global.beta_e;
  const double beta1 = minimize_surface(params.alpha(), params.omega(), lambda).global.beta_e;
  return tda_setup(params.with_lambda(lambda), beta0, beta1);
}

namespace {

DecoherenceSignal make_signal(const TdaSetup& setup, long n_bosons, const std::vector<double>& times, Method m) {
  validate_time_grid(times);
  DecoherenceSignal sig;
  sig.source = setup.h1.with_n(n_bosons);
  sig.times = times;
  sig.values.resize(times.size());
  sig.method = m;
  return sig;
}

}  // namespace

DecoherenceSignal r_tda(const TdaSetup& setup, long n_bosons, const std::vector<double>& times) {
  DecoherenceSignal sig = make_signal(setup, n_bosons, times, Method::tda);
  const double n = static_cast<double>(n_bosons);
  const double g2 = setup.f_gg * setup.f_gg;
  const double e2 = setup.f_ge * setup.f_ge;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double h = 0.5 * setup.delta_e1 * times[i];
    const std::complex<double> inner = g2 * std::polar(1.0, h) + e2 * std::polar(1.0, -h);
    // inner^N via modulus and argument keeps large N accurate.
    const double mod = std::pow(std::abs(inner), n);
    const double arg = n * std::arg(inner) - n * h;
    sig.values[i] = std::polar(mod, arg);
  }
  return sig;
}

std::vector<double> binomial_weights(double f_gg, double f_ge, long n_bosons) {
  const auto n = static_cast<std::size_t>(n_bosons);
  std::vector<double> w(n + 1, 0.0);
  const double lg = 2.0 * std::log(std::abs(f_gg));
  const double le = 2.0 * std::log(std::abs(f_ge));
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double nk = static_cast<double>(n - k);
    const double kk = static_cast<double>(k);
    // 0 * log(0) terms contribute factor 1.
    const double tg = nk == 0.0 ? 0.0 : nk * lg;
    const double te = kk == 0.0 ? 0.0 : kk * le;
    const double lw = lgn - std::lgamma(kk + 1.0) - std::lgamma(nk + 1.0) + tg + te;
    w[k] = std::isfinite(lw) ? std::exp(lw) : 0.0;
  }
  return w;
}

DecoherenceSignal r_tda_extended(const TdaSetup& setup, long n_bosons, const std::vector<double>& times) {
  DecoherenceSignal sig = make_signal(setup, n_bosons, times, Method::tda2);
  const std::vector<double> w = binomial_weights(setup.f_gg, setup.f_ge, n_bosons);
  std::vector<double> kept_w, kept_e;
  double truncated = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] < kTdaWeightCutoff) {
      truncated += w[k];
      continue;
    }
    const double kk = static_cast<double>(k);
    kept_w.push_back(w[k]);
    kept_e.push_back(setup.delta_e1 * kk + setup.omega_e1 * kk * (kk - 1.0));
  }
  if (truncated > 0) spdlog::debug("anharmonic TDA sum: truncated weight {:.3e}", truncated);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::complex<double> acc = 0;
    for (std::size_t j = 0; j < kept_w.size(); ++j) acc += kept_w[j] * std::polar(1.0, -kept_e[j] * times[i]);
    sig.values[i] = acc;
  }
  return sig;
}

}  // namespace esqpt
