#include "esqpt/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "esqpt/error.hpp"

namespace esqpt {

namespace {

using cplx = std::complex<double>;

void banded_apply(const BandedHamiltonian& h, double center, double radius, const std::vector<cplx>& x,
                  std::vector<cplx>& y) {
  const std::size_t n = h.dimension();
  const double inv = 1.0 / radius;
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = (h.diag[i] - center) * x[i];
    if (i + 1 < n) acc += h.offdiag1[i] * x[i + 1];
    if (i + 2 < n) acc += h.offdiag2[i] * x[i + 2];
    if (i >= 1) acc += h.offdiag1[i - 1] * x[i - 1];
    if (i >= 2) acc += h.offdiag2[i - 2] * x[i - 2];
    y[i] = acc * inv;
  }
}

}  // namespace

std::vector<cplx> chebyshev_overlaps(const BandedHamiltonian& h, const std::vector<double>& psi0,
                                     const std::vector<double>& times, double tolerance) {
  const std::size_t n = h.dimension();
  if (psi0.size() != n) throw InvalidSpec("initial vector has wrong dimension");

  // Gershgorin bounds of the spectrum.
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(n, i + 3); ++j)
      if (j != i) off += std::abs(h.at(i, j));
    lo = i == 0 ? h.diag[i] - off : std::min(lo, h.diag[i] - off);
    hi = i == 0 ? h.diag[i] + off : std::max(hi, h.diag[i] + off);
  }
  const double center = 0.5 * (hi + lo);
  const double radius = std::max(0.5 * (hi - lo) * 1.01, 1e-12);

  std::vector<cplx> psi(psi0.begin(), psi0.end());
  std::vector<cplx> t_prev(n), t_cur(n), t_next(n), acc(n);
  std::vector<cplx> out;
  out.reserve(times.size());

  auto overlap = [&]() {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += psi0[i] * psi[i];
    return s;
  };

  double now = 0.0;
  for (double target : times) {
    const double dt = target - now;
    if (dt < 0) throw InvalidSpec("time grid must be increasing");
    if (dt > 0) {
      const double z = radius * dt;
      // Expansion: exp(-i H dt) = exp(-i c dt) sum_k (2 - delta_k0) (-i)^k J_k(z) T_k(Hs).
      acc.assign(n, 0.0);
      t_prev = psi;
      const double j0 = std::cyl_bessel_j(0.0, z);
      for (std::size_t i = 0; i < n; ++i) acc[i] = j0 * psi[i];
      banded_apply(h, center, radius, psi, t_cur);
      cplx phase(0.0, -1.0);
      const int kmax = static_cast<int>(z + 30.0 + 10.0 * std::cbrt(z)) + 10;
      for (int k = 1; k <= kmax; ++k) {
        const double jk = std::cyl_bessel_j(static_cast<double>(k), z);
        const cplx coef = 2.0 * jk * phase;
        for (std::size_t i = 0; i < n; ++i) acc[i] += coef * t_cur[i];
        if (k > z && std::abs(jk) < tolerance) break;
        if (k == kmax) throw NumericalFailure("Chebyshev expansion did not converge");
        banded_apply(h, center, radius, t_cur, t_next);
        for (std::size_t i = 0; i < n; ++i) t_next[i] = 2.0 * t_next[i] - t_prev[i];
        std::swap(t_prev, t_cur);
        std::swap(t_cur, t_next);
        phase *= cplx(0.0, -1.0);
      }
      const cplx global = std::exp(cplx(0.0, -center * dt));
      for (std::size_t i = 0; i < n; ++i) psi[i] = global * acc[i];
      now = target;
    }
    out.push_back(overlap());
  }
  return out;
}

}  // namespace esqpt
