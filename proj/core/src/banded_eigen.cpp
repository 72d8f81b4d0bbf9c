#include "esqpt/banded_eigen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "esqpt/error.hpp"

namespace esqpt {

namespace {

// Lower band storage with three sub-diagonals: bulge chasing needs one beyond the band.
class WorkBand {
 public:
  explicit WorkBand(const BandedHamiltonian& h) : n_(h.dimension()), b_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      b_[i][0] = h.diag[i];
      if (i + 1 < n_) b_[i][1] = h.offdiag1[i];
      if (i + 2 < n_) b_[i][2] = h.offdiag2[i];
    }
  }

  // Element (i, j) with |i - j| <= 3; zero outside.
  double get(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    const std::size_t r = i - j;
    return r <= 3 ? b_[j][r] : 0.0;
  }
  void set(std::size_t i, std::size_t j, double v) {
    if (i < j) std::swap(i, j);
    b_[j][i - j] = v;
  }

  // A <- G A G^T with G rotating coordinates (p, p+1) by (c, s).
  void rotate(std::size_t p, double c, double s) {
    const std::size_t q = p + 1;
    const std::size_t lo = p >= 3 ? p - 3 : 0;
    const std::size_t hi = std::min(n_ - 1, q + 3);
    for (std::size_t k = lo; k <= hi; ++k) {
      if (k == p || k == q) continue;
      const double akp = get(k, p);
      const double akq = get(k, q);
      const double np = c * akp + s * akq;
      const double nq = -s * akp + c * akq;
      if ((k > p ? k - p : p - k) <= 3) set(k, p, np);
      if ((k > q ? k - q : q - k) <= 3) set(k, q, nq);
    }
    const double app = get(p, p);
    const double aqq = get(q, q);
    const double apq = get(q, p);
    set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
    set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
    set(q, p, c * s * (aqq - app) + (c * c - s * s) * apq);
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::array<double, 4>> b_;
};

void rotate_rows(std::vector<double>& x, std::size_t m, std::size_t p, double c, double s) {
  double* rp = x.data() + p * m;
  double* rq = rp + m;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = rp[j];
    const double b = rq[j];
    rp[j] = c * a + s * b;
    rq[j] = -s * a + c * b;
  }
}

}  // namespace

Tridiagonal reduce_to_tridiagonal(const BandedHamiltonian& h, std::vector<double>& tracked, std::size_t m) {
  WorkBand a(h);
  const std::size_t n = a.size();

  // Annihilate (q, col) against (q-1, col) with a rotation in the plane (q-1, q).
  auto annihilate = [&](std::size_t q, std::size_t col) {
    const double x = a.get(q - 1, col);
    const double y = a.get(q, col);
    if (y == 0.0) return false;
    const double r = std::hypot(x, y);
    const double c = x / r;
    const double s = y / r;
    a.rotate(q - 1, c, s);
    a.set(q, col, 0.0);
    if (m > 0) rotate_rows(tracked, m, q - 1, c, s);
    return true;
  };

  for (std::size_t j = 0; j + 2 < n; ++j) {
    if (!annihilate(j + 2, j)) continue;
    // The rotation in (j+1, j+2) leaves a bulge at (j+4, j+1); chase it to the end.
    for (std::size_t k = j + 1; k + 3 < n; k += 2) {
      if (!annihilate(k + 3, k)) break;
    }
  }

  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a.get(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) t.offdiag[i] = a.get(i + 1, i);
  return t;
}

std::vector<double> tridiagonal_ql(Tridiagonal t, std::vector<double>& x, std::size_t m) {
  const std::size_t n = t.diag.size();
  std::vector<double>& d = t.diag;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = t.offdiag[i];

  const double eps = std::numeric_limits<double>::epsilon();
  const int max_iter = 60;
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t mm = l;
    while (mm < n) {
      if (std::abs(e[mm]) <= eps * tst1) break;
      ++mm;
    }
    if (mm == n) mm = n - 1;
    if (mm > l) {
      int iter = 0;
      do {
        if (++iter > max_iter)
          throw NumericalFailure("tridiagonal QL did not converge at index " + std::to_string(l));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double hshift = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= hshift;
        f += hshift;

        p = d[mm];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = mm; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          const double hh = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = hh + s * (c * g + s * d[ii]);
          // Columns (ii, ii+1) of the eigenvector matrix Z rotate as
          // z_{ii+1} <- s z_ii + c z_{ii+1}, z_ii <- c z_ii - s z_{ii+1};
          // the tracked projections Z^T x rotate the same way by rows.
          if (m > 0) {
            double* ri = x.data() + ii * m;
            double* rn = ri + m;
            for (std::size_t k = 0; k < m; ++k) {
              const double hk = rn[k];
              rn[k] = s * ri[k] + c * hk;
              ri[k] = c * ri[k] - s * hk;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
  return d;
}

BandEigenResult band_eigen(const BandedHamiltonian& h, std::span<const std::vector<double>> tracked) {
  const std::size_t n = h.dimension();
  const std::size_t m = tracked.size();
  std::vector<double> x(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    if (tracked[j].size() != n) throw InvalidSpec("tracked vector has wrong dimension");
    for (std::size_t i = 0; i < n; ++i) x[i * m + j] = tracked[j][i];
  }
  Tridiagonal t = reduce_to_tridiagonal(h, x, m);
  std::vector<double> values = tridiagonal_ql(std::move(t), x, m);
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalFailure("non-finite eigenvalue");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  BandEigenResult out;
  out.n_tracked = m;
  out.eigenvalues.resize(n);
  out.projections.resize(n * m);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[k]];
    std::copy_n(x.data() + order[k] * m, m, out.projections.data() + k * m);
  }
  return out;
}

std::vector<double> band_eigenvalues(const BandedHamiltonian& h) {
  return band_eigen(h, {}).eigenvalues;
}

namespace {

// Cholesky factor of a symmetric positive definite bandwidth-2 matrix:
// row i holds L(i,i), L(i,i-1), L(i,i-2). Returns false on a non-positive pivot.
bool band_cholesky(const BandedHamiltonian& h, double shift, std::vector<std::array<double, 3>>& l) {
  const std::size_t n = h.dimension();
  l.assign(n, {0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    double l2 = 0.0;  // L(i, i-2)
    double l1 = 0.0;  // L(i, i-1)
    if (i >= 2) l2 = h.offdiag2[i - 2] / l[i - 2][0];
    if (i >= 1) {
      double v = h.offdiag1[i - 1];
      if (i >= 2) v -= l2 * l[i - 1][1];
      l1 = v / l[i - 1][0];
    }
    const double pivot = h.diag[i] - shift - l1 * l1 - l2 * l2;
    if (!(pivot > 0.0)) return false;
    l[i] = {std::sqrt(pivot), l1, l2};
  }
  return true;
}

void cholesky_solve(const std::vector<std::array<double, 3>>& l, std::vector<double>& x) {
  const std::size_t n = l.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    if (i >= 1) v -= l[i][1] * x[i - 1];
    if (i >= 2) v -= l[i][2] * x[i - 2];
    x[i] = v / l[i][0];
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = x[i];
    if (i + 1 < n) v -= l[i + 1][1] * x[i + 1];
    if (i + 2 < n) v -= l[i + 2][2] * x[i + 2];
    x[i] = v / l[i][0];
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

}  // namespace

Eigenpair lowest_eigenpair(const BandedHamiltonian& h, double estimate, const std::vector<double>& start) {
  const std::size_t n = h.dimension();
  if (start.size() != n) throw InvalidSpec("start vector has wrong dimension");

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(h.diag[i]);
    for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(n, i + 3); ++j)
      if (j != i) row += std::abs(h.at(i, j));
    scale = std::max(scale, row);
  }
  scale = std::max(scale, 1.0);

  // Shift just below the estimate keeps H - shift positive definite.
  std::vector<std::array<double, 3>> chol;
  double offset = 1e-11 * scale;
  while (!band_cholesky(h, estimate - offset, chol)) {
    offset *= 10.0;
    if (offset > scale) throw NumericalFailure("inverse iteration: shifted matrix is not positive definite");
  }

  std::vector<double> x = start;
  double nx = norm2(x);
  if (nx == 0.0) throw InvalidSpec("start vector is zero");
  for (double& v : x) v /= nx;

  std::vector<double> hx;
  std::vector<double> previous;
  double value = 0.0;
  bool converged = false;
  double previous_change = 1.0;
  for (int iter = 0; iter < 500 && !converged; ++iter) {
    previous = x;
    cholesky_solve(chol, x);
    nx = norm2(x);
    if (!std::isfinite(nx) || nx == 0.0) throw NumericalFailure("inverse iteration diverged");
    for (double& v : x) v /= nx;
    // Inverse iteration converges to +/- the eigenvector; compare up to sign.
    double dot = std::inner_product(x.begin(), x.end(), previous.begin(), 0.0);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = x[i] - std::copysign(1.0, dot) * previous[i];
      change += dv * dv;
    }
    change = std::sqrt(change);
    // Stop at 1e-14 or once the update stagnates at rounding level.
    converged = iter >= 1 && (change < 1e-14 || (iter >= 4 && change < 1e-10 && change > 0.5 * previous_change));
    previous_change = change;
  }
  if (!converged) throw NumericalFailure("inverse iteration did not converge");
  h.multiply(x, hx);
  value = std::inner_product(x.begin(), x.end(), hx.begin(), 0.0);

  // Deterministic sign: the largest-magnitude component is positive.
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
  if (x[imax] < 0)
    for (double& v : x) v = -v;
  return {value, std::move(x)};
}

}  // namespace esqpt
