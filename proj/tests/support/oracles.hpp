// Independent reference implementations used only by the tests.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "esqpt/model.hpp"

namespace oracle {

// Two-mode Fock state as a map (n_s, n_t) -> amplitude.
using Occupation = std::pair<int, int>;
using State = std::map<Occupation, double>;
using Op = std::function<State(const State&)>;

inline State s_dag(const State& in) {
  State out;
  for (auto [k, v] : in) out[{k.first + 1, k.second}] += v * std::sqrt(k.first + 1.0);
  return out;
}
inline State s_ann(const State& in) {
  State out;
  for (auto [k, v] : in)
    if (k.first > 0) out[{k.first - 1, k.second}] += v * std::sqrt(double(k.first));
  return out;
}
inline State t_dag(const State& in) {
  State out;
  for (auto [k, v] : in) out[{k.first, k.second + 1}] += v * std::sqrt(k.second + 1.0);
  return out;
}
inline State t_ann(const State& in) {
  State out;
  for (auto [k, v] : in)
    if (k.second > 0) out[{k.first, k.second - 1}] += v * std::sqrt(double(k.second));
  return out;
}
inline State add(State a, const State& b, double cb = 1.0) {
  for (auto [k, v] : b) a[k] += cb * v;
  return a;
}
inline State scale(State a, double c) {
  for (auto& [k, v] : a) v *= c;
  return a;
}
// Applies ops right to left: ops = {A, B, C} computes A B C |in>.
inline State chain(const std::vector<Op>& ops, const State& in) {
  State s = in;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) s = (*it)(s);
  return s;
}

inline Eigen::MatrixXd matrix_of(const Op& h, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int l = 0; l <= n; ++l) {
    const State out = h(State{{{n - l, l}, 1.0}});
    for (auto [k, v] : out) {
      if (k.first + k.second != n) continue;
      m(k.second, l) += v;
    }
  }
  return m;
}

// (alpha + lambda) n_t - (1 - alpha)/N Q Q with Q = s't + t's + omega t't.
inline Eigen::MatrixXd model_matrix(double alpha, double omega, double lambda, int n) {
  const Op q = [omega](const State& x) {
    State r = s_dag(t_ann(x));
    r = add(r, t_dag(s_ann(x)));
    return add(r, t_dag(t_ann(x)), omega);
  };
  const Op h = [=](const State& x) {
    State r = scale(t_dag(t_ann(x)), alpha + lambda);
    return add(r, q(q(x)), -(1.0 - alpha) / n);
  };
  return matrix_of(h, n);
}

// Generic two-level boson Hamiltonian with coefficients a..f.
inline Eigen::MatrixXd st_matrix(const esqpt::STCoefficients& k, int n) {
  const Op h = [k](const State& x) {
    State r = scale(chain({t_dag, t_ann}, x), k.a);
    r = add(r, add(chain({t_dag, s_ann}, x), chain({s_dag, t_ann}, x)), k.b);
    r = add(r, chain({t_dag, s_ann, s_dag, t_ann}, x), k.c);
    r = add(r, add(chain({t_dag, s_ann, t_dag, s_ann}, x), chain({s_dag, t_ann, s_dag, t_ann}, x)), k.d);
    r = add(r, add(chain({t_dag, s_ann, t_dag, t_ann}, x), chain({t_dag, t_ann, s_dag, t_ann}, x)), k.e);
    r = add(r, chain({t_dag, t_ann, t_dag, t_ann}, x), k.f);
    return r;
  };
  return matrix_of(h, n);
}

inline Eigen::MatrixXd dense(const esqpt::BandedHamiltonian& h) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h.at(std::size_t(i), std::size_t(j));
  return m;
}

// Deformed condensate with (N - m) bosons (s' + beta t')/sqrt(1+beta^2) and m bosons
// (-beta s' + t')/sqrt(1+beta^2), normalised, in the Fock basis |N l>.
inline Eigen::VectorXd condensate(int n, double beta, int m) {
  // Polynomial coefficients in t' (index = power of t').
  std::vector<double> poly{1.0};
  auto multiply = [&poly](double cs, double ct) {
    std::vector<double> out(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += cs * poly[i];
      out[i + 1] += ct * poly[i];
    }
    poly = out;
  };
  for (int i = 0; i < n - m; ++i) multiply(1.0, beta);
  for (int i = 0; i < m; ++i) multiply(-beta, 1.0);
  Eigen::VectorXd v(n + 1);
  for (int l = 0; l <= n; ++l) v(l) = poly[l] * std::sqrt(std::tgamma(l + 1.0) * std::tgamma(n - l + 1.0));
  return v / v.norm();
}

// Spin-coherent state with z = tan(phi/2) e^{i xi}, amplitudes sqrt(C(N,l)) z^l / (1+|z|^2)^{N/2}.
inline Eigen::VectorXcd coherent(int n, double phi, double xi) {
  Eigen::VectorXcd v(n + 1);
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  for (int l = 0; l <= n; ++l) {
    const double logmag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0)) +
                          (l > 0 ? l * std::log(s) : 0.0) + (n - l > 0 ? (n - l) * std::log(c) : 0.0);
    v(l) = std::polar(std::exp(logmag), l * xi);
  }
  return v;
}

// <g| exp(-i H1 t) |g> by dense matrix exponential.
inline std::complex<double> propagate(const Eigen::MatrixXd& h1, const Eigen::VectorXd& g, double t) {
  const Eigen::MatrixXcd u = (std::complex<double>(0, -t) * h1.cast<std::complex<double>>()).exp();
  return g.cast<std::complex<double>>().dot(u * g.cast<std::complex<double>>());
}

inline Eigen::VectorXd ground(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return es.eigenvectors().col(0);
}

// Lowest eigenvector within the even-index block; for parity-conserving matrices whose
// ground doublet is (nearly) degenerate this is the unambiguous choice.
inline Eigen::VectorXd even_ground(const Eigen::MatrixXd& h) {
  const int m = static_cast<int>(h.rows() + 1) / 2;
  Eigen::MatrixXd even(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) even(i, j) = h(2 * i, 2 * j);
  const Eigen::VectorXd ge = ground(even);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(h.rows());
  for (int i = 0; i < m; ++i) g(2 * i) = ge(i);
  return g;
}

}  // namespace oracle
