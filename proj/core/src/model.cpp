#include "esqpt/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "esqpt/error.hpp"

namespace esqpt {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw InvalidSpec("trailing characters in '" + key + "'");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidSpec("cannot parse '" + key + "' = '" + text + "'");
  }
}

}  // namespace

ModelParams::ModelParams(double alpha, double omega, double lambda, long n_bosons)
    : alpha_(alpha), omega_(omega), lambda_(lambda), n_(n_bosons) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidSpec("alpha must lie in [0,1]");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidSpec("omega must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidSpec("lambda must be finite and >= 0");
  if (n_bosons < 1) throw InvalidSpec("N must be >= 1");
}

std::map<std::string, std::string> ModelParams::to_record() const {
  return {{"alpha", format_double(alpha_)},
          {"omega", format_double(omega_)},
          {"lambda", format_double(lambda_)},
          {"N", std::to_string(n_)}};
}

ModelParams ModelParams::from_record(const std::map<std::string, std::string>& record) {
  auto need = [&](const char* key) -> const std::string& {
    auto it = record.find(key);
    if (it == record.end()) throw InvalidSpec(std::string("missing key '") + key + "'");
    return it->second;
  };
  double alpha = parse_double("alpha", need("alpha"));
  double omega = parse_double("omega", need("omega"));
  double lambda = 0.0;
  if (auto it = record.find("lambda"); it != record.end()) lambda = parse_double("lambda", it->second);
  const std::string& n_text = need("N");
  long n = 0;
  auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (ec != std::errc() || ptr != n_text.data() + n_text.size())
    throw InvalidSpec("cannot parse 'N' = '" + n_text + "'");
  return {alpha, omega, lambda, n};
}

STCoefficients coefficients(const ModelParams& p) {
  const double n = static_cast<double>(p.n_bosons());
  const double g = (p.alpha() - 1.0) / n;
  const double w = p.omega();
  STCoefficients c;
  c.a = p.alpha() + p.lambda() - 2.0 * g;
  c.b = w * g;
  c.c = 2.0 * g;
  c.d = g;
  c.e = 2.0 * w * g;
  c.f = w * w * g;
  c.delta = p.alpha() - 1.0;
  return c;
}

double BandedHamiltonian::at(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  switch (j - i) {
    case 0: return diag[i];
    case 1: return offdiag1[i];
    case 2: return offdiag2[i];
    default: return 0.0;
  }
}

std::vector<double> BandedHamiltonian::dense() const {
  const std::size_t n = dimension();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(n, i + 3); ++j) m[i * n + j] = at(i, j);
  return m;
}

void BandedHamiltonian::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = dimension();
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    if (i + 1 < n) acc += offdiag1[i] * x[i + 1];
    if (i + 2 < n) acc += offdiag2[i] * x[i + 2];
    if (i >= 1) acc += offdiag1[i - 1] * x[i - 1];
    if (i >= 2) acc += offdiag2[i - 2] * x[i - 2];
    y[i] = acc;
  }
}

bool BandedHamiltonian::parity_conserving() const {
  for (double v : offdiag1)
    if (v != 0.0) return false;
  return true;
}

BandedHamiltonian build_matrix(const ModelParams& p) {
  const long nb = p.n_bosons();
  const double n = static_cast<double>(nb);
  const STCoefficients k = coefficients(p.with_lambda(0.0));
  const double lambda = p.lambda();

  BandedHamiltonian h;
  h.diag.resize(nb + 1);
  h.offdiag1.resize(nb);
  h.offdiag2.resize(nb >= 1 ? nb - 1 : 0);

  // The lambda term is added last so that the matrix is exactly affine in lambda.
  for (long i = 0; i <= nb; ++i) {
    const double l = static_cast<double>(i);
    h.diag[i] = (k.a * l + k.f * l * l + k.c * l * (1.0 + n - l)) + lambda * l;
  }
  // Square roots are taken factor by factor so no intermediate exceeds ~N.
  for (long i = 0; i < nb; ++i) {
    const double l = static_cast<double>(i);
    const double root = std::sqrt(n - l) * std::sqrt(l + 1.0);
    h.offdiag1[i] = k.b * root + k.e * root * l;
  }
  for (long i = 0; i + 1 < nb; ++i) {
    const double l = static_cast<double>(i);
    h.offdiag2[i] = k.d * std::sqrt(l + 2.0) * std::sqrt(l + 1.0) * std::sqrt(n - l) * std::sqrt(n - l - 1.0);
  }
  return h;
}

}  // namespace esqpt
