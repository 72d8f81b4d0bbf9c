// esqpt command line: batch reproductions of level flows, densities of states,
// energy surfaces, decoherence traces, r_max sweeps and scaling fits.
//
// Every subcommand writes plot-ready CSV files plus <command>.manifest.json into --out.
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "esqpt/cache.hpp"
#include "esqpt/config.hpp"
#include "esqpt/dos.hpp"
#include "esqpt/error.hpp"
#include "esqpt/experiments.hpp"
#include "esqpt/meanfield.hpp"
#include "esqpt/signal_io.hpp"
#include "esqpt/spectra.hpp"
#include "esqpt/tda.hpp"

namespace fs = std::filesystem;
using namespace esqpt;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

// Shared flag values. Subcommands read the subset they need.
struct Flags {
  double alpha = 0.5;
  double omega = 0.0;
  double lambda = 0.0;
  std::vector<long> n{1000};
  std::string method = "exact";
  fs::path out = ".";
  std::size_t bins = kDefaultBins;
  double tmax = 0.0;  // 0 selects the default horizon
  int grid = 0;       // 0 selects the per-command default
  std::vector<double> lambda_range;  // lo,hi,step
  std::string config;
  std::string cache;
  unsigned workers = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);)
    if (!item.empty()) parts.push_back(item);
  return parts;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidSpec("config key '" + key + "': not a number: '" + v + "'");
}

// Config values replace flag values, so a config file pins a run regardless of the
// command line it is combined with.
void apply_config(Flags& f, const std::map<std::string, std::string>& cfg) {
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"alpha", [&](auto& k, auto& v) { f.alpha = to_double(k, v); }},
      {"omega", [&](auto& k, auto& v) { f.omega = to_double(k, v); }},
      {"lambda", [&](auto& k, auto& v) { f.lambda = to_double(k, v); }},
      {"tmax", [&](auto& k, auto& v) { f.tmax = to_double(k, v); }},
      {"bins", [&](auto& k, auto& v) { f.bins = static_cast<std::size_t>(to_double(k, v)); }},
      {"grid", [&](auto& k, auto& v) { f.grid = static_cast<int>(to_double(k, v)); }},
      {"workers", [&](auto& k, auto& v) { f.workers = static_cast<unsigned>(to_double(k, v)); }},
      {"method", [&](auto&, auto& v) { f.method = v; }},
      {"out", [&](auto&, auto& v) { f.out = v; }},
      {"cache", [&](auto&, auto& v) { f.cache = v; }},
      {"n",
       [&](auto& k, auto& v) {
         f.n.clear();
         for (const auto& p : split(v, ',')) f.n.push_back(static_cast<long>(to_double(k, p)));
       }},
      {"lambda-range",
       [&](auto& k, auto& v) {
         f.lambda_range.clear();
         for (const auto& p : split(v, ',')) f.lambda_range.push_back(to_double(k, p));
       }},
      // ModelParams record spelling.
      {"N", [&](auto& k, auto& v) { f.n = {static_cast<long>(to_double(k, v))}; }},
  };
  for (const auto& [key, value] : cfg) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw InvalidSpec("unknown config key '" + key + "'");
    it->second(key, value);
  }
}

long single_n(const Flags& f) {
  if (f.n.size() != 1) throw InvalidSpec("this command takes exactly one --n value");
  return f.n.front();
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw InvalidSpec("grid needs at least 2 points");
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return x;
}

std::vector<double> stepped(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw InvalidSpec("lambda range must be lo,hi,step with hi >= lo and step > 0");
  std::vector<double> x;
  const long count = std::lround((hi - lo) / step);
  for (long i = 0; i <= count; ++i) x.push_back(lo + step * static_cast<double>(i));
  return x;
}

// Owns the output directory and the manifest for one command.
class Run {
 public:
  Run(std::string command, const Flags& flags) : flags_(flags), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    fs::create_directories(flags_.out);
  }

  void param(const std::string& key, const std::string& value) { manifest_.parameters.emplace_back(key, value); }
  void param(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    param(key, std::string(buf));
  }

  std::ofstream open(const std::string& name) {
    const fs::path p = flags_.out / name;
    std::ofstream f(p);
    if (!f) throw InvalidSpec("cannot write " + p.string());
    f.precision(17);
    manifest_.outputs.push_back(p.string());
    return f;
  }

  void finish() {
    manifest_.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const fs::path p = flags_.out / (manifest_.command + ".manifest.json");
    std::ofstream(p) << manifest_.to_json() << '\n';
    spdlog::info("{}: wrote {} file(s) and {} in {:.2f} s", manifest_.command, manifest_.outputs.size(), p.string(),
                 manifest_.runtime_seconds);
  }

 private:
  const Flags& flags_;
  Manifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

void cmd_levels(const Flags& f) {
  Run run("levels", f);
  const long n = single_n(f);
  const auto alphas = linspace(0.0, 1.0, f.grid > 0 ? f.grid : 101);
  run.param("omega", f.omega);
  run.param("N", std::to_string(n));
  run.param("grid", std::to_string(alphas.size()));
  auto out = run.open("levels.csv");
  write_levels_csv(out, levels_scan(f.omega, n, alphas, f.workers));
  run.finish();
}

void cmd_dos(const Flags& f) {
  Run run("dos", f);
  const ModelParams p(f.alpha, f.omega, 0.0, single_n(f));
  const auto ex = dos_exact(p, f.bins);
  const auto sc = dos_semiclassical(p, ex.bin_edges, f.grid > 0 ? static_cast<std::size_t>(f.grid) : kPhaseSpaceGrid,
                                    f.workers);
  auto out = run.open("dos.csv");
  out << "E_lo,E_hi,E,exact,semiclassical\n";
  for (std::size_t b = 0; b < ex.bins(); ++b)
    out << ex.bin_edges[b] << ',' << ex.bin_edges[b + 1] << ',' << ex.center(b) << ',' << ex.density[b] << ','
        << sc.density[b] << '\n';
  for (const auto& [k, v] : p.to_record()) run.param(k, v);
  run.param("bins", std::to_string(f.bins));
  const auto s = detect_singularities(ex);
  if (s.cusp) run.param("cusp_energy", s.cusp->energy);
  if (s.jump) run.param("jump_energy", s.jump->energy);
  if (sc.sparse_bins > 0) run.param("sparse_bins", std::to_string(sc.sparse_bins));
  run.finish();
}

void cmd_surface(const Flags& f) {
  Run run("surface", f);
  const int points = f.grid > 0 ? f.grid : 401;
  {
    auto out = run.open("surface.csv");
    out << "beta,E_per_N\n";
    for (double b : linspace(-5.0, 5.0, points)) out << b << ',' << coupled_surface(f.alpha, f.omega, f.lambda, b) << '\n';
  }
  {
    auto out = run.open("contour.csv");
    out << "phi,xi,E_per_N\n";
    const auto phis = linspace(0.0, std::numbers::pi, points);
    auto xis = linspace(0.0, 2 * std::numbers::pi, points);
    xis.pop_back();  // xi = 2 pi duplicates xi = 0
    for (double phi : phis)
      for (double xi : xis) {
        const double occ = 0.5 * (1.0 - std::cos(phi));
        out << phi << ',' << xi << ',' << complex_surface_unchecked(f.alpha, f.omega, phi, xi) + f.lambda * occ
            << '\n';
      }
  }
  const auto m = minimize_surface(f.alpha, f.omega, f.lambda);
  run.param("alpha", f.alpha);
  run.param("omega", f.omega);
  run.param("lambda", f.lambda);
  run.param("beta_e", m.global.beta_e);
  run.param("E_per_N", m.global.energy_per_boson);
  run.param("phase", to_string(m.global.phase));
  if (m.secondary) run.param("secondary_beta", m.secondary->beta_e);
  const auto cc = critical_couplings(f.alpha, f.omega);
  if (cc.lambda_star) run.param("lambda_star", *cc.lambda_star);
  if (cc.lambda_c2) run.param("lambda_c2", *cc.lambda_c2);
  if (cc.lambda_c1) run.param("lambda_c1", *cc.lambda_c1);
  if (cc.e_c1_per_boson) run.param("E_c1_per_N", *cc.e_c1_per_boson);
  run.finish();
}

std::vector<double> time_grid(const Flags& f, const ModelParams& h1) {
  double tmax = f.tmax;
  if (tmax <= 0) tmax = default_horizon(spectral_weights(h1));
  return linspace(0.0, tmax, f.grid > 0 ? f.grid : 2048);
}

DecoherenceSignal signal_for(const ModelParams& h0, double lambda, Method method, const std::vector<double>& t) {
  if (method == Method::exact) return decoherence_factor(h0, lambda, t);
  const auto setup = tda_setup(h0, lambda);
  return method == Method::tda ? r_tda(setup, h0.n_bosons(), t) : r_tda_extended(setup, h0.n_bosons(), t);
}

void cmd_decohere(const Flags& f) {
  Run run("decohere", f);
  const ModelParams h0(f.alpha, f.omega, 0.0, single_n(f));
  const Method method = method_from_string(f.method);
  const auto t = time_grid(f, h0.with_lambda(f.lambda));
  const auto sig = signal_for(h0, f.lambda, method, t);
  auto out = run.open("decohere.csv");
  write_signal_csv(out, sig);
  for (const auto& [k, v] : h0.with_lambda(f.lambda).to_record()) run.param(k, v);
  run.param("method", to_string(method));
  run.param("tmax", t.back());
  run.param("rmax", r_max(sig));
  run.finish();
}

void cmd_rmax_sweep(const Flags& f) {
  Run run("rmax-sweep", f);
  std::optional<Cache> cache;
  if (!f.cache.empty()) cache.emplace(f.cache);
  const Cache* cp = cache ? &*cache : nullptr;
  run.param("alpha", f.alpha);
  run.param("omega", f.omega);
  run.param("method", f.method);
  if (f.lambda_range.empty()) {
    // Default: coarse-then-fine dip search per size.
    auto out = run.open("rmax-sweep.csv");
    auto dips = run.open("dips.csv");
    dips << "N,lambda_dip,rmax_dip\n";
    std::vector<RmaxCurve> curves;
    for (long n : f.n) {
      const auto d = locate_dip(f.alpha, f.omega, n, {}, f.workers, cp);
      dips << n << ',' << d.lambda << ',' << d.rmax << '\n';
      curves.push_back(d.coarse);
      curves.push_back(d.fine);
    }
    write_rmax_csv(out, curves);
  } else {
    if (f.lambda_range.size() != 3) throw InvalidSpec("--lambda-range takes lo,hi,step");
    SweepSpec spec;
    spec.alpha = f.alpha;
    spec.omega = f.omega;
    spec.lambda_grid = stepped(f.lambda_range[0], f.lambda_range[1], f.lambda_range[2]);
    spec.n_list = f.n;
    spec.method = method_from_string(f.method);
    auto out = run.open("rmax-sweep.csv");
    write_rmax_csv(out, rmax_sweep(spec, f.workers, cp));
  }
  run.finish();
}

void cmd_scaling(const Flags& f) {
  Run run("scaling", f);
  double lambda = f.lambda;
  if (lambda <= 0) {
    const auto lc = critical_coupling_continuous(f.alpha, f.omega);
    if (!lc) throw InvalidSpec("no continuous critical coupling at this alpha, omega; pass --lambda");
    lambda = *lc;
  }
  const Method method = method_from_string(f.method);
  const auto r = parallel_map<double>(f.n.size(), f.workers, [&](std::size_t i) {
    return rmax_point(ModelParams(f.alpha, f.omega, lambda, f.n[i]), method);
  });
  std::vector<double> ns(f.n.begin(), f.n.end());
  const auto fit = scaling_fit(ns, r);
  auto out = run.open("scaling.csv");
  out << "N,rmax,fit\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out << f.n[i] << ',' << r[i] << ',' << fit.amplitude * std::pow(ns[i], -fit.gamma) << '\n';
  run.param("alpha", f.alpha);
  run.param("omega", f.omega);
  run.param("lambda", lambda);
  run.param("method", to_string(method));
  run.param("amplitude", fit.amplitude);
  run.param("gamma", fit.gamma);
  run.param("stderr_gamma", fit.stderr_gamma);
  run.param("residual", fit.residual);
  run.finish();
}

void cmd_phase_diagram(const Flags& f) {
  Run run("phase-diagram", f);
  const auto omegas = linspace(0.0, 2.0, f.grid > 0 ? f.grid : 201);
  auto out = run.open("phase-diagram.csv");
  out << "omega,alpha_c,alpha_spinodal,alpha_antispinodal\n";
  for (double w : omegas) {
    const double spin = w > 0 ? spinodal_alpha(w) : critical_alpha(0.0);
    out << w << ',' << critical_alpha(w) << ',' << spin << ',' << antispinodal_alpha(w) << '\n';
  }
  run.param("grid", std::to_string(omegas.size()));
  run.finish();
}

void cmd_tda_compare(const Flags& f) {
  Run run("tda-compare", f);
  const ModelParams h0(f.alpha, f.omega, 0.0, single_n(f));
  const auto t = time_grid(f, h0.with_lambda(f.lambda));
  const auto exact = signal_for(h0, f.lambda, Method::exact, t).modulus();
  const auto tda = signal_for(h0, f.lambda, Method::tda, t).modulus();
  const auto tda2 = signal_for(h0, f.lambda, Method::tda2, t).modulus();
  auto out = run.open("tda-compare.csv");
  out << "t,exact,tda,tda2\n";
  for (std::size_t i = 0; i < t.size(); ++i) out << t[i] << ',' << exact[i] << ',' << tda[i] << ',' << tda2[i] << '\n';
  for (const auto& [k, v] : h0.with_lambda(f.lambda).to_record()) run.param(k, v);
  run.param("tmax", t.back());
  run.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit decoherence in a two-level boson environment with excited-state phase transitions"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Flags flags;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress");

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Flags&);
  };
  const Command commands[] = {
      {"levels", "Spectrum versus alpha (level flows)", cmd_levels},
      {"dos", "Exact and semiclassical density of states", cmd_dos},
      {"surface", "Mean-field energy surface and (phi, xi) contour grid", cmd_surface},
      {"decohere", "Decoherence factor r(t)", cmd_decohere},
      {"rmax-sweep", "r_max versus coupling for one or more sizes", cmd_rmax_sweep},
      {"scaling", "Finite-size scaling of r_max at the critical coupling", cmd_scaling},
      {"phase-diagram", "Critical, spinodal and antispinodal lines", cmd_phase_diagram},
      {"tda-compare", "Exact versus TDA decoherence traces", cmd_tda_compare},
  };
  std::map<CLI::App*, const Command*> lookup;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--alpha", flags.alpha, "Control parameter in [0, 1]");
    sub->add_option("--omega", flags.omega, "Quadrupole mixing parameter (>= 0)");
    sub->add_option("--lambda", flags.lambda, "Qubit-environment coupling");
    sub->add_option("--n", flags.n, "Environment size(s), comma separated")->delimiter(',');
    sub->add_option("--method", flags.method, "exact, tda or tda2");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--bins", flags.bins, "Histogram bins");
    sub->add_option("--tmax", flags.tmax, "Time horizon (default: 4 pi over the low-level spacing)");
    sub->add_option("--grid", flags.grid, "Grid points (time, alpha, omega or surface grid)");
    sub->add_option("--lambda-range", flags.lambda_range, "lo,hi,step for rmax-sweep")->delimiter(',');
    sub->add_option("--cache", flags.cache, "Result cache directory (rmax-sweep)");
    sub->add_option("--workers", flags.workers, "Worker threads (0 = hardware concurrency)");
    sub->add_option("--config", flags.config, "key = value file; its values override flags");
    lookup[sub] = &c;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (!flags.config.empty()) apply_config(flags, load_config(flags.config));
    for (const auto& [sub, cmd] : lookup)
      if (sub->parsed()) cmd->run(flags);
  } catch (const InvalidSpec& e) {
    spdlog::error("invalid input: {}", e.what());
    return kExitInvalid;
  } catch (const NumericalFailure& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitInvalid;
  }
  return 0;
}
