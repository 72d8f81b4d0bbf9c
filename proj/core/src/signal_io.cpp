#include "esqpt/signal_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "esqpt/error.hpp"

namespace esqpt {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string version() { return ESQPT_VERSION; }

void write_signal_csv(std::ostream& out, const DecoherenceSignal& s) {
  out << "# esqpt-signal v" << kSignalFormatVersion << " method=" << to_string(s.method)
      << " alpha=" << fmt17(s.source.alpha()) << " omega=" << fmt17(s.source.omega())
      << " lambda=" << fmt17(s.source.lambda()) << " N=" << s.source.n_bosons() << '\n';
  out << "t,re,im,abs\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    out << fmt17(s.times[i]) << ',' << fmt17(s.values[i].real()) << ',' << fmt17(s.values[i].imag()) << ','
        << fmt17(std::abs(s.values[i])) << '\n';
}

DecoherenceSignal read_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# esqpt-signal v", 0) != 0)
    throw InvalidSpec("not an esqpt signal file");
  std::istringstream head(line.substr(16));
  int ver = 0;
  head >> ver;
  if (ver != kSignalFormatVersion) throw InvalidSpec("unsupported signal format version " + std::to_string(ver));
  std::map<std::string, std::string> rec;
  std::string tok;
  while (head >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidSpec("malformed signal header token '" + tok + "'");
    rec[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  DecoherenceSignal s;
  s.method = method_from_string(rec.at("method"));
  rec.erase("method");
  s.source = ModelParams::from_record(rec);
  if (!std::getline(in, line) || line != "t,re,im,abs") throw InvalidSpec("missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, re, im, ab;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &re, &im, &ab) != 4)
      throw InvalidSpec("malformed signal row '" + line + "'");
    s.times.push_back(t);
    s.values.emplace_back(re, im);
  }
  return s;
}

std::string signal_to_json(const DecoherenceSignal& s) {
  nlohmann::json j;
  j["format"] = "esqpt-signal";
  j["version"] = kSignalFormatVersion;
  j["method"] = to_string(s.method);
  j["source"] = {{"alpha", s.source.alpha()},
                 {"omega", s.source.omega()},
                 {"lambda", s.source.lambda()},
                 {"N", s.source.n_bosons()}};
  std::vector<double> re, im;
  re.reserve(s.values.size());
  im.reserve(s.values.size());
  for (auto v : s.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["t"] = s.times;
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

DecoherenceSignal signal_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("signal JSON: ") + e.what());
  }
  if (j.value("format", "") != "esqpt-signal") throw InvalidSpec("not an esqpt signal record");
  if (j.value("version", 0) != kSignalFormatVersion) throw InvalidSpec("unsupported signal format version");
  DecoherenceSignal s;
  s.method = method_from_string(j.at("method").get<std::string>());
  const auto& src = j.at("source");
  s.source = ModelParams(src.at("alpha").get<double>(), src.at("omega").get<double>(),
                         src.at("lambda").get<double>(), src.at("N").get<long>());
  s.times = j.at("t").get<std::vector<double>>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != s.times.size() || im.size() != s.times.size()) throw InvalidSpec("signal arrays differ in length");
  for (std::size_t i = 0; i < re.size(); ++i) s.values.emplace_back(re[i], im[i]);
  return s;
}

}  // namespace esqpt
