// freefock: partitions, vacuum moments and verification suites from the shell.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration or usage error.
// FREEFOCK_LOG=error|warn|info|debug sets the stderr log level (default warn).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "freefock/config.hpp"
#include "freefock/cumulant.hpp"
#include "freefock/errors.hpp"
#include "freefock/io.hpp"
#include "freefock/jacobi.hpp"
#include "freefock/ncpart.hpp"
#include "freefock/verify.hpp"
#include "freefock/xfock.hpp"

namespace {

using nlohmann::json;
using namespace freefock;

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  static const Level level = [] {
    const char* env = std::getenv("FREEFOCK_LOG");
    const std::string s = env ? env : "warn";
    if (s == "error") return Level::Error;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

void log(Level level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= log_level()) std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write " + out);
  f << text;
  log(Level::Info, "wrote " + out);
}

std::string blocks_text(const ncpart::MarkedPartition& k, bool marks) {
  std::ostringstream os;
  for (std::size_t b = 0; b < k.partition.blocks.size(); ++b) {
    os << "{";
    for (std::size_t q = 0; q < k.partition.blocks[b].size(); ++q) os << (q ? "," : "") << k.partition.blocks[b][q];
    os << "}";
    if (marks) os << (k.marks[b] > 0 ? "+" : "-");
  }
  return os.str();
}

int cmd_partitions(int n, const std::string& set, const std::string& format, const std::string& out) {
  std::vector<ncpart::MarkedPartition> recs;
  const bool marked = set != "nc";
  if (set == "nc") {
    for (auto& p : ncpart::enumerate_nc(n)) recs.push_back({p, std::vector<int>(p.blocks.size(), 1)});
  } else if (set == "gn") {
    recs = ncpart::enumerate_gn(n);
  } else if (set == "interval") {
    recs = ncpart::enumerate_interval(n);
  } else {
    throw ConfigError("unknown set '" + set + "'");
  }
  std::ostringstream os;
  if (format == "json") {
    json arr = json::array();
    for (const auto& k : recs) arr.push_back(marked ? io::to_json(k) : io::to_json(k.partition));
    os << json{{"set", set}, {"n", n}, {"count", recs.size()}, {"records", arr}}.dump(2) << "\n";
  } else if (format == "csv") {
    os << "index,partition\n";
    for (std::size_t r = 0; r < recs.size(); ++r) os << r << ",\"" << blocks_text(recs[r], marked) << "\"\n";
  } else {
    for (const auto& k : recs) os << blocks_text(k, marked) << "\n";
    os << recs.size() << " partitions\n";
  }
  emit(os.str(), out);
  return kExitOk;
}

std::pair<double, double> parse_interval(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("interval '" + s + "' must look like lo:hi");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("interval '" + s + "' is not numeric");
  }
}

int cmd_moments(const config::ModelConfig& cfg, const std::string& word, int power, const std::string& delta,
                double tol, const std::string& format, const std::string& out) {
  const auto g = cfg.grid();
  std::vector<std::string> parts;
  if (!word.empty()) {
    std::stringstream ss(word);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) parts.push_back(item);
  } else {
    if (power < 1) throw ConfigError("moments needs --word or --power >= 1");
    const std::string d = delta.empty() ? std::to_string(g.nodes.front() - g.weights.front()) + ":" +
                                              std::to_string(g.nodes.back() + g.weights.back())
                                        : delta;
    parts.assign(static_cast<std::size_t>(power), d);
  }
  if (static_cast<int>(parts.size()) > ncpart::kMaxNc) throw ConfigError("word longer than the partition bound");
  std::vector<std::vector<double>> fs;
  for (const auto& p : parts) {
    const auto [lo, hi] = parse_interval(p);
    fs.push_back(grid::indicator(g, lo, hi));
  }
  const std::size_t n = fs.size();
  json paths = json::object();
  const auto spec = cfg.cumulant_spec();
  if (cfg.mode == config::Mode::GaussPoisson) {
    auto lam = spec;
    paths["fock"] = cumulant::moment(fs, lam);
  }
  const auto fibers = cfg.fiber_set(g);
  const auto pg = xfock::make_product_grid(g, fibers);
  const auto big = xfock::big_fock_space(pg, cumulant::split_levels(n));
  paths["big_fock"] = cumulant::split_moment(fs, big, [&](const std::vector<double>& f, const fock::FockVector& v) {
    return xfock::big_fock_realize(pg, f, v);
  });
  const int D = static_cast<int>(n);
  const auto sys = cfg.mode == config::Mode::Meixner ? jacobi::constant_system(g, D + 1)
                                                     : jacobi::build_system(fibers, D + 1);
  const auto xs = xfock::make_xspace(g.weights, sys, D);
  auto v = xfock::XFockVector::vacuum(xs);
  for (std::size_t k = n; k-- > 0;) v = xfock::xfield(fs[k], v);
  paths["xfock"] = v.scalar();
  paths["nc_sum"] = cumulant::nc_moment(fs, spec);

  // constant (lambda, eta) on a single interval: the tridiagonal moment sequence
  if (cfg.mode == config::Mode::Meixner &&
      std::all_of(fs.begin(), fs.end(), [&](const auto& f) { return f == fs.front(); })) {
    double sd = 0.0, lam = 0.0, eta = 0.0;
    bool constant = true, first = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (fs.front()[i] == 0.0) continue;
      sd += g.weights[i];
      if (first) {
        lam = g.lambda[i];
        eta = g.eta[i];
        first = false;
      } else {
        constant = constant && lam == g.lambda[i] && eta == g.eta[i];
      }
    }
    if (constant && sd > 0.0) paths["tridiagonal"] = jacobi::meixner_moments(lam, eta, sd, D)[n];
  }
  double gap = 0.0;
  for (auto a = paths.begin(); a != paths.end(); ++a)
    for (auto b = std::next(a); b != paths.end(); ++b)
      gap = std::max(gap, verify::rel(a->get<double>(), b->get<double>()));
  const bool ok = gap <= tol;

  std::ostringstream os;
  if (format == "json") {
    os << json{{"word", parts}, {"mode", config::mode_name(cfg.mode)}, {"paths", paths},
               {"max_gap", gap}, {"tolerance", tol}, {"passed", ok}}.dump(2)
       << "\n";
  } else if (format == "csv") {
    os << "path,value\n";
    for (auto it = paths.begin(); it != paths.end(); ++it) os << it.key() << "," << it->get<double>() << "\n";
    os << "max_gap," << gap << "\n";
  } else {
    for (auto it = paths.begin(); it != paths.end(); ++it) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "%-12s %.12g\n", it.key().c_str(), it->get<double>());
      os << buf;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "%-12s %.3e\n", "max_gap", gap);
    os << buf;
  }
  emit(os.str(), out);
  return ok ? kExitOk : kExitFail;
}

int cmd_verify(const config::ModelConfig& cfg, const std::string& suite, int n_max, std::uint64_t seed,
               const std::string& format, const std::string& out) {
  verify::Options opt{n_max > 0 ? n_max : cfg.budgets.n_max, seed};
  if (opt.n_max > config::kNMaxBound) throw ConfigError("--n-max exceeds " + std::to_string(config::kNMaxBound));
  log(Level::Info, "running suite " + suite + " (n_max " + std::to_string(opt.n_max) + ", seed " + std::to_string(seed) + ")");
  const auto report = verify::run(cfg, suite, opt);
  for (const auto& c : report.checks)
    if (!c.passed) log(Level::Warn, "check failed: " + c.suite + " " + c.name);
  emit(verify::format_report(report, format), out);
  return report.passed() ? kExitOk : kExitFail;
}

config::ModelConfig load_config(const std::string& path) {
  if (path.empty()) {
    log(Level::Info, "no --config given, using the built-in default model");
    return config::default_config();
  }
  return config::load(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freefock: free Fock space calculus and its verification"};
  app.require_subcommand(1);

  std::string format, out, config_path;
  int n = 0;
  std::string set = "nc";
  auto* parts = app.add_subcommand("partitions", "enumerate NC(n), G_n or marked interval partitions");
  parts->add_option("--n", n, "ground set size")->required();
  parts->add_option("--set", set, "nc | gn | interval")->check(CLI::IsMember({"nc", "gn", "interval"}));

  std::string word, delta;
  int power = 0;
  double tol = 1e-10;
  auto* moments = app.add_subcommand("moments", "vacuum moment of a field word by every available path");
  moments->add_option("--config", config_path, "model configuration (JSON)");
  moments->add_option("--word", word, "comma-separated indicator intervals lo:hi, leftmost first");
  moments->add_option("--power", power, "power of the field of --delta");
  moments->add_option("--delta", delta, "interval lo:hi for --power (default: whole grid)");
  moments->add_option("--tol", tol, "agreement tolerance");

  std::string suite = "all";
  int n_max = 0;
  std::uint64_t seed = 1;
  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("--config", config_path, "model configuration (JSON)");
  ver->add_option("--suite", suite, "wick | cumulant | xfock | meixner | all")
      ->check(CLI::IsMember({"wick", "cumulant", "xfock", "meixner", "all"}));
  ver->add_option("--n-max", n_max, "largest Wick order (default from config)");
  ver->add_option("--seed", seed, "RNG seed");

  for (auto* sub : {parts, moments, ver}) {
    sub->add_option("--format", format, "json | text | csv")->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("--out", out, "output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (parts->parsed()) return cmd_partitions(n, set, format.empty() ? "json" : format, out);
    const auto cfg = load_config(config_path);
    const std::string fmt = format.empty() ? cfg.format : format;
    if (moments->parsed()) return cmd_moments(cfg, word, power, delta, tol, fmt, out);
    return cmd_verify(cfg, suite, n_max, seed, fmt, out);
  } catch (const ConfigError& e) {
    log(Level::Error, e.what());
    return kExitConfig;
  } catch (const SizeError& e) {
    log(Level::Error, e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return kExitFail;
  }
}
