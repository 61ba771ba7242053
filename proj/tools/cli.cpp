#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tga/constants.hpp"
#include "tga/errors.hpp"
#include "tga/greedy.hpp"
#include "tga/oracle.hpp"
#include "tga/report.hpp"
#include "tga/space.hpp"
#include "tga/theorems.hpp"

namespace tga::cli {
namespace {

/// A bad flag combination or value found after CLI11 parsing.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kMaxCliDim = 12;

struct Common {
  std::string space;
  std::vector<std::size_t> dims;
  std::size_t samples = 1000;
  std::size_t hillclimb = 200;
  std::optional<std::uint64_t> seed;
  std::string grid = "coarse";
  unsigned threads = 1;
  std::string out;
  std::string mode = "real";
  int k_roots = 4;
  std::string config;
};

struct PointArgs {
  std::string space;
  std::optional<std::size_t> dim;
  std::string vector;
  std::size_t m = 1;
  std::string method = "automatic";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',' || c == ' ' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) {
    double x = 0.0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || end != tok.data() + tok.size()) throw ConfigError("bad vector entry '" + tok + "'");
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("empty vector");
  return out;
}

ScalarMode scalar_mode(const Common& c) {
  if (c.mode == "real") return ScalarMode::real();
  if (c.mode == "complex") return ScalarMode::complex(c.k_roots);
  throw ConfigError("mode must be real or complex");
}

std::vector<std::size_t> resolve_dims(const Common& c, const NormModel& norm) {
  std::vector<std::size_t> dims = c.dims;
  if (dims.empty()) {
    if (!norm.intrinsic_dim()) throw ConfigError("--dim is required for " + norm.descriptor());
    dims.push_back(*norm.intrinsic_dim());
  }
  for (std::size_t d : dims) {
    if (d == 0 || d > kMaxCliDim) throw ConfigError("dim must be in [1, 12]");
  }
  return dims;
}

Budget make_budget(const Common& c) {
  Budget b;
  const auto level = parse_grid_level(c.grid);
  if (!level) throw ConfigError("grid must be coarse, fine or off");
  b.grid = *level;
  b.samples = c.samples;
  b.hillclimb_rounds = c.hillclimb;
  if (!c.seed && (c.samples > 0 || c.hillclimb > 0)) throw ConfigError("--seed is required for a randomized budget");
  b.seed = c.seed.value_or(0);
  b.workers = std::max(1u, c.threads);
  if (const char* env = std::getenv("TGA_THREADS")) {
    unsigned n = 0;
    const std::string_view sv(env);
    const auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), n);
    if (ec != std::errc() || p != sv.data() + sv.size() || n == 0) throw ConfigError("TGA_THREADS must be a positive integer");
    b.workers = n;
  }
  return b;
}

Json budget_json(const Budget& b) {
  return {{"grid", std::string(to_string(b.grid))}, {"samples", b.samples}, {"hillclimb_rounds", b.hillclimb_rounds}};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
  if (!f) throw ConfigError("cannot write " + path);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ReportHeader header(std::chrono::steady_clock::time_point t0) {
  ReportHeader h;
  h.version = TGA_VERSION;
  h.timestamp = utc_timestamp();
  h.wall_time_s = seconds_since(t0);
  return h;
}

SpaceSpec point_space(const PointArgs& a, std::size_t len) {
  NormModel norm = parse_norm(a.space);
  const std::size_t dim = a.dim.value_or(len);
  if (dim != len) throw ConfigError("vector length " + std::to_string(len) + " does not match --dim");
  return SpaceSpec(dim, std::move(norm));
}

int run_greedy(const PointArgs& a, std::ostream& out) {
  const auto f = parse_vector(a.vector);
  const SpaceSpec space = point_space(a, f.size());
  const auto G = greedy_sum(f, a.m);
  CoeffVec<double> r = f;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= G[i];
  Json j = {{"space", space.descriptor()},
            {"vector", f},
            {"m", a.m},
            {"ordering", greedy_ordering(f)},
            {"greedy_set", greedy_set(f, a.m).indices()},
            {"greedy_sum", G},
            {"residual_norm", norm_eval(space, r)}};
  out << j.dump(2) << "\n";
  return kOk;
}

OracleOptions oracle_options(const std::string& method) {
  OracleOptions o;
  if (method == "automatic") {
    o.method = OracleMethod::automatic;
  } else if (method == "generic") {
    o.method = OracleMethod::generic;
  } else if (method == "fastpath") {
    o.method = OracleMethod::fastpath;
  } else {
    throw ConfigError("method must be automatic, generic or fastpath");
  }
  return o;
}

int run_sigma(const PointArgs& a, bool dm, std::ostream& out) {
  const auto f = parse_vector(a.vector);
  const SpaceSpec space = point_space(a, f.size());
  const auto opts = oracle_options(a.method);
  const auto res = dm ? d_m(space, f, a.m, opts) : sigma_m(space, f, a.m, opts);
  Json j = {{"space", space.descriptor()}, {"m", a.m}, {"value", res.value}, {"support", res.support.indices()}};
  j[dm ? "alpha" : "coeffs"] = dm ? Json(res.coeffs.empty() ? 0.0 : res.coeffs[0]) : Json(res.coeffs);
  j["converged"] = res.converged;
  out << j.dump(2) << "\n";
  return kOk;
}

std::vector<ConstantKind> parse_kinds(const std::string& s) {
  std::vector<ConstantKind> kinds;
  for (const auto& tok : split_list(s)) {
    if (tok == "all") {
      kinds.assign(std::begin(kAllKinds), std::end(kAllKinds));
      continue;
    }
    const auto k = parse_kind(tok);
    if (!k) throw ConfigError("unknown kind '" + tok + "'");
    kinds.push_back(*k);
  }
  if (kinds.empty()) throw ConfigError("empty kinds list");
  return kinds;
}

template <FieldScalar T>
int run_estimate_t(const Common& c, const std::vector<ConstantKind>& kinds, const std::string& format,
                   std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Budget budget = make_budget(c);
  const NormModel norm = parse_norm(c.space);
  const auto dims = resolve_dims(c, norm);
  const ScalarMode mode = scalar_mode(c);

  std::vector<SpaceEstimates<T>> results;
  for (std::size_t d : dims) {
    const SpaceSpec space(d, norm, mode);
    SpaceEstimates<T> r{space.descriptor(), d, budget.seed, {}};
    for (ConstantKind k : kinds) r.estimates.push_back(estimate<T>(space, k, budget));
    results.push_back(std::move(r));
  }

  if (format == "csv") {
    emit(estimates_to_csv(results), c.out, out);
    return kOk;
  }
  Json kinds_json = Json::array();
  for (ConstantKind k : kinds) kinds_json.push_back(std::string(to_string(k)));
  Json config = {{"command", "estimate"}, {"space", norm.descriptor()}, {"dims", dims},
                 {"kinds", kinds_json},   {"budget", budget_json(budget)}, {"seed", budget.seed},
                 {"mode", c.mode}};
  if (mode.is_complex()) config["k_roots"] = c.k_roots;
  Json res = Json::array();
  for (const auto& r : results) res.push_back(space_estimates_to_json(r));
  emit(make_report(header(t0), config, res).dump(2) + "\n", c.out, out);
  return kOk;
}

inline const std::vector<std::string> kSuites = {"1un", "qg", "cor1", "corsym", "1sym", "tech", "main", "gaps"};

std::vector<std::string> parse_suites(const std::string& s, bool have_gaps) {
  std::vector<std::string> out;
  for (const auto& tok : split_list(s)) {
    if (tok == "all") {
      for (const auto& name : kSuites) {
        if (name != "gaps" || have_gaps) out.push_back(name);
      }
      continue;
    }
    if (std::find(kSuites.begin(), kSuites.end(), tok) == kSuites.end()) {
      throw ConfigError("unknown suite '" + tok + "'");
    }
    if (tok == "gaps" && !have_gaps) throw ConfigError("suite gaps needs --gaps");
    out.push_back(tok);
  }
  if (out.empty()) throw ConfigError("empty suite list");
  return out;
}

template <FieldScalar T>
int run_verify_t(const Common& c, const std::vector<std::string>& suites, const std::vector<std::size_t>& gaps,
                 const TransportOptions& topts, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Budget budget = make_budget(c);
  const NormModel norm = parse_norm(c.space);
  const auto dims = resolve_dims(c, norm);
  const ScalarMode mode = scalar_mode(c);

  int code = kOk;
  Json res = Json::array();
  for (std::size_t d : dims) {
    const SpaceSpec space(d, norm, mode);
    EstimateCache<T> cache(space, budget);
    Json verdicts = Json::array();
    for (const auto& suite : suites) {
      const Verdict v = suite == "main"   ? check_theorem_main(cache, topts)
                        : suite == "gaps" ? check_gap_corollary<T>(cache, gaps, topts)
                                          : run_suite(cache, suite, gaps);
      if (v.status == VerdictStatus::violated) {
        code = kViolated;
      } else if (v.status == VerdictStatus::transport_failed && code == kOk) {
        code = kTransportFailed;
      }
      verdicts.push_back(verdict_to_json(v));
    }
    res.push_back({{"space", space.descriptor()}, {"dim", d}, {"seed", budget.seed}, {"verdicts", verdicts}});
  }
  Json config = {{"command", "verify"}, {"space", norm.descriptor()}, {"dims", dims},
                 {"suites", suites},    {"gaps", gaps},               {"budget", budget_json(budget)},
                 {"seed", budget.seed}, {"mode", c.mode},
                 {"transport", {{"gamma", topts.gamma}, {"auto_shrink", topts.auto_shrink}}}};
  emit(make_report(header(t0), config, res).dump(2) + "\n", c.out, out);
  return code;
}

bool given(const std::vector<std::string>& args, const std::string& opt) {
  for (const auto& a : args) {
    if (a == opt || a.rfind(opt + "=", 0) == 0) return true;
  }
  return false;
}

// Splices the keys of a --config file into the argument list as
// --key=value, for the subcommand named first. Keys at the top level and
// keys in the subcommand's section both apply; explicit arguments win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty() || args.empty()) return args;
  const std::string sub = args.front();
  for (const auto& item : CLI::ConfigTOML().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && (item.parents.size() != 1 || item.parents[0] != sub)) continue;
    const std::string opt = "--" + item.name;
    if (given(args, opt)) continue;
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    args.push_back(opt + "=" + value);
  }
  return args;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--space", c.space, "space descriptor, e.g. lp:2, wl1:1,2, lorentz:2,1")->required();
  sub->add_option("--dim", c.dims, "dimensions, comma separated")->delimiter(',');
  sub->add_option("--samples", c.samples, "random samples per constant");
  sub->add_option("--hillclimb", c.hillclimb, "hill-climbing rounds");
  sub->add_option("--seed", c.seed, "64-bit seed");
  sub->add_option("--grid", c.grid, "grid level: coarse, fine or off");
  sub->add_option("--threads", c.threads, "worker threads (TGA_THREADS overrides)");
  sub->add_option("--out", c.out, "output file; stdout when omitted");
  sub->add_option("--mode", c.mode, "scalar field: real or complex");
  sub->add_option("--k-roots", c.k_roots, "roots of unity used as signs in complex mode");
  sub->add_option("--config", c.config, "TOML or INI file with option values");
}

void add_point(CLI::App* sub, PointArgs& a) {
  sub->add_option("--space", a.space, "space descriptor")->required();
  sub->add_option("--dim", a.dim, "dimension; defaults to the vector length");
  sub->add_option("--vector", a.vector, "coefficients, comma separated")->required()->allow_extra_args(false);
  sub->add_option("--m", a.m, "number of terms");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thresholding greedy algorithm toolkit", "tga"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TGA_VERSION));

  PointArgs point;
  auto* greedy = app.add_subcommand("greedy", "greedy ordering, set and residual of one vector");
  add_point(greedy, point);
  auto* sigma = app.add_subcommand("sigma", "best m-term approximation error");
  add_point(sigma, point);
  sigma->add_option("--method", point.method, "automatic, generic or fastpath");
  auto* dm = app.add_subcommand("dm", "best approximation by multiples of indicator vectors");
  add_point(dm, point);
  dm->add_option("--method", point.method, "automatic, generic or fastpath");

  Common common;
  std::string kinds, format = "json";
  auto* est = app.add_subcommand("estimate", "estimate greedy-type constants");
  add_common(est, common);
  est->add_option("--kinds", kinds, "constants, e.g. Cg,Ks,Delta,Q or all")->required();
  est->add_option("--format", format, "json or csv");

  Common vcommon;
  std::string suites = "main";
  std::vector<std::size_t> gaps;
  double gamma = 1.0;
  bool no_shrink = false;
  auto* ver = app.add_subcommand("verify", "run verification suites");
  add_common(ver, vcommon);
  ver->add_option("--suite", suites, "1un, qg, cor1, corsym, 1sym, tech, main, gaps or all");
  ver->add_option("--gaps", gaps, "strictly increasing gap sequence, comma separated")->delimiter(',');
  ver->add_option("--gamma", gamma, "initial transport parameter");
  ver->add_flag("--no-shrink", no_shrink, "keep gamma fixed in transports");

  std::vector<std::string> rev;
  try {
    const auto expanded = expand_config(args);
    rev.assign(expanded.rbegin(), expanded.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << TGA_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "tga: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (greedy->parsed()) return run_greedy(point, out);
    if (sigma->parsed()) return run_sigma(point, false, out);
    if (dm->parsed()) return run_sigma(point, true, out);
    if (est->parsed()) {
      const auto k = parse_kinds(kinds);
      if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
      if (common.mode == "complex") return run_estimate_t<Complex>(common, k, format, out);
      return run_estimate_t<double>(common, k, format, out);
    }
    if (ver->parsed()) {
      const auto s = parse_suites(suites, !gaps.empty());
      if (gamma <= 0.0) throw ConfigError("gamma must be positive");
      TransportOptions topts;
      topts.gamma = gamma;
      topts.auto_shrink = !no_shrink;
      if (vcommon.mode == "complex") return run_verify_t<Complex>(vcommon, s, gaps, topts, out);
      return run_verify_t<double>(vcommon, s, gaps, topts, out);
    }
  } catch (const SpaceError& e) {
    err << "tga: space error: " << e.what() << "\n";
    return kSpaceError;
  } catch (const Error& e) {
    err << "tga: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace tga::cli
