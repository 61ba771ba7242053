// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--tga PATH] [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support/brute.hpp"
#include "tga/constants.hpp"
#include "tga/greedy.hpp"
#include "tga/oracle.hpp"
#include "tga/report.hpp"
#include "tga/space.hpp"
#include "tga/theorems.hpp"
#include "tga/transports.hpp"

using namespace tga;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kInf = NormModel::kInf;

std::string pname(double p) { return std::isinf(p) ? "inf" : std::to_string(static_cast<int>(p)); }

std::string vec_str(const std::vector<double>& v) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << ")";
  return s.str();
}

double greedy_residual(const SpaceSpec& s, const CoeffVec<double>& f, std::size_t m) {
  CoeffVec<double> r = f;
  for (Index n : greedy_set(f, m)) r[n] = 0.0;
  return norm_eval(s, r);
}

// 1. C_g ratios of l_p are 1 on the grid and on random vectors.
Result criterion1() {
  Result r;
  const std::vector<double> alphabet = {0, 0.25, -0.25, 0.5, -0.5, 1, -1};
  OracleOptions fast, generic;
  fast.method = OracleMethod::fastpath;
  generic.method = OracleMethod::generic;
  double worst_fast = 0.0, worst_generic = 0.0, slowest = 0.0;
  std::size_t n_fast = 0, n_generic = 0;
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    const auto bnorm = brute::lp(p);
    for (std::size_t d = 3; d <= 6; ++d) {
      const auto t0 = std::chrono::steady_clock::now();
      const SpaceSpec s(d, NormModel::lp(p));
      const auto grid = brute::grid(d, alphabet);
      const auto rnd = brute::random_vectors(d, 2000, 1000 + d);
      // The generic minimizer runs on every random vector and on a stride of the grid.
      const std::size_t stride = d <= 4 ? 1 : (d == 5 ? 50 : 450);
      auto run = [&](const CoeffVec<double>& f, bool with_generic) {
        for (std::size_t m = 1; m < d; ++m) {
          const double res = greedy_residual(s, f, m);
          const double sig = sigma_m(s, f, m, fast).value;
          if (sig < kDegenerateDenominator) {
            r.require(res < 1e-12, "nonzero residual with sigma 0 at " + vec_str(f));
            continue;
          }
          ++n_fast;
          const double dev = std::abs(res / sig - 1.0);
          worst_fast = std::max(worst_fast, dev);
          r.require(dev <= 1e-9, "fast path ratio at p=" + pname(p) + " f=" + vec_str(f));
          if (!with_generic) continue;
          ++n_generic;
          const double gdev = std::abs(res / sigma_m(s, f, m, generic).value - 1.0);
          worst_generic = std::max(worst_generic, gdev);
          r.require(gdev <= 1e-6, "generic ratio at p=" + pname(p) + " f=" + vec_str(f));
        }
      };
      for (std::size_t i = 0; i < grid.size(); ++i) run(grid[i], i % stride == 0);
      for (const auto& f : rnd) run(f, true);
      // The library's fast path against the test-side lattice oracle.
      for (std::size_t i = 0; i < 200; ++i) {
        const std::size_t m = 1 + i % (d - 1);
        const double a = sigma_m(s, rnd[i], m, fast).value, b = brute::sigma_lattice(bnorm, rnd[i], m);
        r.require(std::abs(a - b) <= 1e-9 * std::max(1.0, b), "fast path against the lattice oracle");
      }
      const double t = elapsed(t0);
      slowest = std::max(slowest, t);
      r.require(t < 60.0, "runtime above 60 s at p=" + pname(p) + " d=" + std::to_string(d));
    }
  }
  r.note << "ratios: " << n_fast << " fast path (max |r-1| " << worst_fast << "), " << n_generic
         << " generic (max |r-1| " << worst_generic << "); slowest (p, dim) " << slowest << " s";
  return r;
}

// 2. Joint verdict patterns and the gamma = 1/2 transport of the two-point democracy witness.
Result criterion2() {
  Result r;
  Budget b;
  b.seed = 7;
  auto pattern = [&](const std::string& desc, std::size_t d) {
    const SpaceSpec s(d, parse_norm(desc));
    EstimateCache<double> cache(s, b);
    const Verdict v = check_theorem_main(cache);
    return std::make_pair(v, std::string(v.detail.value("pattern", "")));
  };
  for (const auto& [desc, d] : std::vector<std::pair<std::string, std::size_t>>{
           {"lp:1", 4}, {"lp:2", 4}, {"lp:4", 4}, {"lp:inf", 4}, {"lorentz:1,1,1,1", 4}}) {
    const auto [v, pat] = pattern(desc, d);
    r.require(v.holds() && pat == "all_ones", desc + " gives " + std::string(to_string(v.status)) + "/" + pat);
  }
  double delta_transport = 0.0;
  for (const auto& desc : {std::string("wl1:1,2"), std::string("wl1:1,2,1,1")}) {
    const auto [v, pat] = pattern(desc, parse_norm(desc).intrinsic_dim().value());
    r.require(v.holds() && pat == "all_exceed", desc + " gives " + std::string(to_string(v.status)) + "/" + pat);
    if (desc == "wl1:1,2") {
      delta_transport = v.detail["estimates"]["Delta_slc"]["transport"].value("ratio", 0.0);
    }
  }
  r.require(delta_transport >= 4.0 / 3.0 - 1e-9, "estimated Delta witness transports below 4/3");

  const SpaceSpec s(2, NormModel::weighted_lp(1.0, {1.0, 2.0}));
  Witness<double> w;
  w.f = {0.0, 0.0};
  w.A = SupportSet{1};
  w.eps = {1.0};
  w.B = SupportSet{0};
  w.eta = {1.0};
  TransportOptions opts;
  opts.gamma = 0.5;
  opts.auto_shrink = false;
  const auto tr = transport_slc_to_greedy(s, w, opts);
  r.require(tr.status == TransportStatus::transported, "gamma = 1/2 transport did not complete");
  const auto& h = tr.witness.f;
  const auto bnorm = brute::lp(1.0, {1.0, 2.0});
  const double brute_ratio = bnorm(brute::residual(h, brute::greedy_set(h, 1))) / brute::sigma(bnorm, h, 1);
  r.require(std::abs(replay_ratio(s, ConstantKind::C_g_m1, tr.witness) - tr.ratio) <= 1e-9, "replay mismatch");
  r.require(std::abs(brute_ratio - tr.ratio) <= 1e-9, "brute-force sigma_1 disagrees");
  r.require(tr.ratio >= 4.0 / 3.0 - 1e-9, "gamma = 1/2 ratio below 4/3");
  r.note << "h = " << vec_str(h) << ", ratio " << tr.ratio << " (brute force " << brute_ratio
         << "), auto-shrink transport of the estimated witness " << delta_transport;
  return r;
}

// 3. Generic sigma_m against the separable closed form.
Result criterion3() {
  Result r;
  OracleOptions fast, generic;
  fast.method = OracleMethod::fastpath;
  generic.method = OracleMethod::generic;
  const std::vector<double> w = {1.0, 2.0, 0.5, 1.0, 3.0, 1.5};
  std::vector<std::pair<std::string, NormModel>> spaces;
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    spaces.emplace_back("lp:" + pname(p), NormModel::lp(p));
    spaces.emplace_back("wlp:" + pname(p), NormModel::weighted_lp(p, w));
  }
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& [name, norm] : spaces) {
    const SpaceSpec s(6, norm);
    const auto vecs = brute::random_vectors(6, 1000, 31);
    for (const auto& f : vecs) {
      for (std::size_t m = 1; m <= 3; ++m) {
        const double a = sigma_m(s, f, m, fast).value, g = sigma_m(s, f, m, generic).value;
        worst = std::max(worst, std::abs(a - g));
        ++count;
        r.require(std::abs(a - g) <= 1e-6, name + " at " + vec_str(f));
      }
    }
  }
  r.note << count << " comparisons over " << spaces.size() << " spaces, max |generic - closed form| " << worst;
  return r;
}

// 4. Democracy constants.
Result criterion4() {
  Result r;
  Budget b;
  b.seed = 7;
  const SpaceSpec wl1(2, NormModel::weighted_lp(1.0, {1.0, 2.0}));
  for (bool signed_sets : {false, true}) {
    const auto e = estimate_democracy<double>(wl1, b, signed_sets);
    r.require(e.value == 2.0, "wl1 democracy " + std::to_string(e.value));
    r.require(e.witness.A == SupportSet{1} && e.witness.B == SupportSet{0}, "wl1 democracy witness");
    r.require(e.strategy.find("exhaustive") != std::string::npos, "wl1 enumeration not exhaustive");
  }
  for (double p : {1.0, 2.0, 4.0, kInf}) {
    const SpaceSpec s(4, NormModel::lp(p));
    for (bool signed_sets : {false, true}) {
      const auto e = estimate_democracy<double>(s, b, signed_sets);
      r.require(e.value == 1.0, "lp:" + pname(p) + " democracy " + std::to_string(e.value));
    }
  }
  r.note << "wl1(1,2): 2 with A = {1}, B = {0} (zero-based); lp: 1";
  return r;
}

// 5. Q_star on weighted l_1 and the identity transport to singletons.
Result criterion5() {
  Result r;
  Budget b;
  b.seed = 7;
  const SpaceSpec s(2, NormModel::weighted_lp(1.0, {1.0, 2.0}));
  const auto q = estimate_q_star<double>(s, b);
  r.require(q.value >= 2.0 - 1e-9, "Q_star estimate " + std::to_string(q.value));
  r.require(std::abs(replay_ratio(s, ConstantKind::Q_star, q.witness) - q.value) <= 1e-9, "Q_star witness replay");
  Witness<double> w;
  w.f = {0.0, 0.0};
  w.A = SupportSet{1};
  w.eps = {1.0};
  w.y = CoeffVec<double>{1.0, 0.0};
  w.B = SupportSet{0};
  const double recorded = replay_ratio(s, ConstantKind::Q_star, w);
  r.require(std::abs(recorded - 2.0) <= 1e-9, "recorded witness replays to " + std::to_string(recorded));

  EstimateCache<double> cache(s, b);
  const Verdict v = check_theorem_1sym(cache);
  const double single = cache.get(ConstantKind::Q_star_singleton).value;
  const double identity = v.detail.contains("identity_transport") ? v.detail["identity_transport"].value("ratio", 0.0) : 0.0;
  r.require(v.holds(), "1sym verdict " + std::string(to_string(v.status)));
  r.require(std::abs(single - q.value) <= 1e-9, "singleton estimate differs from Q_star");
  r.require(std::abs(identity - single) <= 1e-9, "identity transport ratio differs");
  r.note << "Q_star " << q.value << ", recorded witness " << recorded << ", singleton " << single
         << ", identity transport " << identity;
  return r;
}

// 6. Gap TGA on l_2.
Result criterion6() {
  Result r;
  const SpaceSpec s(6, NormModel::lp(2.0));
  const std::vector<std::size_t> gaps = {2, 5};
  OracleOptions generic;
  generic.method = OracleMethod::generic;
  const auto bnorm = brute::lp(2.0);
  double worst = 0.0;
  for (const auto& f : brute::random_vectors(6, 500, 61)) {
    for (const auto& opts : {OracleOptions{}, generic}) {
      for (const auto& g : gap_greedy_residual_norms(s, f, gaps, opts)) {
        worst = std::max(worst, std::abs(g.residual_norm - g.sigma_n));
        r.require(std::abs(g.residual_norm - g.sigma_n) <= 1e-6, "gap residual at " + vec_str(f));
      }
    }
    for (std::size_t n : gaps) {
      const double res = bnorm(brute::residual(f, brute::greedy_set(f, n)));
      r.require(std::abs(res - brute::sigma_lattice(bnorm, f, n)) <= 1e-9, "test-side oracle at " + vec_str(f));
    }
  }
  r.note << "500 vectors, n in {2, 5}, max |residual - sigma_n| " << worst;
  return r;
}

// 7. Proposition suites on the built-in spaces.
Result criterion7() {
  Result r;
  Budget b;
  b.seed = 7;
  b.grid = GridLevel::fine;
  std::vector<std::pair<std::string, std::size_t>> spaces;
  for (const char* p : {"lp:1", "lp:1.5", "lp:2", "lp:4", "lp:inf"}) {
    for (std::size_t d = 2; d <= 5; ++d) spaces.emplace_back(p, d);
  }
  for (const char* desc : {"wl1:1,2", "wl1:1,2,1,1", "wlp:2:1,3,1,2,1", "wlp:inf:2,1,1", "lorentz:1,1,1,1,1",
                           "lorentz:2,1,0.5,0.25", "lorentz:3,2,1"}) {
    spaces.emplace_back(desc, parse_norm(desc).intrinsic_dim().value());
  }
  for (std::size_t d = 2; d <= 4; ++d) spaces.emplace_back("plugin:sup_half_sum", d);
  std::size_t verdicts = 0, chain_checks = 0;
  for (const auto& [desc, d] : spaces) {
    const SpaceSpec s(d, parse_norm(desc));
    EstimateCache<double> cache(s, b);
    for (const auto& v : {check_prop_1un(cache), check_quasi_greedy_induction(cache, 500), check_cor1(cache),
                          check_corsym(cache)}) {
      ++verdicts;
      r.require(v.holds(), v.claim_id + " on " + desc + " d=" + std::to_string(d) + ": " + v.message);
      if (v.claim_id == "qg") {
        const auto& c = v.detail["chaining"];
        chain_checks += c.value("checks", std::size_t{0});
        r.require(c.value("vectors", std::size_t{0}) == 500 && c.value("mismatches", std::size_t{1}) == 0,
                  "chaining identity on " + desc);
      }
    }
  }
  r.note << verdicts << " verdicts over " << spaces.size() << " spaces, " << chain_checks
         << " chaining identity checks";
  return r;
}

// 8. Worker count does not change the report payload.
Result criterion8(const std::string& tga) {
  Result r;
  if (tga.empty()) {
    r.require(false, "no tga binary given (--tga)");
    return r;
  }
  unsetenv("TGA_THREADS");
  auto run = [&](int threads) {
    const std::string out = "acceptance_determinism_" + std::to_string(threads) + ".json";
    const std::string cmd = "\"" + tga + "\" estimate --space lorentz:2,1,0.5,0.25,0.125 --kinds all --samples 1000 "
                            "--seed 11 --threads " + std::to_string(threads) + " --out " + out;
    const int rc = std::system(cmd.c_str());
    r.require(rc == 0, "tga exited with " + std::to_string(rc));
    std::ifstream in(out);
    Json j = Json::parse(in, nullptr, false);
    std::remove(out.c_str());
    return j;
  };
  const Json a = run(1), b = run(8);
  r.require(!a.is_discarded() && !b.is_discarded(), "unparsable report");
  if (r.pass) {
    r.require(a["results"].dump() == b["results"].dump(), "results differ between 1 and 8 workers");
    r.require(a["config"].dump() == b["config"].dump(), "config echo differs");
  }
  r.note << "lorentz:2,1,0.5,0.25,0.125, all kinds, 1 vs 8 workers";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::string tga;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--tga" && i + 1 < argc) {
      tga = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--tga PATH] [--only N]\n";
      return 64;
    }
  }
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"lp spaces are 1-greedy at desk scale", criterion1},
      {"joint verdict patterns and the gamma = 1/2 transport", criterion2},
      {"generic sigma_m matches the closed form", criterion3},
      {"democracy constants", criterion4},
      {"Q_star chain on weighted l1", criterion5},
      {"gap TGA on l2", criterion6},
      {"proposition suites on built-in spaces", criterion7},
      {"determinism across worker counts", [&] { return criterion8(tga); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && only != static_cast<int>(i + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result res;
    try {
      res = criteria[i].second();
    } catch (const std::exception& e) {
      res.require(false, std::string("exception: ") + e.what());
    }
    if (!res.pass) ++failed;
    std::cout << (res.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " ["
              << elapsed(t0) << " s] " << res.note.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
