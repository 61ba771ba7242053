#include "doctest.h"

#include "tga/theorems.hpp"

using namespace tga;

namespace {

Budget small_budget() {
  Budget b;
  b.samples = 300;
  b.hillclimb_rounds = 30;
  b.seed = 4;
  return b;
}

const char* const kSuites[] = {"1un", "qg", "cor1", "corsym", "1sym", "tech", "main"};

}  // namespace

TEST_CASE("every suite holds on lp spaces") {
  for (const char* d : {"lp:1", "lp:2", "lp:inf"}) {
    const SpaceSpec s(4, parse_norm(d));
    EstimateCache<double> cache(s, small_budget());
    for (const char* suite : kSuites) {
      CAPTURE(d);
      CAPTURE(suite);
      const auto v = run_suite(cache, suite);
      CHECK(v.holds());
      CHECK_FALSE(v.witness.has_value());
    }
    CHECK(run_suite(cache, "main").detail["pattern"] == "all_ones");
  }
}

TEST_CASE("weighted l1 exceeds in every main constant") {
  const SpaceSpec s(3, parse_norm("wl1:1,2,1"));
  EstimateCache<double> cache(s, small_budget());
  for (const char* suite : kSuites) {
    CAPTURE(suite);
    CHECK(run_suite(cache, suite).holds());
  }
  const auto v = check_theorem_main(cache);
  CHECK(v.detail["pattern"] == "all_exceed");
  const auto& est = v.detail["estimates"];
  for (const char* k : {"C_g", "C_g_m1", "Delta_slc", "Q_star", "Q_star_singleton"}) {
    CAPTURE(k);
    CHECK(est[k]["exceeds"] == true);
    CHECK(est[k]["transport"]["status"] == "transported");
  }
}

TEST_CASE("plugin norm: both suppression constants exceed one") {
  const SpaceSpec s(3, parse_norm("plugin:sup_half_sum"));
  EstimateCache<double> cache(s, small_budget());
  CHECK(cache.get(ConstantKind::K_s_single).value > 1.0 + kExceedDelta);
  CHECK(cache.get(ConstantKind::K_s).value > 1.0 + kExceedDelta);
  for (const char* suite : kSuites) {
    CAPTURE(suite);
    CHECK(run_suite(cache, suite).holds());
  }
}

TEST_CASE("symmetric lorentz spaces are 1-greedy on the budget") {
  const SpaceSpec s(3, parse_norm("lorentz:2,1,0.5"));
  EstimateCache<double> cache(s, small_budget());
  const auto v = check_theorem_main(cache);
  CHECK(v.holds());
  CHECK(v.detail["pattern"] == "all_ones");
}

TEST_CASE("gap corollary on l2") {
  const SpaceSpec s(4, parse_norm("lp:2"));
  EstimateCache<double> cache(s, small_budget());
  const std::vector<std::size_t> gaps = {1, 2, 4};
  CHECK(check_gap_corollary(cache, gaps).holds());
  const std::vector<std::size_t> bad = {2, 2};
  CHECK_THROWS(check_gap_corollary(cache, bad));
}

TEST_CASE("unknown suites are rejected") {
  const SpaceSpec s(2, parse_norm("lp:2"));
  EstimateCache<double> cache(s, small_budget());
  CHECK_THROWS(run_suite(cache, "nope"));
}

TEST_CASE("cache returns the same estimate") {
  const SpaceSpec s(3, parse_norm("wl1:1,2,1"));
  EstimateCache<double> cache(s, small_budget());
  const auto* a = &cache.get(ConstantKind::C_g);
  CHECK(a == &cache.get(ConstantKind::C_g));
  CHECK(*a == estimate<double>(s, ConstantKind::C_g, small_budget()));
}

TEST_CASE("verdict json") {
  Verdict v;
  v.claim_id = "main";
  v.status = VerdictStatus::violated;
  v.witness = Json{{"f", {1.0}}};
  const auto j = verdict_to_json(v);
  CHECK(j["claim_id"] == "main");
  CHECK(j["status"] == "violated");
  CHECK(j.contains("witness"));
}

TEST_CASE("complex mode on l2") {
  const SpaceSpec s(3, parse_norm("lp:2"), ScalarMode::complex(4));
  Budget b = small_budget();
  b.samples = 100;
  b.hillclimb_rounds = 10;
  EstimateCache<Complex> cache(s, b);
  CHECK(check_theorem_main(cache).holds());
  CHECK(check_prop_1un(cache).holds());
}
