#include "doctest.h"

#include "support/brute.hpp"
#include "tga/constants.hpp"
#include "tga/transports.hpp"

using namespace tga;

namespace {

Witness<double> two_point(CoeffVec<double> f, Index n, double e, Index k, double h) {
  Witness<double> w;
  w.f = std::move(f);
  w.A = SupportSet{n};
  w.eps = {e};
  w.B = SupportSet{k};
  w.eta = {h};
  return w;
}

// ||h - G_1 h|| / sigma_1(h), both sides from the test-side formulas.
double brute_greedy_ratio(const brute::Norm& norm, const CoeffVec<double>& h) {
  const auto G = brute::greedy_set(h, 1);
  CoeffVec<double> r = h;
  for (auto i : G) r[i] = 0.0;
  return norm(r) / brute::sigma_lattice(norm, h, 1);
}

}  // namespace

TEST_CASE("slc transport on weighted l1") {
  const SpaceSpec s(2, parse_norm("wl1:1,2"));
  const auto src = two_point({0.0, 0.0}, 1, 1.0, 0, 1.0);
  CHECK(replay_ratio(s, ConstantKind::Delta_slc, src) == doctest::Approx(2.0));

  TransportOptions o;
  o.gamma = 0.5;
  o.auto_shrink = false;
  const auto t = transport_slc_to_greedy(s, src, o);
  REQUIRE(t.status == TransportStatus::transported);
  CHECK(t.kind == ConstantKind::C_g_m1);
  CHECK(t.witness.f == CoeffVec<double>{1.5, 1.0});
  CHECK(t.ratio == doctest::Approx(4.0 / 3.0));
  CHECK(t.ratio == doctest::Approx(brute_greedy_ratio(brute::lp(1.0, {1.0, 2.0}), t.witness.f)));
  CHECK(t.source_ratio == doctest::Approx(2.0));

  // The transported ratio approaches the source ratio as gamma shrinks.
  o.gamma = 1e-4;
  CHECK(transport_slc_to_greedy(s, src, o).ratio == doctest::Approx(2.0).epsilon(1e-3));

  TransportOptions shrink;
  const auto a = transport_slc_to_greedy(s, src, shrink);
  REQUIRE(a.status == TransportStatus::transported);
  CHECK(a.ratio > 1.5);
}

TEST_CASE("slc transport with nothing to carry") {
  const SpaceSpec s(2, parse_norm("lp:2"));
  const auto t = transport_slc_to_greedy(s, two_point({0.0, 0.0}, 1, 1.0, 0, -1.0));
  CHECK(t.status == TransportStatus::no_violation);
}

TEST_CASE("suppression transport on the plugin norm") {
  const SpaceSpec s(2, parse_norm("plugin:sup_half_sum"));
  Witness<double> w;
  w.f = {1.0, -1.0};
  w.A = SupportSet{1};
  const auto t = transport_uncond_to_greedy(s, w);
  REQUIRE(t.status == TransportStatus::transported);
  CHECK(t.witness.alpha == doctest::Approx(4.0));
  CHECK(t.ratio >= 1.5 - 1e-9);
  CHECK(replay_ratio(s, ConstantKind::C_g_m1, t.witness) == doctest::Approx(t.ratio));
}

TEST_CASE("basic links bound the source ratio") {
  for (const char* d : {"wl1:1,2,1", "lorentz:2,1,0.5", "plugin:sup_half_sum", "wlp:3:2,1,0.5"}) {
    const SpaceSpec s(3, parse_norm(d));
    for (auto k : {ConstantKind::C_g, ConstantKind::C_g_m1, ConstantKind::K_s, ConstantKind::Delta_slc,
                   ConstantKind::Q_star, ConstantKind::Q_star_singleton}) {
      CAPTURE(d);
      CAPTURE(to_string(k));
      for (const auto& w : random_instances<double>(s, k, 60, 21)) {
        const auto parts = evaluate_instance(s, k, w);
        if (!parts) continue;
        const auto links = basic_links(s, k, w);
        const auto worst = worst_link(links);
        const double r = parts->ratio();
        if (r > 1.0 + kClaimTol) {
          REQUIRE(worst.has_value());
          CHECK(worst->ratio > 1.0);
        }
        for (const auto& l : links) {
          CHECK(replay_ratio(s, l.kind, l.witness) == doctest::Approx(l.ratio).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("violations reach C_g_m1") {
  for (const char* d : {"wl1:1,2,1", "plugin:sup_half_sum"}) {
    const SpaceSpec s(3, parse_norm(d));
    Budget b;
    b.samples = 200;
    b.hillclimb_rounds = 20;
    b.seed = 2;
    for (auto k : {ConstantKind::C_g, ConstantKind::K_s, ConstantKind::Delta_slc, ConstantKind::Q_star}) {
      const auto e = estimate<double>(s, k, b);
      if (e.value <= 1.0 + kClaimTol) continue;
      CAPTURE(d);
      CAPTURE(to_string(k));
      const auto t = transport_to_greedy_m1(s, k, e.witness);
      CHECK(t.status == TransportStatus::transported);
      CHECK(t.ratio > 1.0 + kClaimTol);
      CHECK(replay_ratio(s, ConstantKind::C_g_m1, t.witness) == doctest::Approx(t.ratio).epsilon(1e-9));
    }
  }
}

TEST_CASE("singleton links") {
  const SpaceSpec s(3, parse_norm("wl1:1,2,1"));
  for (const auto& w : random_instances<double>(s, ConstantKind::Q_star, 80, 6)) {
    const auto parts = evaluate_instance(s, ConstantKind::Q_star, w);
    if (!parts) continue;
    const auto links = singleton_links(s, w);
    if (w.A.empty()) {
      CHECK(links.empty());
      continue;
    }
    REQUIRE_FALSE(links.empty());
    double prod = 1.0;
    for (const auto& l : links) {
      CHECK(l.kind == ConstantKind::Q_star_singleton);
      CHECK_FALSE(admissibility_violation(s, l.kind, l.witness).has_value());
      prod *= l.ratio;
    }
    CHECK(parts->ratio() <= prod + 1e-9);
  }
}
