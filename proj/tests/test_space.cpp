#include "doctest.h"

#include <cmath>

#include "support/brute.hpp"
#include "tga/errors.hpp"
#include "tga/space.hpp"

using namespace tga;

TEST_CASE("lp norms on small vectors") {
  const SpaceSpec l2(3, NormModel::lp(2.0));
  CHECK(norm_eval<double>(l2, {3.0, 4.0, 0.0}) == doctest::Approx(5.0));
  const SpaceSpec l1(3, NormModel::lp(1.0));
  CHECK(norm_eval<double>(l1, {1.0, -2.0, 3.0}) == 6.0);
  const SpaceSpec linf(3, NormModel::lp(NormModel::kInf));
  CHECK(norm_eval<double>(linf, {1.0, -7.0, 3.0}) == 7.0);
  CHECK(norm_eval<double>(l2, {0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("weighted and lorentz norms") {
  const SpaceSpec w(2, NormModel::weighted_lp(1.0, {1.0, 2.0}));
  CHECK(norm_eval<double>(w, {1.0, 1.0}) == 3.0);
  CHECK(norm_eval<double>(w, {0.0, -1.0}) == 2.0);
  const SpaceSpec lor(3, NormModel::lorentz({2.0, 1.0, 0.5}));
  // rearrangement (3, 2, 1)
  CHECK(norm_eval<double>(lor, {1.0, -3.0, 2.0}) == doctest::Approx(2 * 3 + 2 + 0.5));
}

TEST_CASE("norms agree with the test-side formulas") {
  const auto vecs = brute::random_vectors(5, 300, 3);
  const std::vector<double> w = {1.0, 0.5, 2.0, 3.0, 1.0};
  struct Case {
    NormModel model;
    brute::Norm ref;
  };
  std::vector<Case> cases = {
      {NormModel::lp(1.0), brute::lp(1.0)},
      {NormModel::lp(1.5), brute::lp(1.5)},
      {NormModel::lp(3.0), brute::lp(3.0)},
      {NormModel::lp(4.0), brute::lp(4.0)},
      {NormModel::lp(NormModel::kInf), brute::lp(NormModel::kInf)},
      {NormModel::weighted_lp(2.0, w), brute::lp(2.0, w)},
      {NormModel::weighted_lp(NormModel::kInf, w), brute::lp(NormModel::kInf, w)},
      {NormModel::lorentz({3.0, 2.0, 1.0, 0.5, 0.25}), brute::lorentz({3.0, 2.0, 1.0, 0.5, 0.25})},
  };
  for (const auto& c : cases) {
    const SpaceSpec s(5, c.model);
    for (const auto& v : vecs) {
      const double ref = c.ref(v);
      CHECK(norm_eval(s, v) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("descriptor grammar") {
  CHECK(parse_norm("lp:2").descriptor() == "lp:2");
  CHECK(std::isinf(parse_norm("lp:inf").p()));
  const auto w = parse_norm("wl1:1,2,1,1");
  CHECK(w.family() == NormFamily::weighted_lp);
  CHECK(w.p() == 1.0);
  CHECK(w.intrinsic_dim() == 4u);
  CHECK(parse_norm("wlp:3:1,2").p() == 3.0);
  CHECK(parse_norm("lorentz:2,1,0.5").family() == NormFamily::lorentz);
  CHECK_FALSE(parse_norm("lp:2").intrinsic_dim().has_value());
  for (const char* bad : {"", "lp", "lp:0.5", "lp:x", "wl1:", "wl1:1,-2", "wlp:2", "lorentz:1,2", "foo:1",
                          "plugin:nonexistent"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_norm(bad), SpaceError);
  }
}

TEST_CASE("space validation") {
  CHECK_THROWS_AS(SpaceSpec(0, NormModel::lp(2.0)), SpaceError);
  CHECK_THROWS_AS(SpaceSpec(3, NormModel::weighted_lp(1.0, {1.0, 2.0})), SpaceError);
  CHECK_THROWS_AS(SpaceSpec(2, NormModel::lp(2.0), ScalarMode::complex(1)), SpaceError);
  const SpaceSpec s(3, NormModel::lp(2.0));
  CHECK_THROWS_AS(norm_eval<double>(s, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(norm_eval<double>(s, {1.0, NAN, 0.0}), InvalidArgument);
}

TEST_CASE("dual coordinate norms") {
  const std::vector<double> w = {1.0, 4.0, 0.25};
  for (double p : {1.0, 2.0, 4.0, NormModel::kInf}) {
    const SpaceSpec s(3, NormModel::weighted_lp(p, w));
    for (Index n = 0; n < 3; ++n) {
      const double expected = std::isinf(p) ? 1.0 / w[n] : std::pow(w[n], -1.0 / p);
      CHECK(s.dual_norm(n) == doctest::Approx(expected));
      CHECK(dual_coord_norm_numerical(s, n) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
  const SpaceSpec lor(3, NormModel::lorentz({2.0, 1.0, 0.5}));
  for (Index n = 0; n < 3; ++n) {
    CHECK(dual_coord_norm_numerical(lor, n) == doctest::Approx(lor.dual_norm(n)).epsilon(1e-6));
  }
  const auto b = seminormalization_audit(SpaceSpec(3, NormModel::weighted_lp(1.0, w)));
  CHECK(b.c1 == doctest::Approx(0.25));
  CHECK(b.c2 == doctest::Approx(4.0));
}

TEST_CASE("norm axiom sampler") {
  for (const char* d : {"lp:1", "lp:3", "lp:inf", "wlp:2:1,2,3", "lorentz:3,2,1"}) {
    CAPTURE(d);
    const auto rep = audit_norm_axioms(3, parse_norm(d), ScalarMode::real(), 500, 9);
    CHECK(rep.ok());
    const auto crep = audit_norm_axioms(3, parse_norm(d), ScalarMode::complex(4), 200, 9);
    CHECK(crep.ok());
  }
  // Not a norm: the l_{1/2} quasi-norm breaks the triangle inequality.
  const auto quasi = NormModel::custom("half", [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::sqrt(std::abs(x));
    return s * s;
  });
  CHECK_FALSE(audit_norm_axioms(3, quasi, ScalarMode::real(), 500, 9).ok());
  CHECK_THROWS_AS(SpaceSpec(3, quasi), SpaceError);
}

TEST_CASE("unit scalars") {
  const SpaceSpec r(2, NormModel::lp(2.0));
  CHECK(r.unit_scalars<double>() == std::vector<double>{1.0, -1.0});
  const SpaceSpec c(2, NormModel::lp(2.0), ScalarMode::complex(4));
  const auto u = c.unit_scalars<Complex>();
  REQUIRE(u.size() == 4);
  for (const auto& z : u) CHECK(std::abs(z) == doctest::Approx(1.0));
}
