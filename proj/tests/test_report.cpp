#include "doctest.h"

#include <sstream>

#include "tga/constants.hpp"
#include "tga/report.hpp"

using namespace tga;

namespace {

Budget tiny() {
  Budget b;
  b.samples = 50;
  b.hillclimb_rounds = 5;
  b.seed = 12;
  return b;
}

}  // namespace

TEST_CASE("witness json round trip") {
  Witness<double> w;
  w.f = {1.0, -0.5, 0.0};
  w.y = CoeffVec<double>{0.0, 1.0, 0.25};
  w.A = SupportSet{0};
  w.eps = {-1.0};
  w.B = SupportSet{1, 2};
  w.eta = {1.0, -1.0};
  w.m = 2;
  w.gamma = 0.5;
  CHECK(witness_from_json<double>(witness_to_json(w)) == w);

  Witness<Complex> c;
  c.f = {{1.0, 2.0}, {0.0, -1.0}};
  c.A = SupportSet{1};
  c.eps = {{0.0, 1.0}};
  const auto cj = witness_to_json(c);
  CHECK(witness_from_json<Complex>(cj) == c);
  CHECK(witness_from_json<Complex>(Json::parse(cj.dump())) == c);
}

TEST_CASE("estimates survive serialization") {
  const SpaceSpec s(3, parse_norm("wl1:1,2,1"));
  SpaceEstimates<double> r{"wl1:1,2,1", 3, 12, {}};
  for (auto k : {ConstantKind::C_g, ConstantKind::Delta_d, ConstantKind::Q_star}) {
    r.estimates.push_back(estimate<double>(s, k, tiny()));
  }
  const auto j = space_estimates_to_json(r);
  CHECK(space_estimates_from_json<double>(Json::parse(j.dump())) == r);
  CHECK(j["estimates"][0]["kind"] == "C_g");
  CHECK(j["estimates"][0]["bound_direction"] == "lower");

  const SpaceSpec cs(2, parse_norm("lp:1"), ScalarMode::complex(4));
  SpaceEstimates<Complex> rc{"lp:1", 2, 12, {estimate<Complex>(cs, ConstantKind::K_s, tiny())}};
  CHECK(space_estimates_from_json<Complex>(space_estimates_to_json(rc)) == rc);
}

TEST_CASE("csv has a header and one row per estimate") {
  const SpaceSpec s(2, parse_norm("lp:2"));
  SpaceEstimates<double> r{"lp:2", 2, 12, {}};
  r.estimates.push_back(estimate<double>(s, ConstantKind::C_g, tiny()));
  r.estimates.push_back(estimate<double>(s, ConstantKind::K_s, tiny()));
  std::istringstream in(estimates_to_csv(std::vector{r}));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].find("kind") != std::string::npos);
  CHECK(lines[1].find("C_g") != std::string::npos);
  CHECK(lines[2].find("K_s") != std::string::npos);
}

TEST_CASE("report layout") {
  ReportHeader h;
  h.version = "1.0";
  h.timestamp = utc_timestamp();
  const auto j = make_report(h, Json{{"seed", 1}}, Json::array());
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["header"]["tool"] == "tga");
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["results"].is_array());
  const std::string ts = h.timestamp;
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts.back() == 'Z');
}

TEST_CASE("scalar parsing") {
  CHECK_THROWS(scalar_from_json<double>(Json("x")));
  CHECK(scalar_from_json<double>(scalar_to_json(0.125)) == 0.125);
}
