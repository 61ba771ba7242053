#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tga::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("greedy, sigma and dm subcommands") {
  auto r = run({"greedy", "--space", "lp:2", "--dim", "3", "--vector", "1,-3,2", "--m", "2"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["greedy_set"] == Json::array({1, 2}));

  r = run({"sigma", "--space", "wl1:1,2", "--dim", "2", "--vector", "1,1", "--m", "1"});
  REQUIRE(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(1.0));

  r = run({"dm", "--space", "lp:2", "--dim", "3", "--vector", "3,1,0", "--m", "1"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("estimate on l2 gives one") {
  const auto r = run({"estimate", "--space", "lp:2", "--dim", "5", "--kinds", "Cg", "--samples", "1000", "--seed",
                      "7"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  const double v = j["results"][0]["estimates"][0]["value"].get<double>();
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["schema_version"] == 1);
  CHECK_FALSE(j["config"].contains("threads"));
}

TEST_CASE("csv output") {
  const auto r = run({"estimate", "--space", "lp:1", "--dim", "2,3", "--kinds", "Ks,Deltad", "--samples", "50",
                      "--seed", "1", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("verify exit codes") {
  const auto ok = run({"verify", "--space", "wl1:1,2", "--dim", "2", "--samples", "200", "--seed", "3"});
  CHECK(ok.code == tga::cli::kOk);
  const auto j = Json::parse(ok.out);
  CHECK(j["results"][0]["verdicts"][0]["detail"]["pattern"] == "all_exceed");

  const auto all = run({"verify", "--space", "lp:2", "--dim", "3", "--suite", "all", "--gaps", "1,3", "--samples",
                        "100", "--seed", "3"});
  CHECK(all.code == 0);
  CHECK(Json::parse(all.out)["results"][0]["verdicts"].size() == 8);
}

TEST_CASE("configuration errors") {
  CHECK(run({"estimate", "--space", "lp:2", "--dim", "3", "--kinds", "", "--samples", "0", "--hillclimb", "0"}).code ==
        tga::cli::kConfigError);
  CHECK(run({"estimate", "--space", "lp:2", "--dim", "3", "--kinds", "Cg", "--grid", "huge", "--seed", "1"}).code ==
        tga::cli::kConfigError);
  CHECK(run({"estimate", "--space", "lp:2", "--dim", "3", "--kinds", "Cg", "--samples", "10"}).code ==
        tga::cli::kConfigError);
  CHECK(run({"estimate", "--space", "lp:2", "--dim", "3", "--kinds", "Bogus", "--seed", "1"}).code ==
        tga::cli::kConfigError);
  CHECK(run({"verify", "--space", "lp:2", "--dim", "3", "--suite", "nope", "--seed", "1"}).code ==
        tga::cli::kConfigError);
  CHECK(run({"frobnicate"}).code == tga::cli::kConfigError);
  CHECK(run({"estimate", "--space", "lp:2", "--dim", "13", "--kinds", "Cg", "--seed", "1"}).code ==
        tga::cli::kConfigError);
}

TEST_CASE("space errors") {
  CHECK(run({"estimate", "--space", "lp:0.5", "--dim", "3", "--kinds", "Cg", "--seed", "1"}).code ==
        tga::cli::kSpaceError);
  CHECK(run({"estimate", "--space", "wl1:1,2", "--dim", "3", "--kinds", "Cg", "--seed", "1"}).code ==
        tga::cli::kSpaceError);
}

TEST_CASE("thread count does not change results") {
  const std::vector<std::string> args = {"estimate", "--space", "lorentz:2,1,0.5", "--dim", "3", "--kinds",
                                         "all",      "--samples", "100", "--seed", "5", "--threads", "1"};
  const auto a = run(args);
  ::setenv("TGA_THREADS", "4", 1);
  const auto b = run(args);
  ::unsetenv("TGA_THREADS");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const auto ja = Json::parse(a.out), jb = Json::parse(b.out);
  CHECK(ja["results"] == jb["results"]);
  CHECK(ja["config"] == jb["config"]);
}

TEST_CASE("options from a config file") {
  const auto path = std::filesystem::temp_directory_path() / "tga_cli_test.toml";
  {
    std::ofstream f(path);
    f << "space = \"lp:2\"\ndim = [3]\nkinds = \"Ks\"\nsamples = 40\nseed = 9\n";
  }
  const auto r = run({"estimate", "--config", path.string()});
  std::filesystem::remove(path);
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["results"][0]["estimates"][0]["kind"] == "K_s");
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "tga_cli_out.json";
  const auto r = run({"estimate", "--space", "lp:2", "--dim", "2", "--kinds", "Cg", "--samples", "10", "--seed", "1",
                      "--out", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  const auto j = Json::parse(in);
  CHECK(j["results"][0]["dim"] == 2);
  std::filesystem::remove(path);
}
