#include <doctest.h>

#include "orlicz/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace orlicz;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json body() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("orlicz_ig_test_" + name);
}

}  // namespace

TEST_CASE("norm") {
  const Result r = run({"norm", "--phi", "cosh2", "--f", "x", "--n", "1"});
  CHECK(r.code == 0);
  CHECK(r.body().at("value").get<double>() == doctest::Approx(0.849321800288).epsilon(1e-11));
  CHECK(r.out.find("0.849321800288") != std::string::npos);

  const Result d = run({"norm", "--phi", "cosh2", "--f", "exp(x^2)"});
  CHECK(d.code == 2);
  CHECK(d.body().at("verdict").at("diverged") == true);
}

TEST_CASE("k1 of zero") {
  const Result r = run({"k1", "--u", "0"});
  CHECK(r.code == 0);
  CHECK(r.body().at("value") == 0.0);
}

TEST_CASE("class verdict") {
  const Result r = run({"class", "--f", "x^2"});
  CHECK(r.code == 2);
  const json j = r.body();
  CHECK(j.at("in_M") == false);
  CHECK(j.at("max_finite_lambda").get<double>() >= 0.49);
  CHECK(j.at("max_finite_lambda").get<double>() < 0.5);
  CHECK(run({"class", "--f", "x"}).code == 0);
}

TEST_CASE("other subcommands succeed") {
  const std::vector<std::vector<std::string>> calls = {
      {"dualnorm", "--phi", "power:2", "--f", "x"},
      {"momentnorm", "--f", "x", "--kmax", "10"},
      {"truncation", "--f", "x", "--lambda", "1"},
      {"conjugate", "--phi", "cosh2", "--x", "1", "--y", "1"},
      {"domination", "--small", "power:2", "--large", "cosh2"},
      {"hermite", "--alpha", "3"},
      {"expand", "--f", "|x|", "--degree", "4"},
      {"chart", "--q", "1"},
      {"fisher", "--u", "x", "--theta", "0.3"},
      {"hyvarinen", "--up", "tilt:0.5", "--uq", "tilt:-0.5"},
      {"otto", "--f", "x", "--g", "x"},
      {"logsob", "--u", "tilt:0.5"},
      {"sphere", "--u", "tilt:0.3", "--v1", "x", "--v2", "x^2"},
      {"portmanteau", "--p", "0.5,0.5", "--q", "0.3,0.7"},
      {"sobolev", "--f", "x^2"},
      {"sobolev", "--check", "increment", "--f", "H3/6"},
      {"sobolev", "--check", "chain", "--f", "x", "--activation", "relu"},
      {"sobolev", "--check", "embedding", "--f", "x"},
  };
  for (const auto& c : calls) {
    CAPTURE(c.front());
    const Result r = run(c);
    CHECK(r.code == 0);
    CHECK(json::accept(r.out));
  }
  CHECK(run({"hyvarinen", "--up", "tilt:0.5", "--uq", "tilt:-0.5"}).body().at("value") == doctest::Approx(0.5));
  CHECK(run({"hermite", "--alpha", "2"}).body().at("norm_squared") == 2.0);
}

TEST_CASE("tailcert defaults to CSV") {
  const Result r = run({"tailcert", "--f", "x"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,empirical_tail,bound\n", 0) == 0);
  const Result j = run({"tailcert", "--f", "x", "--format", "json"});
  CHECK(json::accept(j.out));
  CHECK(run({"norm", "--f", "x", "--format", "csv"}).code == 1);
}

TEST_CASE("usage errors are distinct") {
  const Result unknown = run({"norm", "--f", "nonsense"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("unknown field preset") != std::string::npos);

  const Result malformed = run({"norm", "--f", "{\"op\":"});
  CHECK(malformed.code == 1);
  CHECK(malformed.err.find("malformed field JSON") != std::string::npos);

  const Result dims = run({"norm", "--f", "x3", "--n", "2"});
  CHECK(dims.code == 1);
  CHECK(dims.err.find("dimension mismatch") != std::string::npos);

  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"norm", "--bogus", "1"}).code == 1);
}

TEST_CASE("domain errors exit with 2") {
  const Result r = run({"k1", "--u", "x^2"});
  CHECK(r.code == 2);
  CHECK(r.body().contains("domain_error"));
  CHECK(run({"portmanteau", "--p", "0.5,0.5", "--q", "1,0"}).code == 2);
}

TEST_CASE("help") {
  const Result top = run({"--help"});
  CHECK(top.code == 0);
  CHECK(top.out.find("norm") != std::string::npos);
  for (const char* sub : {"norm", "tailcert", "sobolev", "fisher", "gen-fixtures"}) {
    CAPTURE(sub);
    const Result h = run({sub, "--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--backend") != std::string::npos);
  }
  CHECK(run({"norm", "--help"}).out.find("--phi") != std::string::npos);
}

TEST_CASE("configuration") {
  cli::RunConfig cfg;
  cfg.backend = "montecarlo";
  cfg.samples = 20000;
  cfg.seed = 42;
  cfg.rel_tol = 0.1 + 0.2;
  cfg.fields = {"x", "tanh(x)"};
  CHECK(cli::RunConfig::from_json(cfg.to_json()) == cfg);
  CHECK(cli::RunConfig::from_json(json::parse(cfg.to_json().dump())) == cfg);
  CHECK_THROWS(cli::RunConfig::from_json(json{{"colour", "blue"}}));

  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << cfg.to_json().dump();
  }
  const Result dumped = run({"norm", "--config", path.string(), "--dump-config"});
  CHECK(dumped.code == 0);
  CHECK(cli::RunConfig::from_json(dumped.body()) == cfg);

  const Result flag = run({"norm", "--config", path.string(), "--seed", "5", "--dump-config"});
  CHECK(flag.body().at("seed") == 5);

  ::setenv("ORLICZ_IG_SEED", "77", 1);
  CHECK(run({"norm", "--config", path.string(), "--dump-config"}).body().at("seed") == 77);
  CHECK(run({"norm", "--seed", "5", "--dump-config"}).body().at("seed") == 5);
  ::setenv("ORLICZ_IG_SEED", "abc", 1);
  CHECK(run({"norm", "--dump-config"}).code == 1);
  ::unsetenv("ORLICZ_IG_SEED");

  CHECK(run({"norm", "--config", temp_file("missing.json").string()}).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("determinism") {
  const std::vector<std::string> mc = {"norm",      "--f",         "x",    "--backend", "montecarlo",
                                       "--samples", "20000", "--seed", "9"};
  const Result a = run(mc);
  const Result b = run(mc);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Result a2 = run({"fisher", "--u", "x", "--u", "H2/2", "--theta", "0.1,0.2"});
  CHECK(a2.out == run({"fisher", "--u", "x", "--u", "H2/2", "--theta", "0.1,0.2"}).out);
}

TEST_CASE("twelve significant digits") {
  CHECK(cli::dump(json{{"v", 0.19428360767299999}}) == "{\"v\":0.194283607673}");
  CHECK(cli::dump(json{{"v", 0.0}}) == "{\"v\":0.0}");
  CHECK(cli::dump(json{{"v", std::numeric_limits<double>::infinity()}}) == "{\"v\":null}");
  CHECK(cli::dump(json{{"n", 3}}) == "{\"n\":3}");
}

TEST_CASE("gen-fixtures writes a file") {
  const auto path = temp_file("fixtures.json");
  const Result r = run({"gen-fixtures", "--out", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  const json all = json::parse(in);
  CHECK(all.size() == r.body().at("written").get<std::size_t>());
  std::filesystem::remove(path);
}
