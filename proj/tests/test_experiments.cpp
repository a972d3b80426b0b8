#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nla/errors.hpp"
#include "nla/experiments.hpp"
#include "test_util.hpp"

using namespace nla;
using namespace nla::test;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string write_cfg(const std::string& name, const std::string& body) {
  const std::string path = "test_cfg_" + name + ".cfg";
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("round trip with comments and quotes") {
    const std::string path = write_cfg("ok", R"(# comment line
experiment = decay
n = 512
half_width = 20     # trailing comment
kernel.J = "gaussian:1.0"
lambda_list = 1, 2, 4
dt = auto
seed = 42
)");
    ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.experiment == "decay");
    CHECK(cfg.n == 512);
    CHECK(cfg.half_width == 20.0);
    CHECK(cfg.kernel_J == "gaussian:1.0");
    CHECK(cfg.lambda_list == std::vector<double>{1, 2, 4});
    CHECK(cfg.dt == 0.0);
    CHECK(cfg.seed == 42);
    std::remove(path.c_str());
  }

  SUBCASE("unknown keys are named in the error") {
    const std::string path = write_cfg("bad", "wobble = 3\n");
    try {
      parse_config_file(path);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("wobble") != std::string::npos);
    }
    std::remove(path.c_str());
  }

  SUBCASE("missing file and malformed line") {
    CHECK_THROWS_AS(parse_config_file("no_such_file.cfg"), ConfigError);
    const std::string path = write_cfg("noval", "just a line\n");
    CHECK_THROWS_AS(parse_config_file(path), ConfigError);
    std::remove(path.c_str());
  }

  SUBCASE("overrides and validation") {
    ExperimentConfig cfg;
    cfg.experiment = "decay";
    apply_override(cfg, "n=128");
    CHECK(cfg.n == 128);
    apply_override(cfg, "kernel.G=bump:2.0");
    CHECK(cfg.kernel_G == "bump:2.0");
    CHECK_THROWS_AS(apply_override(cfg, "nonsense"), ConfigError);
    CHECK_NOTHROW(validate(cfg));
    cfg.experiment = "fantasy";
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.experiment = "decay";
    cfg.lambda_list = {4, 2, 1};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
}

TEST_CASE("initial data menu") {
  Grid g(1, 1024, 20.0);

  SUBCASE("gaussian mass and center") {
    Field f = initial_field("gaussian:1.0:2.0", 1.5, g, 1.0);
    CHECK(mass(f) == doctest::Approx(1.5).epsilon(1e-12));
    int imax = 0;
    for (int i = 0; i < g.n_per_axis; ++i)
      if (f.at(i) > f.at(imax)) imax = i;
    CHECK(g.coord(imax) == doctest::Approx(2.0).epsilon(1e-2));
  }

  SUBCASE("two bump mass and asymmetry") {
    Field f = initial_field("two_bump", 2.0, g, 1.0);
    CHECK(mass(f) == doctest::Approx(2.0).epsilon(1e-10));
    double moment = 0.0;
    for (int i = 0; i < g.n_per_axis; ++i)
      moment += g.coord(i) * f.at(i) * g.spacing;
    CHECK(moment == doctest::Approx(2.0 * (0.7 * 2.0 - 0.3 * 3.0))
                        .epsilon(1e-6));
  }

  SUBCASE("rescaled family keeps mass and shrinks support") {
    Field f1 = initial_field("gaussian:1.0", 1.0, g, 1.0);
    Field f4 = initial_field("gaussian:1.0", 1.0, g, 4.0);
    CHECK(mass(f4) == doctest::Approx(mass(f1)).epsilon(1e-10));
    CHECK(lp_norm(f4, kInf) ==
          doctest::Approx(4.0 * lp_norm(f1, kInf)).epsilon(1e-10));
  }

  SUBCASE("band-limited field is deterministic and unit-sup") {
    Field a = random_band_limited(g, 99);
    Field b = random_band_limited(g, 99);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      CHECK(a.values[i] == b.values[i]);
    CHECK(lp_norm(a, kInf) == doctest::Approx(1.0).epsilon(1e-12));
    Field c = random_band_limited(g, 100);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      diff = std::max(diff, std::abs(a.values[i] - c.values[i]));
    CHECK(diff > 1e-3);
  }
}

TEST_CASE("profile_residuals driver artifacts") {
  ExperimentConfig cfg;
  cfg.experiment = "profile_residuals";
  cfg.n = 1024;
  cfg.half_width = 20.0;
  cfg.dim = 1;
  cfg.out_dir = "test_out_profiles";
  RunResult res = run_profile_residuals(cfg);
  CHECK(res.all_pass());
  CHECK(std::filesystem::exists(cfg.out_dir + "/summary.csv"));
  CHECK(std::filesystem::exists(cfg.out_dir + "/verdict.txt"));
  CHECK(std::filesystem::exists(cfg.out_dir + "/profile_heat.csv"));
  CHECK(std::filesystem::exists(cfg.out_dir + "/profile_burgers.json"));
  const std::string verdict = slurp(cfg.out_dir + "/verdict.txt");
  CHECK(verdict.find("OVERALL PASS") != std::string::npos);
  std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("determinism: identical config gives identical bytes") {
  ExperimentConfig cfg;
  cfg.experiment = "compactness_functionals";
  cfg.n = 1024;
  cfg.half_width = 20.0;
  cfg.n_list = {4, 8};
  cfg.p_list = {2};
  cfg.seed = 2024;

  cfg.out_dir = "test_out_det_a";
  run_compactness_functionals(cfg);
  std::string a = slurp(cfg.out_dir + "/summary.csv");
  std::filesystem::remove_all(cfg.out_dir);

  cfg.out_dir = "test_out_det_b";
  run_compactness_functionals(cfg);
  std::string b = slurp(cfg.out_dir + "/summary.csv");
  std::filesystem::remove_all(cfg.out_dir);

  CHECK(a == b);
}

TEST_CASE("scaling identity driver at reduced size") {
  ExperimentConfig cfg;
  cfg.experiment = "scaling_identity";
  cfg.n = 512;
  cfg.half_width = 10.0;
  cfg.lambda = 2.0;
  cfg.t_end = 0.5;
  cfg.initial = "gaussian:1.0";
  cfg.tail_tol = 1.0;
  cfg.out_dir = "test_out_scaling";
  RunResult res = run_scaling_identity(cfg);
  CHECK(res.all_pass());
  std::filesystem::remove_all(cfg.out_dir);

  cfg.lambda = 3.0;  // not a power of two
  CHECK_THROWS_AS(run_scaling_identity(cfg), ConfigError);
}

TEST_CASE("asymptotics driver rejects subcritical q") {
  ExperimentConfig cfg;
  cfg.experiment = "asymptotics";
  cfg.q = 1.2;  // below 1 + 1/d
  cfg.n = 512;
  cfg.half_width = 20.0;
  cfg.out_dir = "test_out_subcrit";
  CHECK_THROWS_AS(run_asymptotics(cfg), ConfigError);
}

TEST_CASE("parallel_for covers the index range once") {
  std::vector<int> hits(37, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
