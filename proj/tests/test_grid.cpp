#include <doctest.h>

#include <cmath>
#include <fstream>

#include "nla/errors.hpp"
#include "nla/grid.hpp"
#include "test_util.hpp"

using namespace nla;
using namespace nla::test;

TEST_CASE("grid construction and invariants") {
  Grid g(1, 1024, 20.0);
  CHECK(g.point_count() == 1024);
  CHECK(g.spacing == doctest::Approx(40.0 / 1024).epsilon(1e-15));
  CHECK(g.spacing * g.n_per_axis == doctest::Approx(2.0 * g.half_width));
  CHECK(g.coord(0) == -20.0);
  CHECK(g.coord(512) == doctest::Approx(0.0));

  Grid g2(2, 64, 5.0);
  CHECK(g2.point_count() == 64 * 64);
  CHECK(g2.cell_volume() == doctest::Approx(g2.spacing * g2.spacing));

  CHECK_THROWS_AS(Grid(3, 64, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, 100, 1.0), InvalidArgument);  // not a power of two
  CHECK_THROWS_AS(Grid(1, 32, 1.0), InvalidArgument);   // below 64
  CHECK_THROWS_AS(Grid(1, 64, -1.0), InvalidArgument);
}

TEST_CASE("mass") {
  Grid g(1, 1024, 20.0);
  CHECK(mass(Field::zeros(g)) == 0.0);
  CHECK(mass(Field::constant(g, 1.0)) == doctest::Approx(40.0).epsilon(1e-14));

  // unit-mass gaussian (4 pi)^{-1/2} exp(-x^2/4): cross-check against a
  // quadrature oracle at 16x resolution
  Field f = gaussian_field(g, 1.0, 2.0);
  Grid fine(1, 16384, 20.0);
  Field ff = gaussian_field(fine, 1.0, 2.0);
  const double oracle = mass(ff);
  CHECK(std::abs(mass(f) - oracle) <= 1e-12);
  CHECK(std::abs(mass(f) - 1.0) <= 1e-12);

  Grid g2(2, 128, 10.0);
  CHECK(mass(Field::constant(g2, 2.0)) == doctest::Approx(800.0));
  CHECK(mass(gaussian_field(g2, 1.0, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp_norm") {
  Grid g(1, 1024, 20.0);
  CHECK(lp_norm(Field::zeros(g), 1.0) == 0.0);
  CHECK(lp_norm(Field::zeros(g), kInf) == 0.0);

  const double c = 0.7;
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(lp_norm(Field::constant(g, c), p) ==
          doctest::Approx(c * std::pow(40.0, 1.0 / p)).epsilon(1e-13));
  }
  CHECK(lp_norm(Field::constant(g, -c), kInf) == doctest::Approx(c));

  // sup of exp(-x^2) is attained at the x = 0 grid point
  Field f = Field::from_function(g, [](double x) { return std::exp(-x * x); });
  CHECK(lp_norm(f, kInf) ==
        doctest::Approx(1.0).epsilon(g.spacing * g.spacing));

  CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidArgument);
  CHECK_THROWS_AS(lp_norm(f, -1.0), InvalidArgument);
}

TEST_CASE("tail_mass") {
  Grid g(1, 1024, 20.0);
  CHECK(tail_mass(Field::zeros(g), 5.0) == 0.0);

  // supported inside |x| < 3 -> zero tail beyond 3
  Field compact = Field::from_function(
      g, [](double x) { return std::abs(x) < 3.0 ? 1.0 : 0.0; });
  CHECK(tail_mass(compact, 3.0) == 0.0);

  // unit-mass gaussian of variance 2 vs a direct partial sum
  Field f = gaussian_field(g, 1.0, 2.0);
  double direct = 0.0;
  for (int i = 0; i < g.n_per_axis; ++i)
    if (std::abs(g.coord(i)) > 5.0) direct += f.at(i);
  direct *= g.spacing;
  CHECK(tail_mass(f, 5.0) == doctest::Approx(direct).epsilon(1e-15));

  CHECK_THROWS_AS(tail_mass(f, 20.0), InvalidArgument);
  CHECK_THROWS_AS(tail_mass(f, 25.0), InvalidArgument);
  CHECK_THROWS_AS(tail_mass(f, 0.0), InvalidArgument);

  // nonincreasing in R for nonnegative fields
  double prev = tail_mass(f, 1.0);
  for (double R : {2.0, 4.0, 8.0, 16.0}) {
    const double cur = tail_mass(f, R);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("rescale_field") {
  Grid g(1, 2048, 20.0);
  Field f = gaussian_field(g, 1.0, 2.0);

  SUBCASE("identity at lambda 1") {
    Field r = rescale_field(f, 1.0, g);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      CHECK(r.values[i] == f.values[i]);
  }

  SUBCASE("mass preserved under rescaling") {
    Grid target(1, 1024, 10.0);
    Field r = rescale_field(f, 2.0, target);
    CHECK(mass(r) == doctest::Approx(mass(f)).epsilon(1e-6));
  }

  SUBCASE("pointwise match against the analytic dilation") {
    Grid target(1, 2048, 10.0);  // h/2: sample points fall between nodes
    Field r = rescale_field(f, 2.0, target);
    double err = 0.0;
    const double amp = 1.0 / std::sqrt(4.0 * M_PI);
    for (int i = 0; i < target.n_per_axis; ++i) {
      const double x = target.coord(i);
      const double exact = 2.0 * amp * std::exp(-(2.0 * x) * (2.0 * x) / 4.0);
      err = std::max(err, std::abs(r.at(i) - exact));
    }
    CHECK(err <= 1e-8);
  }

  SUBCASE("time tag divides by lambda^2") {
    Grid target(1, 1024, 10.0);
    Field g1 = f;
    g1.time_tag = 8.0;
    CHECK(rescale_field(g1, 2.0, target).time_tag == doctest::Approx(2.0));
  }

  SUBCASE("two dimensions") {
    Grid g2(2, 256, 8.0);
    Grid t2(2, 128, 4.0);
    Field f2 = gaussian_field(g2, 1.0, 1.0);
    Field r2 = rescale_field(f2, 2.0, t2);
    const double amp = 1.0 / (2.0 * M_PI);
    double err = 0.0;
    for (int ix = 0; ix < t2.n_per_axis; ++ix)
      for (int iy = 0; iy < t2.n_per_axis; ++iy) {
        const double x = 2.0 * t2.coord(ix), y = 2.0 * t2.coord(iy);
        const double exact = 4.0 * amp * std::exp(-0.5 * (x * x + y * y));
        err = std::max(err, std::abs(r2.at(ix, iy) - exact));
      }
    CHECK(err <= 1e-6);
  }

  SUBCASE("rejects bad arguments") {
    Grid target(1, 1024, 10.0);
    CHECK_THROWS_AS(rescale_field(f, 0.5, target), InvalidArgument);
    CHECK_THROWS_AS(rescale_field(f, 4.0, g), InvalidArgument);  // 4L > L
  }
}

TEST_CASE("h_minus1_norm") {
  Grid g(1, 1024, 20.0);
  CHECK(h_minus1_norm(Field::zeros(g)) == 0.0);

  // constant: only the zero mode survives, weight 1
  const double c = 1.3;
  CHECK(h_minus1_norm(Field::constant(g, c)) ==
        doctest::Approx(c * std::sqrt(40.0)).epsilon(1e-13));

  // single mode sin(pi x / L): norm^2 = ||f||_2^2 / (1 + (pi/L)^2)
  Field f = Field::from_function(
      g, [&](double x) { return std::sin(M_PI * x / 20.0); });
  const double n2 = lp_norm(f, 2.0);
  const double kap = M_PI / 20.0;
  CHECK(h_minus1_norm(f) ==
        doctest::Approx(n2 / std::sqrt(1.0 + kap * kap)).epsilon(1e-12));

  // dominated by the L2 norm (spectral weights <= 1)
  Field r = seeded_field(g, 71);
  CHECK(h_minus1_norm(r) <= lp_norm(r, 2.0) * (1.0 + 1e-13));

  Grid g2(2, 128, 5.0);
  CHECK(h_minus1_norm(Field::constant(g2, 1.0)) ==
        doctest::Approx(std::sqrt(100.0)).epsilon(1e-13));
}

TEST_CASE("norm interpolation properties") {
  Grid g(1, 512, 10.0);
  Field f = seeded_field(g, 5);

  // |f|_p <= (2L)^{d(1/p-1/q)} |f|_q with equality on constants
  const double vol = 20.0;
  for (auto [p, q] : {std::pair{1.0, 2.0}, {2.0, 4.0}, {1.0, 4.0}}) {
    const double factor = std::pow(vol, 1.0 / p - 1.0 / q);
    CHECK(lp_norm(f, p) <= factor * lp_norm(f, q) * (1.0 + 1e-12));
    Field c = Field::constant(g, 0.83);
    CHECK(lp_norm(c, p) ==
          doctest::Approx(factor * lp_norm(c, q)).epsilon(1e-12));
  }

  // mass <= l1 with equality for nonnegative fields
  CHECK(mass(f) <= lp_norm(f, 1.0) + 1e-14);
  Field pos = f;
  for (double& v : pos.values) v = std::abs(v);
  CHECK(mass(pos) == doctest::Approx(lp_norm(pos, 1.0)).epsilon(1e-14));
}

TEST_CASE("field csv serialization") {
  Grid g(1, 64, 1.0);
  Field f = Field::from_function(g, [](double x) { return x * x; });
  const std::string path = "test_field_out.csv";
  write_field_csv(f, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,value");
  double x, v;
  char comma;
  in >> x >> comma >> v;
  CHECK(x == doctest::Approx(-1.0));
  CHECK(v == doctest::Approx(1.0));
  int rows = 1;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 64);
  std::remove(path.c_str());
}

TEST_CASE("field rejects non-finite values") {
  Grid g(1, 64, 1.0);
  CHECK_THROWS_AS(
      Field::from_function(g, [](double x) { return 1.0 / (x - x); }),
      InvalidArgument);
}
