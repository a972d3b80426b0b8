#include <doctest.h>

#include <cmath>
#include <complex>

#include "nla/diagnostics.hpp"
#include "nla/errors.hpp"
#include "nla/profiles.hpp"
#include "nla/spectral.hpp"
#include "test_util.hpp"

using namespace nla;
using namespace nla::test;

TEST_CASE("nonlocal_energy") {
  Grid g(1, 512, 20.0);
  DiscreteKernel J = discretize(KernelSpec::gaussian(1.0, 1), g, 1.0);

  SUBCASE("constants carry no energy") {
    CHECK(nonlocal_energy(Field::constant(g, 3.0), J, 1.0) <= 1e-12);
  }

  SUBCASE("nonnegative on rough fields") {
    CHECK(nonlocal_energy(seeded_field(g, 9), J, 2.0) >= 0.0);
  }

  SUBCASE("single Fourier mode matches the spectral oracle") {
    const int j = 5;
    const double kap = M_PI * j / 20.0 * 2.0;  // even mode 2j fits the box
    Field u = Field::from_function(
        g, [&](double x) { return std::cos(kap * x); });
    // oracle: J_hat(kap) from an explicit displacement sum
    const int n = g.n_per_axis;
    double jhat = 0.0;
    for (int m = -n / 2; m < n / 2; ++m)
      jhat += J.values[(m + n / 2 + n) % n] * std::cos(kap * m * g.spacing);
    jhat *= g.spacing;
    const double lambda = 3.0;
    const double expect =
        2.0 * lambda * lambda * (1.0 - jhat) * std::pow(lp_norm(u, 2.0), 2);
    CHECK(nonlocal_energy(u, J, lambda) ==
          doctest::Approx(expect).epsilon(1e-10));
  }

  SUBCASE("identity path equals the double-sum oracle") {
    for (int dim : {1, 2}) {
      Grid gs = dim == 1 ? Grid(1, 512, 20.0) : Grid(2, 64, 6.0);
      DiscreteKernel k = discretize(KernelSpec::gaussian(1.0, dim), gs, 1.0);
      Field u = seeded_field(gs, 17);
      const double fast = nonlocal_energy(u, k, 2.0);
      const double slow = nonlocal_energy_direct(u, k, 2.0);
      CHECK(std::abs(fast - slow) <= 1e-10 * std::abs(slow));
    }
  }
}

TEST_CASE("bbm_functional") {
  Grid g(1, 1024, 20.0);
  KernelSpec rho = KernelSpec::bump(1.0, 1);

  SUBCASE("constants vanish") {
    DiscreteKernel rn = discretize(rho, g, 4.0);
    CHECK(bbm_functional(Field::constant(g, 2.0), rn, 4.0, 2.0) <= 1e-13);
  }

  SUBCASE("p = 2 agrees with nonlocal_energy") {
    Field f = seeded_field(g, 23);
    DiscreteKernel rn = discretize(rho, g, 8.0);
    const double direct = bbm_functional(f, rn, 8.0, 2.0);
    const double identity = nonlocal_energy(f, rn, 8.0);
    CHECK(std::abs(direct - identity) <= 1e-10 * std::abs(identity));
  }

  SUBCASE("gaussian converges to the gradient limit") {
    Grid gg(1, 4096, 20.0);
    Field f = Field::from_function(
        gg, [](double x) { return std::exp(-x * x); });
    const double limit =
        spec_abs_moment(rho, 2.0) * gradient_lp_integral(f, 2.0);
    DiscreteKernel r32 = discretize(rho, gg, 32.0);
    const double v32 = bbm_functional(f, r32, 32.0, 2.0);
    CHECK(std::abs(v32 / limit - 1.0) <= 0.05);
  }

  SUBCASE("non-compact kernels only via p = 2") {
    DiscreteKernel gauss = discretize(KernelSpec::gaussian(0.5, 1), g, 4.0);
    Field f = seeded_field(g, 29);
    CHECK_NOTHROW(bbm_functional(f, gauss, 4.0, 2.0));
    CHECK_THROWS_AS(bbm_functional(f, gauss, 4.0, 3.0), InvalidArgument);
  }

  SUBCASE("scale covariance") {
    // dilating f by s and relaxing the concentration scale by s multiplies
    // the d=1 functional by s^{d-2} = 1/s
    Grid g1(1, 512, 10.0);
    Grid g2(1, 1024, 20.0);
    Field f1 = Field::from_function(
        g1, [](double x) { return std::exp(-x * x); });
    Field f2 = Field::from_function(
        g2, [](double x) { return std::exp(-x * x / 4.0); });
    DiscreteKernel r8 = discretize(rho, g1, 8.0);
    DiscreteKernel r4 = discretize(rho, g2, 4.0);
    const double a = bbm_functional(f1, r8, 8.0, 2.0);
    const double b = bbm_functional(f2, r4, 4.0, 2.0);
    CHECK(2.0 * b == doctest::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("dirichlet_domination_check") {
  Grid g(1, 2048, 20.0);
  KernelSpec rho = KernelSpec::bump(1.0, 1);

  SUBCASE("constant fields pass trivially") {
    DominationReport rep = dirichlet_domination_check(
        Field::constant(g, 1.0), rho, {4, 8}, 2.0);
    CHECK(rep.max_ratio == 0.0);
  }

  SUBCASE("gaussian ratios stay below one") {
    Field f = Field::from_function(
        g, [](double x) { return std::exp(-x * x); });
    DominationReport rep =
        dirichlet_domination_check(f, rho, {4, 8, 16, 32}, 2.0);
    CHECK(rep.max_ratio <= 1.0 + 1e-3);
  }

  SUBCASE("band-limited sawtooth ratios stay below one") {
    Field f = Field::from_function(g, [&](double x) {
      double s = 0.0;
      for (int k = 1; k <= 64; ++k)
        s += std::sin(k * M_PI * x / 20.0) / k;
      return s;
    });
    DominationReport rep =
        dirichlet_domination_check(f, rho, {4, 8, 16, 32}, 2.0);
    CHECK(rep.max_ratio <= 1.0 + 1e-2);
  }
}

TEST_CASE("decay_fit") {
  SUBCASE("exact power law is recovered to machine precision") {
    TrajectoryRecord rec;
    for (int k = 0; k < 12; ++k) {
      const double t = 1.5 * std::pow(1.7, k);
      rec.times.push_back(t);
      rec.lp_series[2.0].push_back(3.1 * std::pow(t, -0.37));
      rec.linf_series.push_back(1.0);
      rec.mass_series.push_back(1.0);
      rec.energy_series.push_back(0.0);
      rec.dudt_hm1_series.push_back(0.0);
    }
    FitResult fit = decay_fit(rec, 2.0, {1.0, 1e6});
    CHECK(fit.slope == doctest::Approx(-0.37).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("heat kernel trajectory gives slope -1/4 and flat mass") {
    // synthetic heat record: ||U(t)||_2 = m (8 pi A t)^{-1/4}, ||U||_1 = m
    TrajectoryRecord rec;
    for (int k = 0; k < 16; ++k) {
      const double t = std::pow(2.0, 0.5 * k);
      rec.times.push_back(t);
      rec.lp_series[1.0].push_back(1.0);
      rec.lp_series[2.0].push_back(std::pow(8.0 * M_PI * 0.5 * t, -0.25));
    }
    FitResult f2 = decay_fit(rec, 2.0, {1.0, 200.0});
    CHECK(f2.slope == doctest::Approx(-0.25).epsilon(0.01));
    FitResult f1 = decay_fit(rec, 1.0, {1.0, 200.0});
    CHECK(std::abs(f1.slope) <= 0.01);
  }

  SUBCASE("too few samples raise InsufficientSamples") {
    TrajectoryRecord rec;
    for (int k = 0; k < 4; ++k) {
      rec.times.push_back(1.0 + k);
      rec.lp_series[2.0].push_back(1.0 / (1.0 + k));
    }
    CHECK_THROWS_AS(decay_fit(rec, 2.0, {0.5, 10.0}), InsufficientSamples);
  }
}

TEST_CASE("renormalized_error") {
  Grid g(1, 512, 20.0);
  Field u = gaussian_field(g, 1.0, 1.0);
  u.time_tag = 4.0;

  SUBCASE("vanishes when the fields agree") {
    CHECK(renormalized_error(u, u, 2.0) == 0.0);
  }

  SUBCASE("p = 1 has no prefactor") {
    Field U = gaussian_field(g, 1.0, 2.0);
    U.time_tag = 4.0;
    CHECK(renormalized_error(u, U, 1.0) ==
          doctest::Approx(lp_norm(u - U, 1.0)).epsilon(1e-13));
  }

  SUBCASE("degree-one homogeneity in the difference") {
    Field U = gaussian_field(g, 1.0, 2.0);
    U.time_tag = 4.0;
    Field mid = Field::zeros(g, 4.0);
    for (std::size_t i = 0; i < mid.values.size(); ++i)
      mid.values[i] = u.values[i] + 0.5 * (U.values[i] - u.values[i]);
    CHECK(renormalized_error(u, mid, 2.0) ==
          doctest::Approx(0.5 * renormalized_error(u, U, 2.0))
              .epsilon(1e-12));
  }

  SUBCASE("Step V interpolation inequality") {
    // |v|_p <= |v|_1^{1/(2p-1)} (|u|_{2p} + |U|_{2p})^{(2p-2)/(2p-1)}
    Field U = gaussian_field(g, 1.0, 2.0, 0.5);
    U.time_tag = 4.0;
    for (double p : {2.0, 3.0}) {
      const double lhs = lp_norm(u - U, p);
      const double rhs =
          std::pow(lp_norm(u - U, 1.0), 1.0 / (2.0 * p - 1.0)) *
          std::pow(lp_norm(u, 2.0 * p) + lp_norm(U, 2.0 * p),
                   (2.0 * p - 2.0) / (2.0 * p - 1.0));
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }

  SUBCASE("time tags must match") {
    Field U = gaussian_field(g, 1.0, 2.0);
    U.time_tag = 5.0;
    CHECK_THROWS_AS(renormalized_error(u, U, 2.0), InvalidArgument);
  }
}

TEST_CASE("kernel_limit_check_J") {
  Grid g(1, 2048, 20.0);
  KernelSpec J = KernelSpec::gaussian(1.0, 1);

  SUBCASE("constants give zero error") {
    Field c = Field::constant(g, 1.0);
    KernelLimitReport rep = kernel_limit_check_J(J, c, 0.5, {4, 8});
    for (double e : rep.errors) CHECK(e <= 1e-12);
  }

  SUBCASE("gaussian psi converges at order 2") {
    Field psi = Field::from_function(
        g, [](double x) { return std::exp(-x * x); });
    DiscreteKernel J1 = discretize(J, g, 1.0);
    KernelLimitReport rep =
        kernel_limit_check_J(J, psi, second_moment_A(J1), {4, 8, 16});
    CHECK(rep.decreasing);
    CHECK(std::abs(rep.fitted_order - 2.0) <= 0.3);
  }
}

TEST_CASE("kernel_limit_check_G") {
  Grid g(1, 2048, 20.0);
  Field psi = Field::from_function(
      g, [](double x) { return std::exp(-x * x); });

  SUBCASE("symmetric G has B = 0 and obeys the remainder bound") {
    KernelSpec G = KernelSpec::bump(1.0, 1);
    KernelLimitReport rep = kernel_limit_check_G(G, psi, {0.0}, {4, 8, 16});
    CHECK(rep.bounds_hold);
  }

  SUBCASE("shifted bump obeys the remainder bound") {
    KernelSpec G = KernelSpec::shifted_bump(1.0, 1.0, 1);
    DiscreteKernel G1 = discretize(G, g, 1.0);
    KernelLimitReport rep =
        kernel_limit_check_G(G, psi, first_moment_B(G1), {4, 8, 16});
    CHECK(rep.bounds_hold);
    for (std::size_t i = 1; i < rep.errors.size(); ++i)
      CHECK(rep.errors[i] < rep.errors[i - 1]);
  }

  SUBCASE("tapered linear psi is transported exactly on the bulk") {
    // psi linear where the second derivative vanishes: lam (G~*psi - psi)
    // equals B psi' there
    Field lin = Field::from_function(g, [](double x) {
      const double t = std::tanh(12.0 - std::abs(x));
      return x * 0.25 * (1.0 + t) * 0.5;
    });
    KernelSpec G = KernelSpec::shifted_bump(1.0, 1.0, 1);
    DiscreteKernel G8 = reflect(discretize(G, g, 8.0));
    Field conv = convolve(G8, lin);
    DiscreteKernel G1 = discretize(G, g, 1.0);
    const double B = first_moment_B(G1)[0];
    double err = 0.0;
    for (int i = 0; i < g.n_per_axis; ++i) {
      if (std::abs(g.coord(i)) > 3.0) continue;  // the linear bulk
      const double lhs = 8.0 * (conv.values[i] - lin.values[i]);
      err = std::max(err, std::abs(lhs - B * 0.25));
    }
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("tail_bound_check basics") {
  Grid g(1, 512, 60.0);
  Field phi = gaussian_field(g, 1.0, 0.25);

  // synthetic records: tails shaped like c * (t/R^2 + sqrt(t)/R)
  auto make_record = [&](double c) {
    TrajectoryRecord rec;
    for (double t : {1.0, 4.0}) {
      rec.times.push_back(t);
      for (double R : {5.0, 10.0}) {
        rec.tail_series[2.0 * R].push_back(
            c * (t / (R * R) + std::sqrt(t) / R));
      }
    }
    return rec;
  };
  TrajectoryRecord r1 = make_record(0.02), r2 = make_record(0.025);
  std::vector<std::pair<double, const TrajectoryRecord*>> recs = {
      {1.0, &r1}, {2.0, &r2}};
  TailBoundReport rep = tail_bound_check(recs, phi, {5.0, 10.0}, {1.0, 4.0});
  CHECK(rep.fitted_C[0] == doctest::Approx(0.02).epsilon(1e-6));
  CHECK(rep.fitted_C[1] == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(rep.lambda_uniform);
  CHECK(rep.spread == doctest::Approx(1.25).epsilon(1e-6));

  // compactly supported phi beyond R: the excess equals the tail itself
  Field compact = Field::from_function(
      g, [](double x) { return std::abs(x) < 2.0 ? 0.25 : 0.0; });
  TailBoundReport rep2 =
      tail_bound_check({{1.0, &r1}}, compact, {5.0, 10.0}, {1.0, 4.0});
  CHECK(rep2.fitted_C[0] == doctest::Approx(0.02).epsilon(1e-6));
}

TEST_CASE("dudt_hminus1") {
  Grid g(1, 512, 20.0);
  CHECK(dudt_hminus1(Field::constant(g, 1.0), Field::zeros(g)) == 0.0);
  Field r = seeded_field(g, 41);
  CHECK(dudt_hminus1(r, r) <= lp_norm(r, 2.0) * (1.0 + 1e-13));
}

TEST_CASE("series integration and energy report") {
  std::vector<double> times, vals;
  for (int k = 0; k <= 32; ++k) {
    const double t = 1.0 + k / 32.0;
    times.push_back(t);
    vals.push_back(std::exp(-t));  // smooth decaying integrand
  }
  const double full = integrate_series(times, vals, 1.0, 2.0);
  const double halved = integrate_series(times, vals, 1.0, 2.0, 2);
  CHECK(std::abs(full - halved) <= 0.02 * std::abs(full));

  TrajectoryRecord rec;
  rec.times = times;
  rec.energy_series = vals;
  EnergyReport rep = energy_report(1.0, rec, 1.0, 2.0);
  CHECK(rep.value == doctest::Approx(full));
  CHECK(rep.value >= 0.0);
  CHECK(rep.per_time.size() == times.size());
}
