#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "reference.hpp"
#include "srsw/estimates.hpp"
#include "srsw/stepper.hpp"

using namespace srsw;

namespace {
GridPtr grid64() {
  static GridPtr g = TorusGrid::make(64);
  return g;
}

State random_state(std::uint64_t seed, double amp = 0.2, GridPtr grid = grid64()) {
  return sample_analytic_state(seed, {amp, 3, 1.0}).realize(grid);
}

bool bitwise_equal(const Tendency& a, const Tendency& b) {
  const int m = a.dh.size();
  return std::memcmp(a.dv.x.data(), b.dv.x.data(), m * 8) == 0 &&
         std::memcmp(a.dv.y.data(), b.dv.y.data(), m * 8) == 0 &&
         std::memcmp(a.dh.data(), b.dh.data(), m * 8) == 0;
}

double tendency_absmax(const Tendency& t) {
  return std::max({absmax(t.dv.x), absmax(t.dv.y), absmax(t.dh)});
}
} // namespace

TEST_CASE("truncation_value: plateau, cutoff, midpoint, monotonicity") {
  const double R = 3.0;
  CHECK(truncation_value(0.5 * R, R) == 1.0);
  CHECK(truncation_value(0.0, R) == 1.0);
  CHECK(truncation_value(R, R) == 1.0);
  CHECK(truncation_value(R + 1.0, R) == 0.0);
  CHECK(truncation_value(R + 5.0, R) == 0.0);
  CHECK(truncation_value(R + 0.5, R) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS((void)truncation_value(-0.1, R), std::invalid_argument);
  CHECK(truncation_value(1e9, R_infinite) == 1.0);

  double prev = 1.0;
  for (double x = R; x <= R + 1.0; x += 1e-3) {
    const double v = truncation_value(x, R);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("drift_deterministic: rest state is a fixed point") {
  auto grid = grid64();
  PhysicalParams params;

  SUBCASE("zero state, zero fields") {
    State a(grid);
    CHECK(tendency_absmax(drift_deterministic(a, params)) < 1e-12);
  }
  SUBCASE("v = R and h = b for nonzero constants") {
    params.rotation_R = VectorField(grid, 0.3, -0.1);
    params.topography_b = ScalarField(grid, 0.7);
    State a(grid);
    a.v = params.rotation_R;
    a.h = params.topography_b;
    CHECK(tendency_absmax(drift_deterministic(a, params)) < 1e-12);
  }
}

TEST_CASE("drift_deterministic: pure diffusion of h when u = 0") {
  auto grid = grid64();
  PhysicalParams params;
  State a(grid);
  a.h = make_field(grid, [](double x, double) { return std::sin(x); });
  const Tendency t = drift_deterministic(a, params);
  double emax = 0.0;
  for (int i = 0; i < t.dh.size(); ++i)
    emax = std::max(emax, std::abs(t.dh.data()[i] + params.eta * a.h.data()[i]));
  CHECK(emax < 1e-12);
}

TEST_CASE("drift_deterministic matches the finite-difference assembly on n=256") {
  auto fine = TorusGrid::make(256);
  PhysicalParams params;
  State a = sample_analytic_state(21, {0.05, 2, 1.0}).realize(fine);
  for (int i = 0; i < a.h.size(); ++i) a.h.data()[i] += 1.0;

  const Tendency t = drift_deterministic(a, params);
  VectorField dv_fd;
  ScalarField dh_fd;
  ref::fd_drift(a, params, dv_fd, dh_fd);

  double emax = 0.0;
  for (int i = 0; i < t.dh.size(); ++i) {
    emax = std::max(emax, std::abs(t.dv.x.data()[i] - dv_fd.x.data()[i]));
    emax = std::max(emax, std::abs(t.dv.y.data()[i] - dv_fd.y.data()[i]));
    emax = std::max(emax, std::abs(t.dh.data()[i] - dh_fd.data()[i]));
  }
  CHECK(emax < 1e-5);
}

TEST_CASE("drift_truncated semantics") {
  auto grid = grid64();
  PhysicalParams params;

  SUBCASE("below R: bitwise identical to the untruncated drift") {
    State a = random_state(31);
    const double norm = additive_w12_norm(a);
    const double R = norm * 2.0;
    CHECK(bitwise_equal(drift_truncated(a, params, R), drift_deterministic(a, params)));
    CHECK(bitwise_equal(drift_truncated(a, params, R_infinite), drift_deterministic(a, params)));
  }
  SUBCASE("above R+1: nonlinear terms exactly zero, remainder linear") {
    State a = random_state(32, 1.0);
    const double norm = additive_w12_norm(a);
    const double R = norm / 4.0;
    REQUIRE(norm > R + 1.0);
    const Tendency t = drift_truncated(a, params, R);
    const Tendency lin = assemble_drift(a, params, 0.0, StateGradients::of(a));
    CHECK(bitwise_equal(t, lin));

    State a2 = a;
    a2 *= 2.0;
    const Tendency t2 = drift_truncated(a2, params, R);
    double emax = 0.0;
    for (int i = 0; i < t.dh.size(); ++i) {
      emax = std::max(emax, std::abs(t2.dv.x.data()[i] - 2.0 * t.dv.x.data()[i]));
      emax = std::max(emax, std::abs(t2.dh.data()[i] - 2.0 * t.dh.data()[i]));
    }
    CHECK(emax < 1e-11);
  }
  SUBCASE("midband: nonlinear terms scale exactly by f_R") {
    State a = random_state(33);
    const double norm = additive_w12_norm(a);
    const double R = norm - 0.4; // norm sits inside (R, R+1)
    REQUIRE(norm > R);
    REQUIRE(norm < R + 1.0);
    const double fr = truncation_value(norm, R);
    REQUIRE(fr > 0.0);
    REQUIRE(fr < 1.0);

    const StateGradients grads = StateGradients::of(a);
    const Tendency t_trunc = drift_truncated(a, params, R);
    const Tendency t_full = assemble_drift(a, params, 1.0, grads);
    const Tendency t_lin = assemble_drift(a, params, 0.0, grads);
    double emax = 0.0;
    for (int i = 0; i < t_trunc.dh.size(); ++i) {
      const double nl_full = t_full.dh.data()[i] - t_lin.dh.data()[i];
      const double nl_trunc = t_trunc.dh.data()[i] - t_lin.dh.data()[i];
      emax = std::max(emax, std::abs(nl_trunc - fr * nl_full));
      const double nlv_full = t_full.dv.x.data()[i] - t_lin.dv.x.data()[i];
      const double nlv_trunc = t_trunc.dv.x.data()[i] - t_lin.dv.x.data()[i];
      emax = std::max(emax, std::abs(nlv_trunc - fr * nlv_full));
    }
    CHECK(emax < 1e-12);
  }
}

TEST_CASE("ito_rhs composes drift and correction") {
  auto grid = grid64();
  PhysicalParams params;
  const NoiseBasis basis = NoiseBasis::standard(grid, 8);

  SUBCASE("empty basis reduces to the drift") {
    const NoiseBasis empty = NoiseBasis::standard(grid, 0);
    State a = random_state(41);
    CHECK(bitwise_equal(ito_rhs(a, params, empty, R_infinite), drift_deterministic(a, params)));
  }
  SUBCASE("zero state maps to zero") {
    State z(grid);
    CHECK(tendency_absmax(ito_rhs(z, params, basis, R_infinite)) < 1e-12);
  }
  SUBCASE("sum of independently computed parts") {
    State a = random_state(42);
    const double R = 2.0 * additive_w12_norm(a);
    const Tendency got = ito_rhs(a, params, basis, R);
    Tendency expect = drift_truncated(a, params, R);
    const State corr = ito_correction(basis, a);
    expect.dv += corr.v;
    expect.dh += corr.h;
    double emax = 0.0;
    for (int i = 0; i < got.dh.size(); ++i) {
      emax = std::max(emax, std::abs(got.dv.x.data()[i] - expect.dv.x.data()[i]));
      emax = std::max(emax, std::abs(got.dh.data()[i] - expect.dh.data()[i]));
    }
    CHECK(emax < 1e-12);
  }
}

TEST_CASE("dh tendency has zero spatial mean (mass conservation in divergence form)") {
  auto grid = grid64();
  PhysicalParams params;
  const NoiseBasis basis = NoiseBasis::standard(grid, 8);
  for (int trial = 0; trial < 5; ++trial) {
    State a = random_state(50 + trial);
    for (int i = 0; i < a.h.size(); ++i) a.h.data()[i] += 1.0;
    CHECK(std::abs(mean(drift_deterministic(a, params).dh)) < 1e-12);
    CHECK(std::abs(mean(drift_truncated(a, params, 1.0).dh)) < 1e-12);
    CHECK(std::abs(mean(ito_rhs(a, params, basis, R_infinite).dh)) < 1e-12);
  }
}

TEST_CASE("NaN input is diagnosed with the offending term") {
  auto grid = grid64();
  PhysicalParams params;
  State a = random_state(60);
  a.v.x.data()[100] = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)drift_deterministic(a, params);
    FAIL("expected DiagnosticError");
  } catch (const DiagnosticError& e) {
    CHECK(!e.term().empty());
  }
}

TEST_CASE("nonlinear_l2_bound_check") {
  auto grid = grid64();
  PhysicalParams params;
  const double R = 2.0;

  SUBCASE("zero state contributes nothing") {
    std::vector<State> states{State(grid)};
    const NonlinearBoundReport rep = nonlinear_l2_bound_check(states, params, R);
    CHECK(rep.ratio_transport == 0.0);
    CHECK(rep.ratio_flux == 0.0);
  }
  SUBCASE("states beyond R+1 are truncated to zero") {
    std::vector<State> states{random_state(70, 2.0)};
    REQUIRE(additive_w12_norm(states[0]) > R + 1.0);
    const NonlinearBoundReport rep = nonlinear_l2_bound_check(states, params, R);
    CHECK(rep.ratio_transport == 0.0);
    CHECK(rep.ratio_flux == 0.0);
  }
  SUBCASE("ratio statistic is stable under resolution doubling") {
    auto fine = TorusGrid::make(128);
    std::vector<State> lo, hi;
    for (int i = 0; i < 200; ++i) {
      AnalyticState s = sample_analytic_state(1000 + i, {0.08, 3, 1.0});
      const double target = 1.0 + 0.012 * i; // spread across [1, R+1.4]
      const double norm = additive_w12_norm(s.realize(grid));
      if (norm > 0.0) s = s.scaled(target / norm);
      lo.push_back(s.realize(grid));
      hi.push_back(s.realize(fine));
    }
    const NonlinearBoundReport rlo = nonlinear_l2_bound_check(lo, params, R);
    const NonlinearBoundReport rhi = nonlinear_l2_bound_check(hi, params, R);
    CHECK(rlo.ratio_transport > 0.0);
    CHECK(std::isfinite(rlo.ratio_transport));
    CHECK(std::isfinite(rlo.ratio_flux));
    CHECK(std::abs(rhi.ratio_transport - rlo.ratio_transport) < 0.2 * rlo.ratio_transport);
    CHECK(std::abs(rhi.ratio_flux - rlo.ratio_flux) < 0.2 * rlo.ratio_flux);
  }
}

TEST_CASE("linear regime: a single h mode decays as exp(-eta |k|^2 t)") {
  auto grid = grid64();
  PhysicalParams params;
  // R tiny: truncation removes the nonlinearities everywhere, leaving
  // dh = eta Lap h decoupled from v
  const double R = 1e-3;
  State a(grid);
  a.h = make_field(grid, [](double x, double) { return std::sin(2.0 * x); });

  const double lambda = params.eta * 4.0;
  const double T = 1.0;
  const double dt = 0.004;
  IntegrateConfig cfg;
  cfg.scheme = Scheme::em_ito;
  cfg.T = T;
  cfg.dt = dt;
  cfg.R = R;
  NoisePath nopath;
  const NoiseBasis empty = NoiseBasis::standard(grid, 0);
  const TrajectoryRecord rec = integrate(a, params, empty, nopath, cfg);

  const double decay = std::exp(-lambda * T);
  double emax = 0.0;
  for (int i = 0; i < a.h.size(); ++i)
    emax = std::max(emax, std::abs(rec.final_state.h.data()[i] - decay * a.h.data()[i]));
  // explicit Euler: relative amplitude error about lambda^2 dt T / 2
  CHECK(emax / decay < lambda * lambda * dt * T);
}
