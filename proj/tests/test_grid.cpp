#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "srsw/estimates.hpp"
#include "srsw/grid.hpp"
#include "srsw/kernels.hpp"

using namespace srsw;

namespace {

GridPtr grid64() {
  static GridPtr g = TorusGrid::make(64);
  return g;
}

ScalarField random_field(GridPtr grid, std::uint64_t seed, double amp = 1.0, int kmax = 8) {
  ScalarField f(grid);
  std::mt19937_64 eng(seed);
  const double ks = grid->kscale();
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = 0; k2 <= kmax; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      const double c = amp * standard_gaussian(eng) / (k1 * k1 + k2 * k2);
      const double s = amp * standard_gaussian(eng) / (k1 * k1 + k2 * k2);
      const int n = grid->n();
      for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
          const double ph = ks * (k1 * grid->x(ix) + k2 * grid->y(iy));
          f(ix, iy) += c * std::cos(ph) + s * std::sin(ph);
        }
    }
  return f;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("transform round-trip reproduces random real fields") {
  auto grid = grid64();
  std::vector<std::complex<double>> spec(grid->nk());
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField f = random_field(grid, 100 + trial);
    ScalarField back(grid);
    grid->forward(f.data(), spec.data());
    grid->inverse(spec.data(), back.data());
    double emax = 0.0, fmax = absmax(f);
    for (int i = 0; i < f.size(); ++i)
      emax = std::max(emax, std::abs(f.data()[i] - back.data()[i]));
    CHECK(emax / fmax < 1e-12);
  }
}

TEST_CASE("mode (0,0) carries mean * n^2") {
  auto grid = grid64();
  ScalarField f = random_field(grid, 7);
  for (int i = 0; i < f.size(); ++i) f.data()[i] += 0.37;
  std::vector<std::complex<double>> spec(grid->nk());
  grid->forward(f.data(), spec.data());
  CHECK(rel_diff(spec[0].real(), mean(f) * grid->size()) < 1e-12);
  CHECK(std::abs(spec[0].imag()) < 1e-9);
}

TEST_CASE("forward transform agrees with naive DFT on a small grid") {
  auto grid = TorusGrid::make(16);
  ScalarField f = random_field(grid, 3, 1.0, 4);
  std::vector<std::complex<double>> spec(grid->nk());
  grid->forward(f.data(), spec.data());
  const auto naive = ref::naive_dft(f);
  const int nky = grid->n() / 2 + 1;
  for (int ix = 0; ix < grid->n(); ++ix)
    for (int iy = 0; iy < nky; ++iy) {
      const std::complex<double> a = spec[ix * nky + iy];
      const std::complex<double> b = naive[static_cast<size_t>(ix) * grid->n() + iy];
      CHECK(std::abs(a - b) < 1e-8 * grid->size());
    }
}

TEST_CASE("derivative: resolved trig modes are exact") {
  auto grid = grid64();
  ScalarField sx = make_field(grid, [](double x, double) { return std::sin(x); });
  ScalarField cx = make_field(grid, [](double x, double) { return std::cos(x); });
  ScalarField d = derivative(sx, Axis::x, 1);
  double emax = 0.0;
  for (int i = 0; i < d.size(); ++i) emax = std::max(emax, std::abs(d.data()[i] - cx.data()[i]));
  CHECK(emax < 1e-12);

  SUBCASE("constant field has zero derivative of any order") {
    ScalarField c(grid, 4.2);
    for (int order = 1; order <= 3; ++order) {
      CHECK(absmax(derivative(c, Axis::x, order)) < 1e-12);
      CHECK(absmax(derivative(c, Axis::y, order)) < 1e-12);
    }
  }
  SUBCASE("order < 1 and grid mismatch are rejected") {
    CHECK_THROWS_AS((void)derivative(sx, Axis::x, 0), std::invalid_argument);
    auto other = TorusGrid::make(32);
    ScalarField g(other);
    CHECK_THROWS_AS((void)inner_product(sx, g), std::invalid_argument);
  }
}

TEST_CASE("derivative of exp(sin x) matches 4th-order finite differences") {
  auto grid = TorusGrid::make(256);
  ScalarField f = make_field(grid, [](double x, double) { return std::exp(std::sin(x)); });
  ScalarField ds = derivative(f, Axis::x, 1);
  ScalarField dfd = ref::fd_derivative(f, Axis::x);
  double emax = 0.0;
  for (int i = 0; i < ds.size(); ++i)
    emax = std::max(emax, std::abs(ds.data()[i] - dfd.data()[i]));
  CHECK(emax < 1e-6);
}

TEST_CASE("laplacian eigenfunctions") {
  auto grid = grid64();
  ScalarField sx = make_field(grid, [](double x, double) { return std::sin(x); });
  ScalarField l = laplacian(sx);
  double emax = 0.0;
  for (int i = 0; i < l.size(); ++i)
    emax = std::max(emax, std::abs(l.data()[i] + sx.data()[i]));
  CHECK(emax < 1e-12);

  CHECK(absmax(laplacian(ScalarField(grid, 2.0))) < 1e-12);

  ScalarField mode =
      make_field(grid, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
  ScalarField lm = laplacian(mode);
  emax = 0.0;
  for (int i = 0; i < lm.size(); ++i)
    emax = std::max(emax, std::abs(lm.data()[i] + 13.0 * mode.data()[i]));
  CHECK(emax < 1e-11);
}

TEST_CASE("inner products: orthogonality, analytic value, quadrature oracle") {
  auto grid = grid64();
  ScalarField sx = make_field(grid, [](double x, double) { return std::sin(x); });
  ScalarField cx = make_field(grid, [](double x, double) { return std::cos(x); });
  CHECK(std::abs(inner_product(sx, cx)) < 1e-12);
  CHECK(rel_diff(inner_product(sx, sx), 2.0 * std::acos(-1.0) * std::acos(-1.0)) < 1e-12);

  ScalarField f = random_field(grid, 21);
  ScalarField g = random_field(grid, 22);
  CHECK(rel_diff(inner_product(f, g), ref::quadrature_inner_product(f, g)) < 1e-10);
}

TEST_CASE("Parseval identity over 100 random fields") {
  auto grid = grid64();
  std::vector<std::complex<double>> spec(grid->nk());
  for (int trial = 0; trial < 100; ++trial) {
    ScalarField f = random_field(grid, 1000 + trial, 1.0, 6);
    grid->forward(f.data(), spec.data());
    double e = 0.0;
    for (int i = 0; i < grid->nk(); ++i)
      e += grid->hermitian_weight()[i] * std::norm(spec[i]);
    e *= grid->area() / (static_cast<double>(grid->size()) * grid->size());
    CHECK(rel_diff(inner_product(f, f), e) < 1e-10);
  }
}

TEST_CASE("integration by parts: <f_x, g> = -<f, g_x>") {
  auto grid = grid64();
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField f = random_field(grid, 300 + trial, 1.0, 6);
    ScalarField g = random_field(grid, 400 + trial, 1.0, 6);
    const double lhs = inner_product(derivative(f, Axis::x, 1), g);
    const double rhs = -inner_product(f, derivative(g, Axis::x, 1));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("derivative and laplacian outputs have zero mean") {
  auto grid = grid64();
  ScalarField f = random_field(grid, 5);
  for (int i = 0; i < f.size(); ++i) f.data()[i] += 1.23;
  CHECK(std::abs(mean(derivative(f, Axis::x, 1))) < 1e-12);
  CHECK(std::abs(mean(derivative(f, Axis::y, 2))) < 1e-12);
  CHECK(std::abs(mean(laplacian(f))) < 1e-12);
}

TEST_CASE("sobolev_norm: examples and oracles") {
  auto grid = grid64();
  SUBCASE("zero field") {
    ScalarField z(grid);
    for (int k = 0; k <= 2; ++k) CHECK(sobolev_norm(z, k) == 0.0);
  }
  SUBCASE("sin x at k=1 equals 2*pi") {
    ScalarField sx = make_field(grid, [](double x, double) { return std::sin(x); });
    CHECK(rel_diff(sobolev_norm(sx, 1), two_pi) < 1e-12);
  }
  SUBCASE("k=2: bracketed by the multi-index sum, exact vs weighted Parseval") {
    ScalarField f = random_field(grid, 31, 1.0, 6);
    const double spectral_sq = std::pow(sobolev_norm(f, 2), 2.0);
    const double multi = ref::multiindex_sobolev_sq(f, 2);
    CHECK(spectral_sq >= multi * (1.0 - 1e-10));
    CHECK(spectral_sq <= 2.0 * multi * (1.0 + 1e-10));

    // k = 1 is exactly the multi-index norm
    CHECK(rel_diff(std::pow(sobolev_norm(f, 1), 2.0), ref::multiindex_sobolev_sq(f, 1)) < 1e-10);
  }
  SUBCASE("monotone in k") {
    for (int trial = 0; trial < 10; ++trial) {
      ScalarField f = random_field(grid, 600 + trial);
      const double n0 = sobolev_norm(f, 0);
      const double n1 = sobolev_norm(f, 1);
      const double n2 = sobolev_norm(f, 2);
      CHECK(n0 <= n1 * (1 + 1e-12));
      CHECK(n1 <= n2 * (1 + 1e-12));
    }
  }
  SUBCASE("k outside {0,1,2} rejected") {
    ScalarField f(grid);
    CHECK_THROWS_AS((void)sobolev_norm(f, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)sobolev_norm(f, -1), std::invalid_argument);
  }
}

TEST_CASE("dealias: mask semantics, idempotence, product energy") {
  auto grid = grid64();
  const int n = grid->n();

  SUBCASE("mask is false exactly above n/3") {
    const int kcut = n / 3;
    for (int i = 0; i < grid->nk(); ++i) {
      const bool keep = std::max(std::abs(grid->kx()[i]), grid->ky()[i]) <= kcut;
      CHECK(static_cast<bool>(grid->dealias_mask()[i]) == keep);
    }
  }
  SUBCASE("band-limited field unchanged") {
    ScalarField f = random_field(grid, 8, 1.0, n / 3 - 1);
    ScalarField d = dealias(f);
    double emax = 0.0;
    for (int i = 0; i < f.size(); ++i)
      emax = std::max(emax, std::abs(f.data()[i] - d.data()[i]));
    CHECK(emax < 1e-12 * std::max(1.0, absmax(f)));
  }
  SUBCASE("idempotent") {
    ScalarField f = random_field(grid, 9, 1.0, n / 2 - 1);
    ScalarField d1 = dealias(f);
    ScalarField d2 = dealias(d1);
    double emax = 0.0;
    for (int i = 0; i < f.size(); ++i)
      emax = std::max(emax, std::abs(d1.data()[i] - d2.data()[i]));
    CHECK(emax < 1e-13);
  }
  SUBCASE("squared near-Nyquist mode has zero masked energy after dealias") {
    const int khi = n / 2 - 1;
    ScalarField f = make_field(grid, [&](double x, double) { return std::sin(khi * x); });
    ScalarField prod = dealiased_product(f, f);
    std::vector<std::complex<double>> spec(grid->nk());
    grid->forward(prod.data(), spec.data());
    double masked_energy = 0.0;
    for (int i = 0; i < grid->nk(); ++i)
      if (!grid->dealias_mask()[i]) masked_energy += std::norm(spec[i]);
    CHECK(masked_energy < 1e-20);
  }
}

TEST_CASE("grid rejects invalid construction") {
  CHECK_THROWS_AS((void)TorusGrid::make(7), std::invalid_argument);
  CHECK_THROWS_AS((void)TorusGrid::make(6), std::invalid_argument);
  CHECK_THROWS_AS((void)TorusGrid::make(64, -1.0), std::invalid_argument);
}

TEST_CASE("kernels match the serial reference bitwise") {
  const std::ptrdiff_t m = 64 * 64;
  std::vector<double> a(m), b(m), o1(m), o2(m);
  std::mt19937_64 eng(17);
  for (auto* v : {&a, &b})
    for (double& x : *v) x = standard_gaussian(eng);
  srsw::kernels::mul(a.data(), b.data(), o1.data(), m);
  ref::mul(a.data(), b.data(), o2.data(), m);
  CHECK(o1 == o2);
  srsw::kernels::add(a.data(), b.data(), o1.data(), m);
  ref::add(a.data(), b.data(), o2.data(), m);
  CHECK(o1 == o2);
  CHECK(srsw::kernels::dot(a.data(), b.data(), m) == ref::dot(a.data(), b.data(), m));
}
