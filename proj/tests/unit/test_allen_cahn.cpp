#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pfno/allen_cahn.hpp"
#include "pfno/error.hpp"
#include "pfno/metrics/level_set.hpp"
#include "pfno/spectral.hpp"
#include "pfno/train/losses.hpp"

using namespace pfno;
using oracle::pi;

namespace {

Field2D tanh_disk(int n, double r, double eps, double length = 1.0) {
  return oracle::from_fn(
      n, [&](double x, double y) {
        return std::tanh((r - std::hypot(x - 0.5 * length, y - 0.5 * length)) / (std::sqrt(2.0) * eps));
      },
      length);
}

// Radial quadrature of the tanh-disk energy densities on a fine 1D grid.
double radial_oracle(double r, double eps, bool perimeter) {
  const int m = 400000;
  const double R = 0.5, dr = R / m;
  double s = 0;
  for (int k = 0; k < m; ++k) {
    const double rho = (k + 0.5) * dr;
    const double u = std::tanh((r - rho) / (std::sqrt(2.0) * eps));
    const double du = (1 - u * u) / (std::sqrt(2.0) * eps);
    const double W = 0.25 * (u * u - 1) * (u * u - 1);
    const double dens = perimeter ? eps * du * du / 2 + W / eps : du * du / 2 + W / (eps * eps);
    s += dens * 2 * pi * rho * dr;
  }
  return s;
}

}  // namespace

TEST_SUITE("allen_cahn") {

TEST_CASE("double_well values") {
  CHECK(double_well(1.0).W == 0.0);
  CHECK(double_well(1.0).dW == 0.0);
  CHECK(double_well(0.0).W == 0.25);
  CHECK(double_well(0.0).dW == 0.0);
  CHECK(double_well(0.5).W == doctest::Approx(0.140625).epsilon(1e-15));
  CHECK(double_well(0.5).dW == doctest::Approx(-0.375).epsilon(1e-15));
}

TEST_CASE("ac_energy constants and tanh disk") {
  const double eps = 1.0 / 64;
  CHECK(ac_energy(Field2D(make_grid(32), 1.0), eps) == 0.0);
  CHECK(ac_energy(Field2D(make_grid(32), 0.0), eps) == doctest::Approx(0.25 / (eps * eps)).epsilon(1e-14));
  const double ref = radial_oracle(0.25, eps, false);
  CHECK(ac_energy(tanh_disk(128, 0.25, eps), eps) == doctest::Approx(ref).epsilon(0.005));
}

TEST_CASE("perimeter_epsilon matches the profile constant times circumference") {
  const double eps = 1.0 / 64, c = 2 * std::sqrt(2.0) / 3;
  CHECK(perimeter_epsilon(Field2D(make_grid(32), 1.0), eps) == 0.0);
  CHECK(perimeter_epsilon(tanh_disk(128, 0.25, eps), eps) == doctest::Approx(c * 2 * pi * 0.25).epsilon(0.01));
  CHECK(perimeter_epsilon(tanh_disk(128, 0.12, eps), eps) == doctest::Approx(c * 2 * pi * 0.12).epsilon(0.02));
  // The constant itself, independently of the grid.
  CHECK(radial_oracle(0.25, eps, true) == doctest::Approx(c * 2 * pi * 0.25).epsilon(0.005));
}

TEST_CASE("validate rejects inadmissible parameters") {
  const Grid2D g = make_grid(128);
  CHECK_NOTHROW(validate(AcParams{}, g));
  CHECK_THROWS_AS(validate(AcParams{1.0 / 64, 2.0, 1e-4}, g), InvalidArgument);
  CHECK_THROWS_AS(validate(AcParams{1.0 / 512, 2.001, 1e-4}, g), InvalidArgument);
  CHECK_THROWS_AS(validate(AcParams{1.0 / 64, 2.001, 0.0}, g), InvalidArgument);
}

TEST_CASE("ac_split_step equilibria") {
  const AcParams p;
  for (double c : {1.0, -1.0, 0.0}) {
    Field2D u(make_grid(128), c);
    for (int k = 0; k < 10; ++k) {
      const Field2D next = ac_split_step(u, p);
      CHECK(oracle::max_diff(next, u) < 1e-12);
      u = next;
    }
  }
}

TEST_CASE("ac_split_step matches the dense kernel formula") {
  AcParams p;
  p.eps = 0.3;  // resolved on 8 points
  const auto u = oracle::random_field(8, 3);
  Field2D rho(u.grid);
  for (std::size_t k = 0; k < u.v.size(); ++k) {
    const double s = u.v[k];
    rho.v[k] = s - p.dt / (p.eps * p.eps) * (s * s * s - s - p.beta * s);
  }
  const auto ref = oracle::dense_multiplier(rho, [&](int kx, int ky) {
    return 1.0 / (1.0 + p.dt * (4 * pi * pi * (kx * kx + ky * ky) + p.beta / (p.eps * p.eps)));
  });
  CHECK(oracle::max_diff(ac_split_step(u, p), ref) < 1e-12);
}

TEST_CASE("energy is non-increasing for any time step") {
  const Grid2D g = make_grid(64);
  AcParams p;
  p.eps = 1.0 / 32;
  std::mt19937_64 rng(17);
  for (double scale : {1.0, 100.0, 1e4}) {
    AcParams q = p;
    q.dt = p.dt * scale;
    Field2D u = ic_perturbed_disk(g, sample_disk_spec(rng, 5, 0.12, 0.3, 0.1, 0.5), p.eps);
    double e = ac_energy(u, p.eps);
    for (int k = 0; k < 20; ++k) {
      u = ac_split_step(u, q);
      const double e1 = ac_energy(u, p.eps);
      CHECK(e1 <= e + 1e-10);
      e = e1;
    }
  }
}

TEST_CASE("maximum principle over 1000 steps") {
  const Grid2D g = make_grid(128);
  const AcParams p;
  std::mt19937_64 rng(3);
  Field2D u = ic_perturbed_disk(g, sample_disk_spec(rng, 5, 0.12, 0.3, 0.1, 0.5), p.eps);
  double lo = 0, hi = 0;
  for (int k = 0; k < 1000; ++k) {
    u = ac_split_step(u, p);
    lo = std::min(lo, min_value(u));
    hi = std::max(hi, max_value(u));
  }
  CHECK(lo >= -1 - 1e-6);
  CHECK(hi <= 1 + 1e-6);
}

TEST_CASE("split step minimizes the variational functional") {
  const AcParams p;
  const Grid2D g = make_grid(64);
  std::mt19937_64 rng(8);
  AcParams q = p;
  q.eps = 1.0 / 32;
  const Field2D u = ic_perturbed_disk(g, sample_disk_spec(rng, 5, 0.12, 0.3, 0.1, 0.5), q.eps);
  const Field2D star = ac_split_step(u, q);
  const double best = loss_deepritz_ac(star, u, q);
  std::normal_distribution<double> nd(0.0, 1.0);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    Field2D c = star;
    for (double& x : c.v) x += 1e-2 * nd(rng);
    if (loss_deepritz_ac(c, u, q) < best) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("ic_perturbed_disk") {
  const Grid2D g = make_grid(128);
  const double eps = 1.0 / 64;
  PerturbedDiskSpec s;
  s.r = 0.25;
  const auto u = ic_perturbed_disk(g, s, eps);
  CHECK(oracle::max_diff(u, tanh_disk(128, 0.25, eps)) < 1e-14);
  CHECK(oracle::max_diff(u, rotate90(u)) < 1e-14);

  s.r_p = 0.05;
  s.a = {1.0, 0.0};
  s.b = {0.0, 0.0};
  const auto v = ic_perturbed_disk(g, s, eps);
  for (int i = 0; i < 128; i += 7)
    for (int j = 0; j < 128; j += 5) {
      const double dx = v.x(j) - 0.5, dy = v.y(i) - 0.5;
      const double th = std::atan2(dy, dx);
      const double want = std::tanh((0.25 + 0.05 * std::cos(th) - std::hypot(dx, dy)) / (std::sqrt(2.0) * eps));
      CHECK(v(i, j) == doctest::Approx(want).epsilon(1e-12));
    }
  CHECK(v(64, 64) > 0);
  CHECK(max_abs(v) <= 1.0);

  s.a = {1.0, 0.5};
  CHECK_THROWS_AS(ic_perturbed_disk(g, s, eps), InvalidArgument);
}

TEST_CASE("sample_disk_spec respects the ranges") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto s = sample_disk_spec(rng, 5, 0.12, 0.3, 0.1, 0.5);
    CHECK(s.r >= 0.12);
    CHECK(s.r <= 0.3);
    CHECK(s.r_p >= 0.1 * s.r - 1e-15);
    CHECK(s.r_p <= 0.5 * s.r + 1e-15);
    double sum = 0;
    for (int i = 0; i < 5; ++i) sum += s.a[i] * s.a[i] + s.b[i] * s.b[i];
    CHECK(sum <= 1.0);
  }
}

TEST_CASE("ic_multi_disk") {
  const Grid2D g = make_grid(128);
  const double eps = 1.0 / 64;
  PerturbedDiskSpec s;
  s.r = 0.2;
  CHECK(oracle::max_diff(ic_multi_disk(g, {{0.5, 0.5}}, {0.2}, eps), ic_perturbed_disk(g, s, eps)) < 1e-14);

  const auto two = ic_multi_disk(g, {{0.25, 0.25}, {0.75, 0.75}}, {0.1, 0.1}, eps);
  CHECK(two(32, 32) > 0);
  CHECK(two(96, 96) > 0);

  const std::vector<Point> c{{0.4, 0.5}, {0.55, 0.45}, {0.95, 0.05}};
  const std::vector<double> r{0.2, 0.15, 0.1};
  const auto u = ic_multi_disk(g, c, r, eps);
  double worst = 0;
  for (int i = 0; i < 128; ++i)
    for (int j = 0; j < 128; ++j) {
      double m = -2;
      for (int d = 0; d < 3; ++d) {
        double dx = std::abs(u.x(j) - c[d].x), dy = std::abs(u.y(i) - c[d].y);
        dx = std::min(dx, 1 - dx);
        dy = std::min(dy, 1 - dy);
        m = std::max(m, std::tanh((r[d] - std::hypot(dx, dy)) / (std::sqrt(2.0) * eps)));
      }
      worst = std::max(worst, std::abs(m - u(i, j)));
    }
  CHECK(worst == 0.0);
  CHECK_THROWS_AS(ic_multi_disk(g, {}, {}, eps), InvalidArgument);
}

TEST_CASE("ic_random_field") {
  std::mt19937_64 a(5), b(5);
  const Grid2D g = make_grid(1000);
  const auto u = ic_random_field(a, g);
  const auto v = ic_random_field(b, g);
  CHECK(u.v == v.v);
  CHECK(min_value(u) >= -1.0);
  CHECK(max_value(u) <= 1.0);
  double mean = 0;
  for (double x : u.v) mean += x;
  CHECK(std::abs(mean / u.v.size()) < 0.01);
}

}
