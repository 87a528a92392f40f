#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "magobs/errors.hpp"
#include "magobs/fields.hpp"
#include "support.hpp"

using namespace magobs;
using testsupport::fd8;

namespace {

double coeff_distance(const FourierField2D& a, const FourierField2D& b) {
  const int k = std::max(a.bandwidth(), b.bandwidth());
  double d = 0.0;
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) d = std::max(d, std::abs(a.coeff({i, j}) - b.coeff({i, j})));
  return d;
}

VectorPotential random_potential(std::mt19937_64& rng, int k) {
  return {FourierField2D::random_real(k, rng), FourierField2D::random_real(k, rng)};
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("real fields keep Hermitian symmetry") {
  FourierField2D f(3);
  f.set({1, -2}, {0.3, 0.4});
  CHECK(f.coeff({-1, 2}) == std::conj(cplx{0.3, 0.4}));
  CHECK(f.coeff({7, 0}) == cplx{});
  CHECK(std::abs(f.value(0.7, -1.1).imag()) < 1e-15);
}

TEST_CASE("directional average of simple fields") {
  const auto f = FourierField2D::cosine({1, 0}, 1.0) + FourierField2D::cosine({0, 1}, 1.0);
  const auto avg = directional_average(f, Direction::make(1, 0));
  CHECK(coeff_distance(avg, FourierField2D::cosine({0, 1}, 1.0)) < 1e-15);

  const auto g = FourierField2D::cosine({1, -1}, 1.0);
  CHECK(coeff_distance(directional_average(g, Direction::make(1, 1)), g) < 1e-15);
}

TEST_CASE("directional average matches a long time average") {
  std::mt19937_64 rng(11);
  const auto f = FourierField2D::random_real(5, rng);
  const Direction dir = Direction::make(2, 1);
  const auto avg = directional_average(f, dir);
  for (const auto& [m, c] : avg.modes(1e-14)) CHECK(m.k1 * 2 + m.k2 * 1 == 0);

  const double ex = 2.0 / std::sqrt(5.0);
  const double ey = 1.0 / std::sqrt(5.0);
  const double t_end = 1e4;
  const int steps = 40000;
  const double dt = t_end / steps;
  const auto modes = f.modes();
  for (const auto& [x, y] : {std::pair{0.3, 1.7}, std::pair{-2.0, 0.4}, std::pair{4.1, 5.5}}) {
    cplx mean = 0.0;
    for (const auto& [k, c] : modes) {
      const double w = k.k1 * ex + k.k2 * ey;
      cplx acc = 0.0;
      for (int s = 0; s < steps; ++s) acc += std::polar(1.0, w * (s + 0.5) * dt);
      mean += c * std::polar(1.0, k.k1 * x + k.k2 * y) * acc / double(steps);
    }
    CHECK(std::abs(mean - avg.value(x, y)) < 1e-3);
  }
}

TEST_CASE("directional average is an idempotent, translation invariant projection") {
  std::mt19937_64 rng(12);
  const auto f = FourierField2D::random_real(4, rng);
  for (const Direction& d : {Direction::make(1, 0), Direction::make(1, 2), Direction::make(3, -1)}) {
    const auto once = directional_average(f, d);
    CHECK(coeff_distance(directional_average(once, d), once) == 0.0);

    // f(z + t e) multiplies c_k by e^{i t k.e}.
    const double t = 0.83;
    std::vector<std::pair<Mode, cplx>> shifted;
    for (const auto& [k, c] : f.modes())
      shifted.emplace_back(k, c * std::polar(1.0, t * (k.k1 * d.p() + k.k2 * d.q()) / d.length()));
    const auto g = FourierField2D::from_modes(shifted);
    CHECK(coeff_distance(directional_average(g, d), once) < 1e-15);
  }
}

TEST_CASE("a_gamma on the toy model") {
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D(0)};
  const auto ag = a_gamma(a, Direction::make(1, 0));
  CHECK(ag.circumference() == doctest::Approx(kTwoPi));
  for (double s : {0.0, 0.5, 2.0, 4.0}) CHECK(ag.real_value(s) == doctest::Approx(std::cos(s)));

  std::mt19937_64 rng(13);
  const VectorPotential y_only{FourierField2D::random_real(3, rng, 1.0, true),
                               FourierField2D::random_real(3, rng, 1.0, true)};
  VectorPotential yo = y_only;
  yo.a1 = directional_average(yo.a1, Direction::make(1, 0));
  yo.a2 = directional_average(yo.a2, Direction::make(1, 0));
  const auto z = a_gamma(yo, Direction::make(1, 1));
  CHECK(z.max_abs_coeff() == 0.0);

  const VectorPotential zero{FourierField2D(0), FourierField2D(0)};
  CHECK(a_gamma(zero, Direction::make(2, 3)).max_abs_coeff() == 0.0);
}

TEST_CASE("magnetic field examples") {
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D(0)};
  const auto b = magnetic_field(a);
  for (double y : {0.1, 1.0, 2.5}) CHECK(b.real_value(0.4, y) == doctest::Approx(std::sin(y)));

  const auto g = FourierField2D::sine({1, 2}, 1.0);
  CHECK(magnetic_field(gradient(g)).max_abs_coeff() < 1e-15);
}

TEST_CASE("magnetic field matches a finite-difference curl") {
  std::mt19937_64 rng(14);
  const auto a = random_potential(rng, 4);
  const auto b = magnetic_field(a);
  CHECK(std::abs(b.mean()) == 0.0);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double err = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    const cplx dxa2 = fd8([&](double s) { return a.a2.value(s, y); }, x);
    const cplx dya1 = fd8([&](double s) { return a.a1.value(x, s); }, y);
    err = std::max(err, std::abs(dxa2 - dya1 - b.value(x, y)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("magnetic field is gauge invariant") {
  std::mt19937_64 rng(15);
  const auto a = random_potential(rng, 3);
  const auto g = FourierField2D::random_real(4, rng);
  CHECK(coeff_distance(magnetic_field(a), magnetic_field(a + gradient(g))) < 1e-13);
}

TEST_CASE("b_gamma_average examples") {
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D(0)};
  const auto bg = b_gamma_average(a, Direction::make(1, 0));
  for (double s : {0.0, 0.7, 3.0}) CHECK(bg.real_value(s) == doctest::Approx(std::sin(s)));

  std::mt19937_64 rng(16);
  const auto g = FourierField2D::random_real(3, rng);
  CHECK(b_gamma_average(gradient(g), Direction::make(1, 2)).max_abs_coeff() < 1e-14);
}

TEST_CASE("first gauge function") {
  VectorPotential a{FourierField2D::cosine({1, 0}, 1.0), FourierField2D(0)};
  const auto g1 = gauge_g1(a);
  for (double x : {-2.0, 0.0, 1.3}) CHECK(g1.real_value(x, 0.5) == doctest::Approx(-std::sin(x)));

  a.a1 = FourierField2D::cosine({0, 3}, 1.0);
  CHECK(gauge_g1(a).max_abs_coeff() == 0.0);

  a.a1 = FourierField2D::cosine({1, 1}, 1.0);
  const auto g = gauge_g1(a);
  double err = 0.0;
  for (int i = 0; i < 128; i += 9)
    for (int j = 0; j < 128; j += 9) {
      const double x = kTwoPi * i / 128.0;
      const double y = kTwoPi * j / 128.0;
      const cplx d = fd8([&](double s) { return g.value(s, y); }, x, 1e-2);
      err = std::max(err, std::abs(a.a1.value(x, y) + d));
    }
  CHECK(err < 1e-10);
}

TEST_CASE("apply_gauge: identity, constants and the Jacobi-Anger expansion") {
  const ModeBasis basis(16);
  ModeVector u{basis, CVector::Zero(static_cast<Eigen::Index>(basis.size()))};
  u.coeffs[static_cast<Eigen::Index>(*basis.index({3, 0}))] = 1.0;

  const auto same = apply_gauge(u, FourierField2D(0), 1);
  CHECK((same.coeffs - u.coeffs).norm() < 1e-14);

  const auto c = apply_gauge(u, FourierField2D::constant(0.7), 1);
  CHECK((c.coeffs - std::polar(1.0, 0.7) * u.coeffs).norm() < 1e-14);

  // e^{i sin x} = sum_n J_n(1) e^{i n x}
  const auto s = apply_gauge(u, FourierField2D::sine({1, 0}, 1.0), 1);
  CHECK(std::abs(s.norm() - 1.0) < 1e-9);
  for (int n = -6; n <= 6; ++n) {
    const double jn = (n < 0 && (n % 2)) ? -std::cyl_bessel_j(-n, 1.0) : std::cyl_bessel_j(std::abs(n), 1.0);
    CHECK(std::abs(s.coeffs[static_cast<Eigen::Index>(*basis.index({3 + n, 0}))] - jn) < 1e-12);
  }

  const auto back = apply_gauge(s, FourierField2D::sine({1, 0}, 1.0), -1, 1e-10);
  CHECK((back.coeffs - u.coeffs).norm() < 1e-10);
}

TEST_CASE("apply_gauge refuses states near the basis edge") {
  const ModeBasis basis(6);
  ModeVector u{basis, CVector::Zero(static_cast<Eigen::Index>(basis.size()))};
  u.coeffs[static_cast<Eigen::Index>(*basis.index({6, 0}))] = 1.0;
  CHECK_THROWS_AS(apply_gauge(u, FourierField2D::sine({1, 0}, 1.0), 1), TruncationError);
}

TEST_CASE("critical points of cos s") {
  const auto f = CircleFunction::from_modes(kTwoPi, {{1, 0.5}, {-1, 0.5}});
  const auto cp = critical_points(f);
  REQUIRE_FALSE(cp.all_critical);
  REQUIRE(cp.points.size() == 2);
  CHECK(cp.points[0].position == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cp.points[0].second_derivative == doctest::Approx(-1.0));
  CHECK(cp.points[1].position == doctest::Approx(kPi));
  CHECK(cp.points[1].second_derivative == doctest::Approx(1.0));
  CHECK_FALSE(cp.points[0].degenerate);
}

TEST_CASE("critical points of cos s + cos(2s)/2") {
  const auto f = CircleFunction::from_modes(kTwoPi, {{1, 0.5}, {-1, 0.5}, {2, 0.25}, {-2, 0.25}});
  const auto cp = critical_points(f);
  REQUIRE(cp.points.size() == 4);
  const std::vector<std::pair<double, double>> expected = {
      {0.0, -3.0}, {2.0 * kPi / 3.0, 1.5}, {kPi, -1.0}, {4.0 * kPi / 3.0, 1.5}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(cp.points[i].position == doctest::Approx(expected[i].first).epsilon(1e-10));
    CHECK(cp.points[i].second_derivative == doctest::Approx(expected[i].second).epsilon(1e-10));
  }
}

TEST_CASE("constant circle functions are critical everywhere") {
  const auto f = CircleFunction::from_modes(kTwoPi, {{0, 2.0}});
  CHECK(critical_points(f).all_critical);
}

TEST_CASE("critical point count matches a dense sign-change scan") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = 1 + trial % 6;
    std::vector<std::pair<int, cplx>> modes;
    for (int m = 1; m <= deg; ++m) {
      const cplx c{n01(rng), n01(rng)};
      modes.emplace_back(m, c);
      modes.emplace_back(-m, std::conj(c));
    }
    const auto f = CircleFunction::from_modes(kTwoPi, modes);
    const auto df = f.derivative();
    const auto cp = critical_points(f);
    for (const auto& p : cp.points) CHECK(std::abs(df.real_value(p.position)) < 1e-10);

    const int n = 100000;
    int changes = 0;
    double prev = df.real_value(0.0);
    for (int i = 1; i <= n; ++i) {
      const double cur = df.real_value(kTwoPi * i / n);
      if ((prev < 0.0) != (cur < 0.0)) ++changes;
      prev = cur;
    }
    CHECK(static_cast<int>(cp.points.size()) == changes);
  }
}

TEST_CASE("y_profile round trip") {
  const auto f = FourierField2D::cosine({0, 2}, 0.4) + FourierField2D::constant(1.0);
  const auto p = y_profile(f);
  CHECK(coeff_distance(field_from_y_profile(p), f) < 1e-15);
  CHECK_THROWS_AS(y_profile(FourierField2D::cosine({1, 0}, 1.0)), InvalidInput);
}

}  // TEST_SUITE
