#include <cmath>
#include <random>

#include "doctest.h"
#include "magobs/linalg.hpp"
#include "magobs/spectral.hpp"
#include "magobs/weyl.hpp"
#include "support.hpp"

using namespace magobs;

namespace {

Eigen::Index at(const ModeBasis& b, Mode k) { return static_cast<Eigen::Index>(*b.index(k)); }

Profile gaussian_profile(double c1, double c2, double w) {
  return {[=](double xi, double eta) {
            return cplx{std::exp(-((xi - c1) * (xi - c1) + (eta - c2) * (eta - c2)) / (w * w))};
          },
          -1, false};
}

}  // namespace

TEST_SUITE("weyl") {

TEST_CASE("z-only symbols quantize to shifts") {
  const ModeBasis b(4);
  Symbol s;
  s.add_term({1, -1}, Profile::constant(1.0));
  const CMatrix m = quantize(s, 0.1, b);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < b.size(); ++i) {
      const bool shift = b.mode(i) == b.mode(j) + Mode{1, -1};
      CHECK(m(Eigen::Index(i), Eigen::Index(j)) == cplx(shift ? 1.0 : 0.0));
    }
}

TEST_CASE("|zeta|^2 quantizes to h^2 |k|^2") {
  const ModeBasis b(5);
  const double h = 0.3;
  const Symbol s = Symbol::momentum(Profile::monomial(2, 0)) + Symbol::momentum(Profile::monomial(0, 2));
  const CMatrix m = quantize(s, h, b);
  CMatrix expected = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Mode k = b.mode(i);
    expected(Eigen::Index(i), Eigen::Index(i)) = h * h * double(k.k1 * k.k1 + k.k2 * k.k2);
  }
  CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Weyl midpoint rule") {
  const ModeBasis b(8);
  Symbol s;
  s.add_term({1, 0}, Profile::monomial(1, 0));
  const CMatrix m = quantize(s, 0.25, b);
  CHECK(std::abs(m(at(b, {5, 0}), at(b, {4, 0})) - 1.125) < 1e-15);
}

TEST_CASE("apply_symbol agrees with the quantized matrix") {
  const ModeBasis b(6);
  std::mt19937_64 rng(31);
  Symbol s = Symbol::product(FourierField2D::random_real(2, rng), gaussian_profile(0.3, -0.2, 0.7));
  const auto u = testsupport::random_state(b, 6, rng);
  CHECK((quantize(s, 0.2, b) * u.coeffs - apply_symbol(s, 0.2, b, u.coeffs)).norm() < 1e-13);
}

TEST_CASE("exact commutator with |zeta|^2") {
  const ModeBasis b(10);
  const double h = 1.0 / 8.0;
  Symbol a;
  a.add_term({1, 0}, Profile::monomial(1, 0));
  a.add_term({-1, 2}, gaussian_profile(0.5, 0.1, 0.8));
  const Symbol p = Symbol::momentum(Profile::monomial(2, 0)) + Symbol::momentum(Profile::monomial(0, 2));
  const CMatrix lhs = commutator(quantize(a, h, b), quantize(p, h, b));
  const Symbol pb = transport(
      a, [](double xi, double) { return cplx{2.0 * xi}; },
      [](double, double eta) { return cplx{2.0 * eta}; }, 1);
  const CMatrix rhs = -(h / kI) * quantize(pb, h, b);
  double err = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b.interior_margin(b.mode(i)) >= 4 && b.interior_margin(b.mode(j)) >= 4)
        err = std::max(err, std::abs(lhs(Eigen::Index(i), Eigen::Index(j)) -
                                     rhs(Eigen::Index(i), Eigen::Index(j))));
  CHECK(err < 1e-12);
}

TEST_CASE("commutators of multiplication operators vanish") {
  const ModeBasis b(6);
  const CMatrix ex = quantize(Symbol::from_field(FourierField2D::from_modes({{{1, 0}, 1.0}}, false)), 0.1, b);
  const CMatrix ey = quantize(Symbol::from_field(FourierField2D::from_modes({{{0, 1}, 1.0}}, false)), 0.1, b);
  CHECK(commutator(ex, ex).cwiseAbs().maxCoeff() == 0.0);
  const CMatrix c = commutator(ex, ey);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.interior_margin(b.mode(i)) >= 1) CHECK(c.row(Eigen::Index(i)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutator_with_diagonal matches the dense product") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n01;
  CMatrix a(7, 7);
  CVector d(7);
  for (Eigen::Index i = 0; i < 7; ++i) {
    d[i] = {n01(rng), n01(rng)};
    for (Eigen::Index j = 0; j < 7; ++j) a(i, j) = {n01(rng), n01(rng)};
  }
  const CMatrix dm = d.asDiagonal();
  CHECK((commutator_with_diagonal(a, d) - commutator(a, dm)).norm() < 1e-13);
}

TEST_CASE("conjugate_exp") {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> n01;
  const int n = 20;
  CMatrix h(n, n);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h(i, j) = {n01(rng), n01(rng)};
      g(i, j) = {n01(rng), n01(rng)};
    }
  h = (h + h.adjoint()).eval();
  g = (0.3 * (g - g.adjoint())).eval();

  CHECK((conjugate_exp(CMatrix::Zero(n, n), h) - h).norm() < 1e-13);

  const CMatrix dg = CVector::Random(n).asDiagonal();
  const CMatrix dh = CVector::Random(n).real().cast<cplx>().asDiagonal();
  CHECK((conjugate_exp(dg, dh) - dh).norm() < 1e-13);

  const CMatrix c = conjugate_exp(g, h);
  const RVector before = hermitian_eigenvalues(h);
  const RVector after = hermitian_eigenvalues(0.5 * (c + c.adjoint()));
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("matrix exponential residual") {
  std::mt19937_64 rng(34);
  std::normal_distribution<double> n01;
  CMatrix a(12, 12);
  for (Eigen::Index i = 0; i < 12; ++i)
    for (Eigen::Index j = 0; j < 12; ++j) a(i, j) = {n01(rng), n01(rng)};
  a *= 8.0 / a.operatorNorm();
  const CMatrix e = expm(a);
  CHECK((e * expm(-a) - CMatrix::Identity(12, 12)).norm() < 1e-12 * e.norm() * expm(-a).norm());

  // Diagonalizable case against the eigendecomposition.
  const CMatrix s = 0.5 * (a + a.adjoint());
  const HermitianEigen he = hermitian_eigen(s);
  const CMatrix ref = he.vectors * he.values.unaryExpr([](double x) { return cplx(std::exp(x)); }).asDiagonal() *
                      he.vectors.adjoint();
  CHECK((expm(s.cast<cplx>()) - ref).norm() < 1e-12 * ref.norm());
}

TEST_CASE("Wigner evaluation of trivial symbols") {
  const ModeBasis b(6);
  std::mt19937_64 rng(35);
  auto u = testsupport::random_state(b, 4, rng);
  u.coeffs *= 1.7;
  CHECK(std::abs(wigner_eval(u, Symbol::momentum(Profile::constant(1.0)), 0.1).value - u.coeffs.squaredNorm()) < 1e-13);

  ModeVector e{b, CVector::Zero(static_cast<Eigen::Index>(b.size()))};
  e.coeffs[at(b, {2, -3})] = 2.0;
  const Profile p = gaussian_profile(0.1, 0.2, 0.5);
  const double h = 0.125;
  CHECK(std::abs(wigner_eval(e, Symbol::momentum(p), h).value - 4.0 * p(2 * h, -3 * h)) < 1e-14);
}

TEST_CASE("free transport of Wigner values") {
  const ModeBasis b(14);
  const double h = 0.1;
  std::mt19937_64 rng(36);
  const auto u0 = testsupport::random_state(b, 3, rng);
  Symbol a = Symbol::product(FourierField2D::random_real(2, rng), gaussian_profile(0.2, -0.1, 0.6));
  const Symbol da = transport(
      a, [](double xi, double) { return cplx{2.0 * xi}; },
      [](double, double eta) { return cplx{2.0 * eta}; }, 1);
  auto at_time = [&](double t) {
    ModeVector u = u0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Mode k = b.mode(i);
      u.coeffs[Eigen::Index(i)] *= std::polar(1.0, -double(k.k1 * k.k1 + k.k2 * k.k2) * t);
    }
    return u;
  };
  for (double t : {0.0, 0.3, 1.1}) {
    const cplx deriv = testsupport::fd8([&](double s) { return wigner_eval(at_time(s), a, h).value; }, t, 1e-3);
    const cplx pred = wigner_eval(at_time(t), da, h).value / h;
    CHECK(std::abs(deriv - pred) < 1e-8 * (1.0 + std::abs(pred)));
  }
}

TEST_CASE("quantized symbols are bounded by their sup plus one") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const ModeBasis b(8);
  for (int trial = 0; trial < 5; ++trial) {
    const Symbol a = Symbol::product(FourierField2D::random_real(2, rng, 0.3), gaussian_profile(u(rng) / 3, u(rng) / 3, 0.5));
    double sup = 0.0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        for (int p = 0; p < 21; ++p)
          for (int q = 0; q < 21; ++q)
            sup = std::max(sup, std::abs(a.value(kTwoPi * i / 16, kTwoPi * j / 16, -1.5 + 0.15 * p, -1.5 + 0.15 * q)));
    const CMatrix m = quantize(a, 1.0 / 32.0, b);
    CHECK(m.operatorNorm() <= sup + 1.0);
  }
}

TEST_CASE("Garding: nonnegative symbols have O(h) negative part") {
  // z-dependence through x only, so the quantization splits into exact
  // blocks of fixed k2.
  const Symbol a = Symbol::product(FourierField2D::constant(1.0) + FourierField2D::cosine({1, 0}, 1.0),
                                   gaussian_profile(0.3, 0.0, 0.4));
  std::vector<double> c;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const int n = static_cast<int>(std::ceil(2.0 / h));
    double lo = 0.0;
    for (int k2 = -n; k2 <= n; ++k2) {
      const ModeBasis b({0, k2}, n, 0);
      const CMatrix m = quantize(a, h, b);
      lo = std::min(lo, hermitian_eigenvalues(0.5 * (m + m.adjoint())).minCoeff());
    }
    c.push_back(-lo / h);
  }
  for (double x : c) CHECK(x < 1.0);
  CHECK(c.back() <= 2.0 * c.front() + 1e-12);
}

TEST_CASE("bump and plateau") {
  CHECK(bump(0.0) == doctest::Approx(1.0));
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-1.5) == 0.0);
  CHECK(plateau(0.2, 0.25, 1.0) == 1.0);
  CHECK(plateau(1.0, 0.25, 1.0) == 0.0);
  const double mid = plateau(0.6, 0.25, 1.0);
  CHECK((mid > 0.0 && mid < 1.0));
  CHECK(projector_profile(0.25) == 1.0);
  CHECK(projector_profile(-0.99) > 0.0);
  CHECK(projector_profile(1.0) == 0.0);
}

TEST_CASE("normal-form cutoffs and trivial conjugation") {
  NormalFormSpec spec;
  CHECK(validate_cutoffs(spec));

  // A2 independent of x: nothing to average, so G2 = 0.
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D::cosine({0, 2}, 0.4)};
  spec.h = 1.0 / 16;
  const auto r = normal_form_g2(a, FourierField2D(0), spec, normal_form_basis(spec.h, spec.alpha, 4, 12, 2));
  CHECK(r.g2.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.record.g2_norm == 0.0);

  const VectorPotential x_dep{FourierField2D::cosine({1, 0}, 1.0), FourierField2D(0)};
  CHECK_THROWS(normal_form_g2(x_dep, FourierField2D(0), spec, normal_form_basis(spec.h, spec.alpha, 4, 12, 1)));
}

TEST_CASE("G2 stays bounded across the scan") {
  const VectorPotential a{FourierField2D::cosine({0, 1}, 1.0), FourierField2D::cosine({1, 0}, 0.3)};
  const auto scan = remainder_scan(a, FourierField2D(0), {1.0 / 32, 1.0 / 48}, 0.3, 6, 24);
  for (const auto& r : scan.records) CHECK(r.g2_norm < 1.0);
  CHECK(scan.records[1].remainder_norm < scan.records[0].remainder_norm);
}

TEST_CASE("log-log slope of an exact power law") {
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {3.0, 3.0 * std::pow(2.0, 1.5), 3.0 * 8.0}) == doctest::Approx(1.5));
}

}  // TEST_SUITE
