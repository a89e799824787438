#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rvs/constsym.hpp"

using namespace rvs;

namespace {
SheetConfig cfg_a() { return SheetConfig::linear(0.0, 1.0, 2.0); }
SheetConfig cfg_b() { return SheetConfig::linear(1.0, 0.6, 0.8); }

Frequency random_freq(std::mt19937_64& rng, double gmin = 0.01) {
  std::uniform_real_distribution<double> G(gmin, 1.0), U(-1.0, 1.0);
  return Frequency{G(rng), U(rng), U(rng)}.normalized();
}
}  // namespace

TEST_CASE("boundary symbols at tau = 1, eta = 0") {
  BoundarySymbols s = boundary_symbols(cfg_b(), Frequency{1.0, 0.0, 0.0});
  CHECK(std::abs(s.b(0)) == 0.0);
  CHECK(std::abs(s.b(1) - cd(1.0)) < 1e-15);
  CHECK(std::abs(s.b(2)) == 0.0);
  CHECK(std::abs(s.theta - cd(1.0)) < 1e-15);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(s.beta(0, j) - cd(j < 2 ? 1.0 : -1.0)) < 1e-15);
}

TEST_CASE("Q b = (0, 0, theta)") {
  std::mt19937_64 rng(11);
  for (auto cfg : {cfg_a(), cfg_b()}) {
    for (int i = 0; i < 500; ++i) {
      Frequency f = random_freq(rng, 0.0);
      BoundarySymbols s = boundary_symbols(cfg, f);
      Vec3c qb = s.Q * s.b;
      CHECK(std::abs(qb(0)) < 1e-14);
      CHECK(std::abs(qb(1)) < 1e-14);
      CHECK(std::abs(qb(2) - s.theta) < 1e-14);
      CHECK(s.theta.real() > 0.0);
    }
  }
}

TEST_CASE("mu + m = Gamma a / c") {
  std::mt19937_64 rng(12);
  SheetConfig cfg = cfg_b();
  for (int i = 0; i < 200; ++i) {
    Frequency f = random_freq(rng);
    for (int side : {1, -1}) {
      cd a = f.tau() + double(side) * cd(0, 1) * cfg.v_bar() * f.eta;
      CHECK(std::abs(mu(cfg, f, side) + m_coef(cfg, f, side) - cfg.Gamma_bar() * a / cfg.c_bar()) < 1e-13);
    }
  }
}

TEST_CASE("C constants at eps = 0 reduce to the non-relativistic values") {
  SheetConfig cfg = SheetConfig::linear(0.0, 0.7, 1.3);
  CHECK(cfg.C0() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cfg.C1() == doctest::Approx(1.0 / 0.7).epsilon(1e-15));
  CHECK(cfg.C2() == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("omega is the stable eigenvalue of each 2x2 block") {
  std::mt19937_64 rng(13);
  for (auto cfg : {cfg_a(), cfg_b()}) {
    for (int i = 0; i < 300; ++i) {
      Frequency f = random_freq(rng);
      SymbolBundle S = interior_symbol(cfg, f);
      for (int side : {1, -1}) {
        Eigen::Matrix2cd blk = side > 0 ? S.A.block<2, 2>(0, 0) : S.A.block<2, 2>(2, 2);
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(blk);
        cd l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
        cd stable = l0.real() < l1.real() ? l0 : l1;
        cd w = side > 0 ? S.omega_plus : S.omega_minus;
        CHECK(w.real() < 0.0);
        CHECK(std::abs(w - stable) < 1e-10 * (1.0 + std::abs(w)));
      }
      Vec4c r1 = S.A * S.E_plus - S.omega_plus * S.E_plus;
      Vec4c r2 = S.A * S.E_minus - S.omega_minus * S.E_minus;
      CHECK(r1.norm() < 1e-12 * (1.0 + S.E_plus.norm()));
      CHECK(r2.norm() < 1e-12 * (1.0 + S.E_minus.norm()));
    }
  }
}

TEST_CASE("omega at eta = 0 is -Gamma s tau / c") {
  SheetConfig cfg = cfg_b();
  const double s = std::sqrt(1.0 - 0.36 * 0.64);
  for (int side : {1, -1}) {
    cd w = omega(cfg, Frequency{1.0, 0.0, 0.0}, side);
    CHECK(std::abs(w - cd(-cfg.Gamma_bar() * s / 0.6)) < 1e-14);
  }
}

TEST_CASE("omega at gamma = 0 is the limit from gamma > 0") {
  std::mt19937_64 rng(14);
  for (auto cfg : {cfg_a(), cfg_b()}) {
    for (int i = 0; i < 300; ++i) {
      Frequency f = random_freq(rng);
      f.gamma = 0.0;
      for (int side : {1, -1}) {
        // stay clear of the glancing set where the limit is only continuous, not smooth
        const double x = f.delta + side * cfg.C2() * f.eta;
        if (std::abs(f.eta * f.eta - cfg.C1() * cfg.C1() * x * x) < 1e-3) continue;
        cd w0 = omega(cfg, f, side);
        cd w1 = omega(cfg, Frequency{1e-10, f.delta, f.eta}, side);
        CHECK(std::abs(w0 - w1) < 1e-8);
        CHECK(w0.real() <= 0.0);
      }
    }
  }
}

TEST_CASE("stable vector at the pole") {
  SheetConfig cfg = cfg_b();
  const double eta = 0.7, v = cfg.v_bar();
  Frequency f{0.0, -v * eta, eta};
  auto E = stable_vectors(cfg, f);
  const double expect = -0.6 * eta * eta * (1.0 - 0.64) / (2.0 * cfg.Gamma_bar());
  CHECK(std::abs(E.first(0) - cd(expect)) < 1e-14);
  CHECK(std::abs(E.first(1) + cd(expect)) < 1e-14);
  CHECK_THROWS_AS(interior_symbol(cfg, f), PoleError);
}

TEST_CASE("stable vectors never vanish on a 200^2 hemisphere grid") {
  const int n = 200;
  for (auto cfg : {cfg_a(), cfg_b()}) {
    double minp = 1e300, minm = 1e300;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // polar angle from the gamma axis, azimuth in the (delta, eta) plane
        const double th = 0.5 * M_PI * (i + 0.5) / n, ph = 2.0 * M_PI * (j + 0.5) / n;
        Frequency f{std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)};
        auto E = stable_vectors(cfg, f);
        minp = std::min(minp, E.first.norm());
        minm = std::min(minm, E.second.norm());
      }
    }
    CHECK(minp > 1e-6);
    CHECK(minm > 1e-6);
  }
}

TEST_CASE("triangularization") {
  std::mt19937_64 rng(15);
  for (auto cfg : {cfg_a(), cfg_b()}) {
    for (int i = 0; i < 300; ++i) {
      Frequency f = random_freq(rng);
      Triangular t = triangularize(cfg, f);
      CHECK(t.residual < 1e-10);
      CHECK(std::abs(t.T.determinant()) > 1e-12);
    }
  }
}

TEST_CASE("homogeneity") {
  std::mt19937_64 rng(16);
  SheetConfig cfg = cfg_b();
  for (int i = 0; i < 100; ++i) {
    Frequency f = random_freq(rng);
    for (double s : {0.1, 3.0}) {
      Frequency g = f.scaled(s);
      for (int side : {1, -1}) CHECK(std::abs(omega(cfg, g, side) - s * omega(cfg, f, side)) < 1e-13 * s);
      auto E1 = stable_vectors(cfg, f), E2 = stable_vectors(cfg, g);
      CHECK((E2.first - s * s * E1.first).norm() < 1e-12 * s * s);
      CHECK((E2.second - s * s * E1.second).norm() < 1e-12 * s * s);
      BoundarySymbols b1 = boundary_symbols(cfg, f), b2 = boundary_symbols(cfg, g);
      CHECK((b2.beta - b1.beta).norm() < 1e-13);
    }
  }
}

TEST_CASE("invalid frequencies") {
  CHECK_THROWS_AS(omega(cfg_b(), Frequency{-0.1, 0.0, 1.0}, 1), DomainError);
  CHECK_THROWS_AS(omega(cfg_b(), Frequency{0.0, 0.0, 0.0}, 1), DomainError);
}
