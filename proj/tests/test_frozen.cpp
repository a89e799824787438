#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rvs/frozen.hpp"
#include "rvs/lopatinskii.hpp"

using namespace rvs;

namespace {
SheetConfig cfg_b() { return SheetConfig::linear(1.0, 0.6, 0.8); }

Frequency random_freq(std::mt19937_64& rng, double gmin = 0.01) {
  std::uniform_real_distribution<double> G(gmin, 1.0), U(-1.0, 1.0);
  return Frequency{G(rng), U(rng), U(rng)}.normalized();
}
}  // namespace

TEST_CASE("zero perturbation reproduces the constant-coefficient objects") {
  SheetConfig cfg = cfg_b();
  FrozenPair z = zero_perturbation_pair(cfg);
  const double G = cfg.Gamma_bar(), c = cfg.c_bar(), h = cfg.h_bar();
  FrozenLocal P = frozen_local(cfg, z.plus), M = frozen_local(cfg, z.minus);
  CHECK(P.varrho == 0.0);
  CHECK(P.varsigma == 1.0);
  CHECK(M.varsigma == 1.0);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    Frequency f = random_freq(rng);
    FrozenBoundary B = frozen_boundary_symbols(cfg, z, f);
    CHECK(std::abs(B.m1_plus) < 1e-15);
    CHECK(B.m2_plus == doctest::Approx(1.0 / (G * c * h)).epsilon(1e-14));
    CHECK(B.m2_minus == doctest::Approx(1.0 / (G * c * h)).epsilon(1e-14));
    FrozenInterior Ip = frozen_interior_symbol(cfg, z.plus, f);
    CHECK(Ip.F2 == doctest::Approx(2.0 * G / c).epsilon(1e-13));
    CHECK(std::abs(Ip.F3) < 1e-14);
    FrozenEigen Ep = frozen_eigen(cfg, z.plus, f), Em = frozen_eigen(cfg, z.minus, f);
    CHECK(std::abs(Ep.trace) < 1e-13);
    CHECK(std::abs(Ep.omega - omega(cfg, f, 1)) < 1e-12);
    CHECK(std::abs(Em.omega - omega(cfg, f, -1)) < 1e-12);
    cd Dc = delta(cfg, f);
    CHECK(std::abs(frozen_delta(cfg, z, f).Delta - Dc) < 1e-12 * (1.0 + std::abs(Dc)));
  }
}

TEST_CASE("C fit at zero perturbation returns the background constants") {
  SheetConfig cfg = cfg_b();
  FrozenPair z = zero_perturbation_pair(cfg);
  for (const FrozenPoint& fp : {z.plus, z.minus}) {
    CFit c = frozen_cfit(cfg, fp);
    CHECK(c.C0 == doctest::Approx(cfg.C0()).epsilon(1e-10));
    CHECK(c.C1 == doctest::Approx(cfg.C1()).epsilon(1e-10));
    CHECK(c.C2 == doctest::Approx(cfg.C2()).epsilon(1e-10));
    CHECK(c.residual < 1e-10);
  }
}

TEST_CASE("invalid frozen points are rejected") {
  SheetConfig cfg = cfg_b();
  FrozenPoint fp = zero_perturbation_pair(cfg).plus;
  FrozenPoint bad = fp;
  bad.phi_t = 1e-3;  // v2 no longer satisfies the eikonal constraint
  CHECK_THROWS_AS(frozen_local(cfg, bad), DomainError);
  bad = fp;
  bad.phi_2 = -1.0;
  CHECK_THROWS_AS(frozen_local(cfg, bad), DomainError);
  Frequency pole{0.0, -cfg.v_bar() * 0.5, 0.5};
  CHECK_THROWS_AS(frozen_interior_symbol(cfg, fp, pole), PoleError);
}

TEST_CASE("random frozen pairs: structural identities") {
  SheetConfig cfg = cfg_b();
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    FrozenPair pair = random_frozen_pair(cfg, 1e-2, rng);
    check_boundary_pair(cfg, pair);
    Frequency f = random_freq(rng);
    FrozenBoundary B = frozen_boundary_symbols(cfg, pair, f);
    CHECK(B.beta_full.col(0).norm() < 1e-12);
    CHECK(B.beta_full.col(3).norm() < 1e-12);
    for (const FrozenPoint& fp : {pair.plus, pair.minus}) {
      FrozenMatrices M = frozen_matrices(cfg, fp);
      Eigen::FullPivLU<Mat3> lu(M.A2t);
      lu.setThreshold(1e-10);
      CHECK(lu.rank() == 2);
      CHECK(M.identity_residual < 1e-12);
      for (double x : frozen_entry_identities(cfg, fp)) CHECK(x < 1e-12);
      // eigenvalues of the 2x2 interior block by a generic solver
      FrozenInterior S = frozen_interior_symbol(cfg, fp, f);
      Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(S.a);
      FrozenEigen e = frozen_eigen(cfg, fp, f);
      cd l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
      if (l0.real() > l1.real()) std::swap(l0, l1);
      CHECK(std::abs(l0 - e.omega) < 1e-10 * (1.0 + std::abs(l0)));
      CHECK(std::abs(l1 - e.omega_prime) < 1e-10 * (1.0 + std::abs(l1)));
      CHECK(e.omega.real() < 0.0);
      CHECK(e.omega_prime.real() > 0.0);
    }
    FrozenDelta d = frozen_delta(cfg, pair, f);
    CHECK(std::abs(d.D1 * d.D2 * d.D3 - d.Delta) < 1e-10 * std::abs(d.Delta));
    CHECK(std::abs(d.det_form - d.Delta) < 1e-10 * std::abs(d.Delta));
  }
}

TEST_CASE("trace of the interior block is imaginary at gamma = 0") {
  SheetConfig cfg = cfg_b();
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    FrozenPair pair = random_frozen_pair(cfg, 1e-2, rng);
    Frequency f = random_freq(rng);
    f.gamma = 0.0;
    for (const FrozenPoint& fp : {pair.plus, pair.minus}) {
      FrozenInterior S = frozen_interior_symbol(cfg, fp, f);
      CHECK(std::abs((S.a(0, 0) + S.a(1, 1)).real()) < 1e-12);
    }
  }
}

TEST_CASE("frozen boundary roots depend continuously on the perturbation") {
  SheetConfig cfg = cfg_b();
  const double z1 = *root_polynomial(cfg).z1;
  FrozenPoly p0 = frozen_root_polynomial(cfg, zero_perturbation_pair(cfg));
  CHECK(p0.zq[0] == doctest::Approx(-z1).epsilon(1e-10));
  CHECK(std::abs(p0.zq[1]) < 1e-10);
  CHECK(p0.zq[2] == doctest::Approx(z1).epsilon(1e-10));
  double prev = 1e300;
  for (double amp : {1e-2, 1e-3, 1e-4, 1e-5}) {
    std::mt19937_64 rng(34);
    double shift = 0.0;
    for (int i = 0; i < 5; ++i) {
      FrozenPoly p = frozen_root_polynomial(cfg, random_frozen_pair(cfg, amp, rng));
      for (int q = 0; q < 3; ++q) shift = std::max(shift, std::abs(p.zq[q] - p0.zq[q]));
    }
    CHECK(shift < prev);
    CHECK(shift < 50.0 * amp);
    prev = shift;
  }
}

TEST_CASE("frozen root polynomial needs a weakly stable background") {
  SheetConfig cfg = SheetConfig::linear(1.0, 0.6, 0.5);
  CHECK_THROWS_AS(frozen_root_polynomial(cfg, zero_perturbation_pair(cfg)), DomainError);
}
