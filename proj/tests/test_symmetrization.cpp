#include <cmath>
#include <random>

#include "doctest.h"
#include "rvs/symmetrization.hpp"

using namespace rvs;

namespace {
struct Flux {
  Eigen::Vector3d F0, F1, F2;
};

// conservative densities and fluxes of the relativistic Euler system
Flux fluxes(const Eos& eos, const FluidParams& par, const UState& u) {
  PrimState s = u_to_prim(eos, par, u);
  const double e2 = par.epsilon * par.epsilon, p = eos.p(s.rho);
  const double G2 = 1.0 / (1.0 - e2 * (s.v1 * s.v1 + s.v2 * s.v2));
  const double m = (s.rho + e2 * p) * G2;
  Flux f;
  f.F0 << m - e2 * p, m * s.v1, m * s.v2;
  f.F1 << m * s.v1, m * s.v1 * s.v1 + p, m * s.v1 * s.v2;
  f.F2 << m * s.v2, m * s.v1 * s.v2, m * s.v2 * s.v2 + p;
  return f;
}

std::array<Mat3, 3> flux_jacobians(const Eos& eos, const FluidParams& par, const UState& u) {
  std::array<Mat3, 3> J;
  double x[3] = {u.u1, u.u2, u.u3};
  for (int k = 0; k < 3; ++k) {
    double h = 1e-6 * (1.0 + std::abs(x[k]));
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[k] += h;
    xm[k] -= h;
    Flux a = fluxes(eos, par, UState{xp[0], xp[1], xp[2]});
    Flux b = fluxes(eos, par, UState{xm[0], xm[1], xm[2]});
    J[0].col(k) = (a.F0 - b.F0) / (2 * h);
    J[1].col(k) = (a.F1 - b.F1) / (2 * h);
    J[2].col(k) = (a.F2 - b.F2) / (2 * h);
  }
  return J;
}

double rel(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff() / (1.0 + b.cwiseAbs().maxCoeff()); }

Eos test_eos() { return Eos::gamma_law(0.5, 1.7, 0.2, 5.0, 1.0); }

PrimState random_prim(std::mt19937_64& rng, double eps) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), R(0.3, eps > 0.5 ? 1.2 : 3.0);
  const double vmax = eps > 0 ? 0.95 / eps : 3.0;
  for (;;) {
    PrimState s{R(rng), vmax * U(rng), vmax * U(rng)};
    if (s.v1 * s.v1 + s.v2 * s.v2 < vmax * vmax) return s;
  }
}
}  // namespace

TEST_CASE("A matrices at the background and at rest") {
  SheetConfig cfg = SheetConfig::linear(1.0, 0.6, 0.8);
  for (int side : {1, -1}) {
    Mats3 A = a_matrices(cfg.eos(), cfg.params(), cfg.u_bar(side));
    Mat3 expect;
    expect << 0, 0, 0.36, 0, 0, 0, 1, 0, 0;
    CHECK(rel(A.M2, expect) < 1e-14);
  }
  Eos eos = test_eos();
  Mats3 A = a_matrices(eos, FluidParams{0.8}, prim_to_u(eos, FluidParams{0.8}, PrimState{1.3, 0.0, 0.0}));
  CHECK(rel(A.M0, Mat3::Identity()) < 1e-15);
}

TEST_CASE("A matrices agree with the conservation-law Jacobians") {
  // A0^{-1} Aj = dF0^{-1} dFj because both systems share the same characteristic structure
  std::mt19937_64 rng(3);
  Eos eos = test_eos();
  for (double eps : {0.0, 0.4, 0.8}) {
    FluidParams par{eps};
    for (int i = 0; i < 50; ++i) {
      UState u = prim_to_u(eos, par, random_prim(rng, eps));
      Mats3 A = a_matrices(eos, par, u);
      auto J = flux_jacobians(eos, par, u);
      for (int j = 1; j < 3; ++j) {
        Mat3 lhs = A.M0.inverse() * A[j];
        Mat3 rhs = J[0].inverse() * J[j];
        CHECK(rel(lhs, rhs) < 1e-6);
      }
    }
  }
}

TEST_CASE("S1 Bj = Aj and S2 Aj symmetric on 1000 random states") {
  std::mt19937_64 rng(4);
  Eos eos = test_eos();
  for (double eps : {0.0, 0.6}) {
    FluidParams par{eps};
    for (int i = 0; i < 500; ++i) {
      UState u = prim_to_u(eos, par, random_prim(rng, eps));
      LocalState s = local_state(eos, par, u);
      Mats3 A = a_matrices(s, eps), B = b_matrices(s, eps);
      Mat3 S = s1(s, eps);
      for (int j = 0; j < 3; ++j) CHECK(rel(S * B[j], A[j]) < 1e-12);
      SymReport r = check_symmetrizable(eos, par, u);
      CHECK(r.ok);
    }
  }
}

TEST_CASE("S1 at rest is the identity") {
  Eos eos = test_eos();
  LocalState s = local_state(eos, FluidParams{0.8}, PrimState{1.0, 0.0, 0.0});
  CHECK(rel(s1(s, 0.8), Mat3::Identity()) < 1e-15);
}

TEST_CASE("S2 A0 eigenvalues: closed form vs Jacobi") {
  Eos eos = test_eos();
  FluidParams par{0.8};
  LocalState s = local_state(eos, par, PrimState{1.2, 0.5, -0.3});
  auto lam = s2a0_eigenvalues(s, 0.8);
  const double G = s.Gamma, N = s.N, c2 = s.c * s.c, vv = 0.34;
  CHECK(lam[0] == doctest::Approx(G * (1 - 0.4096 * c2 * vv)).epsilon(1e-14));
  CHECK(lam[1] == doctest::Approx(G * N * N * c2).epsilon(1e-14));
  CHECK(lam[2] == doctest::Approx(G * N * N * c2 * (1 - 0.64 * vv)).epsilon(1e-14));
  Mat3 P = s2(s, 0.8) * a_matrices(s, 0.8).M0;
  JacobiResult j = jacobi_eigen3(0.5 * (P + P.transpose()));
  std::array<double, 3> sorted = lam;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 3; ++i) CHECK(j.values[i] == doctest::Approx(sorted[i]).epsilon(1e-10));
}

TEST_CASE("near-luminal state stays symmetrizable") {
  Eos eos = Eos::linear(0.36, 1e-3, 1e3, 1.0);
  FluidParams par{1.0};
  const double v = 1.0 - 1e-12;
  UState u = prim_to_u(eos, par, PrimState{1.0, v, 0.0});
  LocalState s = local_state(eos, par, u);
  auto lam = s2a0_eigenvalues(s, 1.0);
  CHECK(lam[2] > 0.0);
  CHECK(check_symmetrizable(a_matrices(s, 1.0), s2(s, 1.0), lam).ok);
}

TEST_CASE("corrupted A1 is caught with the entry located") {
  Eos eos = test_eos();
  LocalState s = local_state(eos, FluidParams{0.5}, PrimState{1.1, 0.4, 0.2});
  Mats3 A = a_matrices(s, 0.5);
  A.M1(1, 2) += 1e-6;
  SymReport r = check_symmetrizable(A, s2(s, 0.5), s2a0_eigenvalues(s, 0.5));
  REQUIRE_FALSE(r.ok);
  CHECK(r.failures.front().find("S2*A1") != std::string::npos);
  CHECK(r.failures.front().find("at entry (") != std::string::npos);
}

TEST_CASE("lambda2 field is linearly degenerate") {
  std::mt19937_64 rng(5);
  Eos eos = test_eos();
  FluidParams par{0.7};
  for (int i = 0; i < 100; ++i) {
    UState u = prim_to_u(eos, par, random_prim(rng, 0.7));
    double xi = std::uniform_real_distribution<double>(-2, 2)(rng);
    Eigen::Vector3d r = r2(eos, par, u, xi);
    const double h = 1e-6;
    UState up{u.u1 + h * r(0), u.u2 + h * r(1), u.u3 + h * r(2)};
    UState um{u.u1 - h * r(0), u.u2 - h * r(1), u.u3 - h * r(2)};
    double d = (lambda2(eos, par, up, xi) - lambda2(eos, par, um, xi)) / (2 * h);
    CHECK(std::abs(d) < 1e-6);
  }
}

TEST_CASE("background diagonalization") {
  for (auto cfg : {SheetConfig::linear(0.0, 1.0, 2.0), SheetConfig::linear(1.0, 0.6, 0.8)}) {
    BackgroundDiag d = background_diagonalization(cfg);
    const double c = cfg.c_bar(), G = cfg.Gamma_bar(), v = cfg.v_bar(), e2 = cfg.eps() * cfg.eps(), e4 = e2 * e2;
    Mat3 lam = d.Rbar.inverse() * a_matrices(cfg.eos(), cfg.params(), cfg.u_bar(1)).M2 * d.Rbar;
    CHECK(rel(lam, Eigen::Vector3d(0, -c, c).asDiagonal().toDenseMatrix()) < 1e-14);
    Mat3 D = Eigen::Vector3d(0, -2 / c, 2 / c).asDiagonal();
    CHECK(rel(d.plus.M2, D) < 1e-14);
    CHECK(rel(d.minus.M2, -D) < 1e-14);
    for (int side : {1, -1}) {
      const double s = side;
      const double dd = G * (2 - e4 * c * c * v * v) / (c * c);
      Mat3 A0, A1;
      A0 << G * (1 - e2 * v * v), 0, 0,
          s * 2 * e2 * v, dd, -e4 * G * v * v,
          s * 2 * e2 * v, -e4 * G * v * v, dd;
      A1 << s * G * (1 - e2 * v * v) * v, 1 - e2 * v * v, 1 - e2 * v * v,
          1 + e2 * v * v, s * G * v * (2 - e4 * c * c * v * v) / (c * c), -s * e4 * G * v * v * v,
          1 + e2 * v * v, -s * e4 * G * v * v * v, s * G * v * (2 - e4 * c * c * v * v) / (c * c);
      const Mats3& M = side > 0 ? d.plus : d.minus;
      CHECK(rel(M.M0, A0) < 1e-13);
      CHECK(rel(M.M1, A1) < 1e-13);
    }
    if (cfg.eps() == 0.0) CHECK(d.plus.M0(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  }
}
