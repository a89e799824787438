#pragma once

#include <Eigen/Dense>
#include <array>
#include <random>
#include <vector>

#include "rvs/constsym.hpp"
#include "rvs/eos_state.hpp"
#include "rvs/symmetrization.hpp"

namespace rvs {

// Frozen basic state on one side of the front: U and the derivatives of Phi.
struct FrozenPoint {
  int side = 1;
  UState u;
  double phi_t = 0.0, phi_1 = 0.0, phi_2 = 1.0;
};

struct FrozenLocal {
  LocalState s;
  int side;
  double phi_t, phi_1, phi_2;
  double varrho, varsigma, r;  // r = sqrt(varrho^2 + varsigma^2)
  double eikonal_residual;
};

constexpr double kEikonalTol = 1e-12;
constexpr double kEikonalInputTol = 1e-8;

// Throws DomainError unless side*phi_2 > 0 and the eikonal residual is below tol.
FrozenLocal frozen_local(const SheetConfig& cfg, const FrozenPoint& fp, double tol = kEikonalTol);

// Builds a frozen point from primitive data with v2 taken from the eikonal constraint.
FrozenPoint make_frozen_point(const SheetConfig& cfg, int side, double rho, double v1,
                              double phi_t, double phi_1, double phi_2);

struct FrozenPair {
  FrozenPoint plus, minus;
};
FrozenPair zero_perturbation_pair(const SheetConfig& cfg);
// Uniform perturbation in [-amp, amp] of rho (relative), v1+-, phi_t, phi_1, phi_2+-; v2 re-projected.
FrozenPair random_frozen_pair(const SheetConfig& cfg, double amp, std::mt19937_64& rng);
// Throws DomainError unless pressures and the shared front derivatives match.
void check_boundary_pair(const SheetConfig& cfg, const FrozenPair& pair);

struct FrozenMatrices {
  Mat3 A2t;          // printed reduced form
  Mat3 A2t_generic;  // (A2 - phi_t A0 - phi_1 A1) / phi_2
  Mat3 R, A0t;
  Mat3 boldA0, boldA1;
  std::array<double, 3> lambda;  // 0, -c r/phi_2, c r/phi_2
  double identity_residual;      // |A0t R^{-1} A2t R - diag(0,1,1)|
};
FrozenMatrices frozen_matrices(const SheetConfig& cfg, const FrozenPoint& fp);

struct FrozenBoundary {
  Eigen::Matrix<double, 3, 2> b_ring;
  Eigen::Matrix<double, 3, 6> B_ring, B_bold;
  double m1_plus, m2_plus, m1_minus, m2_minus;
  double r_plus, r_minus;
  cd a_plus, a_minus;  // tau + i v1+- eta
  Eigen::Matrix<cd, 2, 6> beta_full;  // Q B_bold with the Hemisphere form of Q
  Mat24c beta;                         // columns 2, 3, 5, 6, degree-0 extension
};
FrozenBoundary frozen_boundary_symbols(const SheetConfig& cfg, const FrozenPair& pair,
                                       const Frequency& f);
double m1_coef(const FrozenLocal& L, double eps);
double m2_coef(const FrozenLocal& L);

struct FrozenInterior {
  Mat3c b;
  Eigen::Matrix2cd a;
  cd ahat;
  double F1, F2, F3;
  double F1_matrix, F2_matrix, F3_matrix;  // same quantities from bold A0 entries
  cd eff_i1_residual, eff_i2_residual;      // a11-a22-2a12 - F2 ahat, a12+a21 - F3 ahat
};
FrozenInterior frozen_interior_symbol(const SheetConfig& cfg, const FrozenPoint& fp,
                                      const Frequency& f);

// Residuals of A1^11 = v1 A0^11 and the seven entry relations between bold A1 and bold A0.
std::array<double, 8> frozen_entry_identities(const SheetConfig& cfg, const FrozenPoint& fp);

struct CFit {
  double C0, C1, C2;         // natural sign: tau + side * i C2 eta
  double C2_plus, C2_minus;  // both sign fits of the linear coefficient
  double residual;           // mismatch at check nodes, relative
};
CFit frozen_cfit(const SheetConfig& cfg, const FrozenPoint& fp);

struct FrozenEigen {
  cd omega_tilde_sq, omega_tilde;
  cd omega, omega_prime;  // Re omega < 0 < Re omega_prime when gamma > 0
  cd trace;               // a11 + a22
};
FrozenEigen frozen_eigen(const SheetConfig& cfg, const FrozenPoint& fp, const Frequency& f);

struct FrozenDelta {
  cd Delta, D1, D2, D3;
  cd det_form;  // det[beta (E+ E-)] with the hemisphere beta
};
FrozenDelta frozen_delta(const SheetConfig& cfg, const FrozenPair& pair, const Frequency& f);

struct FrozenPoly {
  std::vector<double> coeffs;  // ascending, degree 6
  double fit_residual;
  std::vector<cd> roots;
  std::array<double, 3> zq;  // matched to (-z1, 0, z1)
};
// Pring(z) = cbar^2 hbar^2 Gammabar^2 (Q1ring^2 - Q2ring^2) on tau = i z, eta = 1.
cd frozen_Pring(const SheetConfig& cfg, const FrozenPair& pair, double z);
FrozenPoly frozen_root_polynomial(const SheetConfig& cfg, const FrozenPair& pair);

// (P V) computed directly and through W = R^{-1} V; returns max difference.
double trace_bridge_residual(const SheetConfig& cfg, const FrozenPoint& fp, const Eigen::Vector3d& V);

}  // namespace rvs
