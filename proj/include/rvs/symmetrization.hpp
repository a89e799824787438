#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "rvs/eos_state.hpp"

namespace rvs {

using Mat3 = Eigen::Matrix3d;

struct Mats3 {
  Mat3 M0, M1, M2;
  const Mat3& operator[](int j) const { return j == 0 ? M0 : (j == 1 ? M1 : M2); }
  Mat3& operator[](int j) { return j == 0 ? M0 : (j == 1 ? M1 : M2); }
};

// Coefficients of the symmetrizable system in U = (p, hw1, hw2).
Mats3 a_matrices(const LocalState& s, double epsilon);
Mats3 a_matrices(const Eos& eos, const FluidParams& params, const UState& u);

// Coefficients of the intermediate (non-symmetric) system.
Mats3 b_matrices(const LocalState& s, double epsilon);
Mats3 b_matrices(const Eos& eos, const FluidParams& params, const UState& u);

Mat3 s1(const LocalState& s, double epsilon);
Mat3 s1(const Eos& eos, const FluidParams& params, const UState& u);
Mat3 s2(const LocalState& s, double epsilon);
Mat3 s2(const Eos& eos, const FluidParams& params, const UState& u);

// Closed-form eigenvalues of S2 A0.
std::array<double, 3> s2a0_eigenvalues(const LocalState& s, double epsilon);

struct JacobiResult {
  std::array<double, 3> values;  // ascending
  Mat3 vectors;                  // columns
  int sweeps;
};
// Cyclic Jacobi rotations for a symmetric 3x3 matrix.
JacobiResult jacobi_eigen3(const Mat3& A, double tol = 1e-15, int max_sweeps = 50);

struct SymReport {
  bool ok = true;
  std::array<double, 3> asymmetry{};  // max |S2Aj - (S2Aj)^T| / (1 + max|S2Aj|)
  std::array<double, 3> lambda_closed{};
  std::array<double, 3> lambda_numeric{};
  std::vector<std::string> failures;
};

constexpr double kSymmetryTol = 1e-12;
constexpr double kEigenAgreeTol = 1e-10;

SymReport check_symmetrizable(const Mats3& A, const Mat3& S2,
                              const std::array<double, 3>& lambda_closed);
SymReport check_symmetrizable(const Eos& eos, const FluidParams& params, const UState& u);

// lambda_2(U, xi) = v1 xi - v2 and its eigenvector
double lambda2(const Eos& eos, const FluidParams& params, const UState& u, double xi);
Eigen::Vector3d r2(const Eos& eos, const FluidParams& params, const UState& u, double xi);

struct BackgroundDiag {
  Mat3 Rbar, Sbar;
  Mats3 plus, minus;  // calA_j^{+-} = Sbar Rbar^{-1} A_j(Ubar^{+-}) Rbar, calA_2 carries the side sign
};
BackgroundDiag background_diagonalization(const SheetConfig& cfg);

}  // namespace rvs
