#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "rvs/constsym.hpp"

namespace rvs {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficients in ascending order: c[0] + c[1] z + ... + c[n] z^n.
std::vector<cd> poly_roots(const std::vector<cd>& coeffs);
std::vector<cd> poly_roots(const std::vector<double>& coeffs);
cd poly_eval(const std::vector<cd>& coeffs, cd z);

struct EigenPair {
  cd value;
  Vec4c vector;
  double residual = 0.0;  // |A v - lambda v| / |A|
};
struct Eig4Result {
  std::vector<EigenPair> pairs;  // sorted by (Re, Im)
  bool defective = false;
  double condition = 1.0;  // condition number of the eigenvector matrix
};
enum class EigMode { Auto, Generic };
// Auto uses closed-form 2x2 solves when A is block diagonal.
Eig4Result eig4(const Mat4c& A, EigMode mode = EigMode::Auto);

struct StableSubspace {
  int dimension;
  Eigen::MatrixXcd basis;  // 4 x dimension, orthonormal columns
};
// Throws OracleError when an eigenvalue is within 1e-12 |A| of the imaginary axis.
StableSubspace stable_subspace(const Mat4c& A);

// Largest principal angle between the column spans of X and Y (same dimension).
double max_principal_angle(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y);

struct DecayReport {
  double rate_plus, rate_minus;         // fitted -d ln|W|/dx of pure E+ / E- data
  double expect_plus, expect_minus;     // |Re omega+-|
  double growth_rate;                   // fitted growth of the unstable span, backward data
  double max_angle_to_Eplus;            // drift of pure E+ data after renormalization
  double step;                          // RK4 step
  cd det_beta, delta_closed;            // boundary solvability indicator
  bool rates_ok = false;
};
// Integrates dW/dx2 = A(tau, eta) W by fixed-step RK4 on [0, x2_max].
DecayReport ode_decay_check(const SheetConfig& cfg, const Frequency& f, double x2_max, int steps);

}  // namespace rvs
