#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

#include "rvs/eos_state.hpp"

namespace rvs {

using cd = std::complex<double>;
using Vec3c = Eigen::Vector3cd;
using Vec4c = Eigen::Vector4cd;
using Mat3c = Eigen::Matrix3cd;
using Mat4c = Eigen::Matrix4cd;
using Mat24c = Eigen::Matrix<cd, 2, 4>;

struct Frequency {
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;

  cd tau() const { return {gamma, delta}; }
  double k() const;
  Frequency normalized() const;
  Frequency scaled(double s) const { return {s * gamma, s * delta, s * eta}; }
};

struct PoleError : std::runtime_error {
  int side;
  PoleError(int s, const std::string& what) : std::runtime_error(what), side(s) {}
};

constexpr double kPoleGuard = 1e-14;

struct BoundarySymbols {
  Vec3c b;
  Mat3c Q;
  cd theta;
  Mat24c beta;
};

// Boundary matrix acting on (W2+, W3+, W2-, W3-).
Eigen::Matrix<double, 3, 4> boundary_matrix(const SheetConfig& cfg);
BoundarySymbols boundary_symbols(const SheetConfig& cfg, const Frequency& f);

struct SymbolBundle {
  Mat4c A;
  cd a_plus, a_minus;  // tau +- i vbar eta
  cd mu_plus, mu_minus, m_plus, m_minus;
  cd omega_plus, omega_minus;
  Vec4c E_plus, E_minus;
  Mat24c beta;
  double C0, C1, C2;
  bool glancing_plus = false, glancing_minus = false;
};

// side = +1 or -1
cd omega(const SheetConfig& cfg, const Frequency& f, int side);
cd mu(const SheetConfig& cfg, const Frequency& f, int side);
cd m_coef(const SheetConfig& cfg, const Frequency& f, int side);

// Throws PoleError when |tau +- i vbar eta| < kPoleGuard * k.
SymbolBundle interior_symbol(const SheetConfig& cfg, const Frequency& f);

// Pole-free product forms: (a m, a (mu - omega)) for each side.
std::pair<Vec4c, Vec4c> stable_vectors(const SheetConfig& cfg, const Frequency& f);

struct Triangular {
  Mat4c T;
  Mat4c TinvAT;
  cd z_plus, z_minus;
  int y_plus, y_minus;  // completion coordinate, 1-based
  double residual;      // max |T^{-1} A T - expected| / k
};
Triangular triangularize(const SheetConfig& cfg, const Frequency& f);

}  // namespace rvs
