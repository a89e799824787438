#include "rvs/constsym.hpp"

#include <cmath>

namespace rvs {

namespace {
const cd I(0.0, 1.0);

void guard_frequency(const Frequency& f) {
  if (f.gamma < 0.0) throw DomainError("frequency: gamma must be >= 0");
  if (f.gamma == 0.0 && f.delta == 0.0 && f.eta == 0.0)
    throw DomainError("frequency: (tau, eta) = 0");
}

cd a_side(const SheetConfig& cfg, const Frequency& f, int side) {
  return f.tau() + static_cast<double>(side) * I * cfg.v_bar() * f.eta;
}

// c Gamma (i eta +- eps^2 v tau)^2 / 2 = a m
cd am_product(const SheetConfig& cfg, const Frequency& f, int side) {
  const double e2 = cfg.eps() * cfg.eps();
  cd q = I * f.eta + static_cast<double>(side) * e2 * cfg.v_bar() * f.tau();
  return 0.5 * cfg.c_bar() * cfg.Gamma_bar() * q * q;
}
}  // namespace

double Frequency::k() const { return std::sqrt(gamma * gamma + delta * delta + eta * eta); }

Frequency Frequency::normalized() const {
  double kk = k();
  if (kk == 0.0) throw DomainError("frequency: (tau, eta) = 0");
  return scaled(1.0 / kk);
}

Eigen::Matrix<double, 3, 4> boundary_matrix(const SheetConfig& cfg) {
  const double g = 1.0 / (cfg.Gamma_bar() * cfg.c_bar() * cfg.h_bar());
  Eigen::Matrix<double, 3, 4> B;
  B << g, -g, -g, g,
      g, -g, 0.0, 0.0,
      1.0, 1.0, -1.0, -1.0;
  return B;
}

BoundarySymbols boundary_symbols(const SheetConfig& cfg, const Frequency& f) {
  guard_frequency(f);
  const double v = cfg.v_bar(), k = f.k();
  const cd tau = f.tau();
  BoundarySymbols s;
  s.b << 2.0 * I * v * f.eta, tau + I * v * f.eta, 0.0;
  s.Q << 0.0, 0.0, k,
      tau + I * v * f.eta, -2.0 * I * v * f.eta, 0.0,
      -2.0 * I * v * f.eta, std::conj(tau) - I * v * f.eta, 0.0;
  s.Q /= k;
  s.theta = s.b.squaredNorm() / k;
  Eigen::Matrix<cd, 3, 4> QB = s.Q * boundary_matrix(cfg).cast<cd>();
  s.beta = QB.topRows<2>();
  return s;
}

cd omega(const SheetConfig& cfg, const Frequency& f, int side) {
  guard_frequency(f);
  const double C0 = cfg.C0(), C1 = cfg.C1(), C2 = cfg.C2();
  const double sd = static_cast<double>(side);
  if (f.gamma == 0.0) {
    double x = f.delta + sd * C2 * f.eta;
    double disc = f.eta * f.eta - C1 * C1 * x * x;
    if (disc >= 0.0) return -C0 * std::sqrt(disc);
    double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return -I * sgn * C0 * std::sqrt(-disc);
  }
  cd t = f.tau() + sd * I * C2 * f.eta;
  cd s = std::sqrt(C1 * C1 * t * t + f.eta * f.eta);
  return s.real() > 0.0 ? -C0 * s : C0 * s;
}

cd m_coef(const SheetConfig& cfg, const Frequency& f, int side) {
  cd a = a_side(cfg, f, side);
  if (std::abs(a) < kPoleGuard * f.k())
    throw PoleError(side, side > 0 ? "interior symbol pole on the + side"
                                   : "interior symbol pole on the - side");
  return am_product(cfg, f, side) / a;
}

cd mu(const SheetConfig& cfg, const Frequency& f, int side) {
  return cfg.Gamma_bar() * a_side(cfg, f, side) / cfg.c_bar() - m_coef(cfg, f, side);
}

std::pair<Vec4c, Vec4c> stable_vectors(const SheetConfig& cfg, const Frequency& f) {
  guard_frequency(f);
  const double Gc = cfg.Gamma_bar() / cfg.c_bar();
  Vec4c Ep = Vec4c::Zero(), Em = Vec4c::Zero();
  {
    cd a = a_side(cfg, f, 1), am = am_product(cfg, f, 1), w = omega(cfg, f, 1);
    Ep(0) = am;
    Ep(1) = Gc * a * a - am - a * w;
  }
  {
    cd a = a_side(cfg, f, -1), am = am_product(cfg, f, -1), w = omega(cfg, f, -1);
    Em(2) = Gc * a * a - am - a * w;
    Em(3) = am;
  }
  return {Ep, Em};
}

SymbolBundle interior_symbol(const SheetConfig& cfg, const Frequency& f) {
  guard_frequency(f);
  SymbolBundle S;
  S.a_plus = a_side(cfg, f, 1);
  S.a_minus = a_side(cfg, f, -1);
  S.m_plus = m_coef(cfg, f, 1);
  S.m_minus = m_coef(cfg, f, -1);
  const double Gc = cfg.Gamma_bar() / cfg.c_bar();
  S.mu_plus = Gc * S.a_plus - S.m_plus;
  S.mu_minus = Gc * S.a_minus - S.m_minus;
  S.A = Mat4c::Zero();
  S.A(0, 0) = S.mu_plus;
  S.A(0, 1) = -S.m_plus;
  S.A(1, 0) = S.m_plus;
  S.A(1, 1) = -S.mu_plus;
  S.A(2, 2) = -S.mu_minus;
  S.A(2, 3) = S.m_minus;
  S.A(3, 2) = -S.m_minus;
  S.A(3, 3) = S.mu_minus;
  S.omega_plus = omega(cfg, f, 1);
  S.omega_minus = omega(cfg, f, -1);
  auto E = stable_vectors(cfg, f);
  S.E_plus = E.first;
  S.E_minus = E.second;
  S.beta = boundary_symbols(cfg, f).beta;
  S.C0 = cfg.C0();
  S.C1 = cfg.C1();
  S.C2 = cfg.C2();
  const double gl = 1e-8 * f.k();
  S.glancing_plus = std::abs(S.omega_plus) < gl;
  S.glancing_minus = std::abs(S.omega_minus) < gl;
  return S;
}

Triangular triangularize(const SheetConfig& cfg, const Frequency& f) {
  SymbolBundle S = interior_symbol(cfg, f);
  Triangular R;
  R.T = Mat4c::Zero();
  R.T.col(0) = S.E_plus;
  R.T.col(2) = S.E_minus;
  // completion vector: the larger of the two leading candidates decides
  {
    cd am = S.E_plus(0), amw = S.E_plus(1);
    if (std::abs(am) >= std::abs(amw)) {
      R.y_plus = 2;
      R.z_plus = -1.0 / S.a_plus;
    } else {
      R.y_plus = 1;
      R.z_plus = S.m_plus / amw;
    }
    R.T(R.y_plus - 1, 1) = 1.0;
  }
  {
    cd am = S.E_minus(3), amw = S.E_minus(2);
    if (std::abs(am) >= std::abs(amw)) {
      R.y_minus = 3;
      R.z_minus = -1.0 / S.a_minus;
    } else {
      R.y_minus = 4;
      R.z_minus = S.m_minus / amw;
    }
    R.T(R.y_minus - 1, 3) = 1.0;
  }
  R.TinvAT = R.T.inverse() * S.A * R.T;
  Mat4c expect = Mat4c::Zero();
  expect(0, 0) = S.omega_plus;
  expect(0, 1) = R.z_plus;
  expect(1, 1) = -S.omega_plus;
  expect(2, 2) = S.omega_minus;
  expect(2, 3) = R.z_minus;
  expect(3, 3) = -S.omega_minus;
  R.residual = (R.TinvAT - expect).cwiseAbs().maxCoeff() / f.k();
  return R;
}

}  // namespace rvs
