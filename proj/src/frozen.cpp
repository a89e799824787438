#include "rvs/frozen.hpp"

#include <algorithm>
#include <cmath>

#include "rvs/lopatinskii.hpp"
#include "rvs/oracles.hpp"

namespace rvs {

namespace {
const cd I(0.0, 1.0);

double sq(double x) { return x * x; }

cd a_ring(const FrozenLocal& L, const Frequency& f) { return f.tau() + I * L.s.v1 * f.eta; }

void pole_guard(const FrozenLocal& L, const Frequency& f) {
  if (std::abs(a_ring(L, f)) < kPoleGuard * f.k())
    throw PoleError(L.side, L.side > 0 ? "frozen symbol pole on the + side"
                                       : "frozen symbol pole on the - side");
}
}  // namespace

FrozenLocal frozen_local(const SheetConfig& cfg, const FrozenPoint& fp, double tol) {
  if (fp.side != 1 && fp.side != -1) throw DomainError("frozen point: side must be +1 or -1");
  if (!(fp.side * fp.phi_2 > 0.0)) throw DomainError("frozen point: side * phi_2 must be > 0");
  FrozenLocal L;
  L.s = local_state(cfg.eos(), cfg.params(), fp.u);
  L.side = fp.side;
  L.phi_t = fp.phi_t;
  L.phi_1 = fp.phi_1;
  L.phi_2 = fp.phi_2;
  const double e2 = sq(cfg.eps());
  L.varrho = fp.phi_1 + e2 * L.s.v1 * fp.phi_t;
  L.varsigma = 1.0 - e2 * L.s.v2 * fp.phi_t;
  L.r = std::hypot(L.varrho, L.varsigma);
  if (L.r == 0.0) throw DomainError("frozen point: degenerate front (varrho = varsigma = 0)");
  L.eikonal_residual = std::abs(fp.phi_t + L.s.v1 * fp.phi_1 - L.s.v2);
  if (!(L.eikonal_residual <= tol)) throw DomainError("frozen point: eikonal constraint violated");
  return L;
}

FrozenPoint make_frozen_point(const SheetConfig& cfg, int side, double rho, double v1,
                              double phi_t, double phi_1, double phi_2) {
  FrozenPoint fp;
  fp.side = side;
  fp.phi_t = phi_t;
  fp.phi_1 = phi_1;
  fp.phi_2 = phi_2;
  fp.u = prim_to_u(cfg.eos(), cfg.params(), PrimState{rho, v1, phi_t + v1 * phi_1});
  return fp;
}

FrozenPair zero_perturbation_pair(const SheetConfig& cfg) {
  return {make_frozen_point(cfg, 1, cfg.rho_bar(), cfg.v_bar(), 0.0, 0.0, 1.0),
          make_frozen_point(cfg, -1, cfg.rho_bar(), -cfg.v_bar(), 0.0, 0.0, -1.0)};
}

FrozenPair random_frozen_pair(const SheetConfig& cfg, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-amp, amp);
  const double rho = cfg.rho_bar() * (1.0 + U(rng));
  const double v1p = cfg.v_bar() + U(rng);
  const double v1m = -cfg.v_bar() + U(rng);
  const double pt = U(rng), p1 = U(rng);
  const double p2p = 1.0 + U(rng), p2m = -1.0 + U(rng);
  return {make_frozen_point(cfg, 1, rho, v1p, pt, p1, p2p),
          make_frozen_point(cfg, -1, rho, v1m, pt, p1, p2m)};
}

void check_boundary_pair(const SheetConfig& cfg, const FrozenPair& pair) {
  (void)cfg;
  if (pair.plus.side != 1 || pair.minus.side != -1)
    throw DomainError("frozen pair: sides must be (+1, -1)");
  const double pp = pair.plus.u.u1, pm = pair.minus.u.u1;
  if (std::abs(pp - pm) > 1e-12 * std::max(std::abs(pp), std::abs(pm)))
    throw DomainError("frozen pair: pressure traces differ");
  if (std::abs(pair.plus.phi_t - pair.minus.phi_t) > 1e-12 ||
      std::abs(pair.plus.phi_1 - pair.minus.phi_1) > 1e-12)
    throw DomainError("frozen pair: front traces differ");
}

FrozenMatrices frozen_matrices(const SheetConfig& cfg, const FrozenPoint& fp) {
  FrozenLocal L = frozen_local(cfg, fp);
  const LocalState& s = L.s;
  const double Nc = s.N * s.c;
  FrozenMatrices M;
  M.A2t << 0.0, -s.N * s.c * s.c * L.varrho, s.N * s.c * s.c * L.varsigma,
      -L.varrho / s.N, 0.0, 0.0,
      L.varsigma / s.N, 0.0, 0.0;
  M.A2t /= L.phi_2;
  Mats3 A = a_matrices(s, cfg.eps());
  M.A2t_generic = (A.M2 - L.phi_t * A.M0 - L.phi_1 * A.M1) / L.phi_2;
  M.R << 0.0, L.r, L.r,
      L.varsigma, L.varrho / Nc, -L.varrho / Nc,
      L.varrho, -L.varsigma / Nc, L.varsigma / Nc;
  const double lam = s.c * L.r / L.phi_2;
  M.lambda = {0.0, -lam, lam};
  // first slot set to 1 so that the characteristic row of bold A0 survives
  M.A0t = Eigen::Vector3d(1.0, -1.0 / lam, 1.0 / lam).asDiagonal();
  Mat3 Rinv = M.R.inverse();
  Mat3 id = M.A0t * Rinv * M.A2t * M.R;
  Mat3 target = Eigen::Vector3d(0.0, 1.0, 1.0).asDiagonal();
  M.identity_residual = (id - target).cwiseAbs().maxCoeff();
  M.boldA0 = M.A0t * Rinv * A.M0 * M.R;
  M.boldA1 = M.A0t * Rinv * A.M1 * M.R;
  return M;
}

double m1_coef(const FrozenLocal& L, double eps) {
  return sq(eps) * L.phi_t * L.r / (sq(L.s.Gamma) * L.s.h * L.s.N);
}

double m2_coef(const FrozenLocal& L) {
  return sq(L.r) / (L.s.Gamma * L.s.c * L.s.h * L.s.N);
}

FrozenBoundary frozen_boundary_symbols(const SheetConfig& cfg, const FrozenPair& pair,
                                       const Frequency& f) {
  check_boundary_pair(cfg, pair);
  FrozenLocal P = frozen_local(cfg, pair.plus), M = frozen_local(cfg, pair.minus);
  const double e2 = sq(cfg.eps());
  FrozenBoundary B;
  B.b_ring << 0.0, P.s.v1 - M.s.v1,
      1.0, P.s.v1,
      0.0, 0.0;
  auto row = [&](const FrozenLocal& L) {
    return Eigen::RowVector3d(e2 * L.phi_t / (L.s.N * L.s.h * sq(L.s.Gamma)),
                              L.varrho / (L.s.h * L.s.Gamma), -L.varsigma / (L.s.h * L.s.Gamma));
  };
  Eigen::RowVector3d rp = row(P), rm = row(M);
  B.B_ring.setZero();
  B.B_ring.block<1, 3>(0, 0) = rp;
  B.B_ring.block<1, 3>(0, 3) = -rm;
  B.B_ring.block<1, 3>(1, 0) = rp;
  B.B_ring(2, 0) = 1.0;
  B.B_ring(2, 3) = -1.0;
  Eigen::Matrix<double, 6, 6> RR = Eigen::Matrix<double, 6, 6>::Zero();
  RR.block<3, 3>(0, 0) = frozen_matrices(cfg, pair.plus).R;
  RR.block<3, 3>(3, 3) = frozen_matrices(cfg, pair.minus).R;
  B.B_bold = B.B_ring * RR;
  B.m1_plus = m1_coef(P, cfg.eps());
  B.m2_plus = m2_coef(P);
  B.m1_minus = m1_coef(M, cfg.eps());
  B.m2_minus = m2_coef(M);
  B.r_plus = P.r;
  B.r_minus = M.r;
  B.a_plus = a_ring(P, f);
  B.a_minus = a_ring(M, f);

  auto Qof = [&](const Frequency& g) {
    Eigen::Matrix<cd, 2, 3> Q;
    Q << 0.0, 0.0, 1.0,
        g.tau() + I * g.eta * P.s.v1, -I * g.eta * (P.s.v1 - M.s.v1), 0.0;
    return Q;
  };
  B.beta_full = Qof(f) * B.B_bold.cast<cd>();
  Eigen::Matrix<cd, 2, 6> bn = Qof(f.normalized()) * B.B_bold.cast<cd>();
  B.beta << bn.col(1), bn.col(2), bn.col(4), bn.col(5);
  return B;
}

FrozenInterior frozen_interior_symbol(const SheetConfig& cfg, const FrozenPoint& fp,
                                      const Frequency& f) {
  FrozenLocal L = frozen_local(cfg, fp);
  pole_guard(L, f);
  FrozenMatrices M = frozen_matrices(cfg, fp);
  const LocalState& s = L.s;
  const double e2 = sq(cfg.eps());
  FrozenInterior r;
  r.ahat = a_ring(L, f);
  r.b = f.tau() * M.boldA0.cast<cd>() + I * f.eta * M.boldA1.cast<cd>();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.a(i, j) = -r.b(i + 1, j + 1) + r.b(i + 1, 0) * r.b(0, j + 1) / r.b(0, 0);

  const double rr = sq(L.r);
  r.F1 = s.Gamma * (1.0 - e2 * sq(L.varsigma * s.v1 + L.varrho * s.v2) / rr);
  const double den = e2 * sq(L.varrho * s.v2 + L.varsigma * s.v1) - rr;
  r.F2 = 2.0 * L.phi_2 *
         (s.Gamma * L.r * (e2 * (sq(s.v1) + sq(s.v2)) - 1.0) +
          e2 * s.c * (L.varsigma * s.v2 - L.varrho * s.v1)) /
         (s.c * den);
  r.F3 = -2.0 * L.phi_2 * e2 * (L.varsigma * s.v2 - L.varrho * s.v1) / den;

  const Mat3& A = M.boldA0;  // zero-based A(i-1, j-1) = A^{ij}
  r.F1_matrix = A(0, 0);
  r.F2_matrix = (A(0, 0) * (-A(1, 1) + A(2, 2) + 2.0 * A(1, 2)) + A(1, 0) * (A(0, 1) - A(0, 2)) -
                 A(0, 2) * (A(1, 0) + A(2, 0))) /
                A(0, 0);
  r.F3_matrix = (A(0, 0) * (-A(1, 2) - A(2, 1)) + A(1, 0) * A(0, 2) + A(2, 0) * A(0, 1)) / A(0, 0);
  r.eff_i1_residual = r.a(0, 0) - r.a(1, 1) - 2.0 * r.a(0, 1) - r.F2 * r.ahat;
  r.eff_i2_residual = r.a(0, 1) + r.a(1, 0) - r.F3 * r.ahat;
  return r;
}

std::array<double, 8> frozen_entry_identities(const SheetConfig& cfg, const FrozenPoint& fp) {
  FrozenLocal L = frozen_local(cfg, fp);
  FrozenMatrices M = frozen_matrices(cfg, fp);
  const Mat3& A0 = M.boldA0;
  const Mat3& A1 = M.boldA1;
  const double v1 = L.s.v1;
  auto a0 = [&](int i, int j) { return A0(i - 1, j - 1); };
  auto a1 = [&](int i, int j) { return A1(i - 1, j - 1); };
  const double s1 = 1.0 + std::max(A0.cwiseAbs().maxCoeff(), A1.cwiseAbs().maxCoeff());
  const double s2 = s1 * s1;
  std::array<double, 8> r;
  r[0] = std::abs(a1(1, 1) - v1 * a0(1, 1)) / s1;
  r[1] = std::abs(a1(2, 3) - v1 * a0(2, 3)) / s1;
  r[2] = std::abs(a1(3, 2) - v1 * a0(3, 2)) / s1;
  r[3] = std::abs(a1(2, 2) - a1(3, 3) - v1 * (a0(2, 2) - a0(3, 3))) / s1;
  r[4] = std::abs(a1(1, 2) - a1(1, 3) - v1 * (a0(1, 2) - a0(1, 3))) / s1;
  r[5] = std::abs(a1(2, 1) + a1(3, 1) - v1 * (a0(2, 1) + a0(3, 1))) / s1;
  r[6] = std::abs(a1(2, 1) * (a0(1, 2) - a0(1, 3)) - a1(1, 3) * (a0(2, 1) + a0(3, 1)) -
                  v1 * (a0(2, 1) * (a0(1, 2) - a0(1, 3)) - a0(1, 3) * (a0(2, 1) + a0(3, 1)))) /
         s2;
  r[7] = std::abs(a1(1, 3) * (a0(2, 1) + a0(3, 1)) + a1(3, 1) * (a0(1, 2) - a0(1, 3)) -
                  v1 * (a0(1, 3) * (a0(2, 1) + a0(3, 1)) + a0(3, 1) * (a0(1, 2) - a0(1, 3)))) /
         s2;
  return r;
}

namespace {
cd omega_tilde_sq(const Eigen::Matrix2cd& a) {
  cd d = 0.5 * (a(0, 0) - a(1, 1));
  return d * d + a(0, 1) * a(1, 0);
}
}  // namespace

CFit frozen_cfit(const SheetConfig& cfg, const FrozenPoint& fp) {
  auto w2 = [&](cd tau) {
    Frequency f{tau.real(), tau.imag(), 1.0};
    return omega_tilde_sq(frozen_interior_symbol(cfg, fp, f).a);
  };
  // exact quadratic in tau at eta = 1 through three nodes
  const cd t0(0.5, 0.0), t1(1.0, 0.5), t2(2.0, -0.3);
  const cd f0 = w2(t0), f1 = w2(t1), f2 = w2(t2);
  const cd d01 = (f1 - f0) / (t1 - t0), d12 = (f2 - f1) / (t2 - t1);
  const cd alpha = (d12 - d01) / (t2 - t0);
  const cd beta = d01 - alpha * (t0 + t1);
  const cd gam = f0 - alpha * t0 * t0 - beta * t0;
  CFit c;
  double res = 0.0;
  for (cd t : {cd(0.7, 1.3), cd(1.5, 0.0), cd(0.2, -0.8)}) {
    cd pred = (alpha * t + beta) * t + gam;
    cd got = w2(t);
    res = std::max(res, std::abs(pred - got) / std::max(1.0, std::abs(got)));
  }
  // structure: alpha real, beta imaginary, gamma real
  res = std::max(res, std::abs(alpha.imag()) / std::abs(alpha));
  res = std::max(res, std::abs(beta.real()) / std::max(1.0, std::abs(beta)));
  res = std::max(res, std::abs(gam.imag()) / std::max(1.0, std::abs(gam)));
  c.residual = res;
  const double al = alpha.real();
  c.C2_plus = (beta / (2.0 * I * al)).real();
  c.C2_minus = -c.C2_plus;
  c.C2 = fp.side > 0 ? c.C2_plus : c.C2_minus;
  const double C0sq = gam.real() + al * c.C2 * c.C2;
  if (!(C0sq > 0.0) || !(al > 0.0)) throw DomainError("frozen C fit: non-positive constants");
  c.C0 = std::sqrt(C0sq);
  c.C1 = std::sqrt(al / C0sq);
  return c;
}

FrozenEigen frozen_eigen(const SheetConfig& cfg, const FrozenPoint& fp, const Frequency& f) {
  FrozenInterior S = frozen_interior_symbol(cfg, fp, f);
  FrozenEigen e;
  e.trace = S.a(0, 0) + S.a(1, 1);
  e.omega_tilde_sq = omega_tilde_sq(S.a);
  if (f.gamma > 0.0) {
    cd s = std::sqrt(e.omega_tilde_sq);
    cd w1 = 0.5 * e.trace + s, w2 = 0.5 * e.trace - s;
    if (w1.real() < w2.real()) {
      e.omega = w1;
      e.omega_prime = w2;
    } else {
      e.omega = w2;
      e.omega_prime = w1;
    }
    e.omega_tilde = e.omega - 0.5 * e.trace;
  } else {
    CFit c = frozen_cfit(cfg, fp);
    const double w2r = e.omega_tilde_sq.real();
    if (w2r >= 0.0) {
      e.omega_tilde = -std::sqrt(w2r);
    } else {
      double x = f.delta + fp.side * c.C2 * f.eta;
      double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      e.omega_tilde = -I * sgn * std::sqrt(-w2r);
    }
    e.omega = 0.5 * e.trace + e.omega_tilde;
    e.omega_prime = 0.5 * e.trace - e.omega_tilde;
  }
  return e;
}

FrozenDelta frozen_delta(const SheetConfig& cfg, const FrozenPair& pair, const Frequency& f) {
  FrozenBoundary B = frozen_boundary_symbols(cfg, pair, f);
  FrozenInterior Sp = frozen_interior_symbol(cfg, pair.plus, f);
  FrozenInterior Sm = frozen_interior_symbol(cfg, pair.minus, f);
  FrozenEigen ep = frozen_eigen(cfg, pair.plus, f);
  FrozenEigen em = frozen_eigen(cfg, pair.minus, f);
  const cd ap = B.a_plus, am = B.a_minus;
  FrozenDelta d;
  d.D1 = Sp.F2 * ap / 2.0 - ep.omega_tilde;
  d.D2 = (Sm.F2 + 2.0 * Sm.F3) / 2.0 * am + em.omega_tilde;
  const cd q21 = 2.0 * (B.m2_plus - B.m1_plus) / Sp.F2 * am * ep.omega_tilde;
  const cd q22 = 2.0 * (B.m2_minus + B.m1_minus) / (Sm.F2 + 2.0 * Sm.F3) * ap * em.omega_tilde;
  d.D3 = ap * B.r_plus * q22 - am * B.r_minus * q21;
  d.Delta = d.D1 * d.D2 * d.D3;

  Vec4c Ep, Em;
  Ep << -ap * Sp.a(0, 1), ap * (Sp.a(0, 0) - ep.omega), 0.0, 0.0;
  Em << 0.0, 0.0, am * (Sm.a(1, 1) - em.omega), -am * Sm.a(1, 0);
  Mat24c beta;
  beta << B.beta_full.col(1), B.beta_full.col(2), B.beta_full.col(4), B.beta_full.col(5);
  Eigen::Matrix2cd M;
  M.col(0) = beta * Ep;
  M.col(1) = beta * Em;
  d.det_form = M.determinant();
  return d;
}

cd frozen_Pring(const SheetConfig& cfg, const FrozenPair& pair, double z) {
  check_boundary_pair(cfg, pair);
  const Frequency f{0.0, z, 1.0};
  FrozenLocal P = frozen_local(cfg, pair.plus), M = frozen_local(cfg, pair.minus);
  FrozenInterior Sp = frozen_interior_symbol(cfg, pair.plus, f);
  FrozenInterior Sm = frozen_interior_symbol(cfg, pair.minus, f);
  const cd ap = a_ring(P, f), am = a_ring(M, f);
  const double k1 = 2.0 * (m2_coef(M) + m1_coef(M, cfg.eps())) / (Sm.F2 + 2.0 * Sm.F3) * P.r;
  const double k2 = 2.0 * (m1_coef(P, cfg.eps()) - m2_coef(P)) / Sp.F2 * M.r;
  // (i eta)^6 = -1 at eta = 1
  const cd Q1sq = -k1 * k1 * std::pow(ap, 4) * omega_tilde_sq(Sm.a);
  const cd Q2sq = -k2 * k2 * std::pow(am, 4) * omega_tilde_sq(Sp.a);
  return sq(cfg.c_bar() * cfg.h_bar() * cfg.Gamma_bar()) * (Q1sq - Q2sq);
}

FrozenPoly frozen_root_polynomial(const SheetConfig& cfg, const FrozenPair& pair) {
  RootPoly rp = root_polynomial(cfg);
  if (!rp.z1 || !rp.z2) throw DomainError("frozen root polynomial: background is not weakly stable");
  const double z1 = *rp.z1;
  const double L = 1.25 * std::max(*rp.z2, cfg.v_bar() + cfg.C2() + 1.0 / cfg.C1());
  const double poles[2] = {-frozen_local(cfg, pair.plus).s.v1, -frozen_local(cfg, pair.minus).s.v1};
  const int deg = 6, nodes = 41;
  std::vector<double> xs;
  std::vector<cd> vals;
  for (int j = 0; j < nodes; ++j) {
    double x = std::cos(M_PI * (j + 0.5) / nodes);
    double z = L * x;
    if (std::abs(z - poles[0]) < 0.02 * L || std::abs(z - poles[1]) < 0.02 * L) continue;
    xs.push_back(x);
    vals.push_back(frozen_Pring(cfg, pair, z));
  }
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd V(n, deg + 1);
  Eigen::VectorXd y(n);
  double ymax = 0.0, imax = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j <= deg; ++j, p *= xs[i]) V(i, j) = p;
    y(i) = vals[i].real();
    ymax = std::max(ymax, std::abs(vals[i]));
    imax = std::max(imax, std::abs(vals[i].imag()));
  }
  Eigen::VectorXd cx = V.colPivHouseholderQr().solve(y);
  FrozenPoly out;
  out.fit_residual = std::max((V * cx - y).cwiseAbs().maxCoeff(), imax) / ymax;
  if (!(out.fit_residual <= 1e-8)) throw DomainError("frozen root polynomial: fit residual above 1e-8");
  out.coeffs.resize(deg + 1);
  double Lp = 1.0;
  for (int j = 0; j <= deg; ++j, Lp *= L) out.coeffs[j] = cx(j) / Lp;

  // drop a numerically absent leading term before root extraction
  std::vector<double> c = out.coeffs;
  double cmax = 0.0;
  for (int j = 0; j <= deg; ++j) cmax = std::max(cmax, std::abs(cx(j)));
  if (std::abs(cx(deg)) < 1e-10 * cmax) c.pop_back();
  out.roots = poly_roots(c);
  const double targets[3] = {-z1, 0.0, z1};
  for (int q = 0; q < 3; ++q) {
    double best = std::numeric_limits<double>::quiet_NaN(), dist = 1e300;
    for (const cd& r : out.roots) {
      if (std::abs(r.imag()) > 1e-6 * (1.0 + std::abs(r))) continue;
      double d = std::abs(r.real() - targets[q]);
      if (d < dist) {
        dist = d;
        best = r.real();
      }
    }
    out.zq[q] = best;
  }
  return out;
}

double trace_bridge_residual(const SheetConfig& cfg, const FrozenPoint& fp, const Eigen::Vector3d& V) {
  FrozenLocal L = frozen_local(cfg, fp);
  FrozenMatrices M = frozen_matrices(cfg, fp);
  Eigen::Vector3d W = M.R.lu().solve(V);
  const double Nc = L.s.N * L.s.c;
  Eigen::Vector2d direct(V(0), L.varsigma * V(2) - L.varrho * V(1));
  Eigen::Vector2d viaW(L.r * (W(1) + W(2)), -sq(L.r) / Nc * (W(1) - W(2)));
  return (direct - viaW).cwiseAbs().maxCoeff();
}

}  // namespace rvs
