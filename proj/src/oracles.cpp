#include "rvs/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "rvs/lopatinskii.hpp"

namespace rvs {

namespace {
bool less_re_im(cd a, cd b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double poly_scale(const std::vector<cd>& c, cd z) {
  double s = 0.0, p = 1.0, az = std::abs(z);
  for (const auto& ci : c) {
    s += std::abs(ci) * p;
    p *= az;
  }
  return s;
}

cd poly_deriv(const std::vector<cd>& c, cd z) {
  cd r = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) r = r * z + static_cast<double>(i) * c[i];
  return r;
}
}  // namespace

cd poly_eval(const std::vector<cd>& c, cd z) {
  cd r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * z + c[i];
  return r;
}

std::vector<cd> poly_roots(const std::vector<double>& coeffs) {
  return poly_roots(std::vector<cd>(coeffs.begin(), coeffs.end()));
}

std::vector<cd> poly_roots(const std::vector<cd>& coeffs_in) {
  std::vector<cd> c = coeffs_in;
  double maxc = 0.0;
  for (const auto& x : c) maxc = std::max(maxc, std::abs(x));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * maxc) c.pop_back();
  if (c.size() < 2 || maxc == 0.0) throw OracleError("poly_roots: degenerate polynomial");
  const std::size_t n = c.size() - 1;
  std::vector<cd> roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
  } else if (n == 2) {
    cd a = c[2], b = c[1], cc = c[0];
    cd s = std::sqrt(b * b - 4.0 * a * cc);
    // pick the sign that avoids cancellation
    cd q = (std::real(std::conj(b) * s) >= 0.0) ? -0.5 * (b + s) : -0.5 * (b - s);
    if (q == 0.0) {
      roots = {0.0, 0.0};
    } else {
      roots = {q / a, cc / q};
    }
  } else {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw OracleError("poly_roots: eigensolver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()(i));
  }
  // Newton polish, kept only when the residual improves
  for (auto& z : roots) {
    for (int it = 0; it < 3; ++it) {
      cd p = poly_eval(c, z), d = poly_deriv(c, z);
      if (d == 0.0) break;
      cd zn = z - p / d;
      if (std::abs(poly_eval(c, zn)) < std::abs(p)) z = zn;
      else break;
    }
  }
  for (const auto& z : roots) {
    if (!(std::abs(poly_eval(c, z)) < 1e-9 * poly_scale(c, z)))
      throw OracleError("poly_roots: root residual above tolerance");
  }
  std::sort(roots.begin(), roots.end(), less_re_im);
  return roots;
}

namespace {
void eig2_block(const Eigen::Matrix2cd& B, int offset, std::vector<EigenPair>& out) {
  cd p = B(0, 0), q = B(0, 1), r = B(1, 0), s = B(1, 1);
  cd half = 0.5 * (p + s);
  cd disc = std::sqrt(0.25 * (p - s) * (p - s) + q * r);
  for (cd lam : {half + disc, half - disc}) {
    Eigen::Vector2cd v1(q, lam - p), v2(lam - s, r);
    Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() == 0.0) v = Eigen::Vector2cd(offset == 0 ? 1.0 : 0.0, offset == 0 ? 0.0 : 1.0);
    EigenPair ep;
    ep.value = lam;
    ep.vector = Vec4c::Zero();
    ep.vector.segment<2>(offset) = v / v.norm();
    out.push_back(ep);
  }
}
}  // namespace

Eig4Result eig4(const Mat4c& A, EigMode mode) {
  Eig4Result res;
  const double nA = std::max(1e-300, A.norm());
  bool block = A.block<2, 2>(0, 2).cwiseAbs().maxCoeff() == 0.0 &&
               A.block<2, 2>(2, 0).cwiseAbs().maxCoeff() == 0.0;
  if (mode == EigMode::Auto && block) {
    eig2_block(A.block<2, 2>(0, 0), 0, res.pairs);
    eig2_block(A.block<2, 2>(2, 2), 2, res.pairs);
  } else {
    Eigen::ComplexEigenSolver<Mat4c> es(A, true);
    if (es.info() != Eigen::Success) throw OracleError("eig4: eigensolver failed");
    for (int i = 0; i < 4; ++i) {
      EigenPair ep;
      ep.value = es.eigenvalues()(i);
      ep.vector = es.eigenvectors().col(i).normalized();
      res.pairs.push_back(ep);
    }
  }
  Mat4c V;
  for (int i = 0; i < 4; ++i) {
    auto& ep = res.pairs[i];
    ep.residual = (A * ep.vector - ep.value * ep.vector).norm() / nA;
    V.col(i) = ep.vector;
  }
  Eigen::JacobiSVD<Mat4c> svd(V);
  double smin = svd.singularValues()(3), smax = svd.singularValues()(0);
  res.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  res.defective = res.condition > 1e10;
  std::sort(res.pairs.begin(), res.pairs.end(),
            [](const EigenPair& a, const EigenPair& b) { return less_re_im(a.value, b.value); });
  return res;
}

StableSubspace stable_subspace(const Mat4c& A) {
  Eig4Result e = eig4(A, EigMode::Generic);
  const double nA = A.norm();
  std::vector<Vec4c> cols;
  for (const auto& p : e.pairs) {
    if (std::abs(p.value.real()) <= 1e-12 * nA)
      throw OracleError("stable_subspace: eigenvalue on the imaginary axis; use the boundary extension");
    if (p.value.real() < 0.0) cols.push_back(p.vector);
  }
  Eigen::MatrixXcd M(4, cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) M.col(i) = cols[i];
  StableSubspace s;
  s.dimension = static_cast<int>(cols.size());
  if (s.dimension > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
    s.basis = qr.householderQ() * Eigen::MatrixXcd::Identity(4, s.dimension);
  } else {
    s.basis = Eigen::MatrixXcd(4, 0);
  }
  return s;
}

double max_principal_angle(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
  const Eigen::Index n = X.rows(), d = X.cols();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qx(X), qy(Y);
  Eigen::MatrixXcd Qx = qx.householderQ() * Eigen::MatrixXcd::Identity(n, d);
  Eigen::MatrixXcd Qy = qy.householderQ() * Eigen::MatrixXcd::Identity(n, Y.cols());
  // sin of the largest angle = |(I - Qx Qx^H) Qy|_2, accurate for small angles
  Eigen::MatrixXcd R = Qy - Qx * (Qx.adjoint() * Qy);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R);
  double s = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return std::asin(std::min(1.0, s));
}

namespace {
Vec4c rk4_step(const Mat4c& A, const Vec4c& w, double h) {
  Vec4c k1 = A * w;
  Vec4c k2 = A * (w + 0.5 * h * k1);
  Vec4c k3 = A * (w + 0.5 * h * k2);
  Vec4c k4 = A * (w + h * k3);
  return w + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// slope of y against x by least squares
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Trajectory {
  std::vector<double> x, lognorm;
  double max_angle = 0.0;
};

Trajectory integrate(const Mat4c& A, Vec4c w, double x0, double h, int steps, const Vec4c* track) {
  Trajectory t;
  double lscale = 0.0, x = x0;
  auto record = [&] {
    t.x.push_back(x);
    t.lognorm.push_back(lscale + std::log(w.norm()));
    if (track) {
      cd proj = track->dot(w) / track->squaredNorm();
      double s = (w - proj * *track).norm() / w.norm();
      t.max_angle = std::max(t.max_angle, std::asin(std::min(1.0, s)));
    }
  };
  record();
  for (int i = 0; i < steps; ++i) {
    w = rk4_step(A, w, h);
    x += h;
    double nw = w.norm();
    if (!std::isfinite(nw)) throw OracleError("ode_decay_check: overflow; reduce x2_max");
    lscale += std::log(nw);
    w /= nw;
    record();
  }
  return t;
}
}  // namespace

DecayReport ode_decay_check(const SheetConfig& cfg, const Frequency& f, double x2_max, int steps) {
  if (!(f.gamma > 0.0)) throw DomainError("ode_decay_check: gamma must be > 0");
  SymbolBundle S = interior_symbol(cfg, f);
  const Mat4c& A = S.A;
  // spectral bound so that |A| h < 0.1
  double nA = A.norm();
  int n = std::max(steps, static_cast<int>(std::ceil(nA * x2_max / 0.1)));
  double h = x2_max / n;

  DecayReport r;
  r.step = h;
  r.expect_plus = std::abs(S.omega_plus.real());
  r.expect_minus = std::abs(S.omega_minus.real());

  Vec4c Ep = S.E_plus / S.E_plus.norm(), Em = S.E_minus / S.E_minus.norm();
  Trajectory tp = integrate(A, Ep, 0.0, h, n, &Ep);
  Trajectory tm = integrate(A, Em, 0.0, h, n, nullptr);
  r.rate_plus = -fit_slope(tp.x, tp.lognorm);
  r.rate_minus = -fit_slope(tm.x, tm.lognorm);
  r.max_angle_to_Eplus = tp.max_angle;

  // unstable eigenvectors for -omega: (a m, a (mu + omega)) blocks
  Vec4c Up = Vec4c::Zero();
  Up(0) = S.a_plus * S.m_plus;
  Up(1) = S.a_plus * (S.mu_plus + S.omega_plus);
  Up /= Up.norm();
  Trajectory tu = integrate(A, Up, x2_max, -h, n, nullptr);
  r.growth_rate = fit_slope(tu.x, tu.lognorm);

  r.det_beta = delta_det_beta(cfg, f);
  r.delta_closed = delta(cfg, f);
  r.rates_ok = std::abs(r.rate_plus - r.expect_plus) <= 0.02 * r.expect_plus &&
               std::abs(r.rate_minus - r.expect_minus) <= 0.02 * r.expect_minus &&
               r.growth_rate > 0.0;
  return r;
}

}  // namespace rvs
