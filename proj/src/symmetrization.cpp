#include "rvs/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rvs {

Mats3 a_matrices(const LocalState& s, double eps) {
  const double e2 = eps * eps, e4 = e2 * e2;
  const double G = s.Gamma, N = s.N, c2 = s.c * s.c, v1 = s.v1, v2 = s.v2;
  const double vv = v1 * v1 + v2 * v2;
  const double d = 1.0 - e4 * c2 * vv;
  Mats3 A;
  A.M0 << G * d, 2.0 * e2 * N * c2 * v1, 2.0 * e2 * N * c2 * v2,
      0.0, G * (1.0 - e2 * v1 * v1), -e2 * G * v1 * v2,
      0.0, -e2 * G * v1 * v2, G * (1.0 - e2 * v2 * v2);
  A.M1 << G * v1 * d, N * c2 * (1.0 + e2 * v1 * v1), e2 * v1 * v2 * N * c2,
      (1.0 - e2 * v1 * v1) / N, G * v1 * (1.0 - e2 * v1 * v1), -e2 * G * v1 * v1 * v2,
      -e2 * v1 * v2 / N, -e2 * G * v1 * v1 * v2, G * v1 * (1.0 - e2 * v2 * v2);
  A.M2 << G * v2 * d, e2 * v1 * v2 * N * c2, N * c2 * (1.0 + e2 * v2 * v2),
      -e2 * v1 * v2 / N, G * v2 * (1.0 - e2 * v1 * v1), -e2 * G * v1 * v2 * v2,
      (1.0 - e2 * v2 * v2) / N, -e2 * G * v1 * v2 * v2, G * v2 * (1.0 - e2 * v2 * v2);
  return A;
}

Mats3 a_matrices(const Eos& eos, const FluidParams& params, const UState& u) {
  return a_matrices(local_state(eos, params, u), params.epsilon);
}

Mats3 b_matrices(const LocalState& s, double eps) {
  const double e2 = eps * eps, e4 = e2 * e2;
  const double G = s.Gamma, N = s.N, c2 = s.c * s.c, v1 = s.v1, v2 = s.v2;
  const double vv = v1 * v1 + v2 * v2;
  Mats3 B;
  B.M0 << G * (1.0 - e4 * c2 * vv), e2 * c2 * N * v1, e2 * c2 * N * v2,
      0.0, G, 0.0,
      0.0, 0.0, G;
  B.M1 << G * v1 * (1.0 - e2 * c2), N * c2, 0.0,
      1.0 / N, G * v1, 0.0,
      0.0, 0.0, G * v1;
  B.M2 << G * v2 * (1.0 - e2 * c2), 0.0, N * c2,
      0.0, G * v2, 0.0,
      1.0 / N, 0.0, G * v2;
  return B;
}

Mats3 b_matrices(const Eos& eos, const FluidParams& params, const UState& u) {
  return b_matrices(local_state(eos, params, u), params.epsilon);
}

Mat3 s1(const LocalState& s, double eps) {
  const double e2 = eps * eps;
  const double k = e2 * s.N * s.c * s.c / s.Gamma;
  Mat3 S;
  S << 1.0, k * s.v1, k * s.v2,
      0.0, 1.0 - e2 * s.v1 * s.v1, -e2 * s.v1 * s.v2,
      0.0, -e2 * s.v1 * s.v2, 1.0 - e2 * s.v2 * s.v2;
  return S;
}

Mat3 s1(const Eos& eos, const FluidParams& params, const UState& u) {
  return s1(local_state(eos, params, u), params.epsilon);
}

Mat3 s2(const LocalState& s, double eps) {
  const double e2 = eps * eps;
  const double nc2 = s.N * s.N * s.c * s.c;
  const double k = -2.0 * e2 * s.N * s.c * s.c * s.Gamma;
  Mat3 S;
  S << 1.0, k * s.v1, k * s.v2,
      0.0, nc2, 0.0,
      0.0, 0.0, nc2;
  return S;
}

Mat3 s2(const Eos& eos, const FluidParams& params, const UState& u) {
  return s2(local_state(eos, params, u), params.epsilon);
}

std::array<double, 3> s2a0_eigenvalues(const LocalState& s, double eps) {
  const double e2 = eps * eps;
  const double vv = s.v1 * s.v1 + s.v2 * s.v2;
  const double c2 = s.c * s.c;
  return {s.Gamma * (1.0 - e2 * e2 * c2 * vv), s.Gamma * s.N * s.N * c2,
          s.Gamma * s.N * s.N * c2 * (1.0 - e2 * vv)};
}

JacobiResult jacobi_eigen3(const Mat3& A0, double tol, int max_sweeps) {
  Mat3 A = A0;
  Mat3 V = Mat3::Identity();
  const double scale = std::max(1e-300, A0.cwiseAbs().maxCoeff());
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = std::abs(A(0, 1)) + std::abs(A(0, 2)) + std::abs(A(1, 2));
    if (off <= tol * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (A(p, q) == 0.0) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        Mat3 J = Mat3::Identity();
        J(p, p) = c;
        J(q, q) = c;
        J(p, q) = s;
        J(q, p) = -s;
        A = J.transpose() * A * J;
        A(p, q) = A(q, p) = 0.0;
        V = V * J;
      }
    }
  }
  JacobiResult r;
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return A(a, a) < A(b, b); });
  for (int i = 0; i < 3; ++i) {
    r.values[i] = A(idx[i], idx[i]);
    r.vectors.col(i) = V.col(idx[i]);
  }
  r.sweeps = sweep;
  return r;
}

SymReport check_symmetrizable(const Mats3& A, const Mat3& S2,
                              const std::array<double, 3>& lambda_closed) {
  SymReport rep;
  for (int j = 0; j < 3; ++j) {
    Mat3 P = S2 * A[j];
    Mat3 D = P - P.transpose();
    double scale = 1.0 + P.cwiseAbs().maxCoeff();
    Eigen::Index r, c;
    double m = D.cwiseAbs().maxCoeff(&r, &c);
    rep.asymmetry[j] = m / scale;
    if (!(rep.asymmetry[j] < kSymmetryTol)) {
      std::ostringstream os;
      os << "S2*A" << j << " not symmetric at entry (" << r + 1 << "," << c + 1
         << "), |diff| = " << m;
      rep.failures.push_back(os.str());
    }
  }
  rep.lambda_closed = lambda_closed;
  for (int i = 0; i < 3; ++i) {
    if (!(lambda_closed[i] > 0.0)) {
      std::ostringstream os;
      os << "closed-form eigenvalue lambda" << i + 1 << " = " << lambda_closed[i]
         << " is not positive";
      rep.failures.push_back(os.str());
    }
  }
  Mat3 P0 = S2 * A.M0;
  Mat3 sym = 0.5 * (P0 + P0.transpose());
  JacobiResult jr = jacobi_eigen3(sym);
  rep.lambda_numeric = jr.values;
  std::array<double, 3> sorted = lambda_closed;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 3; ++i) {
    double rel = std::abs(sorted[i] - jr.values[i]) / std::max(1e-300, std::abs(sorted[i]));
    if (!(rel < kEigenAgreeTol)) {
      std::ostringstream os;
      os << "eigenvalue " << i + 1 << " of S2*A0: closed " << sorted[i] << " vs numeric "
         << jr.values[i];
      rep.failures.push_back(os.str());
    }
    if (!(jr.values[i] > 0.0)) rep.failures.push_back("S2*A0 not positive definite");
  }
  rep.ok = rep.failures.empty();
  return rep;
}

SymReport check_symmetrizable(const Eos& eos, const FluidParams& params, const UState& u) {
  LocalState s = local_state(eos, params, u);
  return check_symmetrizable(a_matrices(s, params.epsilon), s2(s, params.epsilon),
                             s2a0_eigenvalues(s, params.epsilon));
}

double lambda2(const Eos& eos, const FluidParams& params, const UState& u, double xi) {
  PrimState s = u_to_prim(eos, params, u);
  return s.v1 * xi - s.v2;
}

Eigen::Vector3d r2(const Eos& eos, const FluidParams& params, const UState& u, double xi) {
  PrimState s = u_to_prim(eos, params, u);
  const double e2 = params.epsilon * params.epsilon;
  return {0.0, 1.0 - e2 * s.v2 * s.v2 + e2 * s.v1 * s.v2 * xi,
          (1.0 - e2 * s.v1 * s.v1) * xi + e2 * s.v1 * s.v2};
}

BackgroundDiag background_diagonalization(const SheetConfig& cfg) {
  const double c = cfg.c_bar();
  BackgroundDiag D;
  D.Rbar << 0.0, 1.0, 1.0,
      1.0, 0.0, 0.0,
      0.0, -1.0 / c, 1.0 / c;
  D.Sbar = Eigen::Vector3d(1.0, 2.0 / (c * c), 2.0 / (c * c)).asDiagonal();
  Mat3 Rinv = D.Rbar.inverse();
  for (int side : {1, -1}) {
    LocalState s = local_state(cfg.eos(), cfg.params(), cfg.prim_bar(side));
    Mats3 A = a_matrices(s, cfg.eps());
    Mats3& out = side > 0 ? D.plus : D.minus;
    for (int j = 0; j < 3; ++j) out[j] = D.Sbar * Rinv * A[j] * D.Rbar;
    out.M2 *= static_cast<double>(side);
  }
  return D;
}

}  // namespace rvs
