#include "rvs/lopatinskii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rvs/parallel.hpp"

namespace rvs {

namespace {
const cd I(0.0, 1.0);

// h0 from h(s), h(s/2), h(s/4) eliminating the O(s) and O(s^2) terms
cd richardson3(cd hs, cd hs2, cd hs4) { return (8.0 * hs4 - 6.0 * hs2 + hs) / 3.0; }
}  // namespace

std::array<cd, 3> delta_factors(const SheetConfig& cfg, const Frequency& f) {
  const double v = cfg.v_bar(), cG = cfg.c_bar() / cfg.Gamma_bar();
  const cd tau = f.tau();
  const cd ap = tau + I * v * f.eta, am = tau - I * v * f.eta;
  const cd wp = omega(cfg, f, 1), wm = omega(cfg, f, -1);
  return {ap - cG * wp, am - cG * wm, wm * ap * ap + wp * am * am};
}

cd delta(const SheetConfig& cfg, const Frequency& f) {
  auto F = delta_factors(cfg, f);
  return F[0] * F[1] * F[2] / (cfg.c_bar() * cfg.c_bar() * cfg.h_bar());
}

cd delta_det_beta(const SheetConfig& cfg, const Frequency& f) {
  Mat24c beta = boundary_symbols(cfg, f).beta;
  auto E = stable_vectors(cfg, f);
  Eigen::Matrix<cd, 4, 2> EE;
  EE.col(0) = E.first;
  EE.col(1) = E.second;
  Eigen::Matrix2cd M = beta * EE;
  return M.determinant();
}

RootPoly root_polynomial(const SheetConfig& cfg) {
  const double e = cfg.eps(), e2 = e * e, e4 = e2 * e2;
  const double c = cfg.c_bar(), v = cfg.v_bar(), c2 = c * c, v2 = v * v;
  RootPoly r;
  r.E1 = 2.0 * e4 * c2 * v2 - e2 * c2 - 1.0;
  r.E2 = 2.0 * e4 * c2 * v2 * v2 - 6.0 * e2 * c2 * v2 + 2.0 * v2 + 2.0 * c2;
  r.E3 = 2.0 * c2 * v2 - e2 * c2 * v2 * v2 - v2 * v2;
  r.D = r.E2 * r.E2 - 4.0 * r.E1 * r.E3;
  const double a = e * v - 1.0, b = e * v + 1.0;
  r.D_closed = 4.0 * c2 * a * a * b * b *
               (e4 * c2 * v2 * v2 - 2.0 * e2 * c2 * v2 + 4.0 * v2 + c2);
  const double sD = std::sqrt(std::max(r.D, 0.0));
  r.z2sq = (r.E2 + sD) / (-2.0 * r.E1);
  // product of the two roots is E3/E1; avoids cancellation in E2 - sqrt(D)
  r.z1sq = r.z2sq != 0.0 ? (r.E3 / r.E1) / r.z2sq : (r.E2 - sD) / (-2.0 * r.E1);
  if (r.z1sq > 0.0) r.z1 = std::sqrt(r.z1sq);
  if (r.z2sq > 0.0) r.z2 = std::sqrt(r.z2sq);
  return r;
}

double poly_P1(const SheetConfig& cfg, double z) {
  const double v = cfg.v_bar(), c = cfg.c_bar(), e2 = cfg.eps() * cfg.eps();
  const double zp = z + v, zm = z - v, s = 1.0 - e2 * v * z;
  return zp * zp * zp * zp * (zm * zm - c * c * s * s);
}

double poly_P2(const SheetConfig& cfg, double z) {
  const double v = cfg.v_bar(), c = cfg.c_bar(), e2 = cfg.eps() * cfg.eps();
  const double zp = z + v, zm = z - v, s = 1.0 + e2 * v * z;
  return zm * zm * zm * zm * (zp * zp - c * c * s * s);
}

double poly_P(const SheetConfig& cfg, double z) { return poly_P1(cfg, z) - poly_P2(cfg, z); }

cd Q1(const SheetConfig& cfg, double z, double eta) {
  const double v = cfg.v_bar();
  cd Om = omega(cfg, Frequency{0.0, eta * z, eta}, -1) / (I * eta);
  return Om * (z + v) * (z + v);
}

cd Q2(const SheetConfig& cfg, double z, double eta) {
  const double v = cfg.v_bar();
  cd Om = omega(cfg, Frequency{0.0, eta * z, eta}, 1) / (I * eta);
  return Om * (z - v) * (z - v);
}

cd dQsum_formula(const SheetConfig& cfg, const RootPoly& rp, double q) {
  const double v = cfg.v_bar(), G2 = cfg.Gamma_bar() * cfg.Gamma_bar(), c2 = cfg.c_bar() * cfg.c_bar();
  double num = -2.0 * v * rp.P0(q) - 4.0 * v * q * q * (2.0 * rp.E1 * q * q + rp.E2);
  return G2 / (c2 * Q1(cfg, q)) * num;
}

OrderingReport verify_orderings(const SheetConfig& cfg) {
  OrderingReport rep;
  RootPoly rp = root_polynomial(cfg);
  if (!rp.z1 || !rp.z2) {
    rep.ok = false;
    rep.first_failure = "z1 or z2 undefined (E3 >= 0)";
    rep.slack_min = -std::numeric_limits<double>::infinity();
    return rep;
  }
  const double z1 = *rp.z1, z2 = *rp.z2, C2 = cfg.C2(), iC1 = 1.0 / cfg.C1(), v = cfg.v_bar();
  rep.links = {
      {"0 < z1", z1},
      {"z1 < C2 - 1/C1", (C2 - iC1) - z1},
      {"C2 - 1/C1 < C2", iC1},
      {"C2 < vbar", v - C2, cfg.eps() > 0.0},
      {"vbar < C2 + 1/C1", (C2 + iC1) - v},
      {"z2 > C2 + 1/C1", z2 - (C2 + iC1)},
      {"z1 + C2 > 1/C1", z1 + C2 - iC1},
      {"z1 - C2 < -1/C1", -iC1 - (z1 - C2)},
  };
  rep.ok = true;
  rep.slack_min = std::numeric_limits<double>::infinity();
  for (const auto& l : rep.links) {
    if (l.strict) rep.slack_min = std::min(rep.slack_min, l.slack);
    const bool holds = l.strict ? l.slack > 0.0 : l.slack >= -1e-15 * v;
    if (!holds && rep.ok) {
      rep.ok = false;
      rep.first_failure = l.name;
    }
  }
  return rep;
}

SimplicityReport root_simplicity(const SheetConfig& cfg, double q, double eta) {
  SimplicityReport r;
  r.q = q;
  const double k = std::sqrt(q * q * eta * eta + eta * eta);
  auto h = [&](double s) {
    Frequency f{s, q * eta, eta};
    return delta(cfg, f) / s;
  };
  const double s0 = 1e-3 * k;
  r.h_q = richardson3(h(s0), h(s0 / 2), h(s0 / 4));
  r.h_scale = std::abs(delta(cfg, Frequency{k, 0.0, 0.0})) / k;
  r.nonzero = std::abs(r.h_q) > 1e-8 * r.h_scale;

  RootPoly rp = root_polynomial(cfg);
  r.dQ_formula = dQsum_formula(cfg, rp, q);
  const double dz = 1e-6 * std::max(1.0, std::abs(q));
  auto S = [&](double z) { return Q1(cfg, z, eta) + Q2(cfg, z, eta); };
  r.dQ_fd = (S(q + dz) - S(q - dz)) / (2.0 * dz);
  r.derivative_agree =
      std::abs(r.dQ_formula - r.dQ_fd) <= 1e-6 * std::abs(r.dQ_formula);
  return r;
}

TripleRootReport certify_triple_root(const SheetConfig& cfg) {
  TripleRootReport r;
  const double s0 = 1e-2;
  for (int j = 1; j <= 3; ++j) {
    auto g = [&](double s) { return delta(cfg, Frequency{s, 0.0, 1.0}) / std::pow(s, j); };
    r.limits[j - 1] = richardson3(g(s0), g(s0 / 2), g(s0 / 4));
  }
  const double L = std::abs(r.limits[2]);
  const double scale = std::abs(delta(cfg, Frequency{1.0, 0.0, 0.0}));
  r.certified = L > 1e-8 * scale && std::abs(r.limits[0]) <= 1e-4 * L &&
                std::abs(r.limits[1]) <= 1e-4 * L;
  return r;
}

namespace {
bool newton_interior(const SheetConfig& cfg, cd tau, InteriorRoot& out) {
  auto F = [&](cd t) { return delta(cfg, Frequency{t.real(), t.imag(), 1.0}); };
  for (int it = 0; it < 100; ++it) {
    if (!(tau.real() > 0.0)) return false;
    double k = std::sqrt(std::norm(tau) + 1.0);
    cd val = F(tau);
    double res = std::abs(val) / std::pow(k, 5);
    if (res < 1e-14) {
      out.f = Frequency{tau.real(), tau.imag(), 1.0}.normalized();
      out.tau = out.f.tau();
      out.residual = std::abs(delta(cfg, out.f));
      out.iterations = it;
      return out.residual < 1e-10;
    }
    double hstep = 1e-7 * std::max(1.0, std::abs(tau));
    hstep = std::min(hstep, 0.5 * tau.real());
    cd d = (F(tau + hstep) - F(tau - hstep)) / (2.0 * hstep);
    if (d == 0.0) return false;
    cd step = val / d;
    double lam = 1.0;
    while (!((tau - lam * step).real() > 0.0) && lam > 1e-6) lam *= 0.5;
    tau -= lam * step;
    if (std::abs(lam * step) < 1e-16 * std::abs(tau)) break;
  }
  double k = std::sqrt(std::norm(tau) + 1.0);
  out.f = Frequency{tau.real(), tau.imag(), 1.0}.normalized();
  out.tau = out.f.tau();
  out.residual = std::abs(delta(cfg, out.f));
  (void)k;
  return tau.real() > 0.0 && out.residual < 1e-10;
}
}  // namespace

InteriorRoot find_interior_root(const SheetConfig& cfg) {
  RootPoly rp = root_polynomial(cfg);
  InteriorRoot out{};
  if (rp.z1sq < 0.0 && newton_interior(cfg, cd(std::sqrt(-rp.z1sq), 0.0), out)) return out;
  // fallback: coarse search of |Delta| / k^5 over Re tau > 0 at eta = 1
  double best = std::numeric_limits<double>::infinity();
  cd seed;
  for (int i = 1; i <= 60; ++i) {
    for (int j = -60; j <= 60; ++j) {
      cd t(0.05 * i, 0.05 * j);
      double k = std::sqrt(std::norm(t) + 1.0);
      double v = std::abs(delta(cfg, Frequency{t.real(), t.imag(), 1.0})) / std::pow(k, 5);
      if (v < best) {
        best = v;
        seed = t;
      }
    }
  }
  if (newton_interior(cfg, seed, out)) return out;
  throw std::runtime_error("interior root search failed; best coarse |Delta| = " +
                           std::to_string(best));
}

LopReport classify_roots(const SheetConfig& cfg) {
  LopReport rep;
  rep.regime = classify_threshold(cfg).regime;
  rep.poly = root_polynomial(cfg);
  switch (rep.regime) {
    case Regime::WeaklyStable: {
      const double z1 = rep.poly.z1.value_or(0.0);
      rep.boundary_roots = {-z1, 0.0, z1};
      rep.ordering = verify_orderings(cfg);
      for (double q : rep.boundary_roots) rep.simplicity.push_back(root_simplicity(cfg, q));
      break;
    }
    case Regime::Transition:
      rep.boundary_roots = {0.0};
      rep.triple_root = certify_triple_root(cfg).certified;
      break;
    case Regime::ViolentlyUnstable:
      rep.interior_roots.push_back(find_interior_root(cfg));
      break;
  }
  return rep;
}

ImagAxisReport imaginary_axis_check(const SheetConfig& cfg, double q, int samples) {
  ImagAxisReport r;
  r.q = q;
  const double C2 = cfg.C2(), iC1 = 1.0 / cfg.C1();
  // distance from q to the nearest glancing ratio +-C2 +- 1/C1, both omegas imaginary beyond it
  const double slack = std::min(std::abs(q + C2) - iC1, std::abs(q - C2) - iC1);
  if (!(slack > 0.0)) throw DomainError("imaginary_axis_check: q is not in the imaginary-omega region");
  r.radius = 0.5 * std::min(slack, 0.25);
  r.max_rel_real = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double d = q - r.radius + 2.0 * r.radius * i / (samples - 1);
    const cd D = delta(cfg, Frequency{0.0, d, 1.0});
    if (std::abs(D) == 0.0) continue;
    r.max_rel_real = std::max(r.max_rel_real, std::abs(D.real()) / std::abs(D));
  }
  r.ok = r.max_rel_real <= 1e-12;
  return r;
}

GrowthFit gamma_growth_fit(const SheetConfig& cfg, double q, double g_lo, double g_hi, int samples) {
  std::vector<double> x(samples), y(samples);
  for (int i = 0; i < samples; ++i) {
    x[i] = g_lo * std::pow(g_hi / g_lo, static_cast<double>(i) / (samples - 1));
    y[i] = std::abs(delta(cfg, Frequency{x[i], q, 1.0}));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < samples; ++i) {
    mx += x[i] / samples;
    my += y[i] / samples;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < samples; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  GrowthFit g;
  g.q = q;
  g.slope = sxy / sxx;
  g.intercept = my - g.slope * mx;
  g.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
  g.ok = g.slope > 0.0 && g.r2 > 0.999;
  return g;
}

std::vector<ScanRow> hemisphere_scan(const SheetConfig& cfg, double gamma, int res,
                                     bool use_det_beta) {
  if (res < 2) throw DomainError("scan resolution must be >= 2");
  if (gamma < 0.0) throw DomainError("scan gamma must be >= 0");
  std::vector<ScanRow> rows(static_cast<std::size_t>(res) * res);
  const double h = 2.0 / res;
  parallel_for(rows.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx / res), j = static_cast<int>(idx % res);
    const double d = -1.0 + (i + 0.5) * h, e = -1.0 + (j + 0.5) * h;
    Frequency f = Frequency{gamma, d, e}.normalized();
    cd val = use_det_beta ? delta_det_beta(cfg, f) : delta(cfg, f);
    rows[idx] = ScanRow{f.gamma, f.delta, f.eta, val, d, e};
  });
  return rows;
}

double delta_cancellation(const SheetConfig& cfg, const Frequency& f) {
  const auto F = delta_factors(cfg, f);
  const double v = cfg.v_bar();
  const cd ap = f.tau() + cd(0.0, v * f.eta), am = f.tau() - cd(0.0, v * f.eta);
  const double scale = std::abs(omega(cfg, f, -1)) * std::norm(ap) + std::abs(omega(cfg, f, 1)) * std::norm(am);
  return std::abs(F[2]) / scale;
}

ScanRayCheck check_scan_rays(const SheetConfig& cfg, const std::vector<ScanRow>& rows, int res,
                             const std::vector<double>& rays, double tol_factor, double max_cells) {
  if (rows.size() != static_cast<std::size_t>(res) * res)
    throw DomainError("scan rows do not match the resolution");
  if (rays.empty()) throw DomainError("check_scan_rays: no rays");
  const double h = 2.0 / res;
  double slope = std::numeric_limits<double>::infinity();
  for (double q : rays) {
    const double th = std::atan(q), dt = 1e-7;
    auto k = [&](double t) { return delta_cancellation(cfg, Frequency{0.0, std::sin(t), std::cos(t)}); };
    slope = std::min(slope, (k(th + dt) + k(th - dt)) / (2.0 * dt));
  }
  ScanRayCheck c;
  c.threshold = tol_factor * h * slope;
  c.hits.assign(rays.size(), 0);
  for (const ScanRow& r : rows) {
    if (!(delta_cancellation(cfg, Frequency{r.gamma, r.delta, r.eta}) < c.threshold)) continue;
    ++c.n_sub;
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t q = 0; q < rays.size(); ++q) {
      double dist = std::abs(r.grid_delta - rays[q] * r.grid_eta) / std::sqrt(1.0 + rays[q] * rays[q]) / h;
      if (dist < best) {
        best = dist;
        bi = q;
      }
    }
    if (best > max_cells) {
      ++c.n_off_ray;
      c.max_off_cells = std::max(c.max_off_cells, best);
    } else {
      ++c.hits[bi];
    }
  }
  c.ok = c.n_sub > 0 && c.n_off_ray == 0;
  return c;
}

}  // namespace rvs
