// Acceptance checks: one PASS/FAIL line per criterion, tolerances and time budgets fixed here.
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rvs/constsym.hpp"
#include "rvs/eos_state.hpp"
#include "rvs/frozen.hpp"
#include "rvs/lopatinskii.hpp"
#include "rvs/oracles.hpp"
#include "rvs/symmetrization.hpp"

using namespace rvs;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// eps ~ U(0,1), cbar ~ U(0.1,0.9), M / Mc ~ U(lo, hi), vbar = M cbar; redrawn until eps vbar < 0.95
SheetConfig sample_config(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> E(0.0, 1.0), C(0.1, 0.9), R(lo, hi);
  for (;;) {
    double eps = E(rng), c = C(rng);
    double v = R(rng) * critical_mach(eps, c) * c;
    if (eps * v < 0.95) return SheetConfig::linear(eps, c, v);
  }
}

Frequency sample_frequency(const SheetConfig& cfg, std::mt19937_64& rng, double gmin) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), G(gmin, 1.0);
  for (;;) {
    Frequency f = Frequency{G(rng), U(rng), U(rng)}.normalized();
    if (std::abs(f.tau() + cd(0, cfg.v_bar() * f.eta)) > 1e-6 &&
        std::abs(f.tau() - cd(0, cfg.v_bar() * f.eta)) > 1e-6)
      return f;
  }
}

Outcome threshold() {
  double worst_formula = 0.0, worst_root = 0.0;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> E(0.0, 1.0), C(0.1, 0.9);
  for (int i = 0; i < 50; ++i) {
    double eps = E(rng), c = C(rng);
    double expect = std::sqrt(2.0) / std::sqrt(1.0 + eps * eps * c * c);
    SheetConfig cfg = SheetConfig::linear(eps, c, 0.5 * c);
    worst_formula = std::max(worst_formula, std::abs(cfg.Mc() - expect));
    // the threshold is where E3 changes sign: bisect in vbar
    double a = 0.5 * c, b = std::min(2.0 * c, eps > 0 ? 0.999 / eps : 2.0 * c);
    auto e3 = [&](double v) { return root_polynomial(SheetConfig::linear(eps, c, v)).E3; };
    if (e3(a) * e3(b) > 0) return {false, "E3 does not change sign on the bracket"};
    for (int k = 0; k < 200 && b - a > 1e-15 * b; ++k) {
      double m = 0.5 * (a + b);
      (e3(a) * e3(m) <= 0 ? b : a) = m;
    }
    worst_root = std::max(worst_root, std::abs(0.5 * (a + b) / c - expect) / expect);
  }
  double nonrel = std::abs(SheetConfig::linear(0.0, 0.6, 1.0).Mc() - std::sqrt(2.0));
  double small = std::abs(SheetConfig::linear(1e-9, 0.6, 1.0).Mc() - std::sqrt(2.0));
  double ultra = std::abs(SheetConfig::linear(1.0, 1.0 - 1e-6, 0.5).Mc() - 1.0);
  bool ok = worst_formula < 1e-14 && worst_root < 1e-10 && nonrel < 1e-12 && small < 1e-12 && ultra < 1e-3;
  return {ok, "formula " + num(worst_formula) + ", E3 sign change " + num(worst_root) + ", eps=0 " +
                  num(nonrel) + ", eps=1e-9 " + num(small) + ", eps c=1-1e-6 " + num(ultra)};
}

Outcome root_structure() {
  std::mt19937_64 rng(102);
  const int n = 50, res = 800;
  int bad_scan = 0, bad_order = 0;
  std::size_t off = 0, sub = 0;
  double slack = 1e300;
  for (int i = 0; i < n; ++i) {
    SheetConfig cfg = sample_config(rng, 1.05, 1.6);
    RootPoly rp = root_polynomial(cfg);
    if (!rp.z1) return {false, "weakly stable config without a real z1"};
    OrderingReport o = verify_orderings(cfg);
    if (!o.ok || !(o.slack_min > 0.0)) ++bad_order;
    slack = std::min(slack, o.slack_min);
    auto rows = hemisphere_scan(cfg, 0.0, res);
    ScanRayCheck c = check_scan_rays(cfg, rows, res, {-*rp.z1, 0.0, *rp.z1}, 1.0, 2.0);
    if (!c.ok) ++bad_scan;
    off += c.n_off_ray;
    sub += c.n_sub;
  }
  return {bad_scan == 0 && bad_order == 0,
          std::to_string(n) + " configs at 800^2: " + std::to_string(sub) + " sub-tolerance nodes, " +
              std::to_string(off) + " off the rays, " + std::to_string(bad_order) +
              " ordering failures, min slack " + num(slack)};
}

Outcome transition() {
  SheetConfig d = SheetConfig::linear(1.0, 0.6, std::sqrt(0.72 / 1.36));
  RootPoly rp = root_polynomial(d);
  bool e3 = std::abs(rp.E3) < 1e-12 * std::abs(rp.E2);
  bool triple = certify_triple_root(d).certified;
  std::mt19937_64 rng(103);
  int found = 0, n = 20;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    SheetConfig cfg = sample_config(rng, 0.4, 0.95);
    try {
      InteriorRoot r = find_interior_root(cfg);
      double res = std::abs(delta(cfg, r.f));
      worst = std::max(worst, res);
      if (r.f.gamma > 0.0 && res < 1e-10) ++found;
    } catch (const std::exception&) {
    }
  }
  return {e3 && triple && found == n, "E3/E2 " + num(rp.E3 / rp.E2) + ", triple root " +
                                          (triple ? "certified" : "not certified") + ", interior roots " +
                                          std::to_string(found) + "/" + std::to_string(n) + ", max |Delta| " +
                                          num(worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(104);
  double w_err = 0.0, angle = 0.0, root_err = 0.0;
  int dim_bad = 0;
  const int configs = 100, per = 100;
  for (int i = 0; i < configs; ++i) {
    SheetConfig cfg = sample_config(rng, i % 2 ? 1.05 : 0.4, i % 2 ? 1.6 : 0.95);
    RootPoly rp = root_polynomial(cfg);
    if (rp.z1) {
      auto roots = poly_roots(std::vector<double>{rp.E3, 0.0, rp.E2, 0.0, rp.E1});
      for (double z : {*rp.z1, *rp.z2}) {
        double best = 1e300;
        for (cd r : roots) best = std::min(best, std::abs(r - z));
        root_err = std::max(root_err, best);
      }
    }
    for (int j = 0; j < per; ++j) {
      Frequency f = sample_frequency(cfg, rng, 0.01);
      SymbolBundle S = interior_symbol(cfg, f);
      Eig4Result e = eig4(S.A, EigMode::Generic);
      for (cd w : {S.omega_plus, S.omega_minus}) {
        double best = 1e300;
        for (const auto& p : e.pairs) best = std::min(best, std::abs(p.value - w));
        w_err = std::max(w_err, best / f.k());
      }
      StableSubspace ss = stable_subspace(S.A);
      if (ss.dimension != 2) {
        ++dim_bad;
        continue;
      }
      Eigen::MatrixXcd E(4, 2);
      E.col(0) = S.E_plus;
      E.col(1) = S.E_minus;
      angle = std::max(angle, max_principal_angle(ss.basis, E));
    }
  }
  bool ok = w_err < 1e-10 && root_err < 1e-10 && dim_bad == 0 && angle < 1e-8;
  return {ok, std::to_string(configs * per) + " pairs: omega " + num(w_err) + " k, companion roots " +
                  num(root_err) + ", stable dim failures " + std::to_string(dim_bad) + ", max angle " + num(angle)};
}

Outcome symmetrization() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> U(-1.0, 1.0), E(0.0, 1.0), C(0.1, 0.9);
  double asym = 0.0, sb = 0.0, lam = 0.0, lam_min = 1e300;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const double eps = E(rng), c = C(rng);
    Eos eos = Eos::linear(c * c, 1e-3, 1e3, 1.0);
    FluidParams par{eps};
    const double vmax = eps > 0 ? 0.99 / eps : 3.0;
    PrimState s{std::exp(2.0 * U(rng)), vmax * U(rng), vmax * U(rng)};
    if (s.v1 * s.v1 + s.v2 * s.v2 >= vmax * vmax) {
      --i;
      continue;
    }
    UState u = prim_to_u(eos, par, s);
    SymReport r = check_symmetrizable(eos, par, u);
    if (!r.ok) ++bad;
    auto closed = r.lambda_closed;  // Jacobi values come sorted ascending
    std::sort(closed.begin(), closed.end());
    for (int k = 0; k < 3; ++k) {
      asym = std::max(asym, r.asymmetry[k]);
      lam = std::max(lam, std::abs(closed[k] - r.lambda_numeric[k]) / std::abs(closed[k]));
      lam_min = std::min(lam_min, closed[k]);
    }
    LocalState ls = local_state(eos, par, u);
    Mats3 A = a_matrices(ls, eps), B = b_matrices(ls, eps);
    Mat3 S1 = s1(ls, eps);
    for (int j = 0; j < 3; ++j)
      sb = std::max(sb, (S1 * B[j] - A[j]).cwiseAbs().maxCoeff() / (1.0 + A[j].cwiseAbs().maxCoeff()));
  }
  bool ok = bad == 0 && asym < kSymmetryTol && sb < 1e-12 && lam < 1e-10 && lam_min > 0.0;
  return {ok, "1000 states: asymmetry " + num(asym) + ", S1 B - A " + num(sb) + ", lambda closed vs Jacobi " +
                  num(lam) + ", min lambda " + num(lam_min)};
}

Outcome frozen_suite() {
  std::mt19937_64 rng(106);
  double ent = 0.0, eff = 0.0, F = 0.0, zero = 0.0, fac = 0.0, shift = 0.0;
  const int pairs = 250;  // two frozen points per pair
  for (int i = 0; i < pairs; ++i) {
    SheetConfig cfg = sample_config(rng, 1.05, 1.6);
    FrozenPair z = zero_perturbation_pair(cfg);
    FrozenPair pair = random_frozen_pair(cfg, 1e-2, rng);
    Frequency f = sample_frequency(cfg, rng, 0.01);
    const double G = cfg.Gamma_bar(), c = cfg.c_bar(), h = cfg.h_bar();
    for (const FrozenPoint* fp : {&pair.plus, &pair.minus}) {
      for (double x : frozen_entry_identities(cfg, *fp)) ent = std::max(ent, x);
      FrozenInterior S = frozen_interior_symbol(cfg, *fp, f);
      eff = std::max({eff, std::abs(S.eff_i1_residual) / f.k(), std::abs(S.eff_i2_residual) / f.k()});
      F = std::max({F, std::abs(S.F1 - S.F1_matrix) / (1.0 + std::abs(S.F1)),
                    std::abs(S.F2 - S.F2_matrix) / (1.0 + std::abs(S.F2)),
                    std::abs(S.F3 - S.F3_matrix) / (1.0 + std::abs(S.F2))});
    }
    FrozenBoundary B = frozen_boundary_symbols(cfg, z, f);
    FrozenInterior P = frozen_interior_symbol(cfg, z.plus, f), M = frozen_interior_symbol(cfg, z.minus, f);
    zero = std::max({zero, std::abs(B.m1_plus), std::abs(B.m1_minus), std::abs(B.m2_plus * G * c * h - 1.0),
                     std::abs(B.m2_minus * G * c * h - 1.0), std::abs(P.F2 * c / (2.0 * G) - 1.0),
                     std::abs(M.F2 * c / (2.0 * G) + 1.0)});
    FrozenDelta d = frozen_delta(cfg, pair, f);
    fac = std::max(fac, std::abs(d.D1 * d.D2 * d.D3 - d.Delta) / std::abs(d.Delta));
    FrozenPoly p0 = frozen_root_polynomial(cfg, z);
    FrozenPoly p1 = frozen_root_polynomial(cfg, random_frozen_pair(cfg, 1e-3, rng));
    for (int q = 0; q < 3; ++q) {
      double s = std::abs(p1.zq[q] - p0.zq[q]);
      shift = std::max(shift, std::isnan(s) ? INFINITY : s);
    }
  }
  bool ok = ent < 1e-12 && eff < 1e-10 && F < 1e-10 && zero < 1e-12 && fac < 1e-10 && shift < 1e-2;
  return {ok, std::to_string(2 * pairs) + " points: entry identities " + num(ent) + ", effective " + num(eff) +
                  ", F closed forms " + num(F) + ", zero perturbation " + num(zero) + ", product " + num(fac) +
                  ", root shift at 1e-3 " + num(shift)};
}

Outcome boundary_behaviour() {
  std::mt19937_64 rng(107);
  std::vector<SheetConfig> cfgs = {SheetConfig::linear(0.0, 1.0, 2.0), SheetConfig::linear(1.0, 0.6, 0.8)};
  for (int i = 0; i < 8; ++i) cfgs.push_back(sample_config(rng, 1.05, 1.6));
  double re = 0.0, r2 = 1.0, slope = 1e300;
  int bad = 0;
  for (const auto& cfg : cfgs) {
    const double z1 = *root_polynomial(cfg).z1;
    for (double q : {-z1, 0.0, z1}) {
      ImagAxisReport ia = imaginary_axis_check(cfg, q);
      GrowthFit g = gamma_growth_fit(cfg, q, 1e-6, 1e-3);
      if (!ia.ok || !g.ok) ++bad;
      re = std::max(re, ia.max_rel_real);
      r2 = std::min(r2, g.r2);
      slope = std::min(slope, g.slope);
    }
  }
  return {bad == 0 && re < 1e-12 && r2 > 0.999 && slope > 0.0,
          std::to_string(cfgs.size()) + " configs x 3 rays: max |Re Delta|/|Delta| " + num(re) + ", min R^2 " +
              num(r2) + ", min slope " + num(slope)};
}

Outcome ode_decay() {
  std::mt19937_64 rng(108);
  const int n = 20;
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < n; ++i) {
    SheetConfig cfg = sample_config(rng, i % 2 ? 1.05 : 0.4, i % 2 ? 1.6 : 0.95);
    Frequency f = sample_frequency(cfg, rng, 0.1);
    const double wmin = std::min(-omega(cfg, f, 1).real(), -omega(cfg, f, -1).real());
    DecayReport d = ode_decay_check(cfg, f, 5.0 / wmin, 2000);
    double e = std::max(std::abs(d.rate_plus - d.expect_plus) / d.expect_plus,
                        std::abs(d.rate_minus - d.expect_minus) / d.expect_minus);
    worst = std::max(worst, e);
    if (!(e < 0.02)) ++bad;
  }
  return {bad == 0, std::to_string(n) + " pairs: max relative rate error " + num(worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 threshold reproduction", 1.0, threshold},
      {"2 root structure (800^2 scan)", 120.0, root_structure},
      {"3 transition and instability", 60.0, transition},
      {"4 oracle equivalence", INFINITY, oracle_equivalence},
      {"5 symmetrization", 10.0, symmetrization},
      {"6 frozen-state suite", 30.0, frozen_suite},
      {"7 boundary behaviour of Delta", 10.0, boundary_behaviour},
      {"8 ODE decay rates", 30.0, ode_decay},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = dt < c.budget_s;
    bool ok = o.ok && in_time;
    failed += !ok;
    std::printf("%s  criterion %s: %s; %.2f s%s\n", ok ? "PASS" : "FAIL", c.name, o.detail.c_str(), dt,
                in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
