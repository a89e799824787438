#include "rvs/suite.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "rvs/constsym.hpp"
#include "rvs/frozen.hpp"
#include "rvs/lopatinskii.hpp"
#include "rvs/oracles.hpp"
#include "rvs/symmetrization.hpp"

namespace rvs {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Check {
  bool ok;
  std::string detail;
};

class Runner {
 public:
  explicit Runner(std::vector<PropertyResult>& out) : out_(out) {}
  void operator()(const std::string& name, const std::function<Check()>& fn) {
    PropertyResult r;
    r.name = name;
    try {
      Check c = fn();
      r.passed = c.ok;
      r.detail = c.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out_.push_back(r);
  }

 private:
  std::vector<PropertyResult>& out_;
};

PrimState random_state(const SheetConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double vmax = cfg.eps() > 0.0 ? 0.95 / cfg.eps() : 3.0;
  PrimState s;
  const Eos& eos = cfg.eos();
  do {
    s.rho = cfg.rho_bar() * std::exp(0.5 * U(rng));
  } while (!eos.in_range(s.rho));
  do {
    s.v1 = vmax * U(rng);
    s.v2 = vmax * U(rng);
  } while (s.v1 * s.v1 + s.v2 * s.v2 >= vmax * vmax);
  return s;
}

// normalized, gamma in [0.01, 1], away from the poles tau = -+ i vbar eta
Frequency random_frequency(const SheetConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), G(0.01, 1.0);
  for (;;) {
    Frequency f = Frequency{G(rng), U(rng), U(rng)}.normalized();
    const cd ap = f.tau() + cd(0.0, cfg.v_bar() * f.eta), am = f.tau() - cd(0.0, cfg.v_bar() * f.eta);
    if (std::abs(ap) > 1e-6 && std::abs(am) > 1e-6) return f;
  }
}

double max_rel(const Mat3& a, const Mat3& b) {
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + b.cwiseAbs().maxCoeff());
}

void eos_properties(Runner& run, const SheetConfig& cfg, const SuiteOptions& opt) {
  const Eos& eos = cfg.eos();
  const FluidParams& par = cfg.params();
  run("eos.N_at_reference", [&] {
    double e = std::abs(particle_density(eos, par, cfg.rho_bar()) - 1.0);
    return Check{e < 1e-14, "|N(rho_bar) - 1| = " + num(e)};
  });
  run("eos.roundtrip", [&] {
    std::mt19937_64 rng(opt.seed);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      PrimState s = random_state(cfg, rng);
      PrimState t = u_to_prim(eos, par, prim_to_u(eos, par, s));
      worst = std::max({worst, std::abs(t.rho - s.rho) / s.rho,
                        std::abs(t.v1 - s.v1) / (1.0 + std::abs(s.v1)),
                        std::abs(t.v2 - s.v2) / (1.0 + std::abs(s.v2))});
    }
    return Check{worst < 1e-10, "max relative error " + num(worst)};
  });
  run("eos.log_N_derivative", [&] {
    std::mt19937_64 rng(opt.seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double rho = random_state(cfg, rng).rho, h = 1e-6 * rho;
      double fd = (std::log(particle_density(eos, par, rho + h)) -
                   std::log(particle_density(eos, par, rho - h))) / (2.0 * h);
      double exact = 1.0 / (rho + cfg.eps() * cfg.eps() * eos.p(rho));
      worst = std::max(worst, std::abs(fd - exact) / exact);
    }
    return Check{worst < 1e-6, "max relative error " + num(worst)};
  });
  run("eos.threshold", [&] {
    const double e = cfg.eps(), c = cfg.c_bar();
    const double Mc = std::sqrt(2.0) / std::sqrt(1.0 + e * e * c * c);
    ThresholdReport t = classify_threshold(cfg);
    RootPoly rp = root_polynomial(cfg);
    bool sign_ok = t.regime == Regime::Transition || ((t.regime == Regime::WeaklyStable) == (rp.E3 < 0.0));
    bool ok = std::abs(t.Mc - Mc) <= 1e-15 * Mc && (e == 0.0 || t.Mc < std::sqrt(2.0)) && sign_ok;
    return Check{ok, "M = " + num(t.M) + ", Mc = " + num(t.Mc) + ", E3 = " + num(rp.E3)};
  });
}

void symmetrization_properties(Runner& run, const SheetConfig& cfg, const SuiteOptions& opt) {
  const Eos& eos = cfg.eos();
  const FluidParams& par = cfg.params();
  run("sym.symmetrizable", [&] {
    std::mt19937_64 rng(opt.seed + 2);
    std::vector<UState> states = {cfg.u_bar(1), cfg.u_bar(-1)};
    for (int i = 0; i < opt.samples; ++i) states.push_back(prim_to_u(eos, par, random_state(cfg, rng)));
    for (const UState& u : states) {
      SymReport r = check_symmetrizable(eos, par, u);
      if (!r.ok) return Check{false, r.failures.empty() ? "failed" : r.failures.front()};
    }
    return Check{true, std::to_string(states.size()) + " states"};
  });
  run("sym.S1_bridge", [&] {
    std::mt19937_64 rng(opt.seed + 3);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      LocalState s = local_state(eos, par, random_state(cfg, rng));
      Mats3 A = a_matrices(s, cfg.eps()), B = b_matrices(s, cfg.eps());
      Mat3 S = s1(s, cfg.eps());
      for (int j = 0; j < 3; ++j) worst = std::max(worst, max_rel(S * B[j], A[j]));
    }
    return Check{worst < 1e-12, "max |S1 Bj - Aj| " + num(worst)};
  });
  run("sym.background_diagonal", [&] {
    BackgroundDiag d = background_diagonalization(cfg);
    const double c = cfg.c_bar();
    Mat3 D = Eigen::Vector3d(0.0, -2.0 / c, 2.0 / c).asDiagonal();
    double e = std::max(max_rel(d.plus.M2, D), max_rel(d.minus.M2, -D));
    return Check{e < 1e-12, "calA2 deviation " + num(e)};
  });
}

void constsym_properties(Runner& run, const SheetConfig& cfg, const SuiteOptions& opt) {
  run("constsym.Qb", [&] {
    std::mt19937_64 rng(opt.seed + 4);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      Frequency f = random_frequency(cfg, rng);
      BoundarySymbols B = boundary_symbols(cfg, f);
      Vec3c Qb = B.Q * B.b;
      worst = std::max({worst, std::abs(Qb(0)), std::abs(Qb(1)), std::abs(Qb(2) - B.theta)});
    }
    return Check{worst < 1e-12, "max residual " + num(worst)};
  });
  run("constsym.omega", [&] {
    std::mt19937_64 rng(opt.seed + 5);
    double worst = 0.0;
    bool neg = true;
    for (int i = 0; i < opt.samples; ++i) {
      Frequency f = random_frequency(cfg, rng);
      SymbolBundle S = interior_symbol(cfg, f);
      for (int side : {1, -1}) {
        cd w = side > 0 ? S.omega_plus : S.omega_minus;
        cd m = side > 0 ? S.m_plus : S.m_minus, u = side > 0 ? S.mu_plus : S.mu_minus;
        double scale = 1.0 + std::norm(u) + std::norm(m);
        worst = std::max(worst, std::abs(w * w - (u * u - m * m)) / scale);
        neg = neg && w.real() < 0.0;
      }
    }
    return Check{worst < 1e-12 && neg, "max |omega^2 - mu^2 + m^2| " + num(worst)};
  });
  run("constsym.stable_vectors", [&] {
    std::mt19937_64 rng(opt.seed + 6);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      Frequency f = random_frequency(cfg, rng);
      SymbolBundle S = interior_symbol(cfg, f);
      worst = std::max(worst, (S.A * S.E_plus - S.omega_plus * S.E_plus).norm() / S.E_plus.norm());
      worst = std::max(worst, (S.A * S.E_minus - S.omega_minus * S.E_minus).norm() / S.E_minus.norm());
    }
    return Check{worst < 1e-10, "max eigen residual " + num(worst)};
  });
  run("constsym.homogeneity", [&] {
    std::mt19937_64 rng(opt.seed + 7);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Frequency f = random_frequency(cfg, rng);
      SymbolBundle S = interior_symbol(cfg, f);
      for (double s : {0.5, 2.0, 10.0}) {
        SymbolBundle T = interior_symbol(cfg, f.scaled(s));
        worst = std::max(worst, (T.A - s * S.A).norm() / (s * S.A.norm()));
        worst = std::max(worst, (T.beta - S.beta).norm() / S.beta.norm());
      }
    }
    return Check{worst < 1e-12, "max relative deviation " + num(worst)};
  });
  run("constsym.triangularize", [&] {
    std::mt19937_64 rng(opt.seed + 8);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) worst = std::max(worst, triangularize(cfg, random_frequency(cfg, rng)).residual);
    return Check{worst < 1e-10, "max residual " + num(worst)};
  });
}

void lopatinskii_properties(Runner& run, const SheetConfig& cfg, const SuiteOptions& opt) {
  const Regime regime = classify_threshold(cfg).regime;
  const RootPoly rp = root_polynomial(cfg);
  const double dscale = std::abs(delta(cfg, Frequency{1.0, 0.0, 0.0}));
  run("lop.discriminant", [&] {
    double e = std::abs(rp.D - rp.D_closed) / (rp.E2 * rp.E2 + 4.0 * std::abs(rp.E1 * rp.E3));
    return Check{e < 1e-12, "relative mismatch " + num(e)};
  });
  run("lop.det_beta", [&] {
    std::mt19937_64 rng(opt.seed + 9);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      Frequency f = random_frequency(cfg, rng);
      worst = std::max(worst, std::abs(delta(cfg, f) - delta_det_beta(cfg, f)) / dscale);
    }
    return Check{worst < 1e-10, "max |Delta - det beta(E+ E-)| / scale " + num(worst)};
  });
  if (regime == Regime::WeaklyStable) {
    const double z1 = *rp.z1;
    const std::vector<double> rays = {-z1, 0.0, z1};
    run("lop.orderings", [&] {
      OrderingReport o = verify_orderings(cfg);
      return Check{o.ok, o.ok ? "min slack " + num(o.slack_min) : "fails at " + o.first_failure};
    });
    run("lop.root_simplicity", [&] {
      for (double q : rays) {
        SimplicityReport s = root_simplicity(cfg, q);
        if (!s.nonzero || !s.derivative_agree)
          return Check{false, "q = " + num(q) + ": |h_q| = " + num(std::abs(s.h_q))};
      }
      return Check{true, "h_q nonzero at 3 roots"};
    });
    run("lop.P0_roots", [&] {
      std::vector<double> c = {rp.E3, 0.0, rp.E2, 0.0, rp.E1};
      auto roots = poly_roots(c);
      double worst = 0.0;
      for (double z : {-*rp.z2, -z1, z1, *rp.z2}) {
        double best = 1e300;
        for (const cd& r : roots) best = std::min(best, std::abs(r - z));
        worst = std::max(worst, best);
      }
      return Check{worst < 1e-10, "max distance to companion roots " + num(worst)};
    });
    run("lop.scan_rays", [&] {
      auto rows = hemisphere_scan(cfg, 0.0, opt.scan_res);
      ScanRayCheck c = check_scan_rays(cfg, rows, opt.scan_res, rays, opt.scan_tol_factor, opt.scan_max_cells);
      return Check{c.ok, std::to_string(c.n_sub) + " sub-tolerance nodes, " +
                             std::to_string(c.n_off_ray) + " off the rays"};
    });
    run("lop.first_factors_nonzero", [&] {
      const int n = 100;
      double fmin = 1e300;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          Frequency f = Frequency{0.0, -1.0 + (i + 0.5) * 2.0 / n, -1.0 + (j + 0.5) * 2.0 / n}.normalized();
          auto F = delta_factors(cfg, f);
          fmin = std::min({fmin, std::abs(F[0]), std::abs(F[1])});
        }
      }
      return Check{fmin > 1e-8, "min |factor| " + num(fmin)};
    });
    run("lop.imaginary_axis", [&] {
      double worst = 0.0;
      for (double q : rays) worst = std::max(worst, imaginary_axis_check(cfg, q).max_rel_real);
      return Check{worst <= 1e-12, "max |Re Delta| / |Delta| " + num(worst)};
    });
    run("lop.gamma_growth", [&] {
      double r2 = 1.0, slope = 1e300;
      for (double q : rays) {
        GrowthFit g = gamma_growth_fit(cfg, q);
        r2 = std::min(r2, g.r2);
        slope = std::min(slope, g.slope);
      }
      return Check{slope > 0.0 && r2 > 0.999, "min slope " + num(slope) + ", min R^2 " + num(r2)};
    });
    run("lop.P_bridge", [&] {
      ImagAxisReport a = imaginary_axis_check(cfg, 0.0, 3);
      const double G2c2 = cfg.Gamma_bar() * cfg.Gamma_bar() / (cfg.c_bar() * cfg.c_bar());
      double worst = 0.0;
      for (double z : {-0.7 * a.radius, 0.3 * a.radius, 0.9 * a.radius}) {
        cd lhs = Q1(cfg, z) * Q1(cfg, z) - Q2(cfg, z) * Q2(cfg, z);
        double rhs = G2c2 * poly_P(cfg, z);
        worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(Q1(cfg, z) * Q1(cfg, z)) + std::abs(rhs)));
      }
      return Check{worst < 1e-10, "max relative mismatch " + num(worst)};
    });
  } else if (regime == Regime::Transition) {
    run("lop.transition_triple_root", [&] {
      TripleRootReport t = certify_triple_root(cfg);
      double e3 = std::abs(rp.E3) / (rp.E2 * rp.E2 + 1.0);
      return Check{t.certified && e3 < 1e-10, "|E3| " + num(rp.E3) + ", |Delta/tau^3| " + num(std::abs(t.limits[2]))};
    });
  } else {
    run("lop.interior_root", [&] {
      InteriorRoot r = find_interior_root(cfg);
      return Check{r.tau.real() > 0.0 && r.residual < 1e-10,
                   "Re tau = " + num(r.tau.real()) + ", |Delta| = " + num(r.residual)};
    });
  }
}

void oracle_properties(Runner& run, const SheetConfig& cfg, const SuiteOptions& opt) {
  run("oracle.omega_eig4", [&] {
    std::mt19937_64 rng(opt.seed + 10);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      Frequency f = random_frequency(cfg, rng);
      SymbolBundle S = interior_symbol(cfg, f);
      Eig4Result e = eig4(S.A, EigMode::Generic);
      for (cd w : {S.omega_plus, -S.omega_plus, S.omega_minus, -S.omega_minus}) {
        double best = 1e300;
        for (const auto& p : e.pairs) best = std::min(best, std::abs(p.value - w));
        worst = std::max(worst, best / f.k());
      }
    }
    return Check{worst < 1e-10, "max |omega - eig| / k " + num(worst)};
  });
  run("oracle.stable_subspace", [&] {
    std::mt19937_64 rng(opt.seed + 11);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      Frequency f = random_frequency(cfg, rng);
      SymbolBundle S = interior_symbol(cfg, f);
      StableSubspace s = stable_subspace(S.A);
      if (s.dimension != 2) return Check{false, "dimension " + std::to_string(s.dimension)};
      Eigen::MatrixXcd E(4, 2);
      E.col(0) = S.E_plus;
      E.col(1) = S.E_minus;
      worst = std::max(worst, max_principal_angle(s.basis, E));
    }
    return Check{worst < 1e-8, "max principal angle " + num(worst)};
  });
  run("oracle.ode_decay", [&] {
    Frequency f = Frequency{0.3, 0.2, 0.9}.normalized();
    SymbolBundle S = interior_symbol(cfg, f);
    double rmin = std::min(std::abs(S.omega_plus.real()), std::abs(S.omega_minus.real()));
    DecayReport r = ode_decay_check(cfg, f, 5.0 / rmin, 2000);
    return Check{r.rates_ok, "rates " + num(r.rate_plus) + "/" + num(r.expect_plus) + ", " +
                                 num(r.rate_minus) + "/" + num(r.expect_minus)};
  });
}

void frozen_properties(Runner& run, const SheetConfig& cfg, const SuiteOptions& opt) {
  const Regime regime = classify_threshold(cfg).regime;
  const FrozenPair zero = zero_perturbation_pair(cfg);
  run("frozen.zero_perturbation", [&] {
    const double G = cfg.Gamma_bar(), c = cfg.c_bar(), h = cfg.h_bar();
    std::mt19937_64 rng(opt.seed + 12);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Frequency f = random_frequency(cfg, rng);
      FrozenBoundary B = frozen_boundary_symbols(cfg, zero, f);
      worst = std::max({worst, std::abs(B.m1_plus), std::abs(B.m1_minus),
                        std::abs(B.m2_plus * G * c * h - 1.0), std::abs(B.m2_minus * G * c * h - 1.0)});
      FrozenInterior P = frozen_interior_symbol(cfg, zero.plus, f);
      FrozenInterior M = frozen_interior_symbol(cfg, zero.minus, f);
      worst = std::max({worst, std::abs(P.F2 - 2.0 * G / c) * c / G, std::abs(M.F2 + 2.0 * G / c) * c / G,
                        std::abs(P.F3), std::abs(M.F3)});
      SymbolBundle S = interior_symbol(cfg, f);
      worst = std::max({worst, std::abs(P.a(0, 0) - S.mu_plus) / (1.0 + std::abs(S.mu_plus)),
                        std::abs(frozen_eigen(cfg, zero.plus, f).omega - S.omega_plus),
                        std::abs(frozen_eigen(cfg, zero.minus, f).omega - S.omega_minus)});
      cd Dc = delta(cfg, f);
      worst = std::max(worst, std::abs(frozen_delta(cfg, zero, f).Delta - Dc) / (1.0 + std::abs(Dc)));
    }
    return Check{worst < 1e-12, "max deviation " + num(worst)};
  });
  run("frozen.random_identities", [&] {
    std::mt19937_64 rng(opt.seed + 13);
    double ent = 0.0, eff = 0.0, Fm = 0.0, mats = 0.0, cols = 0.0, fac = 0.0, bridge = 0.0;
    int rank_bad = 0;
    for (int i = 0; i < opt.frozen_samples; ++i) {
      FrozenPair pair = random_frozen_pair(cfg, 1e-2, rng);
      Frequency f = random_frequency(cfg, rng);
      for (const FrozenPoint* fp : {&pair.plus, &pair.minus}) {
        for (double x : frozen_entry_identities(cfg, *fp)) ent = std::max(ent, x);
        FrozenInterior S = frozen_interior_symbol(cfg, *fp, f);
        eff = std::max({eff, std::abs(S.eff_i1_residual) / f.k(), std::abs(S.eff_i2_residual) / f.k()});
        Fm = std::max({Fm, std::abs(S.F1 - S.F1_matrix) / (1.0 + std::abs(S.F1)),
                       std::abs(S.F2 - S.F2_matrix) / (1.0 + std::abs(S.F2)),
                       std::abs(S.F3 - S.F3_matrix) / (1.0 + std::abs(S.F2))});
        FrozenMatrices M = frozen_matrices(cfg, *fp);
        mats = std::max({mats, M.identity_residual, max_rel(M.A2t, M.A2t_generic)});
        Eigen::FullPivLU<Mat3> lu(M.A2t);
        lu.setThreshold(1e-10);
        if (lu.rank() != 2) ++rank_bad;
        Eigen::Vector3d V(0.3, -1.1, 0.7);
        bridge = std::max(bridge, trace_bridge_residual(cfg, *fp, V));
      }
      FrozenBoundary B = frozen_boundary_symbols(cfg, pair, f);
      cols = std::max({cols, B.beta_full.col(0).norm(), B.beta_full.col(3).norm()});
      FrozenDelta d = frozen_delta(cfg, pair, f);
      double sc = std::max(std::abs(d.Delta), 1e-300);
      fac = std::max({fac, std::abs(d.D1 * d.D2 * d.D3 - d.Delta) / sc, std::abs(d.det_form - d.Delta) / sc});
    }
    bool ok = ent < 1e-12 && eff < 1e-10 && Fm < 1e-10 && mats < 1e-12 && cols < 1e-12 && fac < 1e-10 &&
              bridge < 1e-12 && rank_bad == 0;
    return Check{ok, "entries " + num(ent) + ", eff " + num(eff) + ", F " + num(Fm) + ", matrices " + num(mats) +
                         ", beta cols " + num(cols) + ", factorization " + num(fac) + ", bridge " + num(bridge)};
  });
  if (regime != Regime::WeaklyStable) return;
  run("frozen.root_polynomial", [&] {
    const double z1 = *root_polynomial(cfg).z1;
    FrozenPoly p0 = frozen_root_polynomial(cfg, zero);
    double lead = std::abs(p0.coeffs[6]);
    double cmax = 0.0;
    for (double c : p0.coeffs) cmax = std::max(cmax, std::abs(c));
    double d0 = std::max({std::abs(p0.zq[0] + z1), std::abs(p0.zq[1]), std::abs(p0.zq[2] - z1)});
    std::mt19937_64 rng(opt.seed + 14);
    double dp = 0.0;
    for (int i = 0; i < 10; ++i) {
      FrozenPoly p = frozen_root_polynomial(cfg, random_frozen_pair(cfg, 1e-3, rng));
      for (int q = 0; q < 3; ++q) {
        double d = std::abs(p.zq[q] - p0.zq[q]);
        dp = std::max(dp, std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
      }
    }
    bool ok = lead < 1e-10 * cmax && d0 < 1e-10 && dp < 1e-2;
    return Check{ok, "zero-perturbation root error " + num(d0) + ", perturbed shift " + num(dp)};
  });
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const SheetConfig& cfg, const SuiteOptions& opt) {
  std::vector<PropertyResult> out;
  Runner run(out);
  eos_properties(run, cfg, opt);
  symmetrization_properties(run, cfg, opt);
  constsym_properties(run, cfg, opt);
  lopatinskii_properties(run, cfg, opt);
  oracle_properties(run, cfg, opt);
  frozen_properties(run, cfg, opt);
  return out;
}

}  // namespace rvs
