#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rvs/constsym.hpp"
#include "rvs/eos_state.hpp"

namespace rvs {

// Closed product form; homogeneous of degree 5 in (tau, eta).
cd delta(const SheetConfig& cfg, const Frequency& f);
// The three factors of the product form (without the 1/(c^2 h) prefactor).
std::array<cd, 3> delta_factors(const SheetConfig& cfg, const Frequency& f);
// det[beta (E+ E-)] with beta extended homogeneously of degree 0.
cd delta_det_beta(const SheetConfig& cfg, const Frequency& f);

struct RootPoly {
  double E1, E2, E3;
  double D, D_closed;
  double z1sq, z2sq;
  std::optional<double> z1, z2;  // real positive roots when they exist
  double P0(double z) const { return (E1 * z * z + E2) * z * z + E3; }
  double dP0(double z) const { return 4.0 * E1 * z * z * z + 2.0 * E2 * z; }
};
RootPoly root_polynomial(const SheetConfig& cfg);

// P1 - P2 as defined from the two quartic-by-quadratic products.
double poly_P1(const SheetConfig& cfg, double z);
double poly_P2(const SheetConfig& cfg, double z);
double poly_P(const SheetConfig& cfg, double z);

// Omega = omega/(i eta) on tau = i eta z (boundary branch), Q1 = Omega_-(z+v)^2, Q2 = Omega_+(z-v)^2.
cd Q1(const SheetConfig& cfg, double z, double eta = 1.0);
cd Q2(const SheetConfig& cfg, double z, double eta = 1.0);
// Closed-form derivative of Q1 + Q2 at a root q.
cd dQsum_formula(const SheetConfig& cfg, const RootPoly& rp, double q);

struct OrderingLink {
  std::string name;
  double slack;  // positive when the inequality holds
  bool strict = true;  // C2 = vbar exactly when eps = 0
};
struct OrderingReport {
  bool ok = false;
  double slack_min = 0.0;  // over the strict links
  std::vector<OrderingLink> links;
  std::string first_failure;
};
OrderingReport verify_orderings(const SheetConfig& cfg);

struct SimplicityReport {
  double q;
  cd h_q;
  double h_scale;
  cd dQ_formula, dQ_fd;
  bool nonzero = false;
  bool derivative_agree = false;
};
SimplicityReport root_simplicity(const SheetConfig& cfg, double q, double eta = 1.0);

struct TripleRootReport {
  std::array<cd, 3> limits;  // lim Delta(s,1)/s^j, j = 1, 2, 3
  bool certified = false;
};
TripleRootReport certify_triple_root(const SheetConfig& cfg);

struct InteriorRoot {
  Frequency f;  // on the hemisphere
  cd tau;       // normalized tau
  double residual;
  int iterations;
};
// Newton search seeded from the continued z1; throws std::runtime_error on failure.
InteriorRoot find_interior_root(const SheetConfig& cfg);

struct LopReport {
  Regime regime;
  RootPoly poly;
  std::vector<double> boundary_roots;  // q with tau = i q eta
  bool triple_root = false;
  std::vector<InteriorRoot> interior_roots;
  std::optional<OrderingReport> ordering;
  std::vector<SimplicityReport> simplicity;
};
LopReport classify_roots(const SheetConfig& cfg);

struct ImagAxisReport {
  double q;
  double radius;           // half-width of the sampled delta window around q eta
  double max_rel_real;     // max |Re Delta(i delta, eta)| / |Delta|
  bool ok = false;
};
// Samples delta in a window around q eta (eta = 1) where omega+- are both purely imaginary.
ImagAxisReport imaginary_axis_check(const SheetConfig& cfg, double q, int samples = 41);

struct GrowthFit {
  double q;
  double slope, intercept, r2;
  bool ok = false;
};
// Least-squares line through |Delta(gamma + i q, 1)| on gamma log-spaced in [g_lo, g_hi].
GrowthFit gamma_growth_fit(const SheetConfig& cfg, double q, double g_lo = 1e-6, double g_hi = 1e-3,
                           int samples = 25);

struct ScanRow {
  double gamma, delta, eta;  // normalized frequency
  cd value;
  double grid_delta, grid_eta;
};
// res x res nodes at cell centers of [-1,1]^2 in (delta, eta), offset gamma,
// each normalized onto the hemisphere; row index = i_delta * res + i_eta.
std::vector<ScanRow> hemisphere_scan(const SheetConfig& cfg, double gamma, int res,
                                     bool use_det_beta = false);

// |f3| / (|omega_-| |tau + i v eta|^2 + |omega_+| |tau - i v eta|^2): the cancelling factor of
// Delta relative to the size of its two terms. Vanishes exactly where Delta does.
double delta_cancellation(const SheetConfig& cfg, const Frequency& f);

struct ScanRayCheck {
  bool ok = false;
  double threshold = 0.0;  // on delta_cancellation
  std::size_t n_sub = 0;
  std::size_t n_off_ray = 0;
  std::vector<std::size_t> hits;  // per ray
  double max_off_cells = 0.0;
};
// Sub-tolerance nodes: delta_cancellation below tol_factor * h * (smallest angular slope of
// delta_cancellation across the rays at gamma = 0), h the grid spacing. A node counts as on a
// ray when its grid distance to delta = q eta is <= max_cells. ok: some node is sub-tolerance
// and none is off the rays.
ScanRayCheck check_scan_rays(const SheetConfig& cfg, const std::vector<ScanRow>& rows, int res,
                             const std::vector<double>& rays, double tol_factor = 1.0,
                             double max_cells = 2.0);

}  // namespace rvs
