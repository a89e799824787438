#include "rvs/eos_state.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

namespace rvs {

Eos Eos::linear(double sigma, double rho_min, double rho_max, double rho_ref) {
  Eos e;
  e.kind_ = EosKind::Linear;
  e.a_ = sigma;
  e.rho_min_ = rho_min;
  e.rho_max_ = rho_max;
  e.rho_ref_ = rho_ref;
  e.check_basic();
  return e;
}

Eos Eos::gamma_law(double K, double gamma_ad, double rho_min, double rho_max,
                   double rho_ref) {
  Eos e;
  e.kind_ = EosKind::GammaLaw;
  e.a_ = K;
  e.b_ = gamma_ad;
  e.rho_min_ = rho_min;
  e.rho_max_ = rho_max;
  e.rho_ref_ = rho_ref;
  e.check_basic();
  return e;
}

Eos Eos::callable(std::function<double(double)> p, std::function<double(double)> dp,
                  double rho_min, double rho_max, double rho_ref) {
  Eos e;
  e.kind_ = EosKind::Callable;
  e.p_fn_ = std::move(p);
  e.dp_fn_ = std::move(dp);
  e.rho_min_ = rho_min;
  e.rho_max_ = rho_max;
  e.rho_ref_ = rho_ref;
  e.check_basic();
  return e;
}

Eos Eos::with_reference(double rho_ref) const {
  Eos e = *this;
  e.rho_ref_ = rho_ref;
  e.check_basic();
  return e;
}

void Eos::check_basic() const {
  if (!(std::isfinite(rho_min_) && std::isfinite(rho_max_) && rho_min_ >= 0.0 &&
        rho_min_ < rho_ref_ && rho_ref_ < rho_max_))
    throw DomainError("eos: need 0 <= rho_min < reference_density < rho_max");
  if (kind_ == EosKind::Linear && !(a_ > 0.0)) throw EosViolation("eos: sigma must be > 0");
  if (kind_ == EosKind::GammaLaw && !(a_ > 0.0 && b_ > 0.0))
    throw EosViolation("eos: K and gamma_ad must be > 0");
  if (kind_ == EosKind::Callable && (!p_fn_ || !dp_fn_))
    throw EosViolation("eos: callable eos needs p and p'");
}

double Eos::p(double rho) const {
  switch (kind_) {
    case EosKind::Linear:
      return a_ * rho;
    case EosKind::GammaLaw:
      return a_ * std::pow(rho, b_);
    case EosKind::Callable:
      return p_fn_(rho);
  }
  return 0.0;
}

double Eos::dp(double rho) const {
  switch (kind_) {
    case EosKind::Linear:
      return a_;
    case EosKind::GammaLaw:
      return a_ * b_ * std::pow(rho, b_ - 1.0);
    case EosKind::Callable:
      return dp_fn_(rho);
  }
  return 0.0;
}

void Eos::check_admissible(double epsilon, int samples) const {
  const double inv = epsilon > 0.0 ? 1.0 / (epsilon * epsilon)
                                   : std::numeric_limits<double>::infinity();
  for (int i = 1; i < samples; ++i) {
    double rho = rho_min_ + (rho_max_ - rho_min_) * i / samples;
    double pv = p(rho), dpv = dp(rho);
    if (!(pv > 0.0))
      throw EosViolation("eos: p <= 0 at rho = " + std::to_string(rho));
    if (!(dpv > 0.0 && dpv < inv))
      throw EosViolation("eos: p' outside (0, eps^-2) at rho = " + std::to_string(rho));
  }
}

double particle_density(const Eos& eos, const FluidParams& params, double rho) {
  if (!eos.in_range(rho)) throw DomainError("particle_density: rho outside validity interval");
  const double e2 = params.epsilon * params.epsilon;
  const double rbar = eos.reference_density();
  if (eos.kind() == EosKind::Linear)
    return std::pow(rho / rbar, 1.0 / (1.0 + e2 * eos.sigma()));
  if (e2 == 0.0) return rho / rbar;
  auto f = [&](double s) { return 1.0 / (s + e2 * eos.p(s)); };
  double err = 0.0;
  double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, rbar, rho, 20,
                                                                            1e-12, &err);
  return std::exp(I);
}

double sound_speed(const Eos& eos, double rho) {
  if (!eos.in_range(rho)) throw DomainError("sound_speed: rho outside validity interval");
  double d = eos.dp(rho);
  if (!(d > 0.0)) throw EosViolation("sound_speed: p' <= 0");
  return std::sqrt(d);
}

double enthalpy_ratio(const Eos& eos, const FluidParams& params, double rho) {
  const double e2 = params.epsilon * params.epsilon;
  double c = sound_speed(eos, rho);
  if (e2 > 0.0 && !(c * c < 1.0 / e2)) throw EosViolation("enthalpy_ratio: p' >= eps^-2");
  return (rho + e2 * eos.p(rho)) / particle_density(eos, params, rho);
}

double lorentz_factor(const FluidParams& params, double v1, double v2) {
  double q = params.epsilon * params.epsilon * (v1 * v1 + v2 * v2);
  if (!(q < 1.0)) throw DomainError("velocity exceeds light speed");
  return 1.0 / std::sqrt(1.0 - q);
}

double density_from_pressure(const Eos& eos, double p) {
  const double lo = eos.rho_min(), hi = eos.rho_max();
  auto g = [&](double r) { return eos.p(r) - p; };
  double glo = g(lo), ghi = g(hi);
  if (!(glo < 0.0 && ghi > 0.0))
    throw DomainError("density_from_pressure: pressure outside invertible range");
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::abs(a); };
  std::uintmax_t iters = 400;
  auto r = boost::math::tools::bisect(g, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

UState prim_to_u(const Eos& eos, const FluidParams& params, const PrimState& s) {
  double G = lorentz_factor(params, s.v1, s.v2);
  double h = enthalpy_ratio(eos, params, s.rho);
  return {eos.p(s.rho), h * G * s.v1, h * G * s.v2};
}

PrimState u_to_prim(const Eos& eos, const FluidParams& params, const UState& u) {
  const double e2 = params.epsilon * params.epsilon;
  double rho = density_from_pressure(eos, u.u1);
  double h = enthalpy_ratio(eos, params, rho);
  double G = std::sqrt(h * h + e2 * u.u2 * u.u2 + e2 * u.u3 * u.u3) / h;
  return {rho, u.u2 / (G * h), u.u3 / (G * h)};
}

LocalState local_state(const Eos& eos, const FluidParams& params, const PrimState& s) {
  LocalState L;
  L.rho = s.rho;
  L.p = eos.p(s.rho);
  L.v1 = s.v1;
  L.v2 = s.v2;
  L.Gamma = lorentz_factor(params, s.v1, s.v2);
  L.N = particle_density(eos, params, s.rho);
  L.c = sound_speed(eos, s.rho);
  L.h = (s.rho + params.epsilon * params.epsilon * L.p) / L.N;
  return L;
}

LocalState local_state(const Eos& eos, const FluidParams& params, const UState& u) {
  return local_state(eos, params, u_to_prim(eos, params, u));
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::WeaklyStable:
      return "weakly_stable";
    case Regime::Transition:
      return "transition";
    case Regime::ViolentlyUnstable:
      return "violently_unstable";
  }
  return "unknown";
}

double critical_mach(double epsilon, double cbar) {
  return std::sqrt(2.0) / std::sqrt(1.0 + epsilon * epsilon * cbar * cbar);
}

SheetConfig::SheetConfig(const Eos& eos, FluidParams params, double rho_bar, double v_bar)
    : eos_(eos.with_reference(rho_bar)), params_(params), rho_bar_(rho_bar), v_bar_(v_bar) {
  const double eps = params_.epsilon;
  if (!(eps >= 0.0 && std::isfinite(eps))) throw DomainError("epsilon must be finite and >= 0");
  if (!(v_bar > 0.0)) throw DomainError("v_bar must be > 0");
  if (!(eps * v_bar < 1.0)) throw DomainError("velocity exceeds light speed");
  eos_.check_admissible(eps);
  c_bar_ = sound_speed(eos_, rho_bar);
  if (!(eps * c_bar_ < 1.0)) throw DomainError("sound speed exceeds light speed");
  Gamma_bar_ = lorentz_factor(params_, v_bar, 0.0);
  h_bar_ = enthalpy_ratio(eos_, params_, rho_bar);
  p_bar_ = eos_.p(rho_bar);

  const double e2 = eps * eps, e4 = e2 * e2, c = c_bar_, v = v_bar_;
  const double s2 = 1.0 - e4 * c * c * v * v;
  C0_ = Gamma_bar_ * (1.0 - e2 * v * v) / std::sqrt(s2);
  C1_ = s2 / ((1.0 - e2 * v * v) * c);
  C2_ = (1.0 - e2 * c * c) * v / s2;
}

SheetConfig SheetConfig::linear(double epsilon, double cbar, double vbar, double rho_bar) {
  if (!(cbar > 0.0)) throw DomainError("c_bar must be > 0");
  if (!(epsilon * cbar < 1.0)) throw DomainError("sound speed exceeds light speed");
  return SheetConfig(Eos::linear(cbar * cbar, rho_bar * 1e-3, rho_bar * 1e3, rho_bar),
                     FluidParams{epsilon}, rho_bar, vbar);
}

double SheetConfig::Mc() const { return critical_mach(params_.epsilon, c_bar_); }

UState SheetConfig::u_bar(int side) const {
  double s = side >= 0 ? 1.0 : -1.0;
  return {p_bar_, s * h_bar_ * w_bar(), 0.0};
}

PrimState SheetConfig::prim_bar(int side) const {
  return {rho_bar_, side >= 0 ? v_bar_ : -v_bar_, 0.0};
}

ThresholdReport classify_threshold(const SheetConfig& cfg) {
  ThresholdReport r{Regime::Transition, cfg.M(), cfg.Mc()};
  if (std::abs(r.M - r.Mc) <= kTransitionTieTol * r.Mc)
    r.regime = Regime::Transition;
  else if (r.M > r.Mc)
    r.regime = Regime::WeaklyStable;
  else
    r.regime = Regime::ViolentlyUnstable;
  return r;
}

}  // namespace rvs
