#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace rvs {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// p' out of (0, eps^-2) or p <= 0
struct EosViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EosKind { Linear, GammaLaw, Callable };

// Barotropic closure p = p(rho) on (rho_min, rho_max).
class Eos {
 public:
  static Eos linear(double sigma, double rho_min, double rho_max, double rho_ref);
  static Eos gamma_law(double K, double gamma_ad, double rho_min, double rho_max,
                       double rho_ref);
  static Eos callable(std::function<double(double)> p, std::function<double(double)> dp,
                      double rho_min, double rho_max, double rho_ref);

  EosKind kind() const { return kind_; }
  double p(double rho) const;
  double dp(double rho) const;
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  double reference_density() const { return rho_ref_; }
  double sigma() const { return a_; }
  double K() const { return a_; }
  double gamma_ad() const { return b_; }

  Eos with_reference(double rho_ref) const;
  bool in_range(double rho) const { return rho > rho_min_ && rho < rho_max_; }

  // Samples (rho_min, rho_max) and throws EosViolation unless p > 0 and 0 < p' < eps^-2.
  void check_admissible(double epsilon, int samples = 64) const;

 private:
  Eos() = default;
  void check_basic() const;

  EosKind kind_ = EosKind::Linear;
  double a_ = 0.0, b_ = 0.0;
  std::function<double(double)> p_fn_, dp_fn_;
  double rho_min_ = 0.0, rho_max_ = 0.0, rho_ref_ = 0.0;
};

struct FluidParams {
  double epsilon = 0.0;
};

struct PrimState {
  double rho = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

struct UState {
  double u1 = 0.0;  // p
  double u2 = 0.0;  // h w1
  double u3 = 0.0;  // h w2
};

double particle_density(const Eos& eos, const FluidParams& params, double rho);
double sound_speed(const Eos& eos, double rho);
double enthalpy_ratio(const Eos& eos, const FluidParams& params, double rho);
double lorentz_factor(const FluidParams& params, double v1, double v2);

// rho = p^{-1}(p) by bisection on the validity interval
double density_from_pressure(const Eos& eos, double p);

UState prim_to_u(const Eos& eos, const FluidParams& params, const PrimState& s);
PrimState u_to_prim(const Eos& eos, const FluidParams& params, const UState& u);

// Every thermodynamic and kinematic quantity at one state.
struct LocalState {
  double rho, p, v1, v2, Gamma, N, c, h;
};
LocalState local_state(const Eos& eos, const FluidParams& params, const PrimState& s);
LocalState local_state(const Eos& eos, const FluidParams& params, const UState& u);

enum class Regime { WeaklyStable, Transition, ViolentlyUnstable };
std::string regime_name(Regime r);

class SheetConfig {
 public:
  SheetConfig(const Eos& eos, FluidParams params, double rho_bar, double v_bar);
  // p = cbar^2 rho, rho_bar = 1 by default
  static SheetConfig linear(double epsilon, double cbar, double vbar, double rho_bar = 1.0);

  const Eos& eos() const { return eos_; }
  const FluidParams& params() const { return params_; }
  double eps() const { return params_.epsilon; }
  double rho_bar() const { return rho_bar_; }
  double v_bar() const { return v_bar_; }
  double c_bar() const { return c_bar_; }
  double Gamma_bar() const { return Gamma_bar_; }
  double w_bar() const { return Gamma_bar_ * v_bar_; }
  double h_bar() const { return h_bar_; }
  double p_bar() const { return p_bar_; }
  double M() const { return v_bar_ / c_bar_; }
  double Mc() const;
  UState u_bar(int side) const;
  PrimState prim_bar(int side) const;

  // Constants of the interior symbol eigenvalues
  double C0() const { return C0_; }
  double C1() const { return C1_; }
  double C2() const { return C2_; }

 private:
  Eos eos_;
  FluidParams params_;
  double rho_bar_, v_bar_;
  double c_bar_, Gamma_bar_, h_bar_, p_bar_;
  double C0_, C1_, C2_;
};

double critical_mach(double epsilon, double cbar);

struct ThresholdReport {
  Regime regime;
  double M;
  double Mc;
};

constexpr double kTransitionTieTol = 1e-12;
ThresholdReport classify_threshold(const SheetConfig& cfg);

}  // namespace rvs
