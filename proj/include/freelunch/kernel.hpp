#pragma once

#include <string>
#include <vector>

namespace freelunch {

enum class KernelVariant {
  BrownianConstant,
  FbmMovingAverage,
  FbmSottinen,
  OrnsteinUhlenbeck,
  Rogers,
  MixedBm,
  Tabulated,
};

enum class Monotonicity { Constant, Increasing, Decreasing, Piecewise };

// A Volterra kernel K(t,s), in most variants a difference kernel κ(θ) with
// K(t,s) = κ((t−s)_+) and K(t,s) = 0 for s ≥ t.
class KernelSpec {
public:
  static KernelSpec brownian_constant();
  static KernelSpec fbm_moving_average(double hurst);
  static KernelSpec fbm_sottinen(double hurst);
  static KernelSpec ornstein_uhlenbeck(double kappa0, double v);
  static KernelSpec rogers(double k, double v, double hurst);
  static KernelSpec mixed_bm(double sigma, double hurst);
  // Knots must have strictly increasing nonnegative θ; κ may change sign.
  // Linear interpolation between knots, clamped outside.
  static KernelSpec tabulated(std::vector<double> thetas, std::vector<double> kappas);

  KernelVariant variant() const noexcept { return variant_; }
  bool is_difference_kernel() const noexcept {
    return variant_ != KernelVariant::FbmSottinen;
  }

  // θ below this is treated as the singular endpoint: derivative requests
  // throw instead of using difference quotients.
  double domain_floor() const noexcept { return domain_floor_; }
  void set_domain_floor(double floor);

  double hurst() const;
  double param_kappa0() const;
  double param_v() const;
  double param_k() const;
  double param_sigma() const;
  const std::vector<double>& table_thetas() const;
  const std::vector<double>& table_kappas() const;

  // κ(θ). κ(0) means the right limit κ(0⁺); returns +∞ where that diverges.
  double kappa(double theta) const;

  // K(t,s); zero whenever s ≥ t.
  double eval(double t, double s) const;

  // ∂K/∂t (t,s), s < t.
  double deriv_t(double t, double s) const;

  // Total variation of κ on (a,b); b may be +∞; +∞ where κ is unbounded.
  double total_variation(double a, double b) const;

  // ∫_{t0}^t K(t,s)² ds, the variance of the moving-average part at t.
  double square_integral(double t0, double t) const;

  // Structure probes used by the detectors.
  double kappa_zero_limit() const;     // κ(0⁺), +∞ possible
  double kappa_infinity_limit() const; // lim_{θ→∞} κ(θ), +∞ possible
  Monotonicity monotonicity() const;
  bool changes_sign() const;

  // Short human-readable identifier for artifacts, e.g. "rogers(k=1,v=1,H=0.75)".
  std::string name() const;

private:
  KernelSpec() = default;

  KernelVariant variant_ = KernelVariant::BrownianConstant;
  double hurst_ = 0.0;
  double kappa0_ = 0.0;
  double v_ = 0.0;
  double k_ = 0.0;
  double sigma_ = 0.0;
  double domain_floor_ = 1e-9;
  std::vector<double> thetas_;
  std::vector<double> kappas_;
};

} // namespace freelunch
