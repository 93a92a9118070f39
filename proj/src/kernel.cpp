#include "freelunch/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "freelunch/errors.hpp"
#include "freelunch/quadrature.hpp"

namespace freelunch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_hurst(double h) {
  if (!(h > 0.0 && h < 1.0) || h == 0.5) {
    throw DomainError("Hurst exponent must lie in (0,1) and differ from 1/2");
  }
}

void require_hurst_upper(double h) {
  if (!(h > 0.5 && h < 1.0)) {
    throw DomainError("Hurst exponent must lie in (1/2,1)");
  }
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

} // namespace

KernelSpec KernelSpec::brownian_constant() {
  KernelSpec s;
  s.variant_ = KernelVariant::BrownianConstant;
  return s;
}

KernelSpec KernelSpec::fbm_moving_average(double hurst) {
  require_hurst(hurst);
  KernelSpec s;
  s.variant_ = KernelVariant::FbmMovingAverage;
  s.hurst_ = hurst;
  return s;
}

KernelSpec KernelSpec::fbm_sottinen(double hurst) {
  require_hurst_upper(hurst);
  KernelSpec s;
  s.variant_ = KernelVariant::FbmSottinen;
  s.hurst_ = hurst;
  return s;
}

KernelSpec KernelSpec::ornstein_uhlenbeck(double kappa0, double v) {
  if (!(kappa0 > 0.0)) throw DomainError("kappa0 must be positive");
  if (!(v > 0.0)) throw DomainError("mean-reversion rate v must be positive");
  KernelSpec s;
  s.variant_ = KernelVariant::OrnsteinUhlenbeck;
  s.kappa0_ = kappa0;
  s.v_ = v;
  return s;
}

KernelSpec KernelSpec::rogers(double k, double v, double hurst) {
  if (!(k > 0.0)) throw DomainError("scale k must be positive");
  if (!(v > 0.0)) throw DomainError("offset v must be positive");
  require_hurst(hurst);
  KernelSpec s;
  s.variant_ = KernelVariant::Rogers;
  s.k_ = k;
  s.v_ = v;
  s.hurst_ = hurst;
  return s;
}

KernelSpec KernelSpec::mixed_bm(double sigma, double hurst) {
  if (!(sigma >= 0.0)) throw DomainError("volatility sigma must be nonnegative");
  require_hurst_upper(hurst);
  KernelSpec s;
  s.variant_ = KernelVariant::MixedBm;
  s.sigma_ = sigma;
  s.hurst_ = hurst;
  return s;
}

KernelSpec KernelSpec::tabulated(std::vector<double> thetas, std::vector<double> kappas) {
  if (thetas.size() != kappas.size()) {
    throw LengthMismatch("tabulated kernel: theta and kappa column lengths differ");
  }
  if (thetas.size() < 2) throw DomainError("tabulated kernel needs at least two knots");
  if (!(thetas.front() >= 0.0)) throw DomainError("tabulated kernel: theta must be nonnegative");
  for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
    if (!(thetas[i] < thetas[i + 1])) {
      throw DomainError("tabulated kernel: theta knots must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!std::isfinite(thetas[i]) || !std::isfinite(kappas[i])) {
      throw DomainError("tabulated kernel: knots must be finite");
    }
  }
  KernelSpec s;
  s.variant_ = KernelVariant::Tabulated;
  s.thetas_ = std::move(thetas);
  s.kappas_ = std::move(kappas);
  return s;
}

void KernelSpec::set_domain_floor(double floor) {
  if (!(floor > 0.0)) throw DomainError("domain_floor must be positive");
  domain_floor_ = floor;
}

double KernelSpec::hurst() const {
  switch (variant_) {
    case KernelVariant::FbmMovingAverage:
    case KernelVariant::FbmSottinen:
    case KernelVariant::Rogers:
    case KernelVariant::MixedBm:
      return hurst_;
    default:
      throw DomainError("kernel variant carries no Hurst exponent");
  }
}

double KernelSpec::param_kappa0() const {
  if (variant_ != KernelVariant::OrnsteinUhlenbeck) {
    throw DomainError("kappa0 is an Ornstein-Uhlenbeck parameter");
  }
  return kappa0_;
}

double KernelSpec::param_v() const {
  if (variant_ != KernelVariant::OrnsteinUhlenbeck && variant_ != KernelVariant::Rogers) {
    throw DomainError("v is an Ornstein-Uhlenbeck or Rogers parameter");
  }
  return v_;
}

double KernelSpec::param_k() const {
  if (variant_ != KernelVariant::Rogers) throw DomainError("k is a Rogers parameter");
  return k_;
}

double KernelSpec::param_sigma() const {
  if (variant_ != KernelVariant::MixedBm) throw DomainError("sigma is a MixedBm parameter");
  return sigma_;
}

const std::vector<double>& KernelSpec::table_thetas() const {
  if (variant_ != KernelVariant::Tabulated) throw DomainError("kernel is not tabulated");
  return thetas_;
}

const std::vector<double>& KernelSpec::table_kappas() const {
  if (variant_ != KernelVariant::Tabulated) throw DomainError("kernel is not tabulated");
  return kappas_;
}

double KernelSpec::kappa(double theta) const {
  if (theta < 0.0) throw DomainError("kappa: negative lag");
  switch (variant_) {
    case KernelVariant::BrownianConstant:
      return 1.0;
    case KernelVariant::FbmMovingAverage:
      if (theta == 0.0) return hurst_ > 0.5 ? 0.0 : kInf;
      return std::pow(theta, hurst_ - 0.5);
    case KernelVariant::OrnsteinUhlenbeck:
      return kappa0_ * std::exp(-v_ * theta);
    case KernelVariant::Rogers:
      return k_ * std::pow(theta * theta + v_, 0.5 * (hurst_ - 0.5));
    case KernelVariant::MixedBm:
      return std::sqrt(sigma_ * sigma_ + std::pow(theta, 2.0 * hurst_ - 1.0));
    case KernelVariant::Tabulated: {
      if (theta <= thetas_.front()) return kappas_.front();
      if (theta >= thetas_.back()) return kappas_.back();
      auto it = std::upper_bound(thetas_.begin(), thetas_.end(), theta);
      std::size_t hi = static_cast<std::size_t>(it - thetas_.begin());
      std::size_t lo = hi - 1;
      double w = (theta - thetas_[lo]) / (thetas_[hi] - thetas_[lo]);
      return kappas_[lo] + w * (kappas_[hi] - kappas_[lo]);
    }
    case KernelVariant::FbmSottinen:
      throw NonDifferenceKernel("kappa: kernel is not of difference form");
  }
  throw DomainError("kappa: unknown variant");
}

double KernelSpec::eval(double t, double s) const {
  if (s >= t) return 0.0;
  if (variant_ != KernelVariant::FbmSottinen) return kappa(t - s);
  if (!(s > 0.0)) throw DomainError("kernel eval: s must be positive for this variant");
  const double alpha = hurst_ - 0.5; // in (0, 1/2)
  auto g = [&](double u) { return std::pow(u / s, alpha); };
  // ∫_s^t (u/s)^α (u−s)^{α−1} du with the endpoint power absorbed analytically.
  QuadratureResult r = integrate_left_power(g, s, t, alpha - 1.0, 1e-10);
  return r.value;
}

double KernelSpec::deriv_t(double t, double s) const {
  if (!(s < t)) throw DomainError("deriv_t: requires s < t");
  const double theta = t - s;
  switch (variant_) {
    case KernelVariant::BrownianConstant:
      return 0.0;
    case KernelVariant::FbmMovingAverage:
      if (theta < domain_floor_) {
        throw SingularDerivative("deriv_t: lag below domain_floor for a singular variant");
      }
      return (hurst_ - 0.5) * std::pow(theta, hurst_ - 1.5);
    case KernelVariant::OrnsteinUhlenbeck:
      return -v_ * kappa0_ * std::exp(-v_ * theta);
    case KernelVariant::Rogers: {
      const double beta = 0.5 * (hurst_ - 0.5);
      return 2.0 * k_ * beta * theta * std::pow(theta * theta + v_, beta - 1.0);
    }
    case KernelVariant::MixedBm: {
      if (theta < domain_floor_) {
        throw SingularDerivative("deriv_t: lag below domain_floor for a singular variant");
      }
      const double num = (2.0 * hurst_ - 1.0) * std::pow(theta, 2.0 * hurst_ - 2.0);
      return num / (2.0 * kappa(theta));
    }
    case KernelVariant::FbmSottinen: {
      if (!(s > 0.0)) throw DomainError("deriv_t: s must be positive for this variant");
      if (theta < domain_floor_) {
        throw SingularDerivative("deriv_t: lag below domain_floor for a singular variant");
      }
      return std::pow(t / s, hurst_ - 0.5) * std::pow(theta, hurst_ - 1.5);
    }
    case KernelVariant::Tabulated: {
      const double h = std::max(1e-6, 1e-6 * t);
      return (eval(t + h, s) - eval(t - h, s)) / (2.0 * h);
    }
  }
  throw DomainError("deriv_t: unknown variant");
}

double KernelSpec::total_variation(double a, double b) const {
  if (!(a >= 0.0)) throw DomainError("total_variation: interval must start at θ ≥ 0");
  if (!(a < b)) throw DomainError("total_variation: requires a < b");
  if (variant_ == KernelVariant::FbmSottinen) {
    throw NonDifferenceKernel("total_variation: kernel is not of difference form");
  }
  if (variant_ == KernelVariant::Tabulated) {
    const bool unbounded_right = std::isinf(b);
    double prev = kappa(a);
    double tv = 0.0;
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
      if (thetas_[i] <= a) continue;
      if (!unbounded_right && thetas_[i] >= b) break;
      tv += std::abs(kappas_[i] - prev);
      prev = kappas_[i];
    }
    double last = unbounded_right ? kappas_.back() : kappa(b);
    tv += std::abs(last - prev);
    return tv;
  }
  // Remaining variants are monotone in θ.
  const double lo = kappa(a);
  const double hi = std::isinf(b) ? kappa_infinity_limit() : kappa(b);
  if (std::isinf(lo) || std::isinf(hi)) return kInf;
  return std::abs(hi - lo);
}

double KernelSpec::square_integral(double t0, double t) const {
  if (!(t0 >= 0.0) || !(t > t0)) throw DomainError("square_integral: requires t > t0 ≥ 0");
  const double span = t - t0;
  switch (variant_) {
    case KernelVariant::FbmSottinen: {
      if (!(t0 > 0.0)) {
        throw DomainError("square_integral: t0 must be positive for this variant");
      }
      auto f = [&](double s) {
        double v = eval(t, s);
        return v * v;
      };
      return integrate(f, t0, t, 1e-9).value;
    }
    case KernelVariant::FbmMovingAverage:
      // κ(θ)² = θ^{2H−1}; absorb the endpoint power analytically.
      return integrate_left_power([](double) { return 1.0; }, 0.0, span,
                                  2.0 * hurst_ - 1.0, 1e-10)
          .value;
    case KernelVariant::MixedBm:
      return sigma_ * sigma_ * span +
             integrate_left_power([](double) { return 1.0; }, 0.0, span,
                                  2.0 * hurst_ - 1.0, 1e-10)
                 .value;
    default: {
      auto f = [&](double theta) {
        double v = kappa(theta);
        return v * v;
      };
      return integrate(f, 0.0, span, 1e-10).value;
    }
  }
}

double KernelSpec::kappa_zero_limit() const {
  switch (variant_) {
    case KernelVariant::BrownianConstant:
      return 1.0;
    case KernelVariant::FbmMovingAverage:
      return hurst_ > 0.5 ? 0.0 : kInf;
    case KernelVariant::OrnsteinUhlenbeck:
      return kappa0_;
    case KernelVariant::Rogers:
      return k_ * std::pow(v_, 0.5 * (hurst_ - 0.5));
    case KernelVariant::MixedBm:
      return sigma_;
    case KernelVariant::Tabulated:
      return kappas_.front();
    case KernelVariant::FbmSottinen:
      throw NonDifferenceKernel("kappa_zero_limit: kernel is not of difference form");
  }
  throw DomainError("kappa_zero_limit: unknown variant");
}

double KernelSpec::kappa_infinity_limit() const {
  switch (variant_) {
    case KernelVariant::BrownianConstant:
      return 1.0;
    case KernelVariant::FbmMovingAverage:
      return hurst_ > 0.5 ? kInf : 0.0;
    case KernelVariant::OrnsteinUhlenbeck:
      return 0.0;
    case KernelVariant::Rogers:
      return hurst_ > 0.5 ? kInf : 0.0;
    case KernelVariant::MixedBm:
      return kInf;
    case KernelVariant::Tabulated:
      return kappas_.back();
    case KernelVariant::FbmSottinen:
      throw NonDifferenceKernel("kappa_infinity_limit: kernel is not of difference form");
  }
  throw DomainError("kappa_infinity_limit: unknown variant");
}

Monotonicity KernelSpec::monotonicity() const {
  switch (variant_) {
    case KernelVariant::BrownianConstant:
      return Monotonicity::Constant;
    case KernelVariant::FbmMovingAverage:
    case KernelVariant::Rogers:
      return hurst_ > 0.5 ? Monotonicity::Increasing : Monotonicity::Decreasing;
    case KernelVariant::OrnsteinUhlenbeck:
      return Monotonicity::Decreasing;
    case KernelVariant::MixedBm:
      return Monotonicity::Increasing;
    case KernelVariant::Tabulated: {
      bool up = false, down = false;
      for (std::size_t i = 0; i + 1 < kappas_.size(); ++i) {
        if (kappas_[i + 1] > kappas_[i]) up = true;
        if (kappas_[i + 1] < kappas_[i]) down = true;
      }
      if (up && down) return Monotonicity::Piecewise;
      if (up) return Monotonicity::Increasing;
      if (down) return Monotonicity::Decreasing;
      return Monotonicity::Constant;
    }
    case KernelVariant::FbmSottinen:
      throw NonDifferenceKernel("monotonicity: kernel is not of difference form");
  }
  throw DomainError("monotonicity: unknown variant");
}

bool KernelSpec::changes_sign() const {
  if (variant_ != KernelVariant::Tabulated) return false;
  bool pos = false, neg = false;
  for (double v : kappas_) {
    if (v > 0.0) pos = true;
    if (v < 0.0) neg = true;
  }
  return pos && neg;
}

std::string KernelSpec::name() const {
  switch (variant_) {
    case KernelVariant::BrownianConstant:
      return "brownian_constant";
    case KernelVariant::FbmMovingAverage:
      return fmt("fbm_ma(H=%g)", hurst_);
    case KernelVariant::FbmSottinen:
      return fmt("fbm_sottinen(H=%g)", hurst_);
    case KernelVariant::OrnsteinUhlenbeck:
      return fmt("ou(kappa0=%g,v=%g)", kappa0_, v_);
    case KernelVariant::Rogers:
      return fmt("rogers(k=%g,v=%g,H=%g)", k_, v_, hurst_);
    case KernelVariant::MixedBm:
      return fmt("mixed_bm(sigma=%g,H=%g)", sigma_, hurst_);
    case KernelVariant::Tabulated: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "tabulated(%zu knots)", thetas_.size());
      return buf;
    }
  }
  return "unknown";
}

} // namespace freelunch
