#pragma once

#include <functional>

namespace freelunch {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0; // conservative error estimate
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod 15(7) on [a,b]. Splits the worst interval first.
// Nodes are interior, so integrable endpoint singularities are never sampled,
// but convergence on them is slow; use integrate_left_power for those.
// Throws QuadratureFailure when the tolerance cannot be met and
// DivergentIntegral when the integrand evaluates non-finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_tol = 0.0,
                           int max_intervals = 4000);

// ∫_a^b g(x)·(x−a)^p dx for p > −1, via the substitution w = (x−a)^{p+1},
// which maps the weight to a constant: (1/(p+1))·∫_0^{(b−a)^{p+1}} g(a+w^{1/(p+1)}) dw.
// g must be smooth on [a,b]. Throws DivergentIntegral when p ≤ −1.
QuadratureResult integrate_left_power(const std::function<double(double)>& g, double a,
                                      double b, double p, double rel_tol = 1e-10);

} // namespace freelunch
