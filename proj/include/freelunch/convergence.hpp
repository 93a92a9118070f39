#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "freelunch/lattice.hpp"

namespace freelunch {

// One (pair, n) entry of a convergence table.
struct ConvergenceRow {
  long n = 0;
  double t = 0.0;
  double T = 0.0;
  double discrete = 0.0;
  double limit = 0.0;
  double abs_error = 0.0;
};

struct ConvergenceReport {
  std::string kernel_id;
  std::string law_id;
  double t0 = 0.0;
  std::vector<std::pair<double, double>> pairs;
  std::vector<long> n_list;
  std::vector<ConvergenceRow> rows;
  // Slope p of abs_error ~ n^{-p}, least squares over rows with positive error.
  double fitted_decay_exponent = 0.0;
};

struct McMomentCheck {
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double analytic_mean = 0.0;
  double analytic_variance = 0.0;
  double z_mean = 0.0;
  double z_variance = 0.0;
  std::uint64_t num_paths = 0;
};

// Exact Riemann-sum covariance of the discretised noise at the grid points
// below t and T: sum over i < floor(n t) of K(floor(nT)/n, s_i) K(floor(nt)/n, s_i) / n.
// Requires a centred unit-variance law; symmetric in (t, T).
double covariance_discrete(const MarketSpec& market, const GridSpec& grid, double t,
                           double T);

// Limit target: integral over (t0, t) of K(T,s) K(t,s) ds by adaptive quadrature.
double covariance_limit(const KernelSpec& kernel, double t0, double t, double T);

ConvergenceReport convergence_table(const KernelSpec& kernel, const InnovationLaw& law,
                                    double t0,
                                    const std::vector<std::pair<double, double>>& pairs,
                                    const std::vector<long>& n_list);

// Monte Carlo moment check of Z(t) under the market's law with J and drift off.
// Paths are drawn from 64 fixed substreams of the seed, so the result is a pure
// function of (market, grid, t, num_paths, seed).
McMomentCheck mc_moment_check(const MarketSpec& market, const GridSpec& grid, double t,
                              std::uint64_t num_paths, std::uint64_t seed);

} // namespace freelunch
