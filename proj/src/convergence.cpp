#include "freelunch/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "freelunch/errors.hpp"
#include "freelunch/quadrature.hpp"
#include "freelunch/rng.hpp"

namespace freelunch {
namespace {

constexpr int kMcChunks = 64;

long snapped_index(long n, double t) {
  // The +1e−9 absorbs representation error in n·t so grid-compatible times
  // land on their own index.
  return static_cast<long>(std::floor(static_cast<double>(n) * t + 1e-9));
}

void require_standard_law(const InnovationLaw& law) {
  if (std::abs(law.mean()) > 1e-12 || std::abs(law.second_moment() - 1.0) > 1e-12) {
    throw DomainError("covariance_discrete: law must be centred with unit variance");
  }
}

// Central moments of the law, exact over the atoms.
void central_moments(const InnovationLaw& law, double* mu2, double* mu4) {
  const double mu = law.mean();
  double m2 = 0.0, m4 = 0.0;
  for (const auto& a : law.atoms()) {
    const double d = a.value - mu;
    m2 += a.prob * d * d;
    m4 += a.prob * d * d * d * d;
  }
  *mu2 = m2;
  *mu4 = m4;
}

std::string law_id_of(const InnovationLaw& law) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "atoms=%zu;min=%.17g;max=%.17g", law.size(),
                law.atoms().front().value, law.atoms().back().value);
  return buf;
}

} // namespace

double covariance_discrete(const MarketSpec& market, const GridSpec& grid, double t,
                           double T) {
  if (t > T) std::swap(t, T);
  if (!(t >= grid.t0)) throw DomainError("covariance_discrete: times must start at t0");
  if (!std::isfinite(T)) throw DomainError("covariance_discrete: non-finite time");
  require_standard_law(market.law(grid.n));

  const double n = static_cast<double>(grid.n);
  const long it = snapped_index(grid.n, t);
  const long iT = snapped_index(grid.n, T);
  const double t_snap = static_cast<double>(it) / n;
  const double T_snap = static_cast<double>(iT) / n;

  double sum = 0.0;
  for (long i = grid.j0(); i < it; ++i) {
    const double s = grid.time_at(i);
    sum += market.kernel.eval(T_snap, s) * market.kernel.eval(t_snap, s) / n;
  }
  return sum;
}

double covariance_limit(const KernelSpec& kernel, double t0, double t, double T) {
  if (t > T) std::swap(t, T);
  if (!(t0 >= 0.0) || !(t > t0)) throw DomainError("covariance_limit: requires t > t0 ≥ 0");
  auto f = [&](double s) { return kernel.eval(T, s) * kernel.eval(t, s); };
  return integrate(f, t0, t, 1e-9).value;
}

ConvergenceReport convergence_table(const KernelSpec& kernel, const InnovationLaw& law,
                                    double t0,
                                    const std::vector<std::pair<double, double>>& pairs,
                                    const std::vector<long>& n_list) {
  if (pairs.empty()) throw DomainError("convergence_table: no time pairs");
  if (n_list.empty()) throw DomainError("convergence_table: empty n list");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (n_list[k] <= n_list[k - 1]) {
      throw DomainError("convergence_table: n list must be increasing");
    }
  }

  ConvergenceReport rep;
  rep.kernel_id = kernel.name();
  rep.law_id = law_id_of(law);
  rep.t0 = t0;
  rep.pairs = pairs;
  rep.n_list = n_list;

  const MarketSpec market(kernel, law);
  for (const auto& [pt, pT] : pairs) {
    const double t = std::min(pt, pT);
    const double T = std::max(pt, pT);
    const double limit = covariance_limit(kernel, t0, t, T);
    for (long n : n_list) {
      const GridSpec grid = GridSpec::make(n, t0, T);
      ConvergenceRow row;
      row.n = n;
      row.t = t;
      row.T = T;
      row.discrete = covariance_discrete(market, grid, t, T);
      row.limit = limit;
      row.abs_error = std::abs(row.discrete - limit);
      rep.rows.push_back(row);
    }
  }

  // Least-squares slope of log error against log n; zero errors carry no
  // information about the rate and are left out.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long pts = 0;
  for (const auto& row : rep.rows) {
    if (!(row.abs_error > 0.0)) continue;
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.abs_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++pts;
  }
  if (pts >= 2) {
    const double denom = pts * sxx - sx * sx;
    if (denom > 0.0) {
      rep.fitted_decay_exponent = -(pts * sxy - sx * sy) / denom;
    }
  }
  return rep;
}

McMomentCheck mc_moment_check(const MarketSpec& market, const GridSpec& grid, double t,
                              std::uint64_t num_paths, std::uint64_t seed) {
  if (!(t >= grid.t0)) throw DomainError("mc_moment_check: t must be at least t0");
  if (num_paths == 0) throw DomainError("mc_moment_check: need at least one path");
  const InnovationLaw law = market.law(grid.n);

  const long it = snapped_index(grid.n, t);
  const double t_snap = static_cast<double>(it) / static_cast<double>(grid.n);
  const double root_n = std::sqrt(static_cast<double>(grid.n));
  std::vector<double> coeff;
  for (long i = grid.j0(); i < it; ++i) {
    coeff.push_back(market.kernel.eval(t_snap, grid.time_at(i)) / root_n);
  }

  double mu2 = 0.0, mu4 = 0.0;
  central_moments(law, &mu2, &mu4);
  double c2 = 0.0, c4 = 0.0, c1 = 0.0;
  for (double c : coeff) {
    c1 += c;
    c2 += c * c;
    c4 += c * c * c * c;
  }

  McMomentCheck out;
  out.num_paths = num_paths;
  out.analytic_mean = c1 * law.mean();
  out.analytic_variance = c2 * mu2;

  // Fixed 64-way chunking: chunk k draws from substream k of the seed and the
  // partial sums are reduced in chunk order, so the result does not depend on
  // how the chunks are scheduled.
  double chunk_sum[kMcChunks] = {0.0};
  double chunk_sumsq[kMcChunks] = {0.0};
  const std::uint64_t base = num_paths / kMcChunks;
  const std::uint64_t extra = num_paths % kMcChunks;
  for (int k = 0; k < kMcChunks; ++k) {
    const std::uint64_t paths = base + (static_cast<std::uint64_t>(k) < extra ? 1 : 0);
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(k)));
    for (std::uint64_t p = 0; p < paths; ++p) {
      double z = 0.0;
      for (double c : coeff) z += c * law.sample(rng);
      chunk_sum[k] += z;
      chunk_sumsq[k] += z * z;
    }
  }
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < kMcChunks; ++k) {
    sum += chunk_sum[k];
    sumsq += chunk_sumsq[k];
  }

  const double P = static_cast<double>(num_paths);
  out.empirical_mean = sum / P;
  out.empirical_variance = sumsq / P - out.empirical_mean * out.empirical_mean;

  // Exact central moments of Z over independent innovations.
  const double var_z = c2 * mu2;
  const double mu4_z = c4 * (mu4 - 3.0 * mu2 * mu2) + 3.0 * var_z * var_z;
  const double se_mean = std::sqrt(var_z / P);
  const double se_var = std::sqrt(std::max(0.0, mu4_z - var_z * var_z) / P);
  auto z_score = [](double diff, double se) {
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  out.z_mean = z_score(out.empirical_mean - out.analytic_mean, se_mean);
  out.z_variance = z_score(out.empirical_variance - out.analytic_variance, se_var);
  return out;
}

} // namespace freelunch
