#include "freelunch/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "freelunch/errors.hpp"

namespace freelunch {

double kernel_on_grid(const MarketSpec& market, const GridSpec& grid, long jt, long is) {
  if (is >= jt) return 0.0;
  if (market.kernel.is_difference_kernel()) {
    return market.kernel.kappa(static_cast<double>(jt - is) / static_cast<double>(grid.n));
  }
  return market.kernel.eval(grid.time_at(jt), grid.time_at(is));
}

GridSpec GridSpec::make(long n, double t0, double T) {
  if (n < 1) throw DomainError("grid: n must be a positive integer");
  if (!std::isfinite(t0) || !(t0 >= 0.0)) {
    throw DomainError("grid: entry time t0 must be finite and nonnegative");
  }
  if (!std::isfinite(T) || !(T > t0)) {
    throw DomainError("grid: horizon T must be finite and exceed t0");
  }
  GridSpec g;
  g.n = n;
  g.t0 = t0;
  g.T = T;
  return g;
}

long GridSpec::j0() const {
  return static_cast<long>(std::floor(static_cast<double>(n) * t0));
}

double GridSpec::time_at(long j) const {
  return t0 + static_cast<double>(j - j0()) / static_cast<double>(n);
}

long GridSpec::last_index() const {
  // +1e−9 absorbs round-off in n·(T−t0) when T−t0 is an exact multiple of 1/n.
  const double steps = static_cast<double>(n) * (T - t0) + 1e-9;
  return j0() + static_cast<long>(std::floor(steps));
}

std::vector<double> grid_times(const GridSpec& grid) {
  std::vector<double> times;
  const long j0 = grid.j0(), jmax = grid.last_index();
  times.reserve(static_cast<std::size_t>(jmax - j0 + 1));
  for (long j = j0; j <= jmax; ++j) times.push_back(grid.time_at(j));
  return times;
}

PriceMap PriceMap::identity() {
  PriceMap g;
  g.kind_ = Kind::Identity;
  return g;
}

PriceMap PriceMap::exponential() {
  PriceMap g;
  g.kind_ = Kind::Exponential;
  return g;
}

PriceMap PriceMap::custom(std::vector<double> xs, std::vector<double> gs) {
  if (xs.size() != gs.size()) {
    throw LengthMismatch("price map: sample columns differ in length");
  }
  if (xs.size() < 2) throw DomainError("price map: needs at least two samples");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) {
      throw DomainError("price map: sample arguments must be strictly increasing");
    }
    if (!(gs[i] < gs[i + 1])) {
      throw DomainError("price map: sampled values must be strictly increasing");
    }
  }
  PriceMap g;
  g.kind_ = Kind::Custom;
  g.xs_ = std::move(xs);
  g.gs_ = std::move(gs);
  return g;
}

double PriceMap::operator()(double x) const {
  switch (kind_) {
    case Kind::Identity:
      return x;
    case Kind::Exponential:
      return std::exp(x);
    case Kind::Custom: {
      if (x < xs_.front() || x > xs_.back()) {
        throw PriceMapDomainError("price map: argument outside the sampled range");
      }
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return gs_.back();
      std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
      std::size_t lo = hi - 1;
      double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
      return gs_[lo] + w * (gs_[hi] - gs_[lo]);
    }
  }
  throw DomainError("price map: unknown kind");
}

CostStructure CostStructure::unit() {
  CostStructure c;
  c.lower = [](double, double) { return 0.0; };
  c.upper = [](double, double, double) { return 1.0; };
  return c;
}

MarketSpec::MarketSpec(KernelSpec kernel_in, InnovationLaw law_in)
    : kernel(std::move(kernel_in)),
      law(constant_law_provider(std::move(law_in))),
      drift([](double) { return 0.0; }),
      past([](double) { return 0.0; }) {}

MarketSpec::MarketSpec(KernelSpec kernel_in, LawProvider law_in)
    : kernel(std::move(kernel_in)),
      law(std::move(law_in)),
      drift([](double) { return 0.0; }),
      past([](double) { return 0.0; }) {}

PathDecomposition decompose(const MarketSpec& market, const GridSpec& grid, long j) {
  const long j0 = grid.j0();
  if (j < j0) throw DomainError("decompose: step index precedes the entry index");
  const double n = static_cast<double>(grid.n);
  const double sqrt_n = std::sqrt(n);

  PathDecomposition dec;
  dec.j = j;
  dec.y_coeffs.reserve(static_cast<std::size_t>(j - j0));
  for (long i = j0; i < j; ++i) {
    const double next = kernel_on_grid(market, grid, j + 1, i);
    const double cur = kernel_on_grid(market, grid, j, i);
    const double c = (next - cur) / sqrt_n;
    if (!std::isfinite(c)) {
      throw SingularKernelValue("decompose: kernel value not finite on the grid");
    }
    dec.y_coeffs.push_back(c);
  }
  const double kz = kernel_on_grid(market, grid, j + 1, j);
  if (!std::isfinite(kz)) {
    throw SingularKernelValue("decompose: kernel value not finite on the grid");
  }
  dec.z_coeff = kz / sqrt_n;

  const double sj = grid.time_at(j);
  const double sj1 = grid.time_at(j + 1);
  const double past_step = market.past(sj1) - market.past(sj);
  dec.x = (market.x_grouping == XGrouping::ProofBracket)
              ? market.drift(sj) / n + past_step
              : (market.drift(sj) + past_step) / n;
  return dec;
}

MarketPath simulate_path(const MarketSpec& market, const GridSpec& grid, Rng& rng) {
  const long j0 = grid.j0(), jmax = grid.last_index();
  const std::size_t count = static_cast<std::size_t>(jmax - j0 + 1);
  const double n = static_cast<double>(grid.n);
  const double inv_sqrt_n = 1.0 / std::sqrt(n);
  const InnovationLaw law = market.law(grid.n);

  MarketPath p;
  p.times.resize(count);
  p.z.resize(count);
  p.a.resize(count);
  p.s.resize(count);
  p.xi.resize(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) p.xi[k] = law.sample(rng);

  for (long j = j0; j <= jmax; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j - j0);
    p.times[idx] = grid.time_at(j);
    double acc = 0.0;
    for (long i = j0; i < j; ++i) {
      acc += kernel_on_grid(market, grid, j, i) * inv_sqrt_n * p.xi[static_cast<std::size_t>(i - j0)];
    }
    p.z[idx] = market.past(p.times[idx]) + acc;
    p.a[idx] = (idx == 0) ? 0.0 : p.a[idx - 1] + market.drift(p.times[idx - 1]) / n;
    p.s[idx] = market.price_map(p.a[idx] + p.z[idx]);
  }
  return p;
}

std::vector<double> simulate_noise_path(const MarketSpec& market, const GridSpec& grid,
                                        Rng& rng) {
  return simulate_path(market, grid, rng).z;
}

std::vector<double> price_path(const MarketSpec& market, const GridSpec& grid, Rng& rng) {
  return simulate_path(market, grid, rng).s;
}

double single_period_return(const MarketSpec& market, const GridSpec& grid, long j,
                            const std::vector<double>& history, double innovation) {
  const long j0 = grid.j0();
  if (j < j0) throw DomainError("single_period_return: step precedes the entry index");
  if (static_cast<long>(history.size()) != j - j0) {
    throw LengthMismatch("single_period_return: history length must equal j − j0");
  }
  const double n = static_cast<double>(grid.n);
  const double inv_sqrt_n = 1.0 / std::sqrt(n);

  // Realised buy/sell arguments, needed for the price map and the cost terms.
  double drift_sum = 0.0;
  double z_buy = 0.0, z_sell = 0.0;
  for (long i = j0; i < j; ++i) {
    drift_sum += market.drift(grid.time_at(i));
    const double h = history[static_cast<std::size_t>(i - j0)];
    z_buy += kernel_on_grid(market, grid, j, i) * inv_sqrt_n * h;
    z_sell += kernel_on_grid(market, grid, j + 1, i) * inv_sqrt_n * h;
  }
  z_sell += kernel_on_grid(market, grid, j + 1, j) * inv_sqrt_n * innovation;
  const double sj = grid.time_at(j), sj1 = grid.time_at(j + 1);
  const double buy_arg = drift_sum / n + market.past(sj) + z_buy;
  const double sell_arg = (drift_sum + market.drift(sj)) / n + market.past(sj1) + z_sell;
  const double buy_price = market.price_map(buy_arg);
  const double sell_price = market.price_map(sell_arg);
  const double cost =
      market.lambda *
      (market.costs.lower(1.0, buy_price) + market.costs.upper(1.0, buy_price, sell_price));

  if (market.price_map.kind() == PriceMap::Kind::Identity) {
    // Exact coefficient form x + y·history + z·innovation, as in the
    // decomposition itself.
    PathDecomposition dec = decompose(market, grid, j);
    double r = dec.x;
    for (std::size_t k = 0; k < history.size(); ++k) r += dec.y_coeffs[k] * history[k];
    r += dec.z_coeff * innovation;
    return r - cost;
  }
  return (sell_price - buy_price) - cost;
}

} // namespace freelunch
