#pragma once

#include <functional>
#include <vector>

#include "freelunch/innovation.hpp"
#include "freelunch/kernel.hpp"
#include "freelunch/rng.hpp"

namespace freelunch {

// Uniform grid with spacing 1/n anchored at the entry time:
// s_i = t0 + (i − floor(n·t0))/n, so s_{j0} = t0 with j0 = floor(n·t0).
struct GridSpec {
  long n = 1;
  double t0 = 0.0;
  double T = 1.0;

  static GridSpec make(long n, double t0, double T);

  long j0() const;
  // Absolute index j ≥ j0 → grid time s_j.
  double time_at(long j) const;
  // Largest absolute index with s_j ≤ T.
  long last_index() const;
  // Number of grid times in [t0, T].
  long size() const { return last_index() - j0() + 1; }
};

std::vector<double> grid_times(const GridSpec& grid);

struct MarketSpec;

// K(s_jt, s_is); difference kernels are evaluated at the exact rational lag
// (jt−is)/n so equal lags give bitwise-equal values on every grid.
double kernel_on_grid(const MarketSpec& market, const GridSpec& grid, long jt, long is);

// Strictly increasing price map G.
class PriceMap {
public:
  enum class Kind { Identity, Exponential, Custom };

  static PriceMap identity();
  static PriceMap exponential();
  // Piecewise-linear map through (x, g) samples; both columns strictly
  // increasing; evaluation outside the sampled range throws
  // PriceMapDomainError.
  static PriceMap custom(std::vector<double> xs, std::vector<double> gs);

  double operator()(double x) const;
  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& sample_xs() const noexcept { return xs_; }
  const std::vector<double>& sample_gs() const noexcept { return gs_; }

private:
  PriceMap() = default;
  Kind kind_ = Kind::Identity;
  std::vector<double> xs_, gs_;
};

// Transaction-cost structure: the cost of a round trip of u units bought at
// price b and sold at price c is λ·(lower(u,b) + upper(u,b,c)).
struct CostStructure {
  std::function<double(double u, double buy)> lower;
  std::function<double(double u, double buy, double sell)> upper;

  static CostStructure unit(); // lower ≡ 0, upper ≡ 1, so the round trip costs λ
};

// How x_j groups the drift term and the increment of the past contribution.
// ProofBracket: x_j = (1/n)·a(s_j) + [J(s_{j+1}) − J(s_j)]  (default)
// PrintedBracket: x_j = (1/n)·[a(s_j) + J(s_{j+1}) − J(s_j)]
enum class XGrouping { ProofBracket, PrintedBracket };

struct MarketSpec {
  MarketSpec(KernelSpec kernel_in, InnovationLaw law_in);
  MarketSpec(KernelSpec kernel_in, LawProvider law_in);

  KernelSpec kernel;
  LawProvider law;
  std::function<double(double)> drift; // a(·), default ≡ 0
  std::function<double(double)> past;  // J(·), default ≡ 0
  PriceMap price_map = PriceMap::identity();
  double lambda = 0.0;
  CostStructure costs = CostStructure::unit();
  XGrouping x_grouping = XGrouping::ProofBracket;
  double holder_exponent = 1.0; // regularity tag on J, carried as metadata
};

// Exact coefficients of the single-period net return at step j:
// return = x + Σ_i y_coeffs[i−j0]·ξ_{i+1} + z_coeff·ξ_{j+1} − λ.
struct PathDecomposition {
  long j = 0;                   // absolute step index
  double x = 0.0;               // drift + past-increment term
  std::vector<double> y_coeffs; // entry k is the coefficient of ξ_{j0+k+1}
  double z_coeff = 0.0;         // coefficient of the fresh innovation ξ_{j+1}
};

PathDecomposition decompose(const MarketSpec& market, const GridSpec& grid, long j);

// One simulated path over the grid, with the innovations that produced it.
struct MarketPath {
  std::vector<double> times; // s_{j0} .. s_{jmax}
  std::vector<double> z;     // discretised noise
  std::vector<double> a;     // drift Riemann sum, a[0] = 0
  std::vector<double> s;     // price = G(a + z)
  std::vector<double> xi;    // innovations consumed, size = times.size() − 1
};

MarketPath simulate_path(const MarketSpec& market, const GridSpec& grid, Rng& rng);

// Noise component only: Z(s_j) = J(s_j) + Σ_{i<j} K(s_j,s_i)·n^{−1/2}·ξ_{i+1}.
std::vector<double> simulate_noise_path(const MarketSpec& market, const GridSpec& grid,
                                        Rng& rng);

// Price component only: S = G(A + Z) elementwise.
std::vector<double> price_path(const MarketSpec& market, const GridSpec& grid, Rng& rng);

// Net return of buying one unit at s_j and selling at s_{j+1}, given the
// innovation history (ξ_{j0+1}..ξ_j) and the fresh innovation ξ_{j+1}.
double single_period_return(const MarketSpec& market, const GridSpec& grid, long j,
                            const std::vector<double>& history, double innovation);

} // namespace freelunch
