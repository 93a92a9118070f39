#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "freelunch/innovation.hpp"
#include "freelunch/kernel.hpp"
#include "freelunch/lattice.hpp"

namespace freelunch {

enum class Verdict { None, ArbitrageAtBoundary, ArbitrageStrict };

const char* verdict_name(Verdict v);

// One-period wait-buy-sell certificate at step j_star. λ̄ is the critical
// transaction cost: the worst-case net return on the witness event is
// λ̄ − λ, so λ̄ > λ means strictly positive return on every outcome there.
struct ArbitrageCertificate {
  long j_star = -1;
  double lambda = 0.0;
  double lambda_bar = 0.0;
  double esssup_xy = 0.0;
  double essinf_z = 0.0;
  std::vector<double> witness; // history atoms attaining esssup(x+y)
  Verdict verdict = Verdict::None;
};

// Best history atom for ξ_{i+1} when selling at step j+1: the essential
// supremum M when the kernel increment is nonnegative, else −m.
double best_history_atom(const MarketSpec& market, const GridSpec& grid, long i, long j);

// Worst fresh-innovation atom for ξ_{j+1}: −m when K(s_{j+1},s_j) ≥ 0, else M.
double worst_innovation_atom(const MarketSpec& market, const GridSpec& grid, long j);

struct EsssupXY {
  double value = 0.0;
  std::vector<double> witness;
};

// Exact essential supremum of x_j + y_j with its attaining history. Exact
// because the innovations are independent and y_j is linear in them.
EsssupXY esssup_xy(const MarketSpec& market, const GridSpec& grid, long j);

// λ̄_j = esssup(x_j + y_j) + essinf z_{j+1}.
double lambda_bar(const MarketSpec& market, const GridSpec& grid, long j);

// One scan-table row: the step's bounds plus its verdict against λ.
struct StepReport {
  long j = 0;
  double lambda_bar = 0.0;
  double esssup_xy = 0.0;
  double essinf_z = 0.0;
  Verdict verdict = Verdict::None;
};

StepReport classify_step(const MarketSpec& market, const GridSpec& grid, long j,
                         double lambda);

// Smallest j ≤ j_max whose λ̄ exceeds (strict) or meets (boundary) λ.
ArbitrageCertificate search_arbitrage(const MarketSpec& market, const GridSpec& grid,
                                      long j_max, double lambda);

// Terminal-time criterion: buy at the second-to-last grid step before T and
// compare the kernel-derivative integral against the fresh-innovation bound.
struct IntegralCriterion {
  double lhs = 0.0; // ∫ K'_1(T,s)·Γ(T,s) ds over (t0, T)
  double rhs = 0.0; // |K(s_{j*+1}, s_{j*})·β_{j*}|
  long j_star = -1;
  double epsilon_bar = 0.0;
  bool holds = false;              // lhs > rhs + ε̄
  bool sell_after_horizon = false; // s_{j*+1} > T under the literal index formula
};

IntegralCriterion integral_criterion(const MarketSpec& market, const GridSpec& grid,
                                     double T, double epsilon_bar);

// Symmetric-law variant at one terminal time T: the bracket value
// ∫ |K'_1(T,s)| ds − |K(T, T−1/n)|, positive iff the criterion detects an
// arbitrage route at T. The integral runs over the same step-function support
// as integral_criterion; literal_tail=true extends it to all of (t0, T).
double symmetric_criterion(const MarketSpec& market, const GridSpec& grid, double T,
                           bool literal_tail = false);

struct AsymptoticReport {
  std::vector<long> n_sequence;
  double min_abs_kappa_inv_n = 0.0; // finite-sequence min of |κ(1/n_ℓ)|
  bool kappa_changes_sign = false;
  double total_variation = 0.0; // TV of κ on (0,∞), +∞ possible
  double min_finite_bound = 0.0; // finite-sequence min of |κ(1/n_ℓ)|·max(M,m)/min(M,m)
  double symbolic_liminf_abs = 0.0; // |κ(0⁺)|
  double symbolic_bound = 0.0;      // |κ(0⁺)|·max(M,m)/min(M,m) at the largest n
  bool condition1 = false; // κ(0⁺) = 0, or some |κ(1/n_ℓ)| = 0, or κ changes sign
  bool condition2 = false; // TV(0,∞) > symbolic bound
  bool arbitrage_for_large_n = false;
  std::string conclusion;
};

// Grid-spacing arbitrage detector over a sequence of n values; liminfs are
// taken as finite minima plus the closed-form limit of each built-in κ.
AsymptoticReport check_asymptotic_arbitrage(const KernelSpec& kernel, const LawProvider& law,
                               const std::vector<long>& n_sequence, double nu = 0.0);

// Smallest number of steps an fBm-type kernel with exponent H needs before a
// one-period sale can beat the fresh-innovation downside: the least integer
// strictly above 2^{1/(H−1/2)}, or ≥ it when the bounds carry point mass.
long min_arbitrage_steps_fbm(double hurst, bool point_mass);

struct FlvrEntry {
  long j = 0;
  double ratio = 0.0;           // essinf return / expected return on the event
  double expected_return = 0.0; // x + esssup y + E[z], must be > 0
  double epsilon = 0.0;         // event half-width; 0 = exact witness attainment
};

struct FlvrReport {
  std::vector<FlvrEntry> entries;
  double achieved_delta = 0.0; // smallest δ some entry achieves (ratio ≥ −δ)
  std::vector<std::pair<double, bool>> targets; // (δ, met by some entry)
  bool x_all_nonnegative = true;
  bool kappa_vanishes_at_infinity = false;
};

// Vanishing-risk scan at zero transaction cost under symmetric bounds; throws
// HypothesisViolated naming the failed standing hypothesis.
FlvrReport flvr_scan(const MarketSpec& market, const GridSpec& grid, long j_max,
                     const std::vector<double>& delta_targets, double nu = 0.0);

// True when the vanishing-risk hypotheses hold; otherwise false with the
// failed hypothesis name in *which (if given).
bool flvr_hypotheses(const MarketSpec& market, const GridSpec& grid, double nu = 0.0,
                     std::string* which = nullptr);

// Largest transaction-cost scale guaranteed safe when a simple-model return
// of at least c is available at buy point ζ_*: (G(ζ_*+c) − G(ζ_*))/(Λ^*+Λ_*).
double transaction_cost_bound(const PriceMap& price_map, double zeta_star, double c,
                              double lambda_lower, double lambda_upper);

struct OracleResult {
  double max_worst_return = 0.0;   // max over histories of worst-case net return
  std::vector<double> history;     // attaining history (deterministic tie-break)
  double essinf_innovation = 0.0;  // exact essinf of the fresh-innovation term
};

// Exhaustive enumeration of every history atom-combination; must reproduce
// lambda_bar(j) − λ exactly.
OracleResult brute_force_oracle(const MarketSpec& market, const GridSpec& grid, long j,
                                double lambda, std::uint64_t cap = 10000000);

// Expected net return on the witness event: x + esssup y + E[z].
double expected_return_on_event(const MarketSpec& market, const GridSpec& grid, long j);

} // namespace freelunch
