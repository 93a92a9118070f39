#include "freelunch/lunch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freelunch/errors.hpp"
#include "freelunch/quadrature.hpp"

namespace freelunch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Compensated accumulator. For the telescoping sums that arise here the
// compensated total is exact, which is what lets verdicts use plain
// comparisons instead of tolerances.
struct NeumaierSum {
  double s = 0.0;
  double c = 0.0;
  void add(double t) {
    const double u = s + t;
    if (std::abs(s) >= std::abs(t)) {
      c += (s - u) + t;
    } else {
      c += (t - u) + s;
    }
    s = u;
  }
  double value() const { return s + c; }
};

// Everything the detectors need at one step, computed once. The summation
// order here is the reference order: the brute-force oracle accumulates the
// same terms the same way, so agreement is exact, not approximate.
struct StepAnalysis {
  PathDecomposition dec;
  double atom_hi = 0.0; // largest atom value, M
  double atom_lo = 0.0; // smallest atom value, −m
  double esssup_xy = 0.0;
  double esssup_y = 0.0;
  std::vector<double> witness;
  double essinf_z = 0.0;
  double lambda_bar = 0.0;
  double expected_z = 0.0;
  NeumaierSum exact; // x, the y terms, and essinf z, compensated
};

StepAnalysis analyze_step(const MarketSpec& market, const GridSpec& grid, long j) {
  StepAnalysis a;
  a.dec = decompose(market, grid, j);
  const InnovationLaw law = market.law(grid.n);
  a.atom_hi = law.atoms().back().value;
  a.atom_lo = law.atoms().front().value;

  double sum = a.dec.x;
  double ysum = 0.0;
  a.exact.add(a.dec.x);
  a.witness.reserve(a.dec.y_coeffs.size());
  for (double yc : a.dec.y_coeffs) {
    const double atom = (yc >= 0.0) ? a.atom_hi : a.atom_lo;
    a.witness.push_back(atom);
    const double term = yc * atom;
    sum += term;
    ysum += term;
    a.exact.add(term);
  }
  a.esssup_xy = sum;
  a.esssup_y = ysum;

  const double worst = (a.dec.z_coeff >= 0.0) ? a.atom_lo : a.atom_hi;
  a.essinf_z = a.dec.z_coeff * worst;
  a.lambda_bar = sum + a.essinf_z;
  a.expected_z = a.dec.z_coeff * law.mean();
  a.exact.add(a.essinf_z);
  return a;
}

// Verdict of one analyzed step against λ. Classifies on the compensated total
// so the comparison reflects the real arithmetic of the computed kernel
// values: telescoping cancellations come out exactly zero, while a genuinely
// negative λ̄ − λ of any magnitude stays negative instead of drowning in naive
// summation noise.
Verdict classify(const StepAnalysis& a, double lambda, std::size_t law_size) {
  NeumaierSum m = a.exact;
  m.add(-lambda);
  const double margin = m.value();
  if (margin > 0.0) return Verdict::ArbitrageStrict;
  if (margin == 0.0 && a.dec.z_coeff != 0.0 && law_size >= 2) {
    // λ̄ = λ: the worst outcome on the event breaks even, every other fresh
    // innovation strictly gains. Degenerate z or a single-atom law would make
    // the gain vanish everywhere, so those stay verdict None.
    return Verdict::ArbitrageAtBoundary;
  }
  return Verdict::None;
}

// inf over θ ≥ 0 of |κ(θ)|; exact for the monotone variants and for tables.
double kappa_infimum_abs(const KernelSpec& kernel) {
  if (kernel.variant() == KernelVariant::Tabulated) {
    double best = kInf;
    for (double v : kernel.table_kappas()) best = std::min(best, std::abs(v));
    return best;
  }
  return std::min(std::abs(kernel.kappa_zero_limit()),
                  std::abs(kernel.kappa_infinity_limit()));
}

// Literal sell-step index for horizon T: j*+1 = floor(nT − n·t0 + floor(n·t0)).
long sell_index_for(const GridSpec& grid, double T) {
  const double n = static_cast<double>(grid.n);
  return static_cast<long>(std::floor(n * T - n * grid.t0 + std::floor(n * grid.t0)));
}

} // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ArbitrageStrict:
      return "strict";
    case Verdict::ArbitrageAtBoundary:
      return "boundary";
    case Verdict::None:
      return "none";
  }
  return "none";
}

double best_history_atom(const MarketSpec& market, const GridSpec& grid, long i, long j) {
  const long j0 = grid.j0();
  if (!(j0 <= i && i < j)) {
    throw DomainError("best_history_atom: requires j0 <= i < j");
  }
  const InnovationLaw law = market.law(grid.n);
  const double next = kernel_on_grid(market, grid, j + 1, i);
  const double cur = kernel_on_grid(market, grid, j, i);
  return (next >= cur) ? law.M() : -law.m();
}

double worst_innovation_atom(const MarketSpec& market, const GridSpec& grid, long j) {
  if (j < grid.j0()) throw DomainError("worst_innovation_atom: step precedes entry index");
  const InnovationLaw law = market.law(grid.n);
  const double kz = kernel_on_grid(market, grid, j + 1, j);
  return (kz >= 0.0) ? -law.m() : law.M();
}

EsssupXY esssup_xy(const MarketSpec& market, const GridSpec& grid, long j) {
  StepAnalysis a = analyze_step(market, grid, j);
  return {a.esssup_xy, std::move(a.witness)};
}

double lambda_bar(const MarketSpec& market, const GridSpec& grid, long j) {
  return analyze_step(market, grid, j).lambda_bar;
}

StepReport classify_step(const MarketSpec& market, const GridSpec& grid, long j,
                         double lambda) {
  if (lambda < 0.0) throw DomainError("classify_step: negative transaction cost");
  const StepAnalysis a = analyze_step(market, grid, j);
  StepReport r;
  r.j = j;
  r.lambda_bar = a.lambda_bar;
  r.esssup_xy = a.esssup_xy;
  r.essinf_z = a.essinf_z;
  r.verdict = classify(a, lambda, market.law(grid.n).size());
  return r;
}

ArbitrageCertificate search_arbitrage(const MarketSpec& market, const GridSpec& grid,
                                      long j_max, double lambda) {
  if (lambda < 0.0) throw DomainError("search_arbitrage: negative transaction cost");
  const long j0 = grid.j0();
  if (j_max < j0) throw DomainError("search_arbitrage: j_max precedes entry index");
  const InnovationLaw law = market.law(grid.n);

  ArbitrageCertificate best;
  best.lambda = lambda;
  bool have_best = false;
  for (long j = j0; j <= j_max; ++j) {
    StepAnalysis a = analyze_step(market, grid, j);
    const Verdict v = classify(a, lambda, law.size());
    if (v != Verdict::None || !have_best || a.lambda_bar > best.lambda_bar) {
      best.j_star = j;
      best.lambda_bar = a.lambda_bar;
      best.esssup_xy = a.esssup_xy;
      best.essinf_z = a.essinf_z;
      best.witness = std::move(a.witness);
      best.verdict = v;
      have_best = true;
    }
    if (v != Verdict::None) return best;
  }
  // No qualifying step: report the best λ̄ seen, verdict None.
  return best;
}

IntegralCriterion integral_criterion(const MarketSpec& market, const GridSpec& grid,
                                     double T, double epsilon_bar) {
  if (!(T > grid.t0)) throw DomainError("integral_criterion: T must exceed t0");
  if (epsilon_bar < 0.0) throw DomainError("integral_criterion: epsilon must be nonnegative");
  const long j0 = grid.j0();
  const long sell = sell_index_for(grid, T);
  const long j_star = sell - 1;
  if (j_star < j0) {
    throw DomainError("integral_criterion: horizon leaves no buy step on the grid");
  }

  IntegralCriterion out;
  out.j_star = j_star;
  out.epsilon_bar = epsilon_bar;
  out.sell_after_horizon =
      grid.time_at(sell) > T + 1e-12 * std::max(1.0, std::abs(T));

  // Γ(T,·) is the left-continuous step taking value γ_{i,j*} at s_i, zero from
  // s_{j*} on; its cells are (s_{i−1}, s_i] for i = j0+1 .. j*−1.
  double lhs = 0.0;
  const bool diff = market.kernel.is_difference_kernel();
  for (long i = j0 + 1; i <= j_star - 1; ++i) {
    const double gamma_i = best_history_atom(market, grid, i, j_star);
    double cell;
    if (diff) {
      // ∫ over the cell of K'_1(T,s) ds = κ(T−s_{i−1}) − κ(T−s_i)
      cell = market.kernel.kappa(T - grid.time_at(i - 1)) -
             market.kernel.kappa(T - grid.time_at(i));
    } else {
      auto f = [&](double s) { return market.kernel.deriv_t(T, s); };
      cell = integrate(f, grid.time_at(i - 1), grid.time_at(i), 1e-10).value;
    }
    lhs += gamma_i * cell;
  }
  out.lhs = lhs;

  const double kz = kernel_on_grid(market, grid, sell, j_star);
  const double beta = worst_innovation_atom(market, grid, j_star);
  out.rhs = std::abs(kz * beta);
  out.holds = out.lhs > out.rhs + epsilon_bar;
  return out;
}

double symmetric_criterion(const MarketSpec& market, const GridSpec& grid, double T,
                           bool literal_tail) {
  if (!(T > grid.t0)) throw DomainError("symmetric_criterion: T must exceed t0");
  const long j0 = grid.j0();
  const long j_star = sell_index_for(grid, T) - 1;
  if (j_star < j0) {
    throw DomainError("symmetric_criterion: horizon leaves no buy step on the grid");
  }

  double integral = 0.0;
  if (market.kernel.is_difference_kernel()) {
    if (literal_tail) {
      // ∫_{t0}^{T} |κ'(T−s)| ds, the full total variation up to the diagonal.
      integral = market.kernel.total_variation(0.0, T - grid.t0);
    } else if (j_star - 1 > j0) {
      const double upper_s = grid.time_at(j_star - 1);
      integral = market.kernel.total_variation(T - upper_s, T - grid.t0);
    }
  } else {
    const double alpha = market.kernel.hurst() - 0.5;
    if (literal_tail) {
      // Substitute u = T − s to absorb the diagonal power.
      auto g = [&](double u) { return std::pow(T / (T - u), alpha); };
      integral = integrate_left_power(g, 0.0, T - grid.t0, alpha - 1.0, 1e-10).value;
    } else if (j_star - 1 > j0) {
      auto f = [&](double s) { return market.kernel.deriv_t(T, s); };
      integral = integrate(f, grid.t0, grid.time_at(j_star - 1), 1e-10).value;
    }
  }
  const double near_diag = market.kernel.eval(T, T - 1.0 / static_cast<double>(grid.n));
  return integral - std::abs(near_diag);
}

AsymptoticReport check_asymptotic_arbitrage(const KernelSpec& kernel, const LawProvider& law,
                               const std::vector<long>& n_sequence, double nu) {
  if (!kernel.is_difference_kernel()) {
    throw NonDifferenceKernel("check_asymptotic_arbitrage: kernel is not of difference form");
  }
  if (n_sequence.empty()) throw DomainError("check_asymptotic_arbitrage: empty n sequence");
  if (nu < 0.0) throw DomainError("check_asymptotic_arbitrage: nu must be nonnegative");

  AsymptoticReport rep;
  rep.n_sequence = n_sequence;
  rep.kappa_changes_sign = kernel.changes_sign();
  rep.total_variation = kernel.total_variation(0.0, kInf);

  double min_abs = kInf;
  double min_bound = kInf;
  double last_ratio = 1.0;
  long n_last = 0;
  for (long n : n_sequence) {
    if (n < 1) throw DomainError("check_asymptotic_arbitrage: n values must be positive");
    const InnovationLaw l = law(n);
    if (!(l.M() > nu) || !(l.m() > nu)) {
      throw HypothesisViolated(
          "nu_support", "law support must satisfy essinf < -nu < nu < esssup");
    }
    const double ratio = std::max(l.M(), l.m()) / std::min(l.M(), l.m());
    const double a = std::abs(kernel.kappa(1.0 / static_cast<double>(n)));
    min_abs = std::min(min_abs, a);
    min_bound = std::min(min_bound, a * ratio);
    if (n >= n_last) {
      n_last = n;
      last_ratio = ratio;
    }
  }
  rep.min_abs_kappa_inv_n = min_abs;
  rep.min_finite_bound = min_bound;
  rep.symbolic_liminf_abs = std::abs(kernel.kappa_zero_limit());
  rep.symbolic_bound = rep.symbolic_liminf_abs * last_ratio;
  rep.condition1 =
      rep.symbolic_liminf_abs == 0.0 || min_abs == 0.0 || rep.kappa_changes_sign;
  rep.condition2 = rep.total_variation > rep.symbolic_bound;
  rep.arbitrage_for_large_n = rep.condition1 || rep.condition2;
  if (rep.condition1 && rep.condition2) {
    rep.conclusion =
        "arbitrage for all large enough n, admitting small transaction costs "
        "(grid-value/sign and total-variation conditions both hold)";
  } else if (rep.condition1) {
    rep.conclusion =
        "arbitrage for all large enough n, admitting small transaction costs "
        "(grid-value/sign condition)";
  } else if (rep.condition2) {
    rep.conclusion =
        "arbitrage for all large enough n, admitting small transaction costs "
        "(total-variation condition)";
  } else {
    rep.conclusion = "no conclusion from these conditions";
  }
  return rep;
}

long min_arbitrage_steps_fbm(double hurst, bool point_mass) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    throw DomainError("min_arbitrage_steps_fbm: H must lie in (1/2,1)");
  }
  const double e = hurst - 0.5;
  const double x = std::exp2(1.0 / e);
  if (!(x < 0x1p52)) {
    throw DomainError("min_arbitrage_steps_fbm: step count exceeds the resolvable range");
  }
  // Seed at the real-arithmetic crossing 2^{1/(H−1/2)}, then settle the exact
  // integer against the same pow the lattice kernel evaluates, so the count
  // matches the first step a scan of the kernel itself can certify.
  const auto hits = [&](long steps) {
    const double k = std::pow(static_cast<double>(steps), e);
    return point_mass ? k >= 2.0 : k > 2.0;
  };
  long steps = std::max(2L, static_cast<long>(x));
  while (steps > 2 && hits(steps - 1)) --steps;
  while (!hits(steps)) ++steps;
  return steps;
}

bool flvr_hypotheses(const MarketSpec& market, const GridSpec& grid, double nu,
                     std::string* which) {
  auto fail = [&](const char* name) {
    if (which) *which = name;
    return false;
  };
  if (nu < 0.0) throw DomainError("flvr_hypotheses: nu must be nonnegative");
  if (!market.kernel.is_difference_kernel()) return fail("difference_kernel");
  if (market.lambda != 0.0) return fail("zero_transaction_cost");
  const InnovationLaw law = market.law(grid.n);
  const double M = law.M(), m = law.m();
  if (!(M > nu) || !(m > nu)) return fail("nu_support");
  if (std::abs(M - m) > 1e-12 * std::max(1.0, std::abs(M))) {
    return fail("symmetric_support");
  }
  if (!(law.mean() / m > -1.0)) return fail("mean_ratio");
  if (market.kernel.changes_sign()) return fail("kappa_single_sign");
  if (kappa_infimum_abs(market.kernel) != 0.0) return fail("kappa_infimum_zero");
  if (!(std::abs(market.kernel.kappa_zero_limit()) > 0.0)) {
    return fail("kappa_liminf_positive"); // κ(0⁺) = +∞ passes
  }
  return true;
}

FlvrReport flvr_scan(const MarketSpec& market, const GridSpec& grid, long j_max,
                     const std::vector<double>& delta_targets, double nu) {
  std::string which;
  if (!flvr_hypotheses(market, grid, nu, &which)) {
    throw HypothesisViolated(which, "vanishing-risk hypothesis failed: " + which);
  }
  const long j0 = grid.j0();
  if (j_max < j0) throw DomainError("flvr_scan: j_max precedes entry index");

  FlvrReport rep;
  rep.kappa_vanishes_at_infinity =
      std::abs(market.kernel.kappa_infinity_limit()) == 0.0;
  double max_ratio = -kInf;
  for (long j = j0; j <= j_max; ++j) {
    const StepAnalysis a = analyze_step(market, grid, j);
    if (a.dec.x < 0.0) rep.x_all_nonnegative = false;
    const double expected = a.esssup_xy + a.expected_z;
    if (!(expected > 0.0)) continue;
    FlvrEntry e;
    e.j = j;
    e.ratio = a.lambda_bar / expected;
    e.expected_return = expected;
    e.epsilon = 0.0;
    max_ratio = std::max(max_ratio, e.ratio);
    rep.entries.push_back(e);
  }
  rep.achieved_delta = rep.entries.empty() ? kInf : std::max(0.0, -max_ratio);
  for (double d : delta_targets) {
    if (d < 0.0) throw DomainError("flvr_scan: delta targets must be nonnegative");
    rep.targets.emplace_back(d, !rep.entries.empty() && rep.achieved_delta <= d);
  }
  return rep;
}

double transaction_cost_bound(const PriceMap& price_map, double zeta_star, double c,
                              double lambda_lower, double lambda_upper) {
  if (!(c > 0.0)) throw DomainError("transaction_cost_bound: c must be positive");
  const double denom = lambda_lower + lambda_upper;
  if (!(denom > 0.0)) {
    throw DomainError("transaction_cost_bound: cost denominator must be positive");
  }
  return (price_map(zeta_star + c) - price_map(zeta_star)) / denom;
}

OracleResult brute_force_oracle(const MarketSpec& market, const GridSpec& grid, long j,
                                double lambda, std::uint64_t cap) {
  const long j0 = grid.j0();
  if (j < j0) throw DomainError("brute_force_oracle: step precedes entry index");
  if (lambda < 0.0) throw DomainError("brute_force_oracle: negative transaction cost");
  const InnovationLaw law = market.law(grid.n);
  const std::size_t len = static_cast<std::size_t>(j - j0);
  const std::uint64_t arity = law.size();

  std::uint64_t total = 1;
  for (std::size_t k = 0; k < len; ++k) {
    if (total > cap / arity) {
      throw EnumerationTooLarge("brute_force_oracle: history space exceeds the cap");
    }
    total *= arity;
  }

  const PathDecomposition dec = decompose(market, grid, j);
  const double worst_atom =
      (dec.z_coeff >= 0.0) ? law.atoms().front().value : law.atoms().back().value;
  const double essinf_z = dec.z_coeff * worst_atom;

  // Position 0 (the oldest innovation) is the most significant digit, so
  // ascending enumeration is ascending lexicographic order; keeping ties with
  // >= leaves the lexicographically largest attaining history.
  std::vector<std::uint64_t> stride(len, 1);
  for (std::size_t k = len; k-- > 1;) stride[k - 1] = stride[k] * arity;

  OracleResult best;
  best.essinf_innovation = essinf_z;
  bool have = false;
  std::vector<double> hist(len);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    double sum = dec.x;
    for (std::size_t k = 0; k < len; ++k) {
      const std::uint64_t digit = (idx / stride[k]) % arity;
      const double atom = law.atoms()[static_cast<std::size_t>(digit)].value;
      hist[k] = atom;
      sum += dec.y_coeffs[k] * atom;
    }
    const double candidate = sum + essinf_z - lambda;
    if (!have || candidate >= best.max_worst_return) {
      best.max_worst_return = candidate;
      best.history = hist;
      have = true;
    }
  }
  return best;
}

double expected_return_on_event(const MarketSpec& market, const GridSpec& grid, long j) {
  const StepAnalysis a = analyze_step(market, grid, j);
  return a.esssup_xy + a.expected_z;
}

} // namespace freelunch
