"""Discrete-time market toolkit: kernels, lattices, arbitrage/FLVR detectors."""

from ._core import (
    PRNG_ID,
    ArbitrageCertificate,
    AsymptoticReport,
    ConvergenceReport,
    ConvergenceRow,
    DomainError,
    EnumerationTooLarge,
    FlvrEntry,
    FlvrReport,
    GridSpec,
    HypothesisViolated,
    InnovationLaw,
    IntegralCriterion,
    KernelSpec,
    MarketSpec,
    McMomentCheck,
    OracleResult,
    PathDecomposition,
    PriceMap,
    QuadratureFailure,
    Rng,
    StepReport,
    Verdict,
    XGrouping,
    __version__,
    best_history_atom,
    brute_force_oracle,
    check_asymptotic_arbitrage,
    classify_step,
    convergence_table,
    covariance_discrete,
    covariance_limit,
    decompose,
    esssup_xy,
    expected_return_on_event,
    flvr_hypotheses,
    flvr_scan,
    integral_criterion,
    kernel_on_grid,
    lambda_bar,
    mc_moment_check,
    min_arbitrage_steps_fbm,
    run_cli,
    search_arbitrage,
    simulate_path,
    single_period_return,
    substream_seed,
    symmetric_criterion,
    transaction_cost_bound,
    verdict_name,
    worst_innovation_atom,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
