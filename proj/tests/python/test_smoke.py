import json
import math

import pytest

import freelunch as fl


def test_version_and_prng_id():
    assert fl.__version__ == "0.1.0"
    assert fl.PRNG_ID == "mt19937_64/u53"


def test_brownian_lambda_bar_is_flat():
    market = fl.MarketSpec(fl.KernelSpec.brownian_constant(), fl.InnovationLaw.rademacher())
    for n in (1, 4):
        grid = fl.GridSpec.make(n, 0.0, 20.0)
        j0 = grid.j0()
        for j in range(j0, j0 + 10):
            assert fl.lambda_bar(market, grid, j) == -1.0 / math.sqrt(n)
            assert fl.classify_step(market, grid, j, 0.0).verdict == fl.Verdict.NONE


def test_fbm_five_step_certificate():
    market = fl.MarketSpec(fl.KernelSpec.fbm_moving_average(0.95), fl.InnovationLaw.rademacher())
    grid = fl.GridSpec.make(1, 0.0, 40.0)
    j0 = grid.j0()
    cert = fl.search_arbitrage(market, grid, j0 + 30, 0.0)
    assert cert.verdict == fl.Verdict.STRICT
    assert cert.j_star == j0 + 4  # sells at step j0 + 5
    assert cert.witness == [1.0, 1.0, 1.0, 1.0]
    assert cert.lambda_bar == pytest.approx(5.0**0.45 - 2.0, abs=1e-12)

    orc = fl.brute_force_oracle(market, grid, cert.j_star, 0.0, 10**6)
    assert orc.max_worst_return == cert.lambda_bar
    assert orc.history == cert.witness


def test_min_steps_formula():
    assert fl.min_arbitrage_steps_fbm(0.75, True) == 16
    assert fl.min_arbitrage_steps_fbm(0.75, False) == 17
    assert fl.min_arbitrage_steps_fbm(0.95, True) == 5
    with pytest.raises(ValueError):
        fl.min_arbitrage_steps_fbm(0.5, True)


def test_simulation_is_deterministic():
    market = fl.MarketSpec(fl.KernelSpec.ornstein_uhlenbeck(1.0, 1.0), fl.InnovationLaw.rademacher())
    grid = fl.GridSpec.make(8, 0.0, 2.0)
    a = fl.simulate_path(market, grid, fl.Rng(2024))
    b = fl.simulate_path(market, grid, fl.Rng(2024))
    c = fl.simulate_path(market, grid, fl.Rng(2025))
    assert a["z"] == b["z"] and a["xi"] == b["xi"]
    assert a["z"] != c["z"]
    assert len(a["times"]) == grid.size()
    assert all(x in (-1.0, 1.0) for x in a["xi"])


def test_covariance_brownian():
    market = fl.MarketSpec(fl.KernelSpec.brownian_constant(), fl.InnovationLaw.rademacher())
    grid = fl.GridSpec.make(10, 0.0, 1.0)
    assert fl.covariance_discrete(market, grid, 1.0, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert fl.covariance_limit(fl.KernelSpec.brownian_constant(), 0.0, 1.0, 1.0) == pytest.approx(
        1.0, rel=1e-9
    )


def test_domain_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        fl.GridSpec.make(0, 0.0, 1.0)
    with pytest.raises(ValueError):
        fl.InnovationLaw.two_point(1.0, 2.0)


def test_flvr_hypotheses_tuple():
    market = fl.MarketSpec(fl.KernelSpec.brownian_constant(), fl.InnovationLaw.rademacher())
    grid = fl.GridSpec.make(1, 0.0, 5.0)
    ok, which = fl.flvr_hypotheses(market, grid, 0.0)
    assert not ok and which == "kappa_infimum_zero"


def test_run_cli_kernels_in_process():
    code, out, err = fl.run_cli(["kernels"])
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert len(doc["kernels"]) == 7
