"""Monte Carlo tests: determinism, the exponential extrapolation, fallback
behaviour, the small-p series, and agreement with exhaustive enumeration."""

import itertools
import math

import numpy as np
import pytest

from bellmesh import decoder, montecarlo


def test_estimates_are_bit_for_bit_deterministic():
    a = montecarlo.estimate_F("to", 0.02, 2, trials=5000, seed=42)
    b = montecarlo.estimate_F("to", 0.02, 2, trials=5000, seed=42)
    assert a == b


def test_estimates_depend_on_the_seed():
    a = montecarlo.estimate_F("to", 0.02, 2, trials=5000, seed=1)
    b = montecarlo.estimate_F("to", 0.02, 2, trials=5000, seed=2)
    assert a.failures != b.failures


def test_chunked_trials_are_consistent():
    # Adding trials must not change what the first chunks sampled: the
    # failures over 1 chunk are reproduced inside a 2-chunk run's stream.
    one = montecarlo.estimate_F("te", 0.03, 2, trials=4096, seed=7)
    two = montecarlo.estimate_F("te", 0.03, 2, trials=8192, seed=7)
    assert two.failures >= one.failures


def test_point_estimate_properties():
    pt = montecarlo.PointEstimate("to", 0.02, 2, trials=400, failures=100)
    assert pt.estimate == 0.75
    assert pt.std_error == pytest.approx(math.sqrt(0.25 * 0.75 / 400))


def test_extrapolate_recovers_synthetic_exponential():
    sizes = np.array([2, 3, 4, 5, 6])
    f_inf, a, b = 0.83, -0.09, 0.9
    values = f_inf + a * np.exp(-b * sizes)
    fit = montecarlo.extrapolate(sizes, values, np.full(len(sizes), 1e-4))
    assert fit.converged
    assert fit.f_infinity == pytest.approx(f_inf, abs=1e-3)
    assert fit.b == pytest.approx(b, rel=0.05)


def test_extrapolate_flat_data_falls_back_to_mean():
    sizes = [2, 3, 4, 5]
    values = [0.9, 0.9, 0.9, 0.9]
    fit = montecarlo.extrapolate(sizes, values, [1e-3] * 4)
    assert fit.converged
    assert fit.f_infinity == pytest.approx(0.9)
    assert "mean" in fit.message


def test_extrapolate_noise_only_data_reports_fallback():
    rng = np.random.default_rng(0)
    sizes = [2, 3, 4, 5, 6]
    values = 0.7 + rng.normal(0, 1e-5, size=5)
    fit = montecarlo.extrapolate(sizes, values, [1e-2] * 5)
    assert fit.converged
    assert fit.f_infinity == pytest.approx(0.7, abs=1e-3)


def test_series_values():
    assert montecarlo.series_FX(0.01) == pytest.approx(1 - 0.06 - 0.0078)
    assert montecarlo.series_FZ(0.01) == pytest.approx(1 - 0.0038)
    assert montecarlo.series_FX(0.0) == 1.0
    assert montecarlo.series_FZ(0.0) == 1.0


def exhaustive_failure_probability(kind, n_o, p, max_weight=2):
    """Failure probability from exact enumeration of <= max_weight errors."""
    model = montecarlo.get_model(kind, n_o)
    E = model.num_edges
    errors = np.zeros(E, dtype=bool)
    total = 0.0
    for w in range(1, max_weight + 1):
        coeff = p**w * (1 - p) ** (E - w)
        for combo in itertools.combinations(range(E), w):
            errors[list(combo)] = True
            if decoder.decode(model, errors).failure:
                total += coeff
            errors[list(combo)] = False
    return total


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["to", "te"])
def test_monte_carlo_agrees_with_exhaustive_enumeration(kind):
    from scipy.stats import binom

    p, n_o, trials = 0.0008, 2, 400_000
    lower = exhaustive_failure_probability(kind, n_o, p, max_weight=2)
    E = montecarlo.get_model(kind, n_o).num_edges
    # Configurations with three or more errors are not enumerated; the true
    # failure probability lies in [lower, lower + P(weight >= 3)].
    upper = lower + float(binom.sf(2, E, p))
    pt = montecarlo.estimate_F(kind, p, n_o, trials, seed=3)
    mc_fail = pt.failures / trials
    sigma = max(pt.std_error, math.sqrt(max(lower, 1e-9) / trials))
    assert lower - 3 * sigma <= mc_fail <= upper + 3 * sigma


@pytest.mark.slow
def test_fidelity_decreases_with_error_rate():
    vals = [
        montecarlo.estimate_F("to", p, 2, 20_000, seed=5).estimate
        for p in (0.005, 0.02, 0.05)
    ]
    assert vals[0] > vals[1] > vals[2]


@pytest.mark.slow
def test_FZ_exceeds_FX():
    # The even sublattice has no first-order failures, the odd one does.
    p = 0.02
    fx = montecarlo.estimate_F("to", p, 3, 20_000, seed=6)
    fz = montecarlo.estimate_F("te", p, 3, 20_000, seed=6)
    assert fz.estimate > fx.estimate + 3 * (fx.std_error + fz.std_error)


def test_find_threshold_raises_when_not_bracketed():
    with pytest.raises(ValueError):
        montecarlo.find_threshold(
            p_lo=0.0005, p_hi=0.001, sizes=(2, 3, 4), trials=2000, seed=0
        )
