"""Acceptance gate: the ten headline checks of the package, one per test.

Each test prints a single ``[C##] name: PASS/FAIL`` line (visible with
``pytest -s`` or when running this file directly) and asserts the same
condition.  The statistical criteria (C5-C7) are marked slow.
"""

import itertools
import math
import subprocess
import sys

import numpy as np
import pytest

from bellmesh import bell, bounds, decoder, gadget, geometry, montecarlo


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[C{num:02d}] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line, flush=True)


def random_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------


def test_criterion_01_gadget_table():
    rng = np.random.default_rng(0)
    worst = 0.0
    for bond in gadget.BELL_LABELS:
        byproduct = gadget.classify_byproduct(bond)
        for outcomes in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            for _ in range(20):
                a, b = random_qubit(rng), random_qubit(rng)
                got = gadget.run_gadget(a, b, bond, outcomes)
                want = gadget.apply_byproduct(gadget.cz_reference(a, b), byproduct)
                worst = max(worst, gadget.phase_distance(got, want))
    ok = worst < 1e-10
    report(1, "gadget byproduct table", ok, f"worst distance {worst:.2e}")
    assert ok


def test_criterion_02_standardization():
    rng = np.random.default_rng(1)
    worst = 0.0
    for eps in rng.uniform(1e-9, 0.5, size=100):
        got = np.array(bell.standardize(eps).coeffs)
        want = np.array(
            [(1 - eps) ** 2, eps * (1 - eps), eps * (1 - eps), eps * eps]
        )
        worst = max(worst, float(np.abs(got - want).max()))
        mid = np.array(bell.standardize_intermediate(eps).coeffs)
        mid_want = np.array([(1 - eps) ** 2, eps * (2 - 3 * eps), eps**2, eps**2])
        worst = max(worst, float(np.abs(mid - mid_want).max()))
    ok = worst < 1e-12
    report(2, "link standardization", ok, f"worst coefficient error {worst:.2e}")
    assert ok


def test_criterion_03_node_error_rate_oracle():
    rng = np.random.default_rng(2)
    worst = 0.0
    for eps in rng.uniform(1e-9, 0.5, size=50):
        worst = max(
            worst,
            abs(gadget.node_error_rate(eps) - gadget.node_error_rate_oracle(eps)),
        )
    ok = worst < 1e-12
    report(3, "node error rate vs enumeration oracle", ok, f"worst {worst:.2e}")
    assert ok


def test_criterion_04_first_order_census():
    model_x = geometry.build(geometry.LatticeSpec(9), "to")
    failing = decoder.single_error_census(model_x)
    t3 = model_x.coords(model_x.ev1[failing])[:, 2]
    per_face = (int((t3 == t3.min()).sum()), int((t3 == t3.max()).sum())) if len(
        failing
    ) else (0, 0)
    model_z = geometry.build(geometry.LatticeSpec(9), "te")
    failing_z = decoder.single_error_census(model_z)
    ok = len(failing) == 6 and per_face == (3, 3) and len(failing_z) == 0
    report(
        4,
        "single-error census at N=9",
        ok,
        f"odd sublattice {per_face} per face, even sublattice {len(failing_z)}",
    )
    assert ok


@pytest.mark.slow
def test_criterion_05_series_agreement():
    trials = {0.002: 50_000, 0.005: 30_000, 0.01: 20_000}
    ok = True
    details = []
    for p, n in trials.items():
        for kind, series in (("to", montecarlo.series_FX), ("te", montecarlo.series_FZ)):
            fit = montecarlo.estimate_F_inf(kind, p, (2, 3, 4, 5), n, seed=2)
            tol = max(3 * fit.f_err, 5 * p**3)
            diff = abs(fit.f_infinity - series(p))
            ok &= diff <= tol
            details.append(f"{kind} p={p}: |diff|={diff:.1e} tol={tol:.1e}")
    report(5, "small-p series agreement", ok, "; ".join(details))
    assert ok


@pytest.mark.slow
def test_criterion_06_fx_at_p_022():
    fit = montecarlo.estimate_F_inf("to", 0.022, (2, 3, 4, 5), 10_000, seed=3)
    diff = abs(fit.f_infinity - 0.699)
    ok = diff <= 0.03
    report(
        6,
        "extrapolated F_X at p=0.022 (desk preset)",
        ok,
        f"F_X_inf = {fit.f_infinity:.4f}, target 0.699 +/- 0.03",
    )
    assert ok


@pytest.mark.slow
def test_criterion_07_threshold():
    result = montecarlo.find_threshold(
        p_lo=0.010, p_hi=0.030, sizes=(2, 3, 4, 5), trials=6_000, seed=0, tol=1.5e-3
    )
    ok = 0.015 <= result.p_star <= 0.028 and result.p_star < 0.033
    report(7, "working threshold p*", ok, f"p* = {result.p_star:.4f}")
    assert ok


def test_criterion_08_rigorous_bounds():
    p_star = bounds.rigorous_threshold()
    eps_star = bounds.rigorous_epsilon_threshold()
    onset = bounds.convergence_onset()
    ok = (
        abs(p_star - 1.17e-3) <= 0.05 * 1.17e-3
        and abs(eps_star - 1.95e-4) <= 0.05 * 1.95e-4
        and abs(onset - 1.01e-2) <= 1e-4
    )
    report(
        8,
        "rigorous path-counting bounds",
        ok,
        f"p* = {p_star:.6f}, eps* = {eps_star:.3e}, onset = {onset:.6f}",
    )
    assert ok


def _oracle_min_cost(dist, bd):
    n = len(bd)
    nodes = tuple(range(n)) + ((-1,) if n % 2 else ())

    def cost(i, j):
        return bd[i] if j == -1 else min(dist[i][j], bd[i] + bd[j])

    def rec(rest):
        if not rest:
            return 0
        i, rest = rest[0], rest[1:]
        return min(
            cost(i, rest[k]) + rec(rest[:k] + rest[k + 1 :]) for k in range(len(rest))
        )

    return rec(nodes)


def test_criterion_09_matching_oracle():
    rng = np.random.default_rng(4)
    ok = True
    for trial in range(500):
        kind = "to" if trial % 2 else "te"
        model = montecarlo.get_model(kind, 3)
        usable = np.flatnonzero(~model.missing_mask)
        defects = rng.choice(usable, size=int(rng.integers(1, 9)), replace=False)
        pairs = decoder.match_defects(model, defects)
        got = 0
        for pr in pairs:
            if pr.v2 < 0:
                got += int(model.boundary_dist[pr.v1])
            else:
                got += int(np.abs(model.coords(pr.v1) - model.coords(pr.v2)).sum())
        xyz = model.coords(defects)
        dist = np.abs(xyz[:, None, :] - xyz[None, :, :]).sum(axis=2)
        want = _oracle_min_cost(dist.tolist(), model.boundary_dist[defects].tolist())
        ok &= got == want
    report(9, "matching equals factorial brute force", ok, "500 instances")
    assert ok


def test_criterion_10_sweep_determinism(tmp_path):
    args = [
        sys.executable, "-m", "bellmesh.cli", "sweep",
        "--p", "0.01,0.02", "--no", "1,2", "--trials", "2000", "--seed", "9",
    ]
    a = subprocess.run([*args, "--out", str(tmp_path / "a.csv")], capture_output=True)
    b = subprocess.run([*args, "--out", str(tmp_path / "b.csv")], capture_output=True)
    ok = (
        a.returncode == 0
        and b.returncode == 0
        and (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    )
    report(10, "byte-identical sweep CSV", ok)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q"]))
