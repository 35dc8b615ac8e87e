import math

import numpy as np
import pytest

from bellmesh import gadget


def random_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def test_byproduct_table():
    want = {"phi+": (0, 0), "psi+": (0, 1), "phi-": (1, 0), "psi-": (1, 1)}
    for bond, (za, zb) in want.items():
        bp = gadget.classify_byproduct(bond)
        assert (bp.z_on_a, bp.z_on_b) == (za, zb)


def test_gadget_reproduces_cz_with_byproduct():
    rng = np.random.default_rng(11)
    for bond in gadget.BELL_LABELS:
        bp = gadget.classify_byproduct(bond)
        for out_a in (0, 1):
            for out_b in (0, 1):
                for _ in range(10):
                    a, b = random_qubit(rng), random_qubit(rng)
                    got = gadget.run_gadget(a, b, bond, (out_a, out_b))
                    want = gadget.apply_byproduct(gadget.cz_reference(a, b), bp)
                    assert gadget.states_equal_up_to_phase(got, want, tol=1e-10)


def test_byproducts_commute_with_the_gadget():
    # Applying Z before the gadget equals applying it after.
    rng = np.random.default_rng(3)
    z = np.array([1.0, -1.0])
    for _ in range(10):
        a, b = random_qubit(rng), random_qubit(rng)
        for outcomes in ((0, 0), (0, 1), (1, 0), (1, 1)):
            before = gadget.run_gadget(z * a, b, "phi+", outcomes)
            after = gadget.run_gadget(a, b, "phi+", outcomes)
            after = gadget.apply_byproduct(after, gadget.PauliByproduct(1, 0))
            assert gadget.states_equal_up_to_phase(before, after)
            before = gadget.run_gadget(a, z * b, "phi+", outcomes)
            after = gadget.run_gadget(a, b, "phi+", outcomes)
            after = gadget.apply_byproduct(after, gadget.PauliByproduct(0, 1))
            assert gadget.states_equal_up_to_phase(before, after)


def test_branch_probabilities_are_uniform():
    # The measurement outcomes of the gadget are uniformly random: each of
    # the four branches occurs with probability exactly 1/4, independent of
    # the input states and the bond.
    rng = np.random.default_rng(11)
    for bond in gadget.BELL_LABELS:
        a = random_qubit(rng)
        b = random_qubit(rng)
        for outcomes in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            _, prob = gadget.run_gadget(a, b, bond, outcomes, return_probability=True)
            assert prob == pytest.approx(0.25, abs=1e-12)


def test_node_error_rate_matches_enumeration_oracle():
    rng = np.random.default_rng(5)
    for eps in rng.uniform(1e-6, 0.5, size=30):
        assert gadget.node_error_rate(eps) == pytest.approx(
            gadget.node_error_rate_oracle(eps), abs=1e-12
        )


def test_node_error_rate_anchors():
    # Thresholds quoted for the protocol: p(3.86e-3) ~ 2.27% and the
    # rigorous bound's image eps(1.17e-3) ~ 1.95e-4.
    assert gadget.node_error_rate(3.86e-3) == pytest.approx(0.022717, abs=5e-6)
    assert gadget.invert_node_error_rate(1.17e-3) == pytest.approx(1.952e-4, rel=1e-3)


def test_invert_node_error_rate_roundtrip():
    for eps in (1e-5, 1e-3, 0.05, 0.2):
        p = gadget.node_error_rate(eps)
        assert gadget.invert_node_error_rate(p) == pytest.approx(eps, rel=1e-9)


def test_node_error_rate_small_eps_is_sixfold():
    eps = 1e-8
    assert gadget.node_error_rate(eps) == pytest.approx(6 * eps, rel=1e-6)


def test_outcome_probabilities_sum_to_one():
    # Norms squared of the four branches of the gadget sum to 1.
    rng = np.random.default_rng(9)
    for bond in gadget.BELL_LABELS:
        a, b = random_qubit(rng), random_qubit(rng)
        total = 0.0
        for outcomes in ((0, 0), (0, 1), (1, 0), (1, 1)):
            try:
                state, prob = gadget.run_gadget(a, b, bond, outcomes, return_probability=True)
            except gadget.ZeroProbabilityBranch:
                continue
            total += prob
            assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-12)
        assert total == pytest.approx(1.0, abs=1e-10)
