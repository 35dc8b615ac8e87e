"""Few-qubit statevector check of the teleported controlled-phase gadget.

Two data qubits A and B, held at neighboring stations, are entangled by
consuming one shared Bell pair (A', B'): a joint measurement on (A, A')
with a conditional X on B', then a joint measurement on (B', B) with a
conditional Z on A.  With a Phi+ bond the result is exactly a controlled
phase between A and B; any other Bell state for the bond produces the same
state up to Z byproducts on A and/or B.

Also provides the per-node error rate induced by eps-noisy bonds on a
degree-six node, and its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.optimize import brentq

BELL_LABELS = ("phi+", "psi+", "phi-", "psi-")

_SQ2 = 1.0 / np.sqrt(2.0)

_BELL_VECTORS = {
    "phi+": np.array([_SQ2, 0, 0, _SQ2], dtype=complex),
    "psi+": np.array([0, _SQ2, _SQ2, 0], dtype=complex),
    "phi-": np.array([_SQ2, 0, 0, -_SQ2], dtype=complex),
    "psi-": np.array([0, _SQ2, -_SQ2, 0], dtype=complex),
}


class ZeroProbabilityBranch(ValueError):
    """Raised when a requested measurement branch has probability zero."""


@dataclass(frozen=True)
class PauliByproduct:
    """Z byproducts on the two data qubits left by a non-Phi+ bond."""

    z_on_a: int
    z_on_b: int


def classify_byproduct(bond: str) -> PauliByproduct:
    """Byproduct (Z^a (x) Z^b) produced when the bond is the given Bell state."""
    table = {
        "phi+": PauliByproduct(0, 0),
        "psi+": PauliByproduct(0, 1),
        "phi-": PauliByproduct(1, 0),
        "psi-": PauliByproduct(1, 1),
    }
    if bond not in table:
        raise ValueError(f"unknown Bell label {bond!r}")
    return table[bond]


def _check_single_qubit(state: np.ndarray, name: str) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (2,):
        raise ValueError(f"{name} must be a single-qubit state vector")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"{name} is not normalized (norm {norm})")
    return state


def run_gadget(
    a: np.ndarray,
    b: np.ndarray,
    bond: str = "phi+",
    outcomes: tuple[int, int] = (0, 0),
    return_probability: bool = False,
) -> np.ndarray:
    """Run the gadget on data qubits a, b for one pair of measurement outcomes.

    Returns the normalized post-correction two-qubit state on (A, B) as a
    2x2 amplitude array, or (state, branch probability) when asked.
    Raises ZeroProbabilityBranch if the chosen branch cannot occur.
    """
    a = _check_single_qubit(a, "a")
    b = _check_single_qubit(b, "b")
    if bond not in _BELL_VECTORS:
        raise ValueError(f"unknown Bell label {bond!r}")
    out_a, out_b = outcomes
    if out_a not in (0, 1) or out_b not in (0, 1):
        raise ValueError(f"outcomes must be bits, got {outcomes}")

    # Amplitude tensor over (A, A', B', B).
    bond_t = _BELL_VECTORS[bond].reshape(2, 2)
    psi = np.einsum("a,pq,b->apqb", a, bond_t, b)

    # Joint measurement on (A, A'): outcome 0 keeps the parallel components
    # |00>, |11>, outcome 1 the antiparallel ones followed by X on B'.
    # Remaining axes: (A, B', B).
    if out_a == 0:
        t = np.stack([psi[0, 0], psi[1, 1]])
    else:
        t = np.stack([psi[0, 1], psi[1, 0]])
        t = t[:, ::-1, :]  # X on B'

    # Joint measurement on (B', B): projects onto <+0|, <-1| (outcome 0)
    # or <-0|, <+1| (outcome 1), followed by Z on A for outcome 1.
    sign = 1.0 if out_b == 0 else -1.0
    final = np.empty((2, 2), dtype=complex)
    final[:, 0] = (t[:, 0, 0] + sign * t[:, 1, 0]) * _SQ2
    final[:, 1] = (t[:, 0, 1] - sign * t[:, 1, 1]) * _SQ2
    if out_b == 1:
        final[1, :] = -final[1, :]

    norm = np.linalg.norm(final)
    if norm < 1e-12:
        raise ZeroProbabilityBranch(
            f"branch {outcomes} has zero probability for bond {bond}"
        )
    if return_probability:
        return final / norm, float(norm * norm)
    return final / norm


def cz_reference(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Controlled-phase applied to the product state |a>|b>, as a 2x2 array."""
    a = _check_single_qubit(a, "a")
    b = _check_single_qubit(b, "b")
    out = np.outer(a, b)
    out[1, 1] = -out[1, 1]
    return out


def apply_byproduct(state: np.ndarray, byproduct: PauliByproduct) -> np.ndarray:
    """Apply Z^a (x) Z^b to a two-qubit amplitude array."""
    out = np.array(state, dtype=complex)
    if byproduct.z_on_a:
        out[1, :] = -out[1, :]
    if byproduct.z_on_b:
        out[:, 1] = -out[:, 1]
    return out


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Deviation of two normalized state arrays from equality up to phase."""
    overlap = abs(np.vdot(np.asarray(u).ravel(), np.asarray(v).ravel()))
    return abs(overlap - 1.0)


def states_equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether two normalized state arrays agree up to a global phase."""
    return phase_distance(u, v) <= tol


def node_error_rate(eps: float) -> float:
    """Probability of a net Z error at a degree-six node with eps-noisy bonds.

    Each of the six bonds independently contributes a Z with probability
    eps; an odd number of contributions leaves a net error:

        p = sum_{i=0..2} C(6, 2i+1) eps^(2i+1) (1-eps)^(5-2i)
    """
    if not 0.0 <= eps < 0.5:
        raise ValueError(f"eps must be in [0, 0.5), got {eps}")
    return sum(
        comb(6, 2 * i + 1) * eps ** (2 * i + 1) * (1.0 - eps) ** (5 - 2 * i)
        for i in range(3)
    )


def node_error_rate_oracle(eps: float) -> float:
    """Brute-force enumeration over all 2**6 bond error patterns."""
    total = 0.0
    for pattern in range(64):
        k = bin(pattern).count("1")
        if k % 2 == 1:
            total += eps**k * (1.0 - eps) ** (6 - k)
    return total


def invert_node_error_rate(p: float) -> float:
    """The eps in [0, 0.5) with node_error_rate(eps) = p."""
    if p == 0.0:
        return 0.0
    p_max = node_error_rate(0.5 - 1e-15)
    if not 0.0 < p <= p_max:
        raise ValueError(f"p={p} outside the image [0, {p_max}) of node_error_rate")
    return float(brentq(lambda e: node_error_rate(e) - p, 0.0, 0.5 - 1e-15, xtol=1e-15))
