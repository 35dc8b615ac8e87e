"""Exact algebra of Bell-diagonal two-qubit states.

A Bell-diagonal state is described by its four coefficients in the Bell
basis, ordered as (Phi+, Psi+, Phi-, Psi-).  This module provides the
Werner state, the two coefficient swaps induced by local Hadamard-type
rotations, and the standardization procedure that turns a Werner state of
fidelity 1 - 3*eps**2 into the canonical link state

    ((1-eps)**2, eps*(1-eps), eps*(1-eps), eps**2).
"""

from __future__ import annotations

from dataclasses import dataclass

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BellDiagonalState:
    """Coefficients over the Bell basis, in the order Phi+, Psi+, Phi-, Psi-."""

    c_phi_plus: float
    c_psi_plus: float
    c_phi_minus: float
    c_psi_minus: float

    def __post_init__(self) -> None:
        coeffs = self.coeffs
        if any(c < -_NORM_TOL for c in coeffs):
            raise ValueError(f"negative Bell coefficient in {coeffs}")
        total = sum(coeffs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"Bell coefficients sum to {total}, expected 1")

    @property
    def coeffs(self) -> tuple[float, float, float, float]:
        return (self.c_phi_plus, self.c_psi_plus, self.c_phi_minus, self.c_psi_minus)


def werner(fidelity: float) -> BellDiagonalState:
    """Werner state of the given fidelity: (F, (1-F)/3, (1-F)/3, (1-F)/3)."""
    if not 0.0 <= fidelity <= 1.0:
        raise ValueError(f"fidelity must be in [0, 1], got {fidelity}")
    rest = (1.0 - fidelity) / 3.0
    return BellDiagonalState(fidelity, rest, rest, rest)


def swap_hh(s: BellDiagonalState) -> BellDiagonalState:
    """Apply H (x) H: exchanges the Phi- and Psi+ coefficients."""
    return BellDiagonalState(s.c_phi_plus, s.c_phi_minus, s.c_psi_plus, s.c_psi_minus)


def swap_hprime(s: BellDiagonalState) -> BellDiagonalState:
    """Apply H' (x) H': exchanges the Phi+ and Psi+ coefficients."""
    return BellDiagonalState(s.c_psi_plus, s.c_phi_plus, s.c_phi_minus, s.c_psi_minus)


def mix(a: BellDiagonalState, b: BellDiagonalState, p_b: float) -> BellDiagonalState:
    """Convex mixture (1 - p_b) * a + p_b * b."""
    if not 0.0 <= p_b <= 1.0:
        raise ValueError(f"mixing probability must be in [0, 1], got {p_b}")
    coeffs = tuple((1.0 - p_b) * x + p_b * y for x, y in zip(a.coeffs, b.coeffs))
    return BellDiagonalState(*coeffs)


def standardize(eps: float) -> BellDiagonalState:
    """Bring a Werner state of fidelity 1 - 3*eps**2 to the canonical link form.

    Starting from the Werner state, H' (x) H' is applied with probability
    2*eps / (1 + 2*eps), then H (x) H with probability one half.  The result
    is exactly ((1-eps)**2, eps*(1-eps), eps*(1-eps), eps**2).
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must be in (0, 0.5), got {eps}")
    stage = standardize_intermediate(eps)
    return mix(stage, swap_hh(stage), 0.5)


def standardize_intermediate(eps: float) -> BellDiagonalState:
    """State after the H' (x) H' mixing stage of ``standardize``.

    Equals ((1-eps)**2, eps*(2-3*eps), eps**2, eps**2).
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must be in (0, 0.5), got {eps}")
    start = werner(1.0 - 3.0 * eps * eps)
    p = 2.0 * eps / (1.0 + 2.0 * eps)
    return mix(start, swap_hprime(start), p)


def link_state(eps: float) -> BellDiagonalState:
    """Canonical elementary link state, written out directly."""
    if not 0.0 <= eps < 0.5:
        raise ValueError(f"eps must be in [0, 0.5), got {eps}")
    return BellDiagonalState(
        (1.0 - eps) ** 2,
        eps * (1.0 - eps),
        eps * (1.0 - eps),
        eps * eps,
    )


def fidelity(s: BellDiagonalState) -> float:
    """Overlap with Phi+, the distillability figure of merit."""
    return s.c_phi_plus
