"""Analytic path-counting bounds on the correlation errors p_X and p_Z.

A failing error chain of length L must contain at least ceil(L/2) errors
after decoding, and there are at most 5**L / 2 self-avoiding walks of
length L from a fixed starting edge.  Summing over the possible walk
lengths and starting rows next to the lattice faces gives

    p_X <= sum_{L>=1} L (L+1) 5**L  B(L, p),
    p_Z <= sum_{L>=3} (L-2)(L-1) 5**(L-2) B(L, p),

with B(L, p) = P[Binomial(L, p) >= ceil(L/2)].  The p_Z sum starts at
L = 3 because its chains enter and leave the faces along the third axis.
Both series converge when 10 sqrt(p (1-p)) < 1, i.e. p below about 1%;
the truncation tail is certified with the Chernoff bound
B(L, p) <= (4 p (1-p))**(L/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import logsumexp
from scipy.stats import binom

from .gadget import invert_node_error_rate


@dataclass(frozen=True)
class BoundConfig:
    """Truncation control for the infinite sums."""

    rtol: float = 1e-12
    max_length: int = 10_000

    def __post_init__(self) -> None:
        if self.rtol <= 0:
            raise ValueError("rtol must be positive")


DEFAULT_CONFIG = BoundConfig()


def convergence_onset() -> float:
    """Error rate where 10 sqrt(p (1-p)) reaches 1 and the sums diverge."""
    return (1.0 - math.sqrt(0.96)) / 2.0


def _log_B(L: int, p: float) -> float:
    """log P[Binomial(L, p) >= ceil(L/2)]."""
    return float(binom.logsf(math.ceil(L / 2) - 1, L, p))


def walk_failure_weight(L: int, p: float) -> float:
    """(5**L / 2) * B(L, p): weight of all length-L walks from one edge."""
    if L < 1:
        raise ValueError("walk length must be >= 1")
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must be in (0, 0.5), got {p}")
    return math.exp(L * math.log(5.0) - math.log(2.0) + _log_B(L, p))


def _check_convergent(p: float) -> float:
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must be in (0, 0.5), got {p}")
    r = 10.0 * math.sqrt(p * (1.0 - p))
    if r >= 1.0:
        raise ValueError(
            f"bound diverges: 10 sqrt(p (1-p)) = {r:.4f} >= 1 (onset p = {convergence_onset():.6f})"
        )
    return r


def _summed(p: float, cfg: BoundConfig, log_coeff, start: int, tail_factor) -> float:
    """Log-space evaluation of sum_L coeff(L) * B(L, p) with certified tail.

    ``log_coeff(L)`` is the log of the polynomial-times-5**L coefficient and
    ``tail_factor(L)`` bounds coeff(L) * (4 p (1-p))**(L/2) from above; the
    loop stops once the geometric tail estimate is below rtol times the
    partial sum.
    """
    r = _check_convergent(p)
    logs: list[float] = []
    L = start
    while L <= cfg.max_length:
        logs.append(log_coeff(L) + _log_B(L, p))
        # Tail from L+1 on: terms bounded by tail_factor(L') * r**L', whose
        # ratio is at most q below; sum the geometric majorant.
        q = r * tail_factor(L + 2) / tail_factor(L + 1)
        partial = logsumexp(logs)
        if q < 1.0:
            tail = math.log(tail_factor(L + 1)) + (L + 1) * math.log(r) - math.log1p(-q)
            if tail < partial + math.log(cfg.rtol):
                return float(math.exp(partial))
        L += 1
    raise RuntimeError(f"tail not certified below rtol within max_length={cfg.max_length}")


def bound_pX(p: float, cfg: BoundConfig = DEFAULT_CONFIG) -> float:
    """Upper bound on the X-correlation error probability."""
    return _summed(
        p, cfg,
        log_coeff=lambda L: math.log(L * (L + 1)) + L * math.log(5.0),
        start=1,
        tail_factor=lambda L: L * (L + 1),
    )


def bound_pZ(p: float, cfg: BoundConfig = DEFAULT_CONFIG) -> float:
    """Upper bound on the Z-correlation error probability."""
    return _summed(
        p, cfg,
        log_coeff=lambda L: math.log((L - 2) * (L - 1)) + (L - 2) * math.log(5.0),
        start=3,
        tail_factor=lambda L: (L - 2) * (L - 1) / 25.0,
    )


def gamma_TL(n_o: int, p: float, cfg: BoundConfig = DEFAULT_CONFIG) -> float:
    """Finite-size top-to-face path family: n_o**2 sum_{L>=n_o} (5**L/2) B.

    Dropped from the infinite-lattice bounds; it must vanish as the
    lattice grows whenever the sums converge.
    """
    if n_o < 1:
        raise ValueError("n_o must be >= 1")
    return n_o * n_o * _summed(
        p, cfg,
        log_coeff=lambda L: L * math.log(5.0) - math.log(2.0),
        start=n_o,
        tail_factor=lambda L: 1.0,
    )


def combined_fidelity_bound(p: float, cfg: BoundConfig = DEFAULT_CONFIG) -> float:
    """Lower bound (1 - p_X)(1 - p_Z) on the final fidelity F_AB."""
    px = bound_pX(p, cfg)
    pz = bound_pZ(p, cfg)
    if px >= 1.0 or pz >= 1.0:
        return 0.0  # vacuous bound; certifies nothing
    return (1.0 - px) * (1.0 - pz)


def rigorous_threshold(cfg: BoundConfig = DEFAULT_CONFIG) -> float:
    """Largest p with a certified F_AB > 1/2, located by bisection."""
    lo, hi = 1e-6, 0.009
    if combined_fidelity_bound(lo, cfg) <= 0.5:
        raise RuntimeError("no certified region found at the lower bracket")
    g_hi = combined_fidelity_bound(hi, cfg) - 0.5
    if g_hi > 0.0:
        raise RuntimeError("upper bracket still certified; widen the bracket")
    while hi - lo > 1e-7:
        mid = 0.5 * (lo + hi)
        if combined_fidelity_bound(mid, cfg) > 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rigorous_epsilon_threshold(cfg: BoundConfig = DEFAULT_CONFIG) -> float:
    """Bond error rate whose node error rate equals the rigorous threshold."""
    return invert_node_error_rate(rigorous_threshold(cfg))
