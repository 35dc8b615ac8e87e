"""Long-range entanglement in noisy cubic quantum networks.

Simulation and analysis of a repeater-free protocol on a cubic lattice of
noisy Bell pairs: Bell-diagonal state algebra, exact verification of the
measurement-based CZ gadget, surface-code style decoding of the two
interleaved sublattices with incomplete syndrome information, Monte Carlo
fidelity estimation with finite-size extrapolation, and rigorous
path-counting bounds on the correlation errors.
"""

__version__ = "0.1.0"

from .bell import (
    BellDiagonalState,
    fidelity,
    link_state,
    mix,
    standardize,
    standardize_intermediate,
    swap_hh,
    swap_hprime,
    werner,
)
from .gadget import (
    BELL_LABELS,
    PauliByproduct,
    classify_byproduct,
    invert_node_error_rate,
    node_error_rate,
    run_gadget,
)
from .geometry import LatticeSpec, SublatticeModel, build
from .decoder import DecodeOutcome, decode, decode_trace, match_defects, sample_errors
from .montecarlo import (
    FitResult,
    PointEstimate,
    ThresholdResult,
    estimate_F,
    estimate_F_inf,
    extrapolate,
    find_threshold,
    series_FX,
    series_FZ,
)
from .bounds import (
    BoundConfig,
    bound_pX,
    bound_pZ,
    convergence_onset,
    rigorous_epsilon_threshold,
    rigorous_threshold,
    walk_failure_weight,
)

__all__ = [
    "BellDiagonalState", "fidelity", "link_state", "mix", "standardize",
    "standardize_intermediate", "swap_hh", "swap_hprime", "werner",
    "BELL_LABELS", "PauliByproduct", "classify_byproduct",
    "invert_node_error_rate", "node_error_rate", "run_gadget",
    "LatticeSpec", "SublatticeModel", "build",
    "DecodeOutcome", "decode", "decode_trace", "match_defects", "sample_errors",
    "FitResult", "PointEstimate", "ThresholdResult", "estimate_F",
    "estimate_F_inf", "extrapolate", "find_threshold", "series_FX", "series_FZ",
    "BoundConfig", "bound_pX", "bound_pZ", "convergence_onset",
    "rigorous_epsilon_threshold", "rigorous_threshold", "walk_failure_weight",
]
