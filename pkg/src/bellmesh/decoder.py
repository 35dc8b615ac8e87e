"""Error sampling, syndrome inference and minimum-weight matching decoding.

One decoding trial works on a single ``SublatticeModel``:

1. every edge is flipped independently with probability p;
2. each vertex with known syndrome reports the parity of its erroneous
   incident edges (dangling edges flip only their interior endpoint);
3. syndromes on missing vertices are inferred by the cluster heuristic
   (see ``infer_missing``);
4. all defects are paired up, or routed to a rough boundary, by exact
   minimum-weight matching over L1 distances;
5. the trial fails when error plus correction cross the membrane an odd
   number of times.

For the outcome only the crossing *parity* of each correction chain is
needed, which depends only on the matched endpoints (the membrane is a
flat separating surface), so chains are laid out explicitly only when a
full trace is requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ._blossom import (
    adjust_weights_for_maximum_cardinality_matching,
    maximum_weight_matching,
)
from .geometry import SublatticeModel

_SIX_CONN = ndimage.generate_binary_structure(3, 1)

#: Above this defect count the matching graph is restricted to the
#: ``neighbors`` cheapest partners per defect (exact blossom on the
#: restricted graph); below it the graph is complete.
EXACT_CUTOFF = 40
NEIGHBORS = 12

#: When a defect pair's direct distance equals the combined boundary
#: distance, route through the boundary (True) or pair directly (False).
TIE_TO_BOUNDARY = True

#: Secondary criterion among minimum-weight matchings: "boundary" prefers
#: matchings using more boundary routes, "direct" the opposite, "none"
#: leaves the degeneracy to the blossom implementation.
MATCH_BIAS = "none"


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one decoding trial."""

    failure: bool


@dataclass
class InferenceDetail:
    """Intermediate quantities of the missing-syndrome inference."""

    clusters: list[np.ndarray] = field(default_factory=list)
    cluster_dists: list[int] = field(default_factory=list)
    cluster_targets: list[int] = field(default_factory=list)
    pairs: list[tuple[int, int]] = field(default_factory=list)
    flipped: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


def sample_errors(model: SublatticeModel, p: float, rng: np.random.Generator) -> np.ndarray:
    """Independent edge errors with probability p (boolean mask per edge)."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"error rate must be in [0, 0.5), got {p}")
    return rng.random(model.num_edges) < p


def syndromes(model: SublatticeModel, errors: np.ndarray) -> np.ndarray:
    """Defect indicator per vertex (1 = syndrome -1), missing vertices at 0.

    The returned array reflects only measurable information: missing
    vertices always read 0 here and are handled by ``infer_missing``.
    """
    err_idx = np.flatnonzero(errors)
    ends = model.ev2[err_idx]
    endpoints = np.concatenate([model.ev1[err_idx], ends[ends >= 0]])
    parity = np.bincount(endpoints, minlength=model.num_vertices).astype(np.uint8) & 1
    parity[model.missing_mask] = 0
    return parity


def syndrome_field(model: SublatticeModel, errors: np.ndarray) -> np.ndarray:
    """Syndrome values per vertex: +1, -1, or 0 for unknown."""
    parity = syndromes(model, errors)
    values = np.where(parity == 1, -1, 1).astype(np.int8)
    values[model.missing_mask] = 0
    return values


def _missing_coords(model: SublatticeModel) -> np.ndarray:
    cached = getattr(model, "_missing_coords", None)
    if cached is None:
        cached = model.coords(model.missing_vertices())
        object.__setattr__(model, "_missing_coords", cached)
    return cached


def infer_missing(
    model: SublatticeModel, parity: np.ndarray, detail: InferenceDetail | None = None
) -> np.ndarray:
    """Assign values to missing syndromes; returns inferred defect vertex ids.

    All unknown syndromes start at +1.  Odd-size clusters of known defects
    are paired greedily by increasing center-of-mass distance (a leftover
    cluster is paired with itself at infinite distance); whenever a pair
    is farther apart than the sum of the two cluster-to-unknown distances,
    the nearest unknown syndrome of each cluster is flipped.  Among
    equidistant unknowns, one lying in the same membrane-parallel plane as
    the cluster is preferred, which avoids spurious membrane crossings.
    """
    missing_ids = model.missing_vertices()
    if len(missing_ids) == 0:
        return np.empty(0, dtype=np.int64)
    known_defects = parity.astype(bool) & ~model.missing_mask
    if not known_defects.any():
        return np.empty(0, dtype=np.int64)

    grid = known_defects.reshape(model.shape)
    labels, num = ndimage.label(grid, structure=_SIX_CONN)
    if num == 0:
        return np.empty(0, dtype=np.int64)
    sizes = np.bincount(labels.ravel())

    unknown_xyz = _missing_coords(model)
    axis = model.membrane_axis

    origin = np.asarray(model.origin, dtype=np.int64)
    members_of = {lab: mem + origin for lab, mem in _label_members(labels, num).items()}
    clusters = []  # (member coords, d_i, chosen unknown index)
    for lab in range(1, num + 1):
        if sizes[lab] % 2 == 0:
            continue
        mem = members_of[lab]
        # L1 distances member x unknown; unknowns in index (lexicographic
        # coordinate) order, so argmin tie-breaks lexicographically.
        d = np.abs(mem[:, None, :] - unknown_xyz[None, :, :]).sum(axis=2)
        d_i = int(d.min())
        cand = np.flatnonzero(d.min(axis=0) == d_i)
        planes = set(mem[:, axis].tolist())
        in_plane = [c for c in cand if int(unknown_xyz[c, axis]) in planes]
        target = int(in_plane[0] if in_plane else cand[0])
        clusters.append((mem, d_i, target))

    if detail is not None:
        detail.clusters = [c[0] for c in clusters]
        detail.cluster_dists = [c[1] for c in clusters]
        detail.cluster_targets = [int(missing_ids[c[2]]) for c in clusters]

    n = len(clusters)
    if n == 0:
        return np.empty(0, dtype=np.int64)

    centers = np.array(
        [np.floor(c[0].mean(axis=0) + 0.5).astype(np.int64) for c in clusters]
    )
    dij = np.abs(centers[:, None, :] - centers[None, :, :]).sum(axis=2)

    # Greedy pairing by increasing center distance, ties by cluster index.
    unpaired = list(range(n))
    pairs: list[tuple[int, int]] = []
    while len(unpaired) >= 2:
        best = min(
            ((int(dij[i, j]), i, j) for ai, i in enumerate(unpaired) for j in unpaired[ai + 1:])
        )
        _, i, j = best
        pairs.append((i, j))
        unpaired.remove(i)
        unpaired.remove(j)
    if unpaired:
        pairs.append((unpaired[0], unpaired[0]))

    value = {}  # missing-vertex id -> parity flips (mod 2)
    for i, j in pairs:
        if i == j:
            flip = True  # d_ii is infinite
        else:
            flip = dij[i, j] > clusters[i][1] + clusters[j][1]
        if flip:
            for k in {i, j} if i != j else {i}:
                vid = int(missing_ids[clusters[k][2]])
                value[vid] = value.get(vid, 0) ^ 1

    flipped = np.array(sorted(v for v, f in value.items() if f), dtype=np.int64)
    if detail is not None:
        detail.pairs = pairs
        detail.flipped = flipped
    return flipped


def _label_members(labels: np.ndarray, num: int) -> dict[int, np.ndarray]:
    """Coordinates of each labeled cluster, in one pass."""
    flat = labels.ravel()
    nz = np.flatnonzero(flat)
    order = nz[np.argsort(flat[nz], kind="stable")]
    coords = np.stack(np.unravel_index(order, labels.shape), axis=-1)
    counts = np.bincount(flat[nz], minlength=num + 1)
    out = {}
    start = 0
    for lab in range(1, num + 1):
        out[lab] = coords[start: start + counts[lab]]
        start += counts[lab]
    return out


@dataclass(frozen=True)
class MatchedPair:
    """One element of a matching: two defects, or one defect to a boundary."""

    v1: int
    v2: int  # -1 when routed to the rough boundary


def match_defects(
    model: SublatticeModel,
    defects: np.ndarray,
    exact_cutoff: int = EXACT_CUTOFF,
    neighbors: int = NEIGHBORS,
) -> list[MatchedPair]:
    """Minimum-weight pairing of defects with each other or the boundary.

    Solved as an exact blossom matching on the defect graph where the edge
    (i, j) costs min(L1(i, j), boundary_i + boundary_j); for odd defect
    counts one virtual node carries the lone boundary route.  On ties the
    boundary route is preferred.  Above ``exact_cutoff`` defects, each
    defect is restricted to its ``neighbors`` cheapest partners (the
    matching stays an exact blossom on that restricted graph).
    """
    defects = np.asarray(defects, dtype=np.int64)
    n = len(defects)
    if n == 0:
        return []
    xyz = model.coords(defects)
    bd = model.boundary_dist[defects]
    dist = np.abs(xyz[:, None, :] - xyz[None, :, :]).sum(axis=2)
    bsum = bd[:, None] + bd[None, :]
    w = np.minimum(dist, bsum)
    direct = dist < bsum if TIE_TO_BOUNDARY else dist <= bsum

    # Secondary criterion: scale weights and charge one unit per disfavored
    # pair so the matching first minimizes length, then the pair-type count.
    scale = 2 * (n + 2) if MATCH_BIAS != "none" else 1
    if MATCH_BIAS == "boundary":
        pair_bias = direct.astype(np.int64)
        virt_bias = 0
    elif MATCH_BIAS == "direct":
        pair_bias = (~direct).astype(np.int64)
        virt_bias = 1
    else:
        pair_bias = np.zeros_like(direct, dtype=np.int64)
        virt_bias = 0
    w2 = w * scale + pair_bias
    bd2 = bd * scale + virt_bias

    restrict = n > exact_cutoff
    k = min(neighbors, n - 1)
    while True:
        edges = []
        if restrict:
            keep = np.argpartition(w + np.diag(np.full(n, 10**9)), k - 1, axis=1)[:, :k]
            pair_set = set()
            for i in range(n):
                for j in keep[i]:
                    j = int(j)
                    if j != i:
                        pair_set.add((min(i, j), max(i, j)))
            edges = [(i, j, -int(w2[i, j])) for i, j in sorted(pair_set)]
        else:
            edges = [
                (i, j, -int(w2[i, j])) for i in range(n) for j in range(i + 1, n)
            ]
        if n % 2 == 1:
            edges.extend((i, n, -int(bd2[i])) for i in range(n))
        num_nodes = n + (n % 2)

        matching = maximum_weight_matching(
            adjust_weights_for_maximum_cardinality_matching(edges)
        )
        if 2 * len(matching) == num_nodes:
            break
        if not restrict or k >= n - 1:  # pragma: no cover - defensive
            raise RuntimeError("matching is not perfect on a complete graph")
        k = min(2 * k, n - 1)

    out = []
    for i, j in matching:
        i, j = (i, j) if i < j else (j, i)
        if j == n:  # virtual boundary node
            out.append(MatchedPair(int(defects[i]), -1))
        elif direct[i, j]:
            out.append(MatchedPair(int(defects[i]), int(defects[j])))
        else:
            out.append(MatchedPair(int(defects[i]), -1))
            out.append(MatchedPair(int(defects[j]), -1))
    return out


def correction_crossings(model: SublatticeModel, pairs: list[MatchedPair]) -> int:
    """Membrane-crossing parity of the whole correction."""
    total = 0
    for pr in pairs:
        if pr.v2 < 0:
            total += int(model.boundary_cross[pr.v1])
        else:
            total += int(model.side[pr.v1] != model.side[pr.v2])
    return total & 1


def decode(
    model: SublatticeModel,
    errors: np.ndarray,
    exact_cutoff: int = EXACT_CUTOFF,
    neighbors: int = NEIGHBORS,
) -> DecodeOutcome:
    """Run one full decoding trial on a sampled error configuration."""
    parity = syndromes(model, errors)
    inferred = infer_missing(model, parity)
    known = np.flatnonzero(parity.astype(bool) & ~model.missing_mask)
    defects = np.sort(np.concatenate([known, inferred]))
    pairs = match_defects(model, defects, exact_cutoff, neighbors)
    err_parity = int(np.count_nonzero(errors & model.membrane_mask)) & 1
    failure = (err_parity + correction_crossings(model, pairs)) & 1
    return DecodeOutcome(failure=bool(failure))


# ---------------------------------------------------------------------------
# Explicit chain realization (traces, invariant tests, exhaustive censuses).


def _axis_edge_offsets(model: SublatticeModel) -> list[int]:
    n1, n2, n3 = model.shape
    c0 = (n1 - 1) * n2 * n3
    c1 = n1 * (n2 - 1) * n3
    return [0, c0, c0 + c1]


def _edge_between(model: SublatticeModel, a: np.ndarray, b: np.ndarray) -> int:
    """Edge index joining two adjacent vertex coordinates."""
    d = b - a
    axis = int(np.flatnonzero(d)[0])
    lo = a if d[axis] > 0 else b
    o = np.asarray(model.origin)
    i, j, k = lo - o
    n1, n2, n3 = model.shape
    dims = [n1, n2, n3]
    dims[axis] -= 1
    flat = (i * dims[1] + j) * dims[2] + k
    return _axis_edge_offsets(model)[axis] + int(flat)


DEFAULT_AXIS_ORDER = (2, 0, 1)


def chain_between(
    model: SublatticeModel, v1: int, v2: int, axis_order: tuple[int, int, int] = DEFAULT_AXIS_ORDER
) -> list[int]:
    """Monotone L1 correction path between two vertices (axis order t3, t1, t2).

    Any monotone path between the same endpoints crosses the flat membrane
    with the same parity, so the axis order is a pure convention.
    """
    a = model.coords(v1).astype(np.int64)
    b = model.coords(v2).astype(np.int64)
    edges = []
    cur = a.copy()
    for axis in axis_order:
        step = 1 if b[axis] > cur[axis] else -1
        while cur[axis] != b[axis]:
            nxt = cur.copy()
            nxt[axis] += step
            edges.append(_edge_between(model, cur, nxt))
            cur = nxt
    return edges


def chain_to_boundary(
    model: SublatticeModel, v: int, axis_order: tuple[int, int, int] = DEFAULT_AXIS_ORDER
) -> list[int]:
    """Correction path from a defect to its nearest rough termination."""
    e = int(model.boundary_edge[v])
    interior = int(model.ev1[e])
    edges = chain_between(model, v, interior, axis_order) if interior != v else []
    edges.append(e)
    return edges


def correction_edges(
    model: SublatticeModel,
    pairs: list[MatchedPair],
    axis_order: tuple[int, int, int] = DEFAULT_AXIS_ORDER,
) -> np.ndarray:
    """Boolean edge mask realizing the whole correction (mod 2)."""
    mask = np.zeros(model.num_edges, dtype=bool)
    for pr in pairs:
        chain = (
            chain_to_boundary(model, pr.v1, axis_order)
            if pr.v2 < 0
            else chain_between(model, pr.v1, pr.v2, axis_order)
        )
        for e in chain:
            mask[e] ^= True
    return mask


def decode_trace(
    model: SublatticeModel,
    errors: np.ndarray,
    exact_cutoff: int = EXACT_CUTOFF,
    neighbors: int = NEIGHBORS,
    axis_order: tuple[int, int, int] = DEFAULT_AXIS_ORDER,
) -> dict:
    """Decode with a full record of every stage (slow; for tests and the CLI)."""
    parity = syndromes(model, errors)
    detail = InferenceDetail()
    inferred = infer_missing(model, parity, detail)
    known = np.flatnonzero(parity.astype(bool) & ~model.missing_mask)
    defects = np.sort(np.concatenate([known, inferred]))
    pairs = match_defects(model, defects, exact_cutoff, neighbors)
    corr = correction_edges(model, pairs, axis_order)
    residual = errors ^ corr
    err_parity = int(np.count_nonzero(errors & model.membrane_mask)) & 1
    corr_parity = int(np.count_nonzero(corr & model.membrane_mask)) & 1
    fast_parity = correction_crossings(model, pairs)
    failure = (err_parity + corr_parity) & 1
    return {
        "errors": np.flatnonzero(errors),
        "known_defects": known,
        "inferred_defects": inferred,
        "inference": detail,
        "pairs": pairs,
        "correction": np.flatnonzero(corr),
        "residual_membrane_parity": int(np.count_nonzero(residual & model.membrane_mask)) & 1,
        "corr_crossing_parity": corr_parity,
        "fast_crossing_parity": fast_parity,
        "failure": bool(failure),
    }


def single_error_census(model: SublatticeModel) -> np.ndarray:
    """Edge indices whose single-edge error defeats the decoder."""
    failing = []
    errors = np.zeros(model.num_edges, dtype=bool)
    for e in range(model.num_edges):
        errors[e] = True
        if decode(model, errors).failure:
            failing.append(e)
        errors[e] = False
    return np.array(failing, dtype=np.int64)
