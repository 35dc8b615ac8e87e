"""Decoder tests: syndromes, inference, matching (vs. a factorial brute-force
oracle), crossing parity, and frozen single/double error censuses."""

import itertools
import time

import numpy as np
import pytest

from bellmesh import decoder, geometry


def model_for(kind, n_o):
    return geometry.build(geometry.LatticeSpec.from_n_o(n_o), kind)


# ---------------------------------------------------------------------------
# Syndromes


def test_bulk_edge_flips_both_endpoints():
    model = model_for("te", 2)  # no missing vertices: every syndrome visible
    interior = np.flatnonzero(model.ev2 >= 0)
    e = int(interior[len(interior) // 2])
    errors = np.zeros(model.num_edges, dtype=bool)
    errors[e] = True
    parity = decoder.syndromes(model, errors)
    assert set(np.flatnonzero(parity)) == {model.ev1[e], model.ev2[e]}


def test_dangling_edge_flips_single_endpoint():
    model = model_for("te", 2)
    e = int(np.flatnonzero(model.ev2 < 0)[0])
    errors = np.zeros(model.num_edges, dtype=bool)
    errors[e] = True
    parity = decoder.syndromes(model, errors)
    assert set(np.flatnonzero(parity)) == {model.ev1[e]}


def test_missing_vertices_always_read_zero():
    model = model_for("to", 2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        errors = decoder.sample_errors(model, 0.2, rng)
        parity = decoder.syndromes(model, errors)
        assert not parity[model.missing_mask].any()


def test_syndrome_field_encoding():
    model = model_for("to", 2)
    errors = np.zeros(model.num_edges, dtype=bool)
    field = decoder.syndrome_field(model, errors)
    assert np.all(field[model.missing_mask] == 0)
    assert np.all(field[~model.missing_mask] == 1)


def test_sample_errors_validates_rate():
    model = model_for("te", 1)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        decoder.sample_errors(model, 0.5, rng)
    with pytest.raises(ValueError):
        decoder.sample_errors(model, -0.01, rng)


# ---------------------------------------------------------------------------
# Missing-syndrome inference


def test_known_plus_inferred_defect_count_is_even():
    model = model_for("to", 2)
    rng = np.random.default_rng(1)
    for _ in range(50):
        errors = decoder.sample_errors(model, 0.1, rng)
        parity = decoder.syndromes(model, errors)
        inferred = decoder.infer_missing(model, parity)
        known = np.flatnonzero(parity.astype(bool) & ~model.missing_mask)
        assert (len(known) + len(inferred)) % 2 == 0


def test_no_defects_infers_nothing():
    model = model_for("to", 2)
    parity = np.zeros(model.num_vertices, dtype=np.uint8)
    assert len(decoder.infer_missing(model, parity)) == 0


def test_even_cluster_far_from_unknowns_infers_nothing():
    # Two adjacent defects in the bulk centre form one even cluster; the
    # inference must leave every unknown at +1.
    model = model_for("to", 3)
    interior = np.flatnonzero(model.ev2 >= 0)
    coords = model.coords(model.ev1[interior])
    central = interior[np.abs(coords).sum(axis=1).argmin()]
    errors = np.zeros(model.num_edges, dtype=bool)
    errors[central] = True
    parity = decoder.syndromes(model, errors)
    assert len(decoder.infer_missing(model, parity)) == 0


def test_odd_cluster_next_to_unknown_flips_it():
    # A dangling-edge error adjacent to a missing vertex leaves a single
    # (odd) visible defect right beside the unknown; pairing it with the
    # boundary is never cheaper than |d_i| alone, so the rule flips the
    # nearest unknown.
    model = model_for("to", 2)
    # Find an interior edge with exactly one endpoint missing.
    cand = None
    for e in range(model.num_edges):
        v2 = model.ev2[e]
        if v2 < 0:
            continue
        m1 = bool(model.missing_mask[model.ev1[e]])
        m2 = bool(model.missing_mask[v2])
        if m1 ^ m2:
            cand = e
            break
    assert cand is not None
    errors = np.zeros(model.num_edges, dtype=bool)
    errors[cand] = True
    parity = decoder.syndromes(model, errors)
    detail = decoder.InferenceDetail()
    inferred = decoder.infer_missing(model, parity, detail)
    # The unknown endpoint of the edge is the one flipped.
    hidden = model.ev1[cand] if model.missing_mask[model.ev1[cand]] else model.ev2[cand]
    assert list(inferred) == [hidden]
    assert len(detail.clusters) == 1
    assert detail.cluster_dists[0] == 1


# ---------------------------------------------------------------------------
# Matching vs. factorial brute force


def oracle_min_cost(dist, bd):
    """Minimum cost over all pairings with optional boundary routes.

    Every pair (i, j) costs min(dist[i, j], bd[i] + bd[j]); with an odd
    count exactly one node takes its lone boundary route at cost bd[i].
    """
    n = len(bd)
    nodes = list(range(n))
    if n % 2 == 1:
        nodes.append(-1)  # virtual boundary node

    def cost(i, j):
        if j == -1:
            return bd[i]
        return min(dist[i][j], bd[i] + bd[j])

    def rec(rest):
        if not rest:
            return 0
        i, rest = rest[0], rest[1:]
        best = None
        for k, j in enumerate(rest):
            c = cost(i, j) + rec(rest[:k] + rest[k + 1 :])
            if best is None or c < best:
                best = c
        return best

    return rec(tuple(nodes))


def matching_cost(model, pairs):
    total = 0
    for pr in pairs:
        if pr.v2 < 0:
            total += int(model.boundary_dist[pr.v1])
        else:
            total += int(np.abs(model.coords(pr.v1) - model.coords(pr.v2)).sum())
    return total


@pytest.mark.parametrize("kind", ["to", "te"])
def test_matching_is_optimal_on_random_instances(kind):
    model = model_for(kind, 3)
    usable = np.flatnonzero(~model.missing_mask)
    rng = np.random.default_rng(7)
    start = time.monotonic()
    for _ in range(250):
        n = int(rng.integers(1, 9))
        defects = rng.choice(usable, size=n, replace=False)
        pairs = decoder.match_defects(model, defects)
        matched = sorted(
            v for pr in pairs for v in (pr.v1, pr.v2) if v >= 0
        )
        # Every defect appears exactly once.
        assert matched == sorted(int(d) for d in defects) or (
            len(matched) == n and set(matched) == set(int(d) for d in defects)
        )
        xyz = model.coords(defects)
        dist = np.abs(xyz[:, None, :] - xyz[None, :, :]).sum(axis=2)
        bd = model.boundary_dist[defects]
        assert matching_cost(model, pairs) == oracle_min_cost(
            dist.tolist(), bd.tolist()
        )
    assert time.monotonic() - start < 60.0


def test_matching_empty_input():
    model = model_for("te", 2)
    assert decoder.match_defects(model, np.empty(0, dtype=np.int64)) == []


def test_knn_restricted_matching_agrees_with_exact():
    # Force the sparse k-nearest-neighbour path and compare against the
    # exact complete-graph matching cost.
    model = model_for("te", 3)
    rng = np.random.default_rng(3)
    for _ in range(10):
        defects = rng.choice(model.num_vertices, size=50, replace=False)
        sparse = decoder.match_defects(model, defects, exact_cutoff=40)
        exact = decoder.match_defects(model, defects, exact_cutoff=10_000)
        assert matching_cost(model, sparse) == matching_cost(model, exact)


# ---------------------------------------------------------------------------
# Crossing parity and chains


@pytest.mark.parametrize("kind", ["to", "te"])
def test_fast_parity_equals_chain_parity(kind):
    model = model_for(kind, 2)
    rng = np.random.default_rng(5)
    for _ in range(40):
        errors = decoder.sample_errors(model, 0.08, rng)
        trace = decoder.decode_trace(model, errors)
        assert trace["fast_crossing_parity"] == trace["corr_crossing_parity"]


@pytest.mark.parametrize("axis_order", list(itertools.permutations((0, 1, 2))))
def test_chain_parity_is_axis_order_invariant(axis_order):
    model = model_for("to", 2)
    rng = np.random.default_rng(9)
    base = None
    for trial in range(10):
        errors = decoder.sample_errors(model, 0.08, rng)
        trace = decoder.decode_trace(model, errors, axis_order=axis_order)
        assert trace["corr_crossing_parity"] == trace["fast_crossing_parity"]


@pytest.mark.parametrize("kind", ["to", "te"])
def test_correction_clears_visible_syndromes(kind):
    model = model_for(kind, 2)
    rng = np.random.default_rng(13)
    for _ in range(25):
        errors = decoder.sample_errors(model, 0.08, rng)
        trace = decoder.decode_trace(model, errors)
        corr = np.zeros(model.num_edges, dtype=bool)
        corr[trace["correction"]] = True
        residual = decoder.syndromes(model, errors ^ corr)
        known = residual.astype(bool) & ~model.missing_mask
        # Known residual defects can only remain where the inference guessed
        # a hidden defect wrong; with all syndromes visible none may remain.
        if model.missing_mask.sum() == 0:
            assert not known.any()


def test_te_correction_always_clears_all_syndromes():
    model = model_for("te", 2)
    rng = np.random.default_rng(17)
    for _ in range(25):
        errors = decoder.sample_errors(model, 0.1, rng)
        trace = decoder.decode_trace(model, errors)
        corr = np.zeros(model.num_edges, dtype=bool)
        corr[trace["correction"]] = True
        assert not decoder.syndromes(model, errors ^ corr).any()


def test_closed_loops_never_fail():
    # The symmetric difference of an error set and the decoder's own
    # correction for it is a cycle (possibly touching the boundary); feeding
    # a plaquette-like closed loop must decode trivially.  Build loops as
    # error ^ correction from random trials on the fully visible sublattice.
    model = model_for("te", 2)
    rng = np.random.default_rng(19)
    for _ in range(20):
        errors = decoder.sample_errors(model, 0.08, rng)
        trace = decoder.decode_trace(model, errors)
        corr = np.zeros(model.num_edges, dtype=bool)
        corr[trace["correction"]] = True
        loop = errors ^ corr
        assert not decoder.syndromes(model, loop).any()
        out = decoder.decode(model, loop)
        # A syndrome-free configuration gets the empty correction, so the
        # decode fails exactly when the loop itself crosses the membrane an
        # odd number of times.
        loop_parity = int(np.count_nonzero(loop & model.membrane_mask)) & 1
        assert out.failure == bool(loop_parity)


# ---------------------------------------------------------------------------
# Frozen censuses


@pytest.mark.parametrize(
    ("kind", "n_o", "count"), [("to", 1, 2), ("to", 2, 6), ("to", 3, 6), ("te", 1, 0), ("te", 2, 0), ("te", 3, 0)]
)
def test_single_error_census(kind, n_o, count):
    model = model_for(kind, n_o)
    failing = decoder.single_error_census(model)
    assert len(failing) == count
    # Every failing single error is a membrane edge.
    assert np.all(model.membrane_mask[failing])


def test_to_failing_singles_split_three_per_face():
    model = model_for("to", 2)
    failing = decoder.single_error_census(model)
    t3 = model.coords(model.ev1[failing])[:, 2]
    lo, hi = t3.min(), t3.max()
    assert (t3 == lo).sum() == 3 and (t3 == hi).sum() == 3


@pytest.mark.slow
@pytest.mark.parametrize(
    ("kind", "n_o", "count"),
    [("to", 2, 93), ("to", 3, 82), ("te", 2, 44), ("te", 3, 42)],
)
def test_double_error_census(kind, n_o, count):
    model = model_for(kind, n_o)
    errors = np.zeros(model.num_edges, dtype=bool)
    a1 = len(decoder.single_error_census(model))
    raw = 0
    for e1, e2 in itertools.combinations(range(model.num_edges), 2):
        errors[e1] = errors[e2] = True
        if decoder.decode(model, errors).failure:
            raw += 1
        errors[e1] = errors[e2] = False
    # Second-order coefficient of the failure probability
    #   P(p) = a1 p (1-p)^(E-1) + (raw pairs) p^2 (1-p)^(E-2) + O(p^3),
    # i.e. c2 = raw - a1 (E - 1).
    c2 = raw - a1 * (model.num_edges - 1)
    assert c2 == count
