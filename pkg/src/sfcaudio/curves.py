"""Space-filling curve tables on 2^k x 2^k grids.

Eight curve families are supported, each realized as an exact bijection
between linear indices [0, 4^k) and grid points. Tables are built eagerly
so index/point lookups are plain array reads.

Coordinates follow image conventions: ``x`` is the column, ``y`` is the
row, origin at the top-left corner.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

MAX_ORDER = 13


class CurveKind(enum.IntEnum):
    """Curve families. The numeric values are stable and used on disk."""

    HILBERT = 0
    Z = 1
    GRAY = 2
    H = 3
    OPTR = 4
    SWEEP = 5
    SCAN = 6
    DIAGONAL = 7

    @classmethod
    def from_name(cls, name: str) -> "CurveKind":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            known = ", ".join(m.name.lower() for m in cls)
            raise ValueError(f"unknown curve kind {name!r}; expected one of: {known}") from None


@dataclass(frozen=True)
class CurveMap:
    """Precomputed bijection for one (kind, order) pair.

    ``xs[t]``/``ys[t]`` give the grid point visited at linear index t;
    ``inverse[y, x]`` gives the linear index of a grid point. Arrays are
    read-only, so a map can be shared freely across threads.
    """

    kind: CurveKind
    order: int
    xs: np.ndarray
    ys: np.ndarray
    inverse: np.ndarray

    @property
    def n(self) -> int:
        """Grid side length 2^order."""
        return 1 << self.order

    @property
    def size(self) -> int:
        """Cell count 4^order."""
        return 1 << (2 * self.order)

    @property
    def forward(self) -> np.ndarray:
        """(4^k, 2) array of (x, y) rows, built on demand."""
        return np.column_stack((self.xs, self.ys))

    def __len__(self) -> int:
        return self.size


def _check_order(order: int) -> int:
    order = int(order)
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"curve order must be in [1, {MAX_ORDER}], got {order}")
    return order


# ---------------------------------------------------------------------------
# bit-interleaving curves

def _deinterleave(bits: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    # x from odd bit positions, y from even bit positions
    x = np.zeros_like(bits)
    y = np.zeros_like(bits)
    for b in range(order):
        x |= ((bits >> (2 * b + 1)) & 1) << b
        y |= ((bits >> (2 * b)) & 1) << b
    return x, y


def _z_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(1 << (2 * order), dtype=np.int64)
    return _deinterleave(t, order)


def _gray_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(1 << (2 * order), dtype=np.int64)
    return _deinterleave(t ^ (t >> 1), order)


def _hilbert_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Iterative bit transformation, lowest quad first."""
    n = 1 << order
    t = np.arange(n * n, dtype=np.int64)
    x = np.zeros(n * n, dtype=np.int64)
    y = np.zeros(n * n, dtype=np.int64)
    s = 1
    while s < n:
        rx = 1 & (t >> 1)
        ry = 1 & (t ^ rx)
        flip = (ry == 0) & (rx == 1)
        x = np.where(flip, s - 1 - x, x)
        y = np.where(flip, s - 1 - y, y)
        swap = ry == 0
        x, y = np.where(swap, y, x), np.where(swap, x, y)
        x += s * rx
        y += s * ry
        t >>= 2
        s <<= 1
    return x, y


# ---------------------------------------------------------------------------
# row-based and diagonal layouts

def _sweep_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    n = 1 << order
    t = np.arange(n * n, dtype=np.int64)
    return t % n, t // n


def _scan_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    # like sweep but every odd row runs right-to-left
    n = 1 << order
    t = np.arange(n * n, dtype=np.int64)
    y = t // n
    x = t % n
    return np.where((y & 1) == 0, x, n - 1 - x), y


def _diagonal_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Anti-diagonal zigzag: diagonal d = x + y, direction alternating."""
    n = 1 << order
    yy, xx = np.divmod(np.arange(n * n, dtype=np.int64), n)
    d = xx + yy
    lo = np.maximum(0, d - n + 1)
    hi = np.minimum(d, n - 1)
    base = np.where(
        d < n,
        d * (d + 1) // 2,
        n * n - (2 * n - 1 - d) * (2 * n - d) // 2,
    )
    idx = base + np.where((d & 1) == 0, xx - lo, hi - xx)
    xs = np.empty(n * n, dtype=np.int64)
    ys = np.empty(n * n, dtype=np.int64)
    xs[idx] = xx
    ys[idx] = yy
    return xs, ys


# ---------------------------------------------------------------------------
# H curve: traversal of a right-triangle bisection hierarchy
#
# The unit square splits into two right isosceles triangles along the main
# diagonal; each triangle splits recursively at the midpoint of its
# hypotenuse. Visiting leaf triangles in traversal order and keeping the
# first visit to each cell yields a closed king-move tour of the grid.

def _h_leaf_cells(order: int, a, b, c) -> np.ndarray:
    """Leaf cells of one top-level triangle, first visit only, in order."""
    n = 1 << order
    A = np.array([a], dtype=np.int32)
    B = np.array([b], dtype=np.int32)
    C = np.array([c], dtype=np.int32)
    for _ in range(2 * order):
        M = (A + B) >> 1
        A2 = np.empty((2 * A.shape[0], 2), dtype=np.int32)
        B2 = np.empty_like(A2)
        C2 = np.empty_like(A2)
        A2[0::2], B2[0::2], C2[0::2] = A, C, M
        A2[1::2], B2[1::2], C2[1::2] = C, B, M
        A, B, C = A2, B2, C2
    cells = np.minimum(np.minimum(A, B), C)
    ids = cells[:, 1].astype(np.int64) * n + cells[:, 0]
    _, first = np.unique(ids, return_index=True)
    return cells[np.sort(first)]


def _h_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    n = 1 << order
    lower = _h_leaf_cells(order, (0, 0), (n, n), (n, 0))
    upper = _h_leaf_cells(order, (n, n), (0, 0), (0, n))
    cells = np.concatenate([lower, upper])
    ids = cells[:, 1].astype(np.int64) * n + cells[:, 0]
    _, first = np.unique(ids, return_index=True)
    cells = cells[np.sort(first)]
    return cells[:, 0].astype(np.int64), cells[:, 1].astype(np.int64)


# ---------------------------------------------------------------------------
# OptR curve: quadrant grammar with corner/edge-midpoint anchors
#
# Every subsquare is traversed from an entry anchor to an exit anchor,
# both lying on corners or edge midpoints. Expanding one level replaces a
# square by its four quadrants with derived anchors. The rules below are
# stated on a [0, 4]^2 coordinate frame per square (so midpoints stay
# integral); children are (quadrant offset, entry, exit) triples.

_OPTR_BASE_RULES: dict[tuple, list] = {
    # corner -> adjacent corner
    ((0, 0), (4, 0)): [
        ((0, 0), (0, 0), (1, 2)),
        ((0, 2), (1, 2), (2, 3)),
        ((2, 2), (2, 3), (3, 2)),
        ((2, 0), (3, 2), (4, 0)),
    ],
    # corner -> opposite corner
    ((0, 0), (4, 4)): [
        ((0, 0), (0, 0), (2, 1)),
        ((2, 0), (2, 1), (2, 2)),
        ((0, 2), (2, 2), (2, 3)),
        ((2, 2), (2, 3), (4, 4)),
    ],
    # corner -> midpoint of an incident side
    ((0, 0), (2, 0)): [
        ((0, 0), (0, 0), (1, 2)),
        ((0, 2), (1, 2), (2, 3)),
        ((2, 2), (2, 3), (2, 2)),
        ((2, 0), (2, 2), (2, 0)),
    ],
    # corner -> midpoint of a far side
    ((0, 0), (4, 2)): [
        ((0, 0), (0, 0), (1, 2)),
        ((0, 2), (1, 2), (2, 3)),
        ((2, 2), (2, 3), (3, 2)),
        ((2, 0), (3, 2), (4, 2)),
    ],
    # side midpoint -> midpoint of an adjacent side
    ((2, 0), (4, 2)): [
        ((0, 0), (2, 0), (1, 2)),
        ((0, 2), (1, 2), (2, 3)),
        ((2, 2), (2, 3), (3, 2)),
        ((2, 0), (3, 2), (4, 2)),
    ],
}


def _optr_reversed(children):
    return [(q, ext, ent) for (q, ent, ext) in reversed(children)]


# midpoint -> corner runs are not square-symmetry images of corner -> midpoint,
# so they get explicit reversed rules
_OPTR_BASE_RULES[((2, 0), (0, 0))] = _optr_reversed(_OPTR_BASE_RULES[((0, 0), (2, 0))])
_OPTR_BASE_RULES[((4, 2), (0, 0))] = _optr_reversed(_OPTR_BASE_RULES[((0, 0), (4, 2))])

# square symmetries on the [0,4]^2 frame, in fixed priority order; the first
# (transform, rule) match wins, which pins down the otherwise ambiguous
# diagonal rule orientation
_OPTR_TRANSFORMS = (
    lambda x, y: (x, y),
    lambda x, y: (4 - y, x),
    lambda x, y: (4 - x, 4 - y),
    lambda x, y: (y, 4 - x),
    lambda x, y: (y, x),
    lambda x, y: (4 - x, y),
    lambda x, y: (4 - y, 4 - x),
    lambda x, y: (x, 4 - y),
)

# the eight legal anchors of a square frame
_OPTR_ANCHORS = ((0, 0), (2, 0), (4, 0), (0, 2), (4, 2), (0, 4), (2, 4), (4, 4))
_OPTR_ANCHOR_ID = {p: i for i, p in enumerate(_OPTR_ANCHORS)}


def _optr_compile() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Flatten the rule grammar into anchor-id lookup tables.

    Returns (pair_index, qdx, qdy, child_entry, child_exit) where
    pair_index[entry_id, exit_id] selects a rule row, and each rule row
    holds four children in traversal order.
    """
    pair_index = np.full((8, 8), -1, dtype=np.int64)
    qdx, qdy, cent, cext = [], [], [], []
    for g in _OPTR_TRANSFORMS:
        for (ent, ext), children in _OPTR_BASE_RULES.items():
            key = (_OPTR_ANCHOR_ID[g(*ent)], _OPTR_ANCHOR_ID[g(*ext)])
            if pair_index[key] >= 0:
                continue
            row_qx, row_qy, row_e, row_x = [], [], [], []
            for (qoff, ce, cx) in children:
                g1 = g(*qoff)
                g2 = g(qoff[0] + 2, qoff[1] + 2)
                qx, qy = min(g1[0], g2[0]), min(g1[1], g2[1])
                ge, gx_ = g(*ce), g(*cx)
                row_qx.append(qx // 2)
                row_qy.append(qy // 2)
                row_e.append(_OPTR_ANCHOR_ID[(ge[0] - qx) * 2, (ge[1] - qy) * 2])
                row_x.append(_OPTR_ANCHOR_ID[(gx_[0] - qx) * 2, (gx_[1] - qy) * 2])
            pair_index[key] = len(qdx)
            qdx.append(row_qx)
            qdy.append(row_qy)
            cent.append(row_e)
            cext.append(row_x)
    return (
        pair_index,
        np.array(qdx, dtype=np.int64),
        np.array(qdy, dtype=np.int64),
        np.array(cent, dtype=np.int64),
        np.array(cext, dtype=np.int64),
    )


_OPTR_TABLES = _optr_compile()


def _optr_points(order: int) -> tuple[np.ndarray, np.ndarray]:
    pair_index, qdx, qdy, cent, cext = _OPTR_TABLES
    gx = np.zeros(1, dtype=np.int64)
    gy = np.zeros(1, dtype=np.int64)
    ent = np.array([_OPTR_ANCHOR_ID[(0, 0)]], dtype=np.int64)
    ext = np.array([_OPTR_ANCHOR_ID[(4, 4)]], dtype=np.int64)
    for _ in range(order):
        rule = pair_index[ent, ext]
        if np.any(rule < 0):  # grammar is closed; this would be a table bug
            raise AssertionError("no rule for anchor pair")
        gx = (gx[:, None] * 2 + qdx[rule]).ravel()
        gy = (gy[:, None] * 2 + qdy[rule]).ravel()
        ent = cent[rule].ravel()
        ext = cext[rule].ravel()
    return gx, gy


# ---------------------------------------------------------------------------

_BUILDERS = {
    CurveKind.HILBERT: _hilbert_points,
    CurveKind.Z: _z_points,
    CurveKind.GRAY: _gray_points,
    CurveKind.H: _h_points,
    CurveKind.OPTR: _optr_points,
    CurveKind.SWEEP: _sweep_points,
    CurveKind.SCAN: _scan_points,
    CurveKind.DIAGONAL: _diagonal_points,
}


def build_curve(kind: CurveKind, order: int) -> CurveMap:
    """Construct the full forward/inverse tables for one curve.

    Deterministic: repeated builds return identical tables. Memory is
    O(4^order); the top order 13 allocates tables for 67M cells.
    """
    kind = CurveKind(kind)
    order = _check_order(order)
    n = 1 << order
    x, y = _BUILDERS[kind](order)
    xs = np.ascontiguousarray(x, dtype=np.uint16)
    ys = np.ascontiguousarray(y, dtype=np.uint16)
    inverse = np.empty((n, n), dtype=np.uint32)
    inverse[ys, xs] = np.arange(n * n, dtype=np.uint32)
    for arr in (xs, ys, inverse):
        arr.flags.writeable = False
    return CurveMap(kind=kind, order=order, xs=xs, ys=ys, inverse=inverse)


@functools.lru_cache(maxsize=16)
def get_curve(kind: CurveKind, order: int) -> CurveMap:
    """Memoized :func:`build_curve`; maps are immutable so sharing is safe."""
    return build_curve(CurveKind(kind), order)


def index_to_point(cmap: CurveMap, t: int) -> tuple[int, int]:
    """Grid point visited at linear index ``t``."""
    t = int(t)
    if not 0 <= t < cmap.size:
        raise IndexError(f"index {t} outside [0, {cmap.size})")
    return int(cmap.xs[t]), int(cmap.ys[t])


def point_to_index(cmap: CurveMap, x: int, y: int) -> int:
    """Linear index of grid point ``(x, y)``."""
    x, y = int(x), int(y)
    if not (0 <= x < cmap.n and 0 <= y < cmap.n):
        raise IndexError(f"point ({x}, {y}) outside the {cmap.n}x{cmap.n} grid")
    return int(cmap.inverse[y, x])


def jump_positions(cmap: CurveMap) -> np.ndarray:
    """Indices t where the step to t+1 moves more than one cell (any axis).

    Returned sorted ascending. A curve with no jumps is continuous in the
    king-move sense.
    """
    dx = np.abs(np.diff(cmap.xs.astype(np.int64)))
    dy = np.abs(np.diff(cmap.ys.astype(np.int64)))
    return np.flatnonzero(np.maximum(dx, dy) > 1)
