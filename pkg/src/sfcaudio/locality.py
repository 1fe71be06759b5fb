"""Locality analysis: how index gaps stretch into grid distance.

For a curve map and a gap g, the profile scans pairs (i, i+g) and records
the worst and mean grid distances. Continuous curves keep worst-case
growth near sqrt(g); row-based layouts stretch linearly with g. The
``ratio_sqrt`` and ``ratio_lin`` columns make those two regimes directly
comparable.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .curves import CurveKind, CurveMap, build_curve, jump_positions

# exhaustive pair scans are O(4^k) per gap; past this order a fixed-seed
# uniform subsample of start indices is used instead
EXHAUSTIVE_MAX_ORDER = 8

CSV_HEADER = "kind,order,gap,worst_inf,worst_l1,worst_l2,mean_inf,ratio_sqrt,ratio_lin,jump_count"


@dataclass(frozen=True)
class GapStats:
    gap: int
    worst_inf: int
    worst_l1: int
    worst_l2: float
    mean_inf: float
    ratio_sqrt: float
    ratio_lin: float


@dataclass(frozen=True)
class LocalityReport:
    kind: CurveKind
    order: int
    rows: tuple[GapStats, ...]
    jump_count: int


def grid_distance(cmap: CurveMap, i: int, j: int, p) -> float:
    """p-norm (p in {1, 2, inf}) of the grid displacement between indices."""
    i, j = int(i), int(j)
    for t in (i, j):
        if not 0 <= t < cmap.size:
            raise IndexError(f"index {t} outside [0, {cmap.size})")
    dx = abs(int(cmap.xs[i]) - int(cmap.xs[j]))
    dy = abs(int(cmap.ys[i]) - int(cmap.ys[j]))
    if p == 1:
        return float(dx + dy)
    if p == 2:
        return math.hypot(dx, dy)
    if p == math.inf:
        return float(max(dx, dy))
    raise ValueError(f"norm selector must be 1, 2 or inf, got {p!r}")


def _gap_stats(cmap: CurveMap, gap: int, starts: np.ndarray | None) -> GapStats:
    xs = cmap.xs.astype(np.int64)
    ys = cmap.ys.astype(np.int64)
    if starts is None:
        dx = np.abs(xs[gap:] - xs[:-gap])
        dy = np.abs(ys[gap:] - ys[:-gap])
    else:
        dx = np.abs(xs[starts + gap] - xs[starts])
        dy = np.abs(ys[starts + gap] - ys[starts])
    inf = np.maximum(dx, dy)
    worst_inf = int(inf.max())
    return GapStats(
        gap=gap,
        worst_inf=worst_inf,
        worst_l1=int((dx + dy).max()),
        worst_l2=float(np.sqrt(float((dx * dx + dy * dy).max()))),
        mean_inf=float(inf.mean()),
        ratio_sqrt=worst_inf / math.sqrt(gap),
        ratio_lin=worst_inf / gap,
    )


def worst_case_profile(
    cmap: CurveMap,
    gaps,
    *,
    sample_size: int = 1 << 16,
    rng_seed: int = 0,
) -> LocalityReport:
    """Distance statistics for each gap.

    Exhaustive over all start indices up to order 8. Above that, start
    indices are a uniform subsample drawn from ``rng_seed``, so repeated
    calls stay deterministic.
    """
    gaps = [int(g) for g in gaps]
    if not gaps:
        raise ValueError("gap list must not be empty")
    for g in gaps:
        if not 1 <= g < cmap.size:
            raise ValueError(f"gap {g} outside [1, {cmap.size})")
    rows = []
    for g in gaps:
        if cmap.order <= EXHAUSTIVE_MAX_ORDER:
            starts = None
        else:
            rng = np.random.default_rng(rng_seed)
            count = min(sample_size, cmap.size - g)
            starts = rng.integers(0, cmap.size - g, size=count)
        rows.append(_gap_stats(cmap, g, starts))
    return LocalityReport(
        kind=cmap.kind,
        order=cmap.order,
        rows=tuple(rows),
        jump_count=int(jump_positions(cmap).size),
    )


def compare_curves(order: int, gaps, **kwargs) -> list[LocalityReport]:
    """One profile per curve kind, identical gap set. Exhaustive, so k <= 8."""
    if order > EXHAUSTIVE_MAX_ORDER:
        raise ValueError(f"side-by-side scans are exhaustive; order must be <= {EXHAUSTIVE_MAX_ORDER}")
    return [worst_case_profile(build_curve(kind, order), gaps, **kwargs) for kind in CurveKind]


def reports_to_csv(reports) -> str:
    """One row per (kind, gap), fixed column order, header included."""
    out = [CSV_HEADER]
    for rep in reports:
        for row in rep.rows:
            out.append(
                f"{rep.kind.name.lower()},{rep.order},{row.gap},{row.worst_inf},"
                f"{row.worst_l1},{row.worst_l2:.9g},{row.mean_inf:.9g},"
                f"{row.ratio_sqrt:.9g},{row.ratio_lin:.9g},{rep.jump_count}"
            )
    return "\n".join(out) + "\n"


def reports_to_text(reports) -> str:
    """Aligned plain-text table of the same rows as the CSV form."""
    cols = CSV_HEADER.split(",")
    table = [cols]
    for rep in reports:
        for row in rep.rows:
            table.append([
                rep.kind.name.lower(), str(rep.order), str(row.gap), str(row.worst_inf),
                str(row.worst_l1), f"{row.worst_l2:.3f}", f"{row.mean_inf:.3f}",
                f"{row.ratio_sqrt:.3f}", f"{row.ratio_lin:.3f}", str(rep.jump_count),
            ])
    widths = [max(len(r[c]) for r in table) for c in range(len(cols))]
    buf = io.StringIO()
    for r in table:
        buf.write("  ".join(v.rjust(w) for v, w in zip(r, widths)).rstrip() + "\n")
    return buf.getvalue()
