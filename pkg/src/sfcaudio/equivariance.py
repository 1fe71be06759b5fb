"""Shift-equivariance checks for strided block convolution over curve images.

The question under test: if a sequence is rotated by d*4^l positions,
folded onto a curve of order k, convolved with a non-overlapping
2^l x 2^l kernel, and read back along the same curve at order k-l, is
the result exactly the unrotated pipeline output rotated by d?

For the Z curve the answer is yes for every d; the bit-interleaved
layout makes block structure commute with such rotations. For curves
that rotate or reflect their sub-blocks (Hilbert, and most others) it
fails, and a seeded randomized search produces concrete witnesses.

Equality is checked at tolerance zero for integer-valued inputs. Both
pipeline arms perform the identical multiply-add sequence per output
cell, so in practice real-valued inputs match bit-exactly as well; a
relative 1e-9 tolerance is still applied to avoid overclaiming.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import CurveKind, get_curve
from .imaging import SfcImage

REL_TOLERANCE = 1e-9

WITNESS_CSV_HEADER = "kind,k,l,d,seed,max_abs_difference,holds"


@dataclass(frozen=True)
class Kernel:
    """Square convolution weight block of side 2^order applied with equal stride."""

    order: int
    weights: np.ndarray

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"kernel order must be >= 1, got {self.order}")
        side = 1 << self.order
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.shape != (side, side):
            raise ValueError(f"weights must be {side}x{side}, got shape {weights.shape}")
        weights = weights.copy()
        weights.flags.writeable = False
        object.__setattr__(self, "weights", weights)

    @property
    def side(self) -> int:
        return 1 << self.order


@dataclass(frozen=True)
class EquivarianceWitness:
    """Outcome of one shifted-vs-unshifted comparison."""

    kind: CurveKind
    k: int
    l: int
    d: int
    seed: int | None
    max_abs_difference: float
    holds: bool

    def csv_row(self) -> str:
        seed = "" if self.seed is None else str(self.seed)
        return (
            f"{self.kind.name.lower()},{self.k},{self.l},{self.d},{seed},"
            f"{self.max_abs_difference:.17g},{str(self.holds).lower()}"
        )


@dataclass(frozen=True)
class LemmaCell:
    """Aggregate over all trials and shifts at one (k, l)."""

    k: int
    l: int
    checks: int
    failures: int
    max_abs_difference: float
    worst: EquivarianceWitness
    first_failure: EquivarianceWitness | None


@dataclass(frozen=True)
class LemmaSweep:
    kind: CurveKind
    seed: int
    trials: int
    real_valued: bool
    cells: tuple[LemmaCell, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.failures == 0 for c in self.cells)

    @property
    def total_checks(self) -> int:
        return sum(c.checks for c in self.cells)

    @property
    def total_failures(self) -> int:
        return sum(c.failures for c in self.cells)


def circular_shift(seq: np.ndarray, r: int) -> np.ndarray:
    """Rotate so output[i] = input[(i + r) mod len]; r is reduced mod len."""
    return np.roll(np.asarray(seq), -int(r))


def fold(seq, kind: CurveKind, k: int) -> SfcImage:
    """Scatter a full-length sequence (exactly 4^k values) onto the grid."""
    seq = np.asarray(seq, dtype=np.float64)
    cm = get_curve(CurveKind(kind), k)
    if seq.shape != (cm.size,):
        raise ValueError(f"sequence must have exactly {cm.size} values, got shape {seq.shape}")
    pixels = np.empty((cm.n, cm.n), dtype=np.float64)
    pixels[cm.ys, cm.xs] = seq
    return SfcImage(kind=cm.kind, order=cm.order, length=cm.size, pixels=pixels)


def unfold(image: SfcImage) -> np.ndarray:
    """Gather the full pixel grid back into curve order."""
    cm = get_curve(image.kind, image.order)
    return image.pixels[cm.ys, cm.xs]


def strided_conv(image: SfcImage, kernel: Kernel) -> np.ndarray:
    """Non-overlapping block dot products; output side is 2^(k-l).

    Output cell (i, j) is the weighted sum of the pixel block whose top
    left corner sits at (j*2^l, i*2^l). einsum keeps the per-cell
    summation order fixed, so equal blocks give bit-equal outputs.
    """
    if kernel.order >= image.order:
        raise ValueError(f"kernel order {kernel.order} must be < image order {image.order}")
    b = kernel.side
    m = image.n // b
    blocks = image.pixels.reshape(m, b, m, b)
    return np.einsum("ibjc,bc->ij", blocks, kernel.weights)


def _grid_to_seq(grid: np.ndarray, kind: CurveKind, order: int) -> np.ndarray:
    cm = get_curve(kind, order)
    return grid[cm.ys, cm.xs]


def _is_integer_valued(a: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(a)) and np.all(a == np.round(a)))


def check_equivariance(
    kind: CurveKind,
    k: int,
    kernel: Kernel,
    seq,
    d: int,
    seed: int | None = None,
) -> EquivarianceWitness:
    """Compare the two pipeline arms for one rotation multiplier d.

    Arm A rotates the input by d*4^l before fold/convolve/unfold; arm B
    rotates the unshifted pipeline output by d. ``seed`` is carried into
    the witness untouched so batch drivers can tie results to their draws.
    """
    kind = CurveKind(kind)
    seq = np.asarray(seq, dtype=np.float64)
    l = kernel.order
    if l >= k:
        raise ValueError(f"kernel order {l} must be < image order {k}")
    out_len = 1 << (2 * (k - l))
    if not 0 <= d < out_len:
        raise ValueError(f"shift multiplier d={d} outside [0, {out_len})")

    r = d << (2 * l)  # rotate the input by d blocks of 4^l samples
    shifted = circular_shift(seq, r)
    a_side = _grid_to_seq(strided_conv(fold(shifted, kind, k), kernel), kind, k - l)
    base = _grid_to_seq(strided_conv(fold(seq, kind, k), kernel), kind, k - l)
    b_side = circular_shift(base, d)

    diff = float(np.max(np.abs(a_side - b_side))) if out_len else 0.0
    if _is_integer_valued(seq) and _is_integer_valued(kernel.weights):
        tol = 0.0
    else:
        tol = REL_TOLERANCE * max(1.0, float(np.max(np.abs(base))))
    return EquivarianceWitness(
        kind=kind, k=k, l=l, d=d, seed=seed,
        max_abs_difference=diff, holds=diff <= tol,
    )


def _draw_inputs(rng: np.random.Generator, k: int, l: int, real_valued: bool):
    cells = 1 << (2 * k)
    side = 1 << l
    if real_valued:
        seq = rng.uniform(-1.0, 1.0, size=cells)
        weights = rng.uniform(-1.0, 1.0, size=(side, side))
    else:
        seq = rng.integers(-8, 9, size=cells).astype(np.float64)
        weights = rng.integers(-8, 9, size=(side, side)).astype(np.float64)
    return seq, Kernel(order=l, weights=weights)


def replay_witness(witness: EquivarianceWitness, real_valued: bool = False) -> EquivarianceWitness:
    """Regenerate a sweep trial's inputs from its seed and rerun the check."""
    if witness.seed is None:
        raise ValueError("witness has no recorded seed")
    rng = np.random.default_rng(witness.seed)
    seq, kernel = _draw_inputs(rng, witness.k, witness.l, real_valued)
    return check_equivariance(witness.kind, witness.k, kernel, seq, witness.d, seed=witness.seed)


def sweep_lemma(
    kind: CurveKind,
    k_range,
    l_range,
    trials: int = 100,
    seed: int = 0,
    real_valued: bool = False,
) -> LemmaSweep:
    """Randomized verification sweep over (k, l) pairs with l < k.

    Every trial draws a fresh sequence and kernel from a per-trial seed
    derived from the master seed, then checks every rotation multiplier
    d. Aggregates counts plus the worst and first-failing witnesses per
    (k, l); any witness can be replayed from its recorded seed.
    """
    kind = CurveKind(kind)
    pairs = [(int(k), int(l)) for k in k_range for l in l_range if int(l) < int(k)]
    if not pairs or trials < 1:
        raise ValueError("need at least one (k, l) pair with l < k and trials >= 1")
    trial_seeds = np.random.SeedSequence(seed).generate_state(len(pairs) * trials)

    cells = []
    idx = 0
    for k, l in pairs:
        checks = failures = 0
        worst = None
        first_failure = None
        for _ in range(trials):
            trial_seed = int(trial_seeds[idx])
            idx += 1
            rng = np.random.default_rng(trial_seed)
            seq, kernel = _draw_inputs(rng, k, l, real_valued)
            for d in range(1 << (2 * (k - l))):
                w = check_equivariance(kind, k, kernel, seq, d, seed=trial_seed)
                checks += 1
                if not w.holds:
                    failures += 1
                    if first_failure is None:
                        first_failure = w
                if worst is None or w.max_abs_difference > worst.max_abs_difference:
                    worst = w
        cells.append(LemmaCell(
            k=k, l=l, checks=checks, failures=failures,
            max_abs_difference=worst.max_abs_difference,
            worst=worst, first_failure=first_failure,
        ))
    return LemmaSweep(
        kind=kind, seed=seed, trials=trials,
        real_valued=real_valued, cells=tuple(cells),
    )


def witnesses_to_csv(witnesses) -> str:
    lines = [WITNESS_CSV_HEADER]
    lines.extend(w.csv_row() for w in witnesses)
    return "\n".join(lines) + "\n"


def sweep_to_text(sweep: LemmaSweep) -> str:
    """Human-readable summary, one line per (k, l) plus a verdict line."""
    lines = [
        f"curve={sweep.kind.name.lower()} trials={sweep.trials} seed={sweep.seed} "
        f"inputs={'real' if sweep.real_valued else 'integer'}"
    ]
    for c in sweep.cells:
        lines.append(
            f"  k={c.k} l={c.l}: checks={c.checks} failures={c.failures} "
            f"max_abs_difference={c.max_abs_difference:.3g}"
        )
    if sweep.all_hold:
        lines.append(
            f"  all {sweep.total_checks} checks hold "
            f"(no witness found in {sweep.trials} trials per pair; not a proof)"
        )
    else:
        lines.append(f"  {sweep.total_failures} of {sweep.total_checks} checks FAILED")
    return "\n".join(lines) + "\n"
