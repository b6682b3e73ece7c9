"""Distortion and regularity measurements for circle maps and conjugacies.

Everything here reports sampled quantities: moduli are maxima over finite
grids of points and scales, dilatation extremes run over cylinder intervals of
one level, and tail sums are either closed forms (piecewise-linear maps) or
full enumerations.  Sampled maxima are lower bounds for the true suprema and
sampled minima are upper bounds; every report says which grid produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import defaults
from .circle_maps import (
    CircleHomeoSpec,
    CircleMapSpec,
    ensure_valid,
    global_inverse_lift,
    homeo_lift_values,
    inverse_branch_values,
)
from .conjugacy import ConjugacyMap
from .errors import (
    CellCapExceeded,
    DegreeMismatchError,
    ResolutionExhausted,
    WorkCapExceeded,
)
from .symbolic_partition import (
    Word,
    check_word,
    cylinder_lengths,
    index_of_word,
    word_of_index,
)

LiftLike = CircleHomeoSpec | ConjugacyMap | Callable[[np.ndarray], np.ndarray]


def _lift_fn(h: LiftLike) -> tuple[Callable[[np.ndarray], np.ndarray], str]:
    """Adapt a homeo spec, conjugacy, or raw callable to a vectorized lift."""
    if isinstance(h, CircleHomeoSpec):
        return (lambda x: homeo_lift_values(h, x)), h.describe()
    if isinstance(h, ConjugacyMap):
        return h.lift_values, h.describe()
    if callable(h):
        fn = h

        def wrapped(x: np.ndarray) -> np.ndarray:
            out = fn(np.asarray(x, dtype=float))
            return np.asarray(out, dtype=float)

        return wrapped, getattr(h, "__name__", "callable")
    raise TypeError(f"not an evaluable circle homeomorphism: {type(h).__name__}")


# ---------------------------------------------------------------------------
# Quasisymmetry / symmetry of homeomorphisms
# ---------------------------------------------------------------------------

def qs_ratio(
    h: LiftLike,
    x: float,
    t: float,
    denom_floor: float = defaults.QS_DENOM_FLOOR,
) -> float:
    """Distortion ratio ``(H(x+t) - H(x)) / (H(x) - H(x-t))`` of the lift.

    Raises:
        ResolutionExhausted: the denominator fell below ``denom_floor``
            (the measurement resolution is used up at this scale).
        ValueError: t is not positive.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    fn, _ = _lift_fn(h)
    vals = fn(np.asarray([x + t, x, x - t], dtype=float))
    num = float(vals[0] - vals[1])
    den = float(vals[1] - vals[2])
    if den < denom_floor:
        raise ResolutionExhausted(f"denominator {den:.3e} below floor at x={x}, t={t}")
    return num / den


@dataclass(frozen=True)
class ModulusRow:
    scale: float
    deviation: float
    argmax_x: float


@dataclass(frozen=True)
class ModulusReport:
    """Sampled symmetry modulus: for each scale t the worst deviation
    ``max(r - 1, 1/r - 1)`` of the distortion ratio r over the x-grid.

    Sampled maxima are lower bounds for the true modulus.
    """

    subject: str
    grid: int
    rows: tuple[ModulusRow, ...]

    def __post_init__(self):
        scales = [row.scale for row in self.rows]
        if any(b >= a for a, b in zip(scales, scales[1:])):
            raise ValueError("scales must be strictly decreasing")

    def worst(self) -> float:
        return max((row.deviation for row in self.rows), default=0.0)


def symmetry_modulus(
    h: LiftLike,
    scales: Sequence[float] = defaults.SCALE_LADDER,
    grid: int = defaults.MODULUS_GRID,
    denom_floor: float = defaults.QS_DENOM_FLOOR,
) -> ModulusReport:
    """Sampled symmetry modulus of an evaluable circle homeomorphism.

    Raises:
        ResolutionExhausted: some increment at some grid point vanished.
    """
    fn, subject = _lift_fn(h)
    ladder = sorted({float(t) for t in scales}, reverse=True)
    if not ladder or ladder[0] > 0.5 or ladder[-1] <= 0.0:
        raise ValueError("scales must lie in (0, 0.5]")
    xs = np.arange(grid, dtype=float) / grid
    rows = []
    for t in ladder:
        plus = fn(xs + t)
        mid = fn(xs)
        minus = fn(xs - t)
        num = plus - mid
        den = mid - minus
        if float(np.min(den)) < denom_floor or float(np.min(num)) < denom_floor:
            raise ResolutionExhausted(f"increment below floor at scale t={t}")
        ratio = num / den
        dev = np.maximum(ratio - 1.0, 1.0 / ratio - 1.0)
        j = int(np.argmax(dev))
        rows.append(ModulusRow(scale=t, deviation=float(dev[j]), argmax_x=float(xs[j])))
    return ModulusReport(subject=subject, grid=grid, rows=tuple(rows))


# ---------------------------------------------------------------------------
# Uniform quasisymmetry of endomorphisms
# ---------------------------------------------------------------------------

def uqs_ratio_endo(
    spec: CircleMapSpec,
    x: float,
    t: float,
    n: int,
    tol: float = defaults.SOLVER_TOL,
    depth_cap: int = defaults.DEPTH_CAP,
    denom_floor: float = defaults.QS_DENOM_FLOOR,
) -> float:
    """Distortion ratio of the n-fold inverse lift,
    ``(F^{-n}(x+t) - F^{-n}(x)) / (F^{-n}(x) - F^{-n}(x-t))``."""
    if t <= 0:
        raise ValueError("t must be positive")
    ensure_valid(spec)
    plus = global_inverse_lift(spec, x + t, n, tol=tol, depth_cap=depth_cap)
    mid = global_inverse_lift(spec, x, n, tol=tol, depth_cap=depth_cap)
    minus = global_inverse_lift(spec, x - t, n, tol=tol, depth_cap=depth_cap)
    den = mid - minus
    if den < denom_floor:
        raise ResolutionExhausted(f"denominator {den:.3e} below floor at x={x}, t={t}, n={n}")
    return (plus - mid) / den


# ---------------------------------------------------------------------------
# Lebesgue measure preservation
# ---------------------------------------------------------------------------

def dyadic_intervals(count: int) -> list[tuple[float, float]]:
    """The ``count`` equal test intervals ``[k/count, (k+1)/count]``."""
    return [(k / count, (k + 1) / count) for k in range(count)]


def measure_profile(
    spec: CircleMapSpec,
    intervals: Sequence[tuple[float, float]],
    tol: float = defaults.SOLVER_TOL,
) -> np.ndarray:
    """Per-interval deviation ``| |f^{-1}([a,b])| - (b-a) |``.

    The preimage length is the sum of the d branch-inverse lengths; checking
    intervals probes measure preservation on a generating family.
    """
    ensure_valid(spec)
    a = np.asarray([iv[0] for iv in intervals], dtype=float)
    b = np.asarray([iv[1] for iv in intervals], dtype=float)
    if np.any(a < 0) or np.any(b > 1) or np.any(a >= b):
        raise ValueError("intervals must be nondegenerate subintervals of [0,1]")
    total = np.zeros_like(a)
    for s in range(spec.degree):
        total += inverse_branch_values(spec, s, b, tol=tol)
        total -= inverse_branch_values(spec, s, a, tol=tol)
    return np.abs(total - (b - a))


def measure_deviation(
    spec: CircleMapSpec,
    intervals: Sequence[tuple[float, float]],
    tol: float = defaults.SOLVER_TOL,
) -> float:
    """Worst deviation from Lebesgue-measure preservation over the intervals."""
    return float(np.max(measure_profile(spec, intervals, tol=tol)))


# ---------------------------------------------------------------------------
# Dilatation extremes of a conjugacy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DilatationReport:
    """Extremes of ``|h(I_w)| / |I_w|`` over the level-n cylinders.

    ``max_ratio`` is nondecreasing and ``min_ratio`` nonincreasing in n (each
    parent ratio is a length-weighted mean of its child ratios); the argmax
    word is one witness interval of the maximizing sequence.  ``coarse_max``
    holds, for each level-m cell, the maximum ratio over its level-n
    descendants: an empirical density probe for the maximizing set.
    """

    level: int
    max_ratio: float
    min_ratio: float
    argmax_word: Word
    argmin_word: Word
    coarse_level: int
    coarse_max: tuple[tuple[Word, float], ...]


def dilatation_report(
    f: CircleMapSpec,
    g: CircleMapSpec,
    n: int,
    coarse_level: int = 0,
    tol: float = defaults.SOLVER_TOL,
    cell_cap: int = defaults.CELL_CAP,
) -> DilatationReport:
    """Ratios ``|I_w(g)| / |I_w(f)|`` over all level-n words.

    Word equivariance of the conjugacy makes ``h(I_w(f)) = I_w(g)`` exactly,
    so cylinder ratios are computed from the two partitions alone.

    Raises:
        DegreeMismatchError, CellCapExceeded, ValueError (coarse_level >= n).
    """
    ensure_valid(f)
    ensure_valid(g)
    if f.degree != g.degree:
        raise DegreeMismatchError(f"degree {f.degree} vs {g.degree}")
    if not 0 <= coarse_level < n:
        raise ValueError("need 0 <= coarse_level < n")
    d = f.degree
    len_f = cylinder_lengths(f, n, tol=tol, cell_cap=cell_cap)
    len_g = cylinder_lengths(g, n, tol=tol, cell_cap=cell_cap)
    ratios = len_g / len_f
    jmax = int(np.argmax(ratios))  # first occurrence = lexicographic tie-break
    jmin = int(np.argmin(ratios))
    cells = d**coarse_level
    per_cell = ratios.reshape(cells, -1).max(axis=1)
    coarse = tuple(
        (word_of_index(j, coarse_level, d), float(per_cell[j])) for j in range(cells)
    )
    return DilatationReport(
        level=n,
        max_ratio=float(ratios[jmax]),
        min_ratio=float(ratios[jmin]),
        argmax_word=word_of_index(jmax, n, d),
        argmin_word=word_of_index(jmin, n, d),
        coarse_level=coarse_level,
        coarse_max=coarse,
    )


# ---------------------------------------------------------------------------
# Tail sums over words avoiding a fixed block
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailSumRow:
    k: int
    excluded_sum: float
    bound_empirical: float
    bound_bg_constant: float
    interval_count: int


@dataclass(frozen=True)
class TailSumReport:
    """Total lengths of level-nk cylinders whose k blocks all avoid one word.

    ``excluded_sum`` at stage k is also the Lebesgue measure of the stage-k
    cover of the set of points whose orbit never enters the base cylinder at
    block times.  ``ratio_floor`` is the smallest observed n-level descent
    ratio (the sharp empirical bound constant); ``bg_ratio_floor`` is the
    looser constant ``C^{-n}`` from the observed bounded-geometry constant C.
    """

    word: Word
    block_level: int
    ratio_floor: float
    bg_ratio_floor: float
    method: str
    rows: tuple[TailSumRow, ...]


def tail_sum(
    spec: CircleMapSpec,
    word: Word,
    k_max: int,
    tol: float = defaults.SOLVER_TOL,
    work_cap: int = defaults.WORK_CAP,
    cell_cap: int = defaults.CELL_CAP,
) -> TailSumReport:
    """Tail sums ``S_k`` for blocks avoiding ``word``, with decay bounds.

    Piecewise-linear maps use the product-of-lengths closed form
    ``S_k = (1 - |I_w|)^k``; other kinds enumerate all level-nk cylinders and
    mask by block digits.

    Raises:
        WorkCapExceeded: ``(d^n - 1)^k_max`` excluded tuples exceed the cap.
        CellCapExceeded: the enumeration needs more than ``cell_cap`` cells.
    """
    ensure_valid(spec)
    check_word(spec, word)
    n = word.level
    if n < 1:
        raise ValueError("base word must be nonempty")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    d = spec.degree
    tuples_capped = (d**n - 1) ** k_max
    if tuples_capped > work_cap:
        raise WorkCapExceeded(
            f"({d}^{n} - 1)^{k_max} = {tuples_capped} excluded tuples exceed work cap {work_cap}"
        )

    if spec.kind in ("linear", "piecewise_linear_full_branch"):
        lengths1 = cylinder_lengths(spec, 1, tol=tol, cell_cap=cell_cap)
        base_len = float(np.prod([lengths1[s] for s in word.symbols]))
        ratio_floor = float(np.min(lengths1)) ** n
        bg_floor = ratio_floor  # C = 1/min branch length for these maps
        rows = []
        for k in range(1, k_max + 1):
            rows.append(
                TailSumRow(
                    k=k,
                    excluded_sum=(1.0 - base_len) ** k,
                    bound_empirical=(1.0 - ratio_floor) ** k,
                    bound_bg_constant=(1.0 - bg_floor) ** k,
                    interval_count=(d**n - 1) ** k,
                )
            )
        return TailSumReport(
            word=word,
            block_level=n,
            ratio_floor=ratio_floor,
            bg_ratio_floor=bg_floor,
            method="closed_form",
            rows=tuple(rows),
        )

    deepest = n * k_max
    if d**deepest > cell_cap:
        raise CellCapExceeded(
            f"enumeration to level {deepest} needs {d}^{deepest} cells (cap {cell_cap})"
        )
    # walk the levels once; keep block-level length arrays and the running mask
    widx = index_of_word(word, d)
    lefts = np.zeros(1)
    prev_lengths = np.asarray([1.0])
    block_lengths: list[np.ndarray] = []
    bg_worst = 1.0
    for level in range(1, deepest + 1):
        lefts = np.concatenate(
            [inverse_branch_values(spec, s, lefts, tol=tol) for s in range(d)]
        )
        lengths = np.diff(np.append(lefts, 1.0))
        bg_worst = max(bg_worst, float(np.max(np.repeat(prev_lengths, d) / lengths)))
        prev_lengths = lengths
        if level % n == 0:
            block_lengths.append(lengths)
    ratio_floor = 1.0
    parent = np.asarray([1.0])
    for lengths in block_lengths:
        ratio_floor = min(ratio_floor, float(np.min(lengths / np.repeat(parent, d**n))))
        parent = lengths
    bg_floor = bg_worst**-n
    rows = []
    mask = np.ones(1, dtype=bool)
    for k in range(1, k_max + 1):
        lengths = block_lengths[k - 1]
        # last block digits of a level-nk index are its residue mod d^n
        last_block = np.arange(lengths.size, dtype=np.int64) % (d**n)
        mask = np.repeat(mask, d**n) & (last_block != widx)
        rows.append(
            TailSumRow(
                k=k,
                excluded_sum=float(np.sum(lengths[mask])),
                bound_empirical=(1.0 - ratio_floor) ** k,
                bound_bg_constant=(1.0 - bg_floor) ** k,
                interval_count=int(np.count_nonzero(mask)),
            )
        )
    return TailSumReport(
        word=word,
        block_level=n,
        ratio_floor=ratio_floor,
        bg_ratio_floor=bg_floor,
        method="enumeration",
        rows=tuple(rows),
    )
