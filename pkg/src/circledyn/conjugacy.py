"""Topological conjugacy between two circle endomorphisms of the same degree.

For full-branch maps ``f`` and ``g`` of degree d, the conjugacy ``h`` with
``h o f = g o h`` and ``h(0) = 0`` maps every f-cylinder onto the g-cylinder
of the same word.  Point values are therefore computed by word matching: refine
the word of x under f until the g-cylinder of that word is narrower than the
requested tolerance, and return that g-cylinder as a certified enclosure.
Convergence relies on g's mesh decay; neither map needs to be uniformly
quasisymmetric.

When x lands exactly on a cylinder endpoint of f (within a snap distance) the
corresponding g-endpoint is returned as a zero-width enclosure: endpoints of
f-cylinders map to g-endpoints exactly, up to solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import defaults
from .circle_maps import CircleMapSpec, branch_points, ensure_valid, lift_values, inverse_branch_values
from .errors import CellCapExceeded, DegreeMismatchError, InvalidMapError
from .symbolic_partition import Word, level_endpoints, mesh, word_of_index


@dataclass(frozen=True)
class ConjugacyEnclosure:
    """A certified interval containing h(x), with the word depth that produced it.

    ``tol_met`` is False when the depth cap stopped refinement before the
    requested width was reached; the enclosure is still sound.
    """

    x: float
    lo: float
    hi: float
    depth: int
    tol_met: bool = True

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True, eq=False)
class EndpointTable:
    """Paired level-n endpoints of two maps, in shared word order."""

    level: int
    f_points: np.ndarray
    g_points: np.ndarray

    def __post_init__(self):
        if self.f_points.shape != self.g_points.shape:
            raise ValueError("endpoint arrays must have equal length")
        for name, pts in (("f", self.f_points), ("g", self.g_points)):
            if not np.all(np.diff(pts) > 0):
                raise ValueError(f"{name}-endpoints not strictly increasing")

    def __len__(self) -> int:
        return len(self.f_points)

    def pairs(self) -> Iterator[tuple[float, float]]:
        return zip(self.f_points.tolist(), self.g_points.tolist())


@dataclass(frozen=True)
class ConjugacyResidual:
    """Sup-norm residual of ``h o f = g o h`` on a grid, with error attribution."""

    max_residual: float
    max_enclosure_width: float
    argmax_x: float
    grid_size: int
    tol: float
    tol_met_all: bool


@lru_cache(maxsize=256)
def _mesh_decay_probe(spec: CircleMapSpec, probe_level: int = defaults.PROBE_LEVEL) -> None:
    """Cheap bounded-geometry sanity check: the mesh must decay level by level."""
    meshes = [mesh(spec, n) for n in range(1, probe_level + 1)]
    for a, b in zip(meshes, meshes[1:]):
        if not b < a:
            raise InvalidMapError(
                f"{spec.describe()}: mesh does not decay at shallow levels "
                f"({a:.6g} -> {b:.6g}); refusing conjugacy computation"
            )


def _check_pair(f: CircleMapSpec, g: CircleMapSpec) -> None:
    ensure_valid(f)
    ensure_valid(g)
    if f.degree != g.degree:
        raise DegreeMismatchError(f"degree {f.degree} vs {g.degree}")
    _mesh_decay_probe(f)
    _mesh_decay_probe(g)


def conjugacy_enclosures(
    f: CircleMapSpec,
    g: CircleMapSpec,
    xs: np.ndarray,
    tol: float = 1e-8,
    depth_cap: int = defaults.CONJUGACY_DEPTH_CAP,
    solver_tol: float = defaults.SOLVER_TOL,
    snap: float = defaults.ENDPOINT_SNAP,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized conjugacy enclosures for points of [0,1].

    Returns arrays ``(lo, hi, depth, tol_met)``.  All points are refined in
    lockstep; a point stops once its g-cylinder is narrower than ``tol`` or it
    snaps onto a cylinder endpoint (zero width).
    """
    _check_pair(f, g)
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1:
        raise ValueError("xs must be one-dimensional")
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise ValueError("conjugacy evaluation points must lie in [0,1]")
    m = xs.size
    d = f.degree
    f_cuts = np.asarray(branch_points(f), dtype=float)
    g_cuts = np.asarray(branch_points(g), dtype=float)

    lo_f = np.zeros(m)
    hi_f = np.ones(m)
    lo_g = np.zeros(m)
    hi_g = np.ones(m)
    depth = np.zeros(m, dtype=np.int64)
    symbols = np.zeros((m, depth_cap), dtype=np.int64)

    done = np.zeros(m, dtype=bool)
    # exact fixed endpoints of the circle
    at_one = xs == 1.0
    lo_g[at_one] = 1.0
    hi_g[at_one] = 1.0
    at_zero = xs == 0.0
    hi_g[at_zero] = 0.0
    done |= at_one | at_zero
    done |= (hi_g - lo_g) <= tol

    for k in range(depth_cap):
        if done.all():
            break
        act = np.where(~done)[0]
        x_act = xs[act]
        sub_symbols = symbols[act, :k]

        def chain(spec: CircleMapSpec, start: np.ndarray) -> np.ndarray:
            v = start
            for j in range(k - 1, -1, -1):
                v = inverse_branch_values(spec, sub_symbols[:, j], v, tol=solver_tol)
            return v

        # division points of the current f-cylinders, then the chosen child
        divisions = np.empty((d + 1, act.size))
        divisions[0] = lo_f[act]
        divisions[d] = hi_f[act]
        for s in range(1, d):
            divisions[s] = chain(f, np.full(act.size, f_cuts[s]))
        sel = np.zeros(act.size, dtype=np.int64)
        for s in range(1, d):
            sel += divisions[s] <= x_act
        symbols[act, k] = sel
        cols = np.arange(act.size)
        new_lo_f = divisions[sel, cols]
        new_hi_f = divisions[sel + 1, cols]
        new_lo_g = chain(g, g_cuts[sel])
        new_hi_g = chain(g, g_cuts[sel + 1])

        lo_f[act], hi_f[act] = new_lo_f, new_hi_f
        lo_g[act], hi_g[act] = new_lo_g, new_hi_g
        depth[act] = k + 1

        # exact endpoint: x sits on the left end of its (fresh) f-cylinder
        width_f = new_hi_f - new_lo_f
        exact = (np.abs(x_act - new_lo_f) <= snap) & (width_f > 1e3 * snap)
        if exact.any():
            hit = act[exact]
            lo_g[hit] = hi_g[hit] = new_lo_g[exact]
        converged = exact | ((new_hi_g - new_lo_g) <= tol)
        done[act[converged]] = True

    tol_met = (hi_g - lo_g) <= tol
    return lo_g, hi_g, depth, tol_met


def conjugacy_eval(
    f: CircleMapSpec,
    g: CircleMapSpec,
    x: float,
    tol: float = 1e-8,
    depth_cap: int = defaults.CONJUGACY_DEPTH_CAP,
    solver_tol: float = defaults.SOLVER_TOL,
    snap: float = defaults.ENDPOINT_SNAP,
) -> ConjugacyEnclosure:
    """Certified enclosure of h(x) for the conjugacy h with ``h o f = g o h``.

    The word of x under f is refined until the matching g-cylinder is narrower
    than ``tol``.  If the depth cap is reached first, the best enclosure is
    returned with ``tol_met=False`` rather than failing, so sup-norm callers
    can still use the partial answer.

    Raises:
        DegreeMismatchError: maps of different degree.
        InvalidMapError: validation or mesh-decay probe failure.
    """
    lo, hi, depth, tol_met = conjugacy_enclosures(
        f, g, np.asarray([x], dtype=float), tol=tol, depth_cap=depth_cap,
        solver_tol=solver_tol, snap=snap,
    )
    return ConjugacyEnclosure(
        x=float(x), lo=float(lo[0]), hi=float(hi[0]),
        depth=int(depth[0]), tol_met=bool(tol_met[0]),
    )


class ConjugacyMap:
    """The conjugacy h from the f-system to the g-system as an evaluable lift.

    Point values are enclosure midpoints at tolerance ``tol``; exact endpoint
    hits are returned exactly.  The lift extends by ``H(x+1) = H(x) + 1``.
    """

    def __init__(
        self,
        f: CircleMapSpec,
        g: CircleMapSpec,
        tol: float = 1e-10,
        depth_cap: int = defaults.CONJUGACY_DEPTH_CAP,
    ):
        _check_pair(f, g)
        self.f = f
        self.g = g
        self.tol = tol
        self.depth_cap = depth_cap

    def enclosure(self, x: float) -> ConjugacyEnclosure:
        return conjugacy_eval(self.f, self.g, x, tol=self.tol, depth_cap=self.depth_cap)

    def lift_values(self, x) -> np.ndarray:
        """Vectorized lift values (enclosure midpoints + integer part)."""
        x = np.asarray(x, dtype=float)
        k = np.floor(x)
        u = x - k
        lo, hi, _, _ = conjugacy_enclosures(
            self.f, self.g, np.atleast_1d(u), tol=self.tol, depth_cap=self.depth_cap
        )
        mid = 0.5 * (lo + hi)
        return mid.reshape(u.shape) + k

    def __call__(self, x: float) -> float:
        return float(self.lift_values(np.float64(x)))

    def describe(self) -> str:
        return f"conjugacy({self.f.describe()} -> {self.g.describe()}, tol={self.tol:g})"


def endpoint_table(
    f: CircleMapSpec,
    g: CircleMapSpec,
    n: int,
    solver_tol: float = defaults.SOLVER_TOL,
    cell_cap: int = defaults.CELL_CAP,
) -> EndpointTable:
    """Pair the ordered level-n endpoints of f with those of g (same word order).

    This is the restriction of h to ``f^{-n}(0)``: h maps the k-th f-endpoint
    to the k-th g-endpoint because both lists are ordered by the same words.

    Raises:
        DegreeMismatchError, CellCapExceeded
    """
    _check_pair(f, g)
    if f.degree**n > cell_cap:
        raise CellCapExceeded(f"{f.degree}^{n} cells exceed cap {cell_cap}")
    return EndpointTable(
        level=n,
        f_points=level_endpoints(f, n, tol=solver_tol, cell_cap=cell_cap),
        g_points=level_endpoints(g, n, tol=solver_tol, cell_cap=cell_cap),
    )


def table_words(table: EndpointTable, degree: int) -> list[Word]:
    """Words labeling the cylinders between consecutive table entries."""
    return [word_of_index(j, table.level, degree) for j in range(len(table) - 1)]


def conjugacy_residual(
    f: CircleMapSpec,
    g: CircleMapSpec,
    grid_size: int,
    tol: float = 1e-8,
    depth_cap: int = defaults.CONJUGACY_DEPTH_CAP,
) -> ConjugacyResidual:
    """Max over the grid of the circle distance between h(f(x)) and g(h(x)).

    h-values are enclosure midpoints; the report carries the worst enclosure
    width so callers can attribute the residual to enclosure error.
    """
    _check_pair(f, g)
    xs = np.arange(grid_size, dtype=float) / grid_size
    lo1, hi1, _, met1 = conjugacy_enclosures(f, g, xs, tol=tol, depth_cap=depth_cap)
    h_x = 0.5 * (lo1 + hi1)

    fx = lift_values(f, xs)
    fx_frac = np.clip(fx - np.floor(fx), 0.0, 1.0)
    lo2, hi2, _, met2 = conjugacy_enclosures(f, g, fx_frac, tol=tol, depth_cap=depth_cap)
    h_fx = 0.5 * (lo2 + hi2)

    g_hx = lift_values(g, h_x)
    delta = (h_fx - g_hx + 0.5) % 1.0 - 0.5
    residuals = np.abs(delta)
    worst = int(np.argmax(residuals))
    width = max(float(np.max(hi1 - lo1)), float(np.max(hi2 - lo2)))
    return ConjugacyResidual(
        max_residual=float(residuals[worst]),
        max_enclosure_width=width,
        argmax_x=float(xs[worst]),
        grid_size=grid_size,
        tol=tol,
        tol_met_all=bool(np.all(met1) and np.all(met2)),
    )
