"""Degree-d circle endomorphisms and circle homeomorphisms, represented by lifts.

A circle endomorphism of degree d >= 2 is stored as a declarative
:class:`CircleMapSpec` and evaluated through its lift ``F``, a strictly
increasing map of the real line with ``F(0) = 0`` and ``F(x+1) = F(x) + d``.
Supported kinds:

* ``linear``: ``F(x) = d*x``.
* ``piecewise_linear_full_branch``: branch i maps ``[c_i, c_{i+1}]`` onto
  ``[i, i+1]`` linearly, with interior cut points ``0 < c_1 < ... < c_{d-1} < 1``
  (degree is ``len(cuts) + 1``).
* ``smooth_sine``: ``F(x) = d*x + epsilon*sin(2*pi*x)/(2*pi)``, ``|epsilon| < d``.
* ``conjugated``: ``F = H^{-1} o G o H`` for a base map ``G`` and a circle
  homeomorphism lift ``H``.

Circle homeomorphisms (:class:`CircleHomeoSpec`) are lifts ``H`` with
``H(0) = 0`` and ``H(x+1) = H(x) + 1``: the identity, the sine family
``H(x) = x + c*sin(2*pi*x)/(2*pi)`` with ``|c| < 1``, and compositions.

Root solving is monotone bisection to an absolute tolerance (default
``SOLVER_TOL``); closed forms are used for the linear and piecewise-linear
kinds.  Specs are immutable and every evaluation is a pure function of
(spec, inputs), so all operations are safe to call concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import defaults
from .errors import DepthCapExceeded, InvalidMapError, SolverError, SpecFormatError

_TWO_PI = 2.0 * math.pi
_MAX_BISECT = 200

MAP_KINDS = ("piecewise_linear_full_branch", "linear", "smooth_sine", "conjugated")
HOMEO_KINDS = ("identity", "sine_homeo", "compose")


# ---------------------------------------------------------------------------
# Spec types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleHomeoSpec:
    """Declarative description of a circle homeomorphism lift."""

    kind: str = "identity"
    c: float = 0.0
    parts: tuple["CircleHomeoSpec", ...] = ()

    def describe(self) -> str:
        if self.kind == "identity":
            return "identity"
        if self.kind == "sine_homeo":
            return f"sine_homeo(c={self.c:g})"
        return "compose(" + ", ".join(p.describe() for p in self.parts) + ")"


@dataclass(frozen=True)
class CircleMapSpec:
    """Declarative description of a degree-d circle endomorphism."""

    kind: str
    degree: int = 2
    cuts: tuple[float, ...] = ()
    epsilon: float = 0.0
    base: "CircleMapSpec | None" = None
    homeo: CircleHomeoSpec | None = None

    def describe(self) -> str:
        if self.kind == "linear":
            return f"linear(d={self.degree})"
        if self.kind == "piecewise_linear_full_branch":
            return "piecewise_linear(cuts=[" + ", ".join(f"{c:g}" for c in self.cuts) + "])"
        if self.kind == "smooth_sine":
            return f"smooth_sine(d={self.degree}, epsilon={self.epsilon:g})"
        if self.kind == "conjugated":
            base = self.base.describe() if self.base is not None else "?"
            homeo = self.homeo.describe() if self.homeo is not None else "?"
            return f"conjugated(base={base}, homeo={homeo})"
        return f"unknown({self.kind})"


@dataclass(frozen=True)
class Violation:
    """One validation failure, with an approximate location when meaningful."""

    code: str
    message: str
    location: float | None = None


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; ``ok`` is False iff ``violations`` is nonempty."""

    subject: str
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        for v in self.violations:
            where = "" if v.location is None else f" at x={v.location:.6g}"
            lines.append(f"  [{v.code}] {v.message}{where}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def linear_map(degree: int) -> CircleMapSpec:
    """The linear endomorphism ``F(x) = degree * x``."""
    return CircleMapSpec(kind="linear", degree=int(degree))


def piecewise_linear(cuts: Iterable[float]) -> CircleMapSpec:
    """Full-branch piecewise-linear map with the given interior cut points.

    The degree is ``len(cuts) + 1``; branch i maps ``[c_i, c_{i+1}]`` onto
    ``[i, i+1]`` linearly.
    """
    cut_tuple = tuple(float(c) for c in cuts)
    return CircleMapSpec(
        kind="piecewise_linear_full_branch",
        degree=len(cut_tuple) + 1,
        cuts=cut_tuple,
    )


def smooth_sine_map(degree: int, epsilon: float) -> CircleMapSpec:
    """The sine-perturbed lift ``F(x) = d*x + epsilon*sin(2*pi*x)/(2*pi)``."""
    return CircleMapSpec(kind="smooth_sine", degree=int(degree), epsilon=float(epsilon))


def identity_homeo() -> CircleHomeoSpec:
    return CircleHomeoSpec(kind="identity")


def sine_homeo(c: float) -> CircleHomeoSpec:
    """The homeomorphism lift ``H(x) = x + c*sin(2*pi*x)/(2*pi)``, ``|c| < 1``."""
    return CircleHomeoSpec(kind="sine_homeo", c=float(c))


def compose_homeos(parts: Iterable[CircleHomeoSpec]) -> CircleHomeoSpec:
    """Composition ``H = parts[0] o parts[1] o ...`` (rightmost applied first)."""
    return CircleHomeoSpec(kind="compose", parts=tuple(parts))


def make_conjugated(base: CircleMapSpec, homeo: CircleHomeoSpec) -> CircleMapSpec:
    """Spec whose lift is ``H^{-1} o G o H``; same degree as the base, fixes 0.

    Raises:
        InvalidMapError: if the base map or the homeomorphism fails validation.
    """
    ensure_valid(base)
    ensure_valid_homeo(homeo)
    return CircleMapSpec(kind="conjugated", degree=base.degree, base=base, homeo=homeo)


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------

def _want_number(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SpecFormatError(f"{path}: not a number (got {type(obj).__name__})")
    return float(obj)


def _want_int(obj, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SpecFormatError(f"{path}: not an integer (got {obj!r})")
    return obj


def homeo_spec_from_dict(data: object, path: str = "homeo") -> CircleHomeoSpec:
    if not isinstance(data, dict):
        raise SpecFormatError(f"{path}: expected an object")
    kind = data.get("kind")
    if kind == "identity":
        _reject_unknown(data, {"kind"}, path)
        return identity_homeo()
    if kind == "sine_homeo":
        _reject_unknown(data, {"kind", "c"}, path)
        if "c" not in data:
            raise SpecFormatError(f"{path}.c: missing amplitude")
        return sine_homeo(_want_number(data["c"], f"{path}.c"))
    if kind == "compose":
        _reject_unknown(data, {"kind", "parts"}, path)
        parts = data.get("parts")
        if not isinstance(parts, list) or not parts:
            raise SpecFormatError(f"{path}.parts: expected a nonempty list")
        return compose_homeos(
            homeo_spec_from_dict(p, f"{path}.parts[{i}]") for i, p in enumerate(parts)
        )
    raise SpecFormatError(f"{path}.kind: unknown homeomorphism kind {kind!r}")


def map_spec_from_dict(data: object, path: str = "$") -> CircleMapSpec:
    """Build a :class:`CircleMapSpec` from parsed JSON, with field diagnostics."""
    if not isinstance(data, dict):
        raise SpecFormatError(f"{path}: expected an object")
    kind = data.get("kind")
    if kind == "linear":
        _reject_unknown(data, {"kind", "degree"}, path)
        if "degree" not in data:
            raise SpecFormatError(f"{path}.degree: missing")
        return linear_map(_want_int(data["degree"], f"{path}.degree"))
    if kind == "piecewise_linear_full_branch":
        _reject_unknown(data, {"kind", "cuts"}, path)
        if "degree" in data:
            raise SpecFormatError(f"{path}.degree: must not be given (it is len(cuts)+1)")
        cuts = data.get("cuts")
        if not isinstance(cuts, list) or not cuts:
            raise SpecFormatError(f"{path}.cuts: expected a nonempty list")
        return piecewise_linear(
            _want_number(c, f"{path}.cuts[{i}]") for i, c in enumerate(cuts)
        )
    if kind == "smooth_sine":
        _reject_unknown(data, {"kind", "degree", "epsilon"}, path)
        for key in ("degree", "epsilon"):
            if key not in data:
                raise SpecFormatError(f"{path}.{key}: missing")
        return smooth_sine_map(
            _want_int(data["degree"], f"{path}.degree"),
            _want_number(data["epsilon"], f"{path}.epsilon"),
        )
    if kind == "conjugated":
        _reject_unknown(data, {"kind", "base", "homeo"}, path)
        if "base" not in data or "homeo" not in data:
            raise SpecFormatError(f"{path}: conjugated needs 'base' and 'homeo'")
        base = map_spec_from_dict(data["base"], f"{path}.base")
        homeo = homeo_spec_from_dict(data["homeo"], f"{path}.homeo")
        return CircleMapSpec(kind="conjugated", degree=base.degree, base=base, homeo=homeo)
    raise SpecFormatError(f"{path}.kind: unknown map kind {kind!r}")


def _reject_unknown(data: dict, allowed: set[str], path: str) -> None:
    extra = sorted(set(data) - allowed)
    if extra:
        raise SpecFormatError(f"{path}: unknown field(s) {', '.join(extra)}")


def map_spec_from_json(text: str) -> CircleMapSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return map_spec_from_dict(data)


def homeo_spec_from_json(text: str) -> CircleHomeoSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return homeo_spec_from_dict(data, path="$")


def map_spec_to_dict(spec: CircleMapSpec) -> dict:
    if spec.kind == "linear":
        return {"kind": "linear", "degree": spec.degree}
    if spec.kind == "piecewise_linear_full_branch":
        return {"kind": "piecewise_linear_full_branch", "cuts": list(spec.cuts)}
    if spec.kind == "smooth_sine":
        return {"kind": "smooth_sine", "degree": spec.degree, "epsilon": spec.epsilon}
    if spec.kind == "conjugated":
        return {
            "kind": "conjugated",
            "base": map_spec_to_dict(spec.base),
            "homeo": homeo_spec_to_dict(spec.homeo),
        }
    raise SpecFormatError(f"unknown map kind {spec.kind!r}")


def homeo_spec_to_dict(spec: CircleHomeoSpec) -> dict:
    if spec.kind == "identity":
        return {"kind": "identity"}
    if spec.kind == "sine_homeo":
        return {"kind": "sine_homeo", "c": spec.c}
    if spec.kind == "compose":
        return {"kind": "compose", "parts": [homeo_spec_to_dict(p) for p in spec.parts]}
    raise SpecFormatError(f"unknown homeomorphism kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# Homeomorphism lift evaluation
# ---------------------------------------------------------------------------

def homeo_lift_values(spec: CircleHomeoSpec, x) -> np.ndarray:
    """Vectorized lift ``H(x)`` of a circle homeomorphism, any real ``x``."""
    x = np.asarray(x, dtype=float)
    if spec.kind == "identity":
        return x.copy()
    if spec.kind == "sine_homeo":
        return x + spec.c * np.sin(_TWO_PI * x) / _TWO_PI
    if spec.kind == "compose":
        out = x
        for part in reversed(spec.parts):
            out = homeo_lift_values(part, out)
        return out
    raise InvalidMapError(f"unknown homeomorphism kind {spec.kind!r}")


def _homeo_inverse_unit(spec: CircleHomeoSpec, y: np.ndarray, tol: float) -> np.ndarray:
    """Inverse of ``H`` restricted to [0,1] -> [0,1] (``y`` must lie in [0,1])."""
    if spec.kind == "identity":
        return np.asarray(y, dtype=float).copy()
    if spec.kind == "sine_homeo":
        return _bisect_increasing(
            lambda u: homeo_lift_values(spec, u), 0.0, 1.0, np.asarray(y, float), tol
        )
    if spec.kind == "compose":
        out = np.asarray(y, dtype=float)
        for part in spec.parts:
            out = _homeo_inverse_unit(part, out, tol)
        return out
    raise InvalidMapError(f"unknown homeomorphism kind {spec.kind!r}")


def homeo_inverse_values(
    spec: CircleHomeoSpec, y, tol: float = defaults.SOLVER_TOL
) -> np.ndarray:
    """Vectorized ``H^{-1}(y)``, solved by bisection on ``[floor(y), floor(y)+1]``."""
    y = np.asarray(y, dtype=float)
    k = np.floor(y)
    return k + _homeo_inverse_unit(spec, np.clip(y - k, 0.0, 1.0), tol)


def homeo_eval(spec: CircleHomeoSpec, x: float) -> float:
    return float(homeo_lift_values(spec, np.float64(x)))


# ---------------------------------------------------------------------------
# Bisection core
# ---------------------------------------------------------------------------

def _bisect_increasing(fn, lo, hi, target: np.ndarray, tol: float) -> np.ndarray:
    """Solve ``fn(x) = target`` for an increasing ``fn``, elementwise.

    ``lo``/``hi`` may be scalars or arrays bracketing each target.  Targets
    outside the bracket by more than ``tol`` (in x, via monotonicity this is
    checked on the function values with a generous margin) signal a
    non-monotone lift and raise :class:`SolverError`.
    """
    target = np.asarray(target, dtype=float)
    lo0 = np.broadcast_to(np.asarray(lo, float), target.shape).astype(float)
    hi0 = np.broadcast_to(np.asarray(hi, float), target.shape).astype(float)
    flo = fn(lo0)
    fhi = fn(hi0)
    slack = 1e-9
    if np.any(target < flo - slack) or np.any(target > fhi + slack):
        raise SolverError("target outside monotone bracket (lift not monotone?)")
    lo = lo0.copy()
    hi = hi0.copy()
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        below = fn(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if float(np.max(hi - lo)) <= tol:
            break
    else:
        raise SolverError("bisection failed to converge")
    # exact hits at the bracket ends return the end itself, so chains of
    # inverse branches preserve shared endpoints bit for bit
    return np.where(flo == target, lo0, np.where(fhi == target, hi0, 0.5 * (lo + hi)))


# ---------------------------------------------------------------------------
# Endomorphism lift evaluation
# ---------------------------------------------------------------------------

def _unit_lift(spec: CircleMapSpec, u: np.ndarray, tol: float) -> np.ndarray:
    """Lift values for ``u`` in [0,1); returns values in [0, degree)."""
    if spec.kind == "linear":
        return spec.degree * u
    if spec.kind == "piecewise_linear_full_branch":
        cuts = np.asarray(spec.cuts, dtype=float)
        idx = np.searchsorted(cuts, u, side="right")
        ext = np.concatenate(([0.0], cuts, [1.0]))
        left = ext[idx]
        right = ext[idx + 1]
        return idx + (u - left) / (right - left)
    if spec.kind == "smooth_sine":
        return spec.degree * u + spec.epsilon * np.sin(_TWO_PI * u) / _TWO_PI
    if spec.kind == "conjugated":
        hv = homeo_lift_values(spec.homeo, u)
        gv = lift_values(spec.base, hv, tol=tol)
        return homeo_inverse_values(spec.homeo, gv, tol=tol)
    raise InvalidMapError(f"unknown map kind {spec.kind!r}")


def lift_values(spec: CircleMapSpec, x, tol: float = defaults.SOLVER_TOL) -> np.ndarray:
    """Vectorized lift ``F(x)`` for any real ``x`` (periodic extension is exact)."""
    x = np.asarray(x, dtype=float)
    k = np.floor(x)
    u = x - k
    return _unit_lift(spec, u, tol) + k * spec.degree


def eval_lift(spec: CircleMapSpec, x: float, tol: float = defaults.SOLVER_TOL) -> float:
    """Evaluate the lift ``F`` at a single point.

    Raises:
        InvalidMapError: if the spec fails validation.
    """
    ensure_valid(spec)
    return float(lift_values(spec, np.float64(x), tol=tol))


def inverse_branch_values(
    spec: CircleMapSpec, branch, y, tol: float = defaults.SOLVER_TOL
) -> np.ndarray:
    """Vectorized inverse branch: the x in branch ``b`` with ``F(x) = y + b``.

    ``branch`` is an integer array (or scalar), ``y`` lies in [0,1].  Closed
    forms are used for the linear and piecewise-linear kinds; the other kinds
    solve by monotone bisection on the unit interval.
    """
    y = np.asarray(y, dtype=float)
    branch = np.broadcast_to(np.asarray(branch, dtype=np.int64), y.shape)
    if spec.kind == "linear":
        return (branch + y) / spec.degree
    if spec.kind == "piecewise_linear_full_branch":
        ext = np.concatenate(([0.0], np.asarray(spec.cuts, float), [1.0]))
        # lerp form is exact at y = 0 and y = 1
        return (1.0 - y) * ext[branch] + y * ext[branch + 1]
    if spec.kind == "smooth_sine":
        return _bisect_increasing(
            lambda u: _unit_lift(spec, u, tol), 0.0, 1.0, branch + y, tol
        )
    if spec.kind == "conjugated":
        hv = homeo_lift_values(spec.homeo, y)
        xb = inverse_branch_values(spec.base, branch, np.clip(hv, 0.0, 1.0), tol=tol)
        return _homeo_inverse_unit(spec.homeo, xb, tol)
    raise InvalidMapError(f"unknown map kind {spec.kind!r}")


def inverse_branch(
    spec: CircleMapSpec, branch: int, y: float, tol: float = defaults.SOLVER_TOL
) -> float:
    """The unique x in ``[c_branch, c_{branch+1}]`` with ``F(x) = y + branch``.

    A point equal to a cut belongs to both adjacent branches; the explicit
    ``branch`` index resolves the tie, never the point.

    Raises:
        InvalidMapError: spec fails validation.
        ValueError: branch index out of range or y outside [0,1].
        SolverError: the lift could not be bracketed (non-monotone data).
    """
    ensure_valid(spec)
    if not 0 <= branch < spec.degree:
        raise ValueError(f"branch {branch} out of range for degree {spec.degree}")
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y={y!r} outside [0,1]")
    return float(inverse_branch_values(spec, branch, np.float64(y), tol=tol))


def _inverse_step(spec: CircleMapSpec, v: float, tol: float) -> float:
    """One inverse step of the lift, ``F^{-1}(v)``, for any real ``v``.

    The branch offset is taken from whichever integer endpoint ``v`` is nearer
    to (fraction from the left, co-fraction from the right), which keeps full
    relative precision when the inverse orbit approaches an integer fixed
    point; a naive ``v - floor(v/d)*d`` would cancel catastrophically there.
    """
    d = spec.degree
    if spec.kind == "linear":
        return v / d
    m = math.floor(v / d)
    t = v - m * d
    if t < 0.0:
        m -= 1
        t = v - m * d
    elif t >= d:
        m += 1
        t = v - m * d
    branch = min(int(t), d - 1)
    anchor = m * d + branch
    frac = max(v - anchor, 0.0)
    cofrac = max((anchor + 1) - v, 0.0)
    cuts = branch_points(spec)
    left, right = cuts[branch], cuts[branch + 1]
    if spec.kind == "piecewise_linear_full_branch":
        gap = right - left
        if cofrac <= frac:
            return (m + right) - cofrac * gap
        return (m + left) + frac * gap
    # bisection kinds: accuracy is bounded by the solver tolerance anyway
    x = float(inverse_branch_values(spec, branch, np.float64(min(frac, 1.0)), tol=tol))
    return m + x


def global_inverse_lift(
    spec: CircleMapSpec,
    y: float,
    n: int,
    tol: float = defaults.SOLVER_TOL,
    depth_cap: int = defaults.DEPTH_CAP,
) -> float:
    """n-fold inverse ``F^{-n}(y)`` of the lift as a real-line homeomorphism.

    Each step writes ``y = m*d + (branch + frac)`` and solves on the branch,
    so the periodic extension is handled exactly by integer bookkeeping.

    Raises:
        DepthCapExceeded: if ``n`` exceeds ``depth_cap``.
    """
    ensure_valid(spec)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > depth_cap:
        raise DepthCapExceeded(f"inverse depth {n} exceeds cap {depth_cap}")
    value = float(y)
    for _ in range(n):
        value = _inverse_step(spec, value, tol)
    return value


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_homeo(spec: CircleHomeoSpec) -> ValidationReport:
    """Check that the homeomorphism lift is strictly increasing and fixes 0."""
    violations: list[Violation] = []
    _collect_homeo_violations(spec, violations, path="homeo")
    return ValidationReport(subject=spec.describe(), violations=tuple(violations))


def _collect_homeo_violations(spec: CircleHomeoSpec, out: list[Violation], path: str) -> None:
    if spec.kind == "identity":
        return
    if spec.kind == "sine_homeo":
        if not abs(spec.c) < 1.0:
            out.append(
                Violation(
                    "non_monotone",
                    f"{path}: |c|={abs(spec.c):g} >= 1 makes the lift non-monotone "
                    "(H' = 1 + c*cos(2*pi*x) changes sign)",
                    location=0.5 if spec.c > 0 else 0.0,
                )
            )
        return
    if spec.kind == "compose":
        if not spec.parts:
            out.append(Violation("empty_composition", f"{path}: empty composition"))
        for i, part in enumerate(spec.parts):
            _collect_homeo_violations(part, out, f"{path}.parts[{i}]")
        return
    out.append(Violation("unknown_kind", f"{path}: unknown kind {spec.kind!r}"))


@lru_cache(maxsize=512)
def _cached_validation(spec: CircleMapSpec, grid: int) -> ValidationReport:
    violations: list[Violation] = []

    def structural(s: CircleMapSpec, path: str) -> bool:
        """Collect structural violations; returns False when numeric checks are unsafe."""
        ok = True
        if s.kind not in MAP_KINDS:
            violations.append(Violation("unknown_kind", f"{path}: unknown kind {s.kind!r}"))
            return False
        if not isinstance(s.degree, int) or s.degree < 2:
            violations.append(
                Violation("bad_degree", f"{path}: degree must be an integer >= 2, got {s.degree!r}")
            )
            ok = False
        if s.kind == "piecewise_linear_full_branch":
            cuts = s.cuts
            if len(cuts) + 1 != s.degree:
                violations.append(
                    Violation("bad_degree", f"{path}: degree must equal len(cuts)+1")
                )
                ok = False
            ext = (0.0,) + tuple(cuts) + (1.0,)
            for i in range(len(ext) - 1):
                gap = ext[i + 1] - ext[i]
                if gap <= 0:
                    violations.append(
                        Violation(
                            "cuts_not_increasing",
                            f"{path}: cuts must be strictly increasing inside (0,1)",
                            location=ext[i],
                        )
                    )
                    ok = False
                    break
                if gap < defaults.MIN_CUT_GAP:
                    violations.append(
                        Violation(
                            "branch_too_small",
                            f"{path}: branch width {gap:.3g} below minimum {defaults.MIN_CUT_GAP:g}",
                            location=ext[i],
                        )
                    )
                    ok = False
        elif s.kind == "smooth_sine":
            if not abs(s.epsilon) < s.degree:
                violations.append(
                    Violation(
                        "non_monotone",
                        f"{path}: non-monotone lift, min F' = d - |epsilon| = "
                        f"{s.degree - abs(s.epsilon):g} <= 0 (F' changes sign)",
                        location=0.5 if s.epsilon > 0 else 0.0,
                    )
                )
                ok = False
        elif s.kind == "conjugated":
            if s.base is None or s.homeo is None:
                violations.append(
                    Violation("missing_field", f"{path}: conjugated needs base and homeo")
                )
                return False
            ok = structural(s.base, f"{path}.base") and ok
            if s.base is not None and s.degree != s.base.degree:
                violations.append(
                    Violation("bad_degree", f"{path}: degree must match the base map")
                )
                ok = False
            before = len(violations)
            _collect_homeo_violations(s.homeo, violations, f"{path}.homeo")
            ok = ok and len(violations) == before
        return ok

    if structural(spec, "map"):
        # numeric checks: endpoints, periodicity anchor, strict monotonicity on a
        # dense grid plus all breakpoints
        xs = np.linspace(0.0, 1.0, grid + 1)
        cuts = _structural_cuts(spec)
        if cuts.size:
            xs = np.unique(np.concatenate([xs, cuts]))
        vals = lift_values(spec, xs)
        f0 = float(vals[0])
        f1 = float(vals[-1])
        if abs(f0) > 1e-12:
            violations.append(Violation("fixed_point", f"F(0) = {f0:.3e} != 0", location=0.0))
        if abs(f1 - spec.degree) > 1e-9:
            violations.append(
                Violation("endpoint", f"F(1) = {f1!r} != degree {spec.degree}", location=1.0)
            )
        diffs = np.diff(vals)
        bad = np.where(diffs <= 0)[0]
        if bad.size:
            at = float(xs[bad[0]])
            violations.append(
                Violation(
                    "non_monotone",
                    f"lift not strictly increasing on the validation grid "
                    f"(first failure between x={at:.6g} and x={float(xs[bad[0] + 1]):.6g})",
                    location=at,
                )
            )
    return ValidationReport(subject=spec.describe(), violations=tuple(violations))


def _structural_cuts(spec: CircleMapSpec) -> np.ndarray:
    """Breakpoints worth adding to the validation grid (known cuts only)."""
    if spec.kind == "piecewise_linear_full_branch":
        return np.asarray(spec.cuts, dtype=float)
    if spec.kind == "conjugated" and spec.base is not None and spec.homeo is not None:
        inner = _structural_cuts(spec.base)
        if inner.size:
            return _homeo_inverse_unit(spec.homeo, inner, defaults.SOLVER_TOL)
    return np.asarray([], dtype=float)


def validate(spec: CircleMapSpec, grid: int = defaults.MONOTONE_GRID) -> ValidationReport:
    """Validate a map spec; the report lists violations with locations."""
    if not isinstance(spec, CircleMapSpec):
        raise TypeError(f"expected CircleMapSpec, got {type(spec).__name__}")
    return _cached_validation(spec, grid)


def ensure_valid(spec: CircleMapSpec) -> None:
    """Raise :class:`InvalidMapError` unless the spec validates cleanly."""
    report = validate(spec)
    if not report.ok:
        details = "; ".join(v.message for v in report.violations)
        raise InvalidMapError(f"{report.subject}: {details}")


def ensure_valid_homeo(spec: CircleHomeoSpec) -> None:
    report = validate_homeo(spec)
    if not report.ok:
        details = "; ".join(v.message for v in report.violations)
        raise InvalidMapError(f"{report.subject}: {details}")


@lru_cache(maxsize=512)
def branch_points(spec: CircleMapSpec) -> tuple[float, ...]:
    """The d+1 branch endpoints ``0 = c_0 < c_1 < ... < c_d = 1`` of a valid map."""
    ensure_valid(spec)
    d = spec.degree
    if spec.kind == "piecewise_linear_full_branch":
        return (0.0,) + tuple(spec.cuts) + (1.0,)
    if spec.kind == "linear":
        return tuple(i / d for i in range(d)) + (1.0,)
    interior = inverse_branch_values(spec, np.arange(1, d), np.zeros(d - 1))
    return (0.0,) + tuple(float(c) for c in interior) + (1.0,)
