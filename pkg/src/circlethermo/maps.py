"""Circle maps as evaluable objects: lifts, derivatives, inverse branches.

A degree-d local diffeomorphism of the circle is encoded by a strictly
increasing lift F with F(x + 1) = F(x) + d together with the derivative
|Df| on [0, 1).  Circle points live in [0, 1) with the wrap-around metric
d(x, y) = min(|x - y|, 1 - |x - y|).

Built-in families
-----------------
d_adic(d)                    x -> d x mod 1
perturbed_expanding(d, eps)  x -> d x + eps sin(2 pi x) mod 1
neutral_doubling()           x -> 2x - sin(2 pi x)/(2 pi) mod 1
                             (C-infinity, one neutral fixed point at 0)
piecewise_linear(slopes)     full-branch Markov map, branch i has slope s_i;
                             requires sum(1/s_i) = 1
manneville_pomeau_circle(a)  x(1 + 2^a x^a) on [0, 1/2], 2x on (1/2, 1],
                             derivative blended over a width-1e-2 window at
                             the branch point so the circle map is C^1 there;
                             still only piecewise-C^1 at the neutral point
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BranchSolverError, InvalidMapError

TWO_PI = 2.0 * np.pi

#: |Df| <= 1 + NEUTRAL_TOL counts as neutral; below the discretization error
#: of every downstream solver.
NEUTRAL_TOL = 1e-6

_DIAG_GRID = 4096
_BRANCH_RESIDUAL_TOL = 1e-10


def _farray(x) -> np.ndarray:
    """As a float array, preserving extended precision when given (long
    orbit iteration runs in longdouble to dodge double-precision orbit
    collapse)."""
    x = np.asarray(x)
    return x if x.dtype.kind == "f" else x.astype(float)


@dataclass(frozen=True)
class CircleMap:
    """A degree-d local diffeomorphism of the circle.

    ``lift`` and ``deriv`` must accept and return numpy arrays.  ``deriv``
    is interpreted periodically.  Instances are immutable and safe to share
    across parallel workers; every operation on them is pure.
    """

    family: str
    degree: int
    lift: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    smooth: bool = True
    params: tuple = ()
    branch_slopes: Optional[tuple] = None
    # Direct f(x) on [0,1), when a family can evaluate it more accurately
    # than lift-then-mod (adding the branch winding and removing it again
    # quantizes small fractional parts, which biases long orbits).
    circle_eval: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __repr__(self) -> str:
        ps = ", ".join(repr(p) for p in self.params)
        return f"CircleMap({self.family}({ps}), degree={self.degree})"


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------

def d_adic(d: int) -> CircleMap:
    """The linear degree-d map x -> d x mod 1."""
    if int(d) != d or d < 2:
        raise InvalidMapError(f"d_adic degree must be an integer >= 2, got {d}")
    d = int(d)
    return CircleMap(
        family="d_adic",
        degree=d,
        lift=lambda x, d=d: d * _farray(x),
        deriv=lambda x, d=d: np.full_like(_farray(x), float(d)),
        smooth=True,
        params=(d,),
    )


def perturbed_expanding(d: int, eps: float) -> CircleMap:
    """x -> d x + eps sin(2 pi x) mod 1.

    A local diffeomorphism iff |eps| < d / (2 pi).  Uniformly expanding iff
    2 pi |eps| < d - 1; larger eps gives a smooth specimen whose derivative
    dips below 1 on part of the circle.
    """
    if int(d) != d or d < 2:
        raise InvalidMapError(f"degree must be an integer >= 2, got {d}")
    d = int(d)
    eps = float(eps)
    if d - TWO_PI * abs(eps) <= 0.0:
        raise InvalidMapError(
            f"perturbed_expanding({d}, {eps}) is not a local diffeomorphism: "
            f"need |eps| < d/(2 pi) = {d / TWO_PI:.6f}"
        )
    return CircleMap(
        family="perturbed_expanding",
        degree=d,
        lift=lambda x, d=d, e=eps: d * _farray(x)
        + e * np.sin(TWO_PI * _farray(x)),
        deriv=lambda x, d=d, e=eps: d
        + TWO_PI * e * np.cos(TWO_PI * _farray(x)),
        smooth=True,
        params=(d, eps),
    )


def neutral_doubling() -> CircleMap:
    """x -> 2x - sin(2 pi x)/(2 pi) mod 1.

    C-infinity degree-2 map with |Df| = 2 - cos(2 pi x) in [1, 3]; the single
    neutral fixed point sits at 0 (cubic tangency of the lift to the diagonal).
    """
    return CircleMap(
        family="neutral_doubling",
        degree=2,
        lift=lambda x: 2.0 * _farray(x)
        - np.sin(TWO_PI * _farray(x)) / TWO_PI,
        deriv=lambda x: 2.0 - np.cos(TWO_PI * _farray(x)),
        smooth=True,
        params=(),
    )


def piecewise_linear(slopes: Sequence[float]) -> CircleMap:
    """Full-branch piecewise-linear map with the given branch slopes.

    Branch i occupies [c_i, c_{i+1}) with c_{i+1} - c_i = 1/s_i, so the
    reciprocals must sum to 1 (tolerance 1e-9); slope lists violating that
    are rejected.  All slopes must exceed 1.
    """
    s = np.asarray(list(slopes), dtype=float)
    if s.ndim != 1 or len(s) < 2:
        raise InvalidMapError("piecewise_linear needs at least two slopes")
    if np.any(s <= 1.0):
        raise InvalidMapError(f"all slopes must be > 1, got {s.tolist()}")
    recip_sum = float(np.sum(1.0 / s))
    if abs(recip_sum - 1.0) > 1e-9:
        raise InvalidMapError(
            f"branch widths 1/s_i must sum to 1, got {recip_sum!r} "
            f"for slopes {s.tolist()}"
        )
    cuts = np.concatenate(([0.0], np.cumsum(1.0 / s)))
    cuts[-1] = 1.0
    # extended-precision cut constants: orbit iteration in longdouble only
    # escapes the double lattice if the map's own constants carry the extra
    # mantissa bits (see birkhoff_averages)
    cuts_ld = np.concatenate(
        ([np.longdouble(0.0)], np.cumsum(1.0 / s.astype(np.longdouble)))
    )
    cuts_ld[-1] = np.longdouble(1.0)
    k = len(s)

    def lift(x, s=s, cuts=cuts, k=k):
        x = _farray(x)
        n = np.floor(x)
        u = x - n
        i = np.clip(np.searchsorted(cuts, u, side="right") - 1, 0, k - 1)
        return n * k + i + s[i] * (u - cuts[i])

    def deriv(x, s=s, cuts=cuts, k=k):
        x = _farray(x)
        u = x - np.floor(x)
        i = np.clip(np.searchsorted(cuts, u, side="right") - 1, 0, k - 1)
        return s[i]

    def circle_eval(x, s=s, cuts=cuts, cuts_ld=cuts_ld, k=k):
        x = _farray(x)
        c = cuts_ld if x.dtype == np.longdouble else cuts
        u = x - np.floor(x)
        i = np.clip(np.searchsorted(c, u, side="right") - 1, 0, k - 1)
        y = s[i] * (u - c[i])
        return np.where(y >= 1.0, y - 1.0, y)

    return CircleMap(
        family="piecewise_linear",
        degree=k,
        lift=lift,
        deriv=deriv,
        smooth=False,
        params=tuple(float(v) for v in s),
        branch_slopes=tuple(float(v) for v in s),
        circle_eval=circle_eval,
    )


def manneville_pomeau_circle(alpha: float, bump_width: float = 1e-2) -> CircleMap:
    """Degree-2 circle version of the intermittent map x(1 + 2^a x^a).

    The raw map has a derivative jump at the branch point 1/2 (value 2+a on
    the left, 2 on the right).  The derivative is blended over a window of
    width ``bump_width`` centered at 1/2 - a linear ramp plus a parabolic
    bump whose area is chosen so the lift is unchanged outside the window -
    which makes the map C^1 there.  Across the neutral point 0 the derivative
    still jumps (2 on one side, 1 on the other): the map is only piecewise-C^1
    on the circle, and its diagnostics report it as non-smooth.
    """
    alpha = float(alpha)
    if alpha <= 0.0:
        raise InvalidMapError(f"alpha must be positive, got {alpha}")
    h = 0.5
    delta = bump_width / 2.0
    two_a = 2.0 ** alpha

    def raw_lift(u):
        return u * (1.0 + two_a * u ** alpha)

    def raw_deriv(u):
        return 1.0 + (1.0 + alpha) * two_a * u ** alpha

    a_left = float(raw_deriv(h - delta))
    # Window area of the unmodified lift: left branch up to 1/2, slope-2
    # branch after; the blend must reproduce it exactly.
    area_orig = (raw_lift(h) - raw_lift(h - delta)) + 2.0 * delta
    area_lin = delta * (a_left + 2.0)
    bump_c = (area_orig - area_lin) * 3.0 / (4.0 * delta)

    def blend_deriv(u):
        w = (u - h) / delta  # in [-1, 1]
        lin = a_left + (2.0 - a_left) * (w + 1.0) / 2.0
        return lin + bump_c * (1.0 - w * w)

    probe = np.linspace(h - delta, h + delta, 257)
    if np.min(blend_deriv(probe)) <= 0.0:
        raise InvalidMapError(
            f"derivative blend not positive for alpha={alpha}; "
            f"reduce alpha or widen the bump"
        )

    F_left_edge = float(raw_lift(h - delta))

    def blend_lift(u):
        # integral of blend_deriv from h - delta to u
        w = (u - h) / delta
        lin_part = a_left * (u - (h - delta)) + (2.0 - a_left) * delta * (
            (w + 1.0) ** 2
        ) / 4.0
        bump_part = bump_c * delta * (w - w ** 3 / 3.0 + 2.0 / 3.0)
        return F_left_edge + lin_part + bump_part

    def lift(x):
        x = _farray(x)
        n = np.floor(x)
        u = x - n
        out = np.empty_like(u)
        lo = u < h - delta
        mid = (~lo) & (u < h + delta)
        hi = ~(lo | mid)
        out[lo] = raw_lift(u[lo])
        out[mid] = blend_lift(u[mid])
        out[hi] = 2.0 * u[hi]
        return out + 2.0 * n

    def deriv(x):
        x = _farray(x)
        u = x - np.floor(x)
        out = np.empty_like(u)
        lo = u < h - delta
        mid = (~lo) & (u < h + delta)
        hi = ~(lo | mid)
        out[lo] = raw_deriv(u[lo])
        out[mid] = blend_deriv(u[mid])
        out[hi] = 2.0
        return out

    return CircleMap(
        family="manneville_pomeau_circle",
        degree=2,
        lift=lift,
        deriv=deriv,
        smooth=False,
        params=(alpha,),
    )


_FAMILY_BUILDERS = {
    "d_adic": d_adic,
    "perturbed_expanding": perturbed_expanding,
    "neutral_doubling": neutral_doubling,
    "piecewise_linear": piecewise_linear,
    "manneville_pomeau_circle": manneville_pomeau_circle,
}


def make_map(family: str, **params) -> CircleMap:
    """Build a map from a family name and keyword parameters (CLI entry)."""
    if family not in _FAMILY_BUILDERS:
        raise InvalidMapError(
            f"unknown family {family!r}; choose from {sorted(_FAMILY_BUILDERS)}"
        )
    return _FAMILY_BUILDERS[family](**params)


# ---------------------------------------------------------------------------
# Point operations
# ---------------------------------------------------------------------------

def circle_distance(a, b):
    """Wrap-around distance min(|a-b|, 1-|a-b|) on [0, 1)."""
    d = np.mod(np.asarray(a, dtype=float) - b, 1.0)
    return np.minimum(d, 1.0 - d)


def evaluate(m: CircleMap, x):
    """f(x) = F(x) mod 1 for x in [0, 1)."""
    if m.circle_eval is not None:
        return m.circle_eval(x)
    return np.mod(m.lift(x), 1.0)


def derivative(m: CircleMap, x):
    """|Df(x)| for x in [0, 1)."""
    return m.deriv(x)


def derivative_on_branch(m: CircleMap, x, branch):
    """|Df| at x, disambiguated by branch index at branch-cut points.

    Identical to ``derivative`` except for piecewise-linear maps, whose
    one-sided derivatives at branch endpoints differ; periodic-orbit code
    carries the itinerary and needs the matching slope.  ``branch`` may be
    an integer array broadcastable against x.
    """
    if m.branch_slopes is not None:
        return np.asarray(m.branch_slopes, dtype=float)[np.asarray(branch, dtype=int)]
    return m.deriv(x)


def solve_lift(m: CircleMap, targets, lo=None, hi=None):
    """Solve F(y) = target on [0, 1] elementwise (F strictly increasing).

    Bisection bracketing followed by Newton refinement; residuals above
    1e-10 raise BranchSolverError.
    """
    t = np.asarray(targets, dtype=float)
    lo = np.zeros_like(t) if lo is None else np.array(lo, dtype=float)
    hi = np.ones_like(t) if hi is None else np.array(hi, dtype=float)
    for _ in range(54):
        mid = 0.5 * (lo + hi)
        high = m.lift(mid) > t
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
    y = 0.5 * (lo + hi)
    for _ in range(4):
        r = m.lift(y) - t
        dy = m.deriv(np.mod(y, 1.0))
        y = np.clip(y - r / dy, 0.0, 1.0)
    resid = np.max(np.abs(m.lift(y) - t))
    if resid > _BRANCH_RESIDUAL_TOL:
        raise BranchSolverError(
            f"lift solve residual {resid:.3e} exceeds {_BRANCH_RESIDUAL_TOL:g} "
            f"for {m!r}"
        )
    return y


def inverse_branch_grid(m: CircleMap, xs) -> np.ndarray:
    """Preimages of each x in xs, one row per branch: shape (degree, len(xs)).

    Row b solves F(y) = x + j0 + b where j0 = ceil(F(0) - x); rows are
    ordered so y_0 < y_1 < ... < y_{d-1}.
    """
    xs = np.asarray(xs, dtype=float)
    f0 = float(np.asarray(m.lift(np.zeros(1)))[0])
    j0 = np.ceil(f0 - xs)
    targets = xs[None, :] + j0[None, :] + np.arange(m.degree)[:, None]
    return solve_lift(m, targets)


def inverse_branches(m: CircleMap, x: float) -> np.ndarray:
    """The degree preimages of x, in increasing order."""
    return inverse_branch_grid(m, np.atleast_1d(float(x)))[:, 0]


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapDiagnostics:
    """Expansion summary of a map: derivative minimum and neutral set."""

    min_derivative: float
    is_expanding: bool
    neutral_points: tuple
    degree: int
    smooth: bool = True


def _golden_min(f, a: float, b: float, iters: int = 64):
    """Golden-section minimum of f on [a, b]; returns (x, f(x))."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = float(f(c)), float(f(d))
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(f(d))
    x = 0.5 * (a + b)
    return x, float(f(x))


def _bisect_root(f, a: float, b: float, iters: int = 80) -> float:
    fa = float(f(a))
    for _ in range(iters):
        mid = 0.5 * (a + b)
        fm = float(f(mid))
        if (fa <= 0.0) == (fm <= 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def diagnose(m: CircleMap, grid: int = _DIAG_GRID) -> MapDiagnostics:
    """Scan |Df| on a grid, refine minima by golden-section search, and
    report the neutral set {x : |Df(x)| <= 1 + 1e-6}.

    Neutral points are located two ways: sign changes of |Df| - 1 across
    grid cells (transversal crossings) and golden-refined local minima that
    touch the 1 + 1e-6 band (tangential neutral points).
    """
    xs = np.arange(grid) / grid
    df = np.asarray(m.deriv(xs), dtype=float)
    if np.min(df) <= 0.0:
        raise InvalidMapError(f"{m!r} has non-positive derivative on the grid")

    h = 1.0 / grid
    dfun = lambda x: m.deriv(np.mod(_farray(x), 1.0))

    # Refine strict grid-local minima near the floor or near 1 (flat runs of
    # a piecewise-constant derivative cannot improve under refinement, so
    # interior flat points are skipped).
    prev, nxt = np.roll(df, 1), np.roll(df, -1)
    strict_min = (df <= prev) & (df <= nxt) & ((df < prev) | (df < nxt))
    strict_min[int(np.argmin(df))] = True
    floor = float(np.min(df))
    min_val = floor
    neutral: list[float] = []
    for i in np.nonzero(strict_min)[0]:
        if df[i] > floor + 1e-3 and df[i] > 1.0 + 1e-3:
            continue
        x0 = xs[i]
        xr, vr = _golden_min(dfun, x0 - h, x0 + h)
        min_val = min(min_val, vr)
        if abs(vr - 1.0) <= NEUTRAL_TOL:
            neutral.append(float(np.mod(xr, 1.0)))
    if min_val <= 0.0:
        raise InvalidMapError(f"{m!r} has non-positive derivative (min {min_val})")

    # transversal crossings of |Df| = 1
    g = df - 1.0
    gn = np.roll(g, -1)
    for i in np.nonzero(np.sign(g) * np.sign(gn) < 0)[0]:
        root = _bisect_root(lambda x: dfun(x) - 1.0, xs[i], xs[i] + h)
        neutral.append(float(np.mod(root, 1.0)))

    # dedup on the circle (snap near-zero representatives first; refinement
    # resolves flat tangencies only to ~1e-7 in position)
    neutral = [0.0 if min(p, 1.0 - p) < 1e-7 else p for p in neutral]
    pts: list[float] = []
    for p in sorted(set(neutral)):
        if not pts or p - pts[-1] > 1e-6:
            pts.append(p)
    if len(pts) > 1 and pts[0] + 1.0 - pts[-1] <= 1e-6:
        pts.pop()

    is_exp = min_val > 1.0 + NEUTRAL_TOL
    return MapDiagnostics(
        min_derivative=float(min_val),
        is_expanding=bool(is_exp),
        neutral_points=tuple(pts) if not is_exp else (),
        degree=m.degree,
        smooth=m.smooth,
    )
