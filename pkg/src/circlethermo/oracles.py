"""Independent ground-truth calculators for the test suite.

Nothing here touches the operator-matrix pipeline: exact pressures for
piecewise-linear maps come from the closed form log sum s_i^(-t), orbit
pressures from explicit periodic-point enumeration, and Birkhoff averages
from forward iteration.  That independence is the point - the main pipeline
is validated against these, never against itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetError
from .maps import CircleMap, derivative_on_branch, evaluate

#: itinerary budget: d^p beyond this is refused
ORBIT_BUDGET = 10_000_000

#: fixed seed for Birkhoff starting points; keeps the suite reproducible
BIRKHOFF_SEED = 1729

_DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class PeriodicOrbitSet:
    """Fixed points of f^p: one representative point and multiplier |Df^p|
    per distinct circle point (count = d^p - 1 for full-branch maps)."""

    period: int
    points: np.ndarray
    multipliers: np.ndarray
    count: int

    @property
    def orbits(self):
        return list(zip(self.points.tolist(), self.multipliers.tolist()))


def _check_budget(m: CircleMap, period: int) -> None:
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    if period > 20:
        raise ValueError(f"period must be <= 20, got {period}")
    if m.degree ** period > ORBIT_BUDGET:
        raise BudgetError(
            f"degree^period = {m.degree}^{period} exceeds the "
            f"{ORBIT_BUDGET} itinerary budget"
        )


def _clipped_iterate(m: CircleMap, y: np.ndarray, itins: np.ndarray,
                     clip: bool) -> np.ndarray:
    """Track z -> F(z) - a_j along the prescribed itinerary.  With clipping
    the orbit pins at a boundary once it leaves the itinerary's cylinder
    (keeping the bisection sign test valid on all of [0, 1]); without it
    the residual f^p(y) - y is only small at genuine roots."""
    z = y
    p = itins.shape[1]
    for j in range(p):
        z = m.lift(z) - itins[:, j]
        if clip:
            z = np.clip(z, 0.0, 1.0)
    return z


def _itinerary_bisection(m: CircleMap, itins: np.ndarray, ascending: bool,
                         hi0=None) -> np.ndarray:
    """Bisection roots of H(y) = f^p(y) - y per itinerary.  The ascending
    orientation locates a crossing from negative to positive (repelling-type
    roots, always present); the descending orientation locates a positive to
    negative crossing (attracting-type roots, present only when the map has
    periodic sinks) and is run on [0, forward root], left of the repeller."""
    count = itins.shape[0]
    lo = np.zeros(count)
    hi = np.ones(count) if hi0 is None else np.asarray(hi0, dtype=float).copy()
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        z = _clipped_iterate(m, mid, itins, clip=True)
        move_lo = z - mid < 0.0 if ascending else z - mid > 0.0
        lo = np.where(move_lo, mid, lo)
        hi = np.where(move_lo, hi, mid)
    return 0.5 * (lo + hi)


def fixed_points_by_itinerary(m: CircleMap, period: int):
    """One or two fixed points of f^period per symbolic itinerary.

    For itinerary (a_1 .. a_p) the roots solve the lift equation
    F^p(y) = y + sum_j a_j d^(p-j); bisection on the clipped orbit tracking
    locates the negative-to-positive crossing of H = f^p - id, and a second
    reversed-orientation pass picks up a positive-to-negative crossing when
    the itinerary holds an attracting periodic point (a sink makes H
    non-monotone in its cylinder).  Reversed-pass candidates are kept only
    when the unclipped residual |f^p(y) - y| is below 1e-6.  Returns
    (points, log_multipliers, itineraries) stacked over both passes; the
    two extreme itineraries both land on the fixed point at 0 = 1, so the
    rows describe d^p - 1 distinct circle points for full-branch maps
    without sinks.

    Multipliers are evaluated branch-aware: at a branch-cut orbit point the
    slope of the itinerary's branch is used, so for piecewise-linear maps
    the shared fixed point at 0 carries both one-sided multipliers.
    """
    _check_budget(m, period)
    d, p = m.degree, int(period)
    count = d ** p
    idx = np.arange(count)
    place = d ** np.arange(p - 1, -1, -1)
    itins = (idx[:, None] // place[None, :]) % d

    y_fwd = _itinerary_bisection(m, itins, ascending=True)
    y_rev = _itinerary_bisection(m, itins, ascending=False, hi0=y_fwd)
    resid = np.abs(_clipped_iterate(m, y_rev, itins, clip=False) - y_rev)
    keep = (resid <= 1e-6) & (np.abs(y_rev - y_fwd) > 1e-9)

    ys = [y_fwd]
    its = [itins]
    if np.any(keep):
        ys.append(y_rev[keep])
        its.append(itins[keep])
    y = np.concatenate(ys)
    itins_all = np.concatenate(its, axis=0)

    log_mult = np.zeros(len(y))
    z = y
    for j in range(p):
        df = derivative_on_branch(m, np.mod(z, 1.0), itins_all[:, j])
        log_mult += np.log(df)
        z = np.clip(m.lift(z) - itins_all[:, j], 0.0, 1.0)
    return y, log_mult, itins_all


def periodic_orbits(m: CircleMap, period: int) -> PeriodicOrbitSet:
    """Distinct fixed points of f^period with multipliers.

    Itinerary roots closer than 1e-9 on the circle are merged (the genuine
    spacing is >= 1/d^p); the representative multiplier comes from the
    lexicographically first itinerary of each cluster.
    """
    pts, log_mult, _ = fixed_points_by_itinerary(m, period)
    w = pts.copy()
    w[w > 1.0 - _DEDUP_TOL] -= 1.0
    order = np.argsort(w, kind="stable")
    ws = w[order]
    starts = np.concatenate(([0], np.nonzero(np.diff(ws) > _DEDUP_TOL)[0] + 1))
    first_idx = np.minimum.reduceat(order, starts)
    points = np.mod(pts[first_idx], 1.0)
    points[points > 1.0 - _DEDUP_TOL] = 0.0
    return PeriodicOrbitSet(
        period=int(period),
        points=points,
        multipliers=np.exp(log_mult[first_idx]),
        count=len(first_idx),
    )


def exact_pressure_piecewise_linear(slopes, t: float) -> float:
    """log sum_i s_i^(-t): constants are exact eigenfunctions when |Df| is
    branch-constant, so this is the analytic pressure."""
    s = np.asarray(list(slopes), dtype=float)
    if np.any(s <= 1.0):
        raise ValueError(f"slopes must all exceed 1, got {s.tolist()}")
    if abs(float(np.sum(1.0 / s)) - 1.0) > 1e-9:
        raise ValueError(
            f"reciprocal slopes must sum to 1, got {float(np.sum(1.0 / s))!r}"
        )
    return float(np.log(np.sum(s ** (-float(t)))))


def pressure_periodic_orbits(m: CircleMap, t: float, period: int) -> float:
    """(1/p) log sum over fixed points of f^p of |Df^p|^(-t); a standard
    pressure approximant, independent of the operator pipeline."""
    orbs = periodic_orbits(m, period)
    return float(
        np.log(np.sum(orbs.multipliers ** (-float(t)))) / orbs.period
    )


#: sub-ulp irrational offset added to orbit seeds, ~6.2e-17: inside the
#: double-precision uncertainty of any x0, but it fills the extended
#: mantissa so the orbit leaves the seed's dyadic lattice
_SEED_OFFSET = np.sqrt(np.longdouble(5)) * np.longdouble(2.0) ** -55


def birkhoff_averages(m: CircleMap, observable, x0s, n_iter: int) -> np.ndarray:
    """Time averages (1/n) sum_{j<n} observable(f^j(x0)) for a batch of
    starting points.

    Orbits iterate in extended precision with a deterministic sub-ulp seed
    offset.  Integer-slope maps act exactly on the seed's dyadic lattice,
    so a plain double orbit is the exact dynamics of a 2^53-state system
    and funnels into short atypical cycles within a few hundred thousand
    steps; the offset moves the exact dynamics onto the ~2^63-state
    extended lattice, pushing absorption far beyond any requested n_iter.
    (Binary-rigid maps like x -> 2x mod 1 still exhaust any finite
    mantissa in ~60 steps; only branch-constant observables have
    meaningful long averages there.)
    """
    if n_iter < 1:
        raise ValueError(f"n_iter must be >= 1, got {n_iter}")
    x = np.mod(np.asarray(x0s, dtype=np.longdouble) + _SEED_OFFSET, 1.0)
    acc = np.zeros(len(x))
    for _ in range(int(n_iter)):
        acc += np.asarray(observable(x), dtype=float)
        x = evaluate(m, x)
    return acc / n_iter


def birkhoff_average(m: CircleMap, observable, x0: float, n_iter: int) -> float:
    """Time average along the forward orbit of a single starting point."""
    return float(birkhoff_averages(m, observable, [float(x0)], n_iter)[0])
