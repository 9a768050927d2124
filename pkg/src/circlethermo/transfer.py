"""Weighted transfer operator: pointwise action and finite discretizations.

The operator acts on functions g by (L_t g)(x) = sum over preimages y of x
of |Df(y)|^(-t) g(y).  Two finite-dimensional stand-ins are provided:

ulam
    midpoint-quadrature weighted Ulam matrix on the uniform n-cell partition;
    entrywise nonnegative, exact on piecewise-linear Markov maps whenever the
    cells refine the branch partition, robust near neutral points.

collocation
    cardinal-kernel collocation on the equispaced nodes i/n: trigonometric
    cardinal functions for smooth families (spectral accuracy), periodic hat
    functions for piecewise-smooth families (O(n^-2)).  The trigonometric
    kernel oscillates, so those matrices can carry small negative entries
    even though the underlying operator is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maps import CircleMap, inverse_branch_grid, inverse_branches

SCHEMES = ("ulam", "collocation")


@dataclass(frozen=True)
class GeometricPotential:
    """The potential -t log|Df|; weights e^phi = |Df|^(-t) stay finite and
    positive wherever |Df| > 0 (equal to 1 at neutral points)."""

    t: float

    def weight(self, m: CircleMap, y) -> np.ndarray:
        df = np.asarray(m.deriv(y), dtype=float)
        if self.t == 0.0:
            return np.ones_like(df)
        return df ** (-self.t)


@dataclass(frozen=True)
class OperatorMatrix:
    """Finite discretization of the transfer operator.

    nodes are cell midpoints for the ulam scheme and the equispaced
    collocation points i/n otherwise.
    """

    scheme: str
    n: int
    entries: np.ndarray
    t: float
    nodes: np.ndarray

    def to_csv(self, path) -> None:
        """Row-major debug dump with header i,j,value."""
        with open(path, "w") as fh:
            fh.write("i,j,value\n")
            for i in range(self.n):
                row = self.entries[i]
                for j in range(self.n):
                    fh.write(f"{i},{j},{row[j]!r}\n")


def apply_pointwise(m: CircleMap, t: float, g, x: float):
    """(L_t g)(x) = sum_{f(y)=x} |Df(y)|^(-t) g(y) for x in [0, 1)."""
    ys = inverse_branches(m, x)
    w = GeometricPotential(t).weight(m, ys)
    return sum(w[b] * g(ys[b]) for b in range(m.degree))


def trig_cardinal(u, n: int) -> np.ndarray:
    """Periodic trigonometric cardinal function for an even-n uniform grid:
    K(u) = sin(n pi u) / (n tan(pi u)), K(0) = 1, zero at the other nodes."""
    u = np.asarray(u, dtype=float)
    s = np.sin(n * np.pi * u)
    denom = np.tan(np.pi * u)
    near = np.abs(np.sin(np.pi * u)) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        out = s / (n * denom)
    return np.where(near, 1.0, out)


def hat_cardinal(u, n: int) -> np.ndarray:
    """Periodic piecewise-linear hat: 1 - n * circle-distance, clipped at 0."""
    u = np.asarray(u, dtype=float)
    d = np.abs(u - np.round(u))
    return np.maximum(0.0, 1.0 - n * d)


def kernel_for(m: CircleMap):
    """Interpolation kernel used by collocation and by h o f evaluation."""
    return trig_cardinal if m.smooth else hat_cardinal


def assemble_ulam(m: CircleMap, t: float, n: int) -> OperatorMatrix:
    """Midpoint-quadrature weighted Ulam matrix.

    Entry (i, j) = sum over preimages y of the cell-i midpoint of
    |Df(y)|^(-t) 1_{I_j}(y) with I_j = [j/n, (j+1)/n).
    """
    if n < 8:
        raise ValueError(f"ulam dimension must be >= 8, got {n}")
    n = int(n)
    mids = (np.arange(n) + 0.5) / n
    ys = inverse_branch_grid(m, mids)
    w = GeometricPotential(t).weight(m, ys)
    cols = np.clip((ys * n).astype(int), 0, n - 1)
    entries = np.zeros((n, n))
    rows = np.broadcast_to(np.arange(n), ys.shape)
    np.add.at(entries, (rows, cols), w)
    return OperatorMatrix(scheme="ulam", n=n, entries=entries, t=float(t), nodes=mids)


def assemble_collocation(m: CircleMap, t: float, n: int) -> OperatorMatrix:
    """Cardinal-kernel collocation matrix on nodes i/n (n even).

    Entry (i, j) = sum over preimages y of node i of |Df(y)|^(-t) K(y - x_j);
    applied to node samples of g it reproduces the pointwise operator to
    spectral accuracy (smooth families) or O(n^-2) (hat kernel).
    """
    if n < 8:
        raise ValueError(f"collocation dimension must be >= 8, got {n}")
    if n % 2 != 0:
        raise ValueError(f"collocation dimension must be even, got {n}")
    n = int(n)
    nodes = np.arange(n) / n
    kern = kernel_for(m)
    ys = inverse_branch_grid(m, nodes)
    w = GeometricPotential(t).weight(m, ys)
    entries = np.zeros((n, n))
    for b in range(m.degree):
        entries += w[b][:, None] * kern(ys[b][:, None] - nodes[None, :], n)
    return OperatorMatrix(
        scheme="collocation", n=n, entries=entries, t=float(t), nodes=nodes
    )


def assemble(m: CircleMap, t: float, scheme: str, n: int) -> OperatorMatrix:
    """Dispatch on scheme name ('ulam' or 'collocation')."""
    if scheme == "ulam":
        return assemble_ulam(m, t, n)
    if scheme == "collocation":
        return assemble_collocation(m, t, n)
    raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")


def periodic_interpolate(values: np.ndarray, x, m: CircleMap, scheme: str,
                         nodes: np.ndarray) -> np.ndarray:
    """Interpolate node samples at arbitrary circle points.

    Uses the same kernel family as the assembling scheme: trigonometric
    cardinals for smooth collocation, hats otherwise (ulam midpoints get the
    hat too).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = len(values)
    if scheme == "collocation" and m.smooth:
        k = trig_cardinal(x[:, None] - nodes[None, :], n)
    else:
        k = hat_cardinal(x[:, None] - nodes[None, :], n)
        k = k / np.sum(k, axis=1, keepdims=True)
    return k @ np.asarray(values, dtype=float)
