"""Pressure curve, phase-transition detection, entropy, and variance.

The pressure along the geometric potential family is P(t) = log lambda_1 of
the discretized transfer operator with weight |Df|^(-t).  For a transitive
non-expanding map P is positive, strictly decreasing and strictly convex up
to the transition parameter t0 and identically zero afterwards, so t0 is
located by bisecting on "P(mid) > eps_zero" (leftmost zero of a function
that is zero on a half-line).  Expanding maps are short-circuited: their
pressure crosses zero transversally at the Bowen root without any
transition, and reporting that root as t0 would misrepresent the dynamics -
it is returned under the separate ``bowen_root`` field instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NoSignStructureError, PerronStructureError, ConvergenceError
from .maps import CircleMap, diagnose
from .oracles import fixed_points_by_itinerary
from .spectral import equilibrium_state, leading_eigenvalue, spectral_data

#: bisection treats P(t) <= EPS_ZERO as "already on the zero half-line";
#: ten times the typical discretization error of each map class
EPS_ZERO_SMOOTH = 1e-3
EPS_ZERO_PIECEWISE_LINEAR = 1e-6

#: |chi_min| below this counts as a neutral (flat) transition
CHI_FLAT_TOL = 1e-3


def _eps_zero(m: CircleMap) -> float:
    # piecewise-linear maps have exact discrete eigenvalues; smooth maps
    # carry a discretization floor
    if m.branch_slopes is not None:
        return EPS_ZERO_PIECEWISE_LINEAR
    return EPS_ZERO_SMOOTH


@dataclass(frozen=True)
class PressureCurve:
    """Grid of (t, P(t)) with the Lyapunov exponent chi_t of the equilibrium
    state, the entropy h_t = P + t chi, and optionally the gap ratio."""

    t_grid: np.ndarray
    P: np.ndarray
    chi: np.ndarray
    entropy: np.ndarray
    gap_ratio: np.ndarray
    scheme: str
    n: int
    failures: tuple = ()

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,P,chi,entropy,gap_ratio\n")
            for i in range(len(self.t_grid)):
                fh.write(
                    f"{float(self.t_grid[i])!r},{float(self.P[i])!r},"
                    f"{float(self.chi[i])!r},{float(self.entropy[i])!r},"
                    f"{float(self.gap_ratio[i])!r}\n"
                )

    def to_json_dict(self) -> dict:
        return {
            "t_grid": [float(v) for v in self.t_grid],
            "P": [float(v) for v in self.P],
            "chi": [float(v) for v in self.chi],
            "entropy": [float(v) for v in self.entropy],
            "gap_ratio": [float(v) for v in self.gap_ratio],
            "scheme": self.scheme,
            "n": self.n,
            "failures": [list(f) for f in self.failures],
        }


@dataclass(frozen=True)
class TransitionReport:
    """Transition parameter, classification, and Lyapunov extrema.

    classification is one of ``expanding_no_transition``, ``flat``
    (chi_min = 0), ``kink`` (chi_min < 0).  For expanding maps t0 is None
    and the transversal pressure zero is reported as bowen_root; for kink
    maps the pressure may stay positive on the whole search interval, in
    which case t0 is None as well.  dynamical_dimension equals t0 whenever
    both are defined.
    """

    t0: Optional[float]
    classification: str
    chi_min: float
    chi_max: float
    dynamical_dimension: Optional[float]
    residual: Optional[float]
    bowen_root: Optional[float] = None

    def to_json_dict(self) -> dict:
        return {
            "t0": None if self.t0 is None else float(self.t0),
            "classification": self.classification,
            "chi_min": float(self.chi_min),
            "chi_max": float(self.chi_max),
            "dynamical_dimension": (
                None
                if self.dynamical_dimension is None
                else float(self.dynamical_dimension)
            ),
            "residual": None if self.residual is None else float(self.residual),
            "bowen_root": (
                None if self.bowen_root is None else float(self.bowen_root)
            ),
            "expanding": self.classification == "expanding_no_transition",
        }


@dataclass(frozen=True)
class VarianceReport:
    """Central-limit variance of the geometric observable, two ways."""

    s: float
    sigma2_nagaev: float
    sigma2_green_kubo: float
    agreement: float

    def to_json_dict(self) -> dict:
        return {
            "s": float(self.s),
            "sigma2_nagaev": float(self.sigma2_nagaev),
            "sigma2_green_kubo": float(self.sigma2_green_kubo),
            "agreement": float(self.agreement),
        }


@dataclass(frozen=True)
class EssentialBoundCheck:
    """Discrete gap ratio against the essential-radius ratio bound
    exp(P(t + alpha) - P(t)).  Diagnostic only: finite truncations
    under-approximate the essential spectrum."""

    t: float
    alpha: float
    observed_ratio: float
    bound: float
    ok: bool

    def to_json_dict(self) -> dict:
        return {
            "t": float(self.t),
            "alpha": float(self.alpha),
            "observed_ratio": float(self.observed_ratio),
            "bound": float(self.bound),
            "ok": bool(self.ok),
        }


# ---------------------------------------------------------------------------
# Pressure
# ---------------------------------------------------------------------------

def pressure(m: CircleMap, t: float, scheme: str, n: int) -> float:
    """P(t) = log lambda_1 of the discretized operator."""
    return math.log(leading_eigenvalue(m, t, scheme, n))


def pressure_curve(m: CircleMap, t_grid, scheme: str, n: int,
                   with_gap: bool = False) -> PressureCurve:
    """Pressure, Lyapunov exponent and entropy over an ascending t grid.

    Per-point numerical failures become nan rows and are recorded in
    ``failures`` instead of aborting the sweep.  Grid points are
    independent; results are assembled in grid order.
    """
    t_grid = np.asarray(list(t_grid), dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be sorted strictly ascending")
    P = np.full(len(t_grid), np.nan)
    chi = np.full(len(t_grid), np.nan)
    gap = np.full(len(t_grid), np.nan)
    failures = []
    log_df = None
    for i, t in enumerate(t_grid):
        try:
            sd = spectral_data(m, float(t), scheme, n, with_gap=with_gap)
        except (PerronStructureError, ConvergenceError) as exc:
            failures.append((float(t), str(exc)))
            continue
        if log_df is None:
            log_df = np.log(np.asarray(m.deriv(sd.nodes), dtype=float))
        mu = sd.h * sd.nu
        mu = mu / np.sum(mu)
        P[i] = np.log(sd.lambda1)
        chi[i] = float(mu @ log_df)
        gap[i] = sd.gap_ratio
    entropy = P + t_grid * chi
    return PressureCurve(
        t_grid=t_grid,
        P=P,
        chi=chi,
        entropy=entropy,
        gap_ratio=gap,
        scheme=scheme,
        n=n,
        failures=tuple(failures),
    )


def bowen_root(m: CircleMap, scheme: str, n: int, tol: float = 1e-10,
               t_max: float = 64.0) -> float:
    """Transversal zero of t -> P(t), by sign bisection.

    For expanding maps this is the Bowen/dimension root; it exists because
    P(0) = log(deg) > 0 and P decreases through 0.
    """
    lo, p_lo = 0.0, pressure(m, 0.0, scheme, n)
    if p_lo <= 0.0:
        raise NoSignStructureError(f"P(0) = {p_lo} is not positive")
    hi = 1.0
    while pressure(m, hi, scheme, n) > 0.0:
        hi *= 2.0
        if hi > t_max:
            raise NoSignStructureError(
                f"pressure stays positive up to t = {t_max}"
            )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pressure(m, mid, scheme, n) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Lyapunov extrema and transition classification
# ---------------------------------------------------------------------------

def lyapunov_extrema(m: CircleMap, max_period: int) -> tuple:
    """(chi_min, chi_max) over all periodic orbits of period <= max_period.

    Exhaustive itinerary enumeration (deterministic, exact on the built-in
    test families); per-itinerary one-sided multipliers are kept, so a
    piecewise-linear map's boundary fixed point contributes both adjacent
    slopes.
    """
    chi_min = np.inf
    chi_max = -np.inf
    for p in range(1, int(max_period) + 1):
        _, log_mult, _ = fixed_points_by_itinerary(m, p)
        chi = log_mult / p
        chi_min = min(chi_min, float(np.min(chi)))
        chi_max = max(chi_max, float(np.max(chi)))
    return chi_min, chi_max


def _leftmost_zero(m: CircleMap, scheme: str, n: int, tol: float):
    """Bisect for the leftmost zero of P on [0, 2]; P vanishes on a
    half-line there, so the bracket condition is P(mid) > eps_zero."""
    eps_zero = _eps_zero(m)
    p_end = pressure(m, 2.0, scheme, n)
    if p_end > max(eps_zero, 10.0 * tol):
        raise NoSignStructureError(
            f"P(2) = {p_end} stays above threshold on [0, 2]; "
            f"no transition bracket (pressure never reaches zero)"
        )
    lo, hi = 0.0, 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pressure(m, mid, scheme, n) > eps_zero:
            lo = mid
        else:
            hi = mid
    t0 = 0.5 * (lo + hi)
    return t0, abs(pressure(m, t0, scheme, n))


def _transition_report(m: CircleMap, scheme: str, n: int, tol: float,
                       max_period: int) -> TransitionReport:
    diag = diagnose(m)  # also rejects maps with non-positive derivative
    chi_min, chi_max = lyapunov_extrema(m, max_period)

    if diag.is_expanding or chi_min > CHI_FLAT_TOL:
        # Uniformly expanding (or expanding beyond one step: every periodic
        # exponent positive); Theorem-A-type transitions are excluded, and
        # the pressure zero is only the Bowen root.
        root = bowen_root(m, scheme, n)
        return TransitionReport(
            t0=None,
            classification="expanding_no_transition",
            chi_min=chi_min,
            chi_max=chi_max,
            dynamical_dimension=None,
            residual=None,
            bowen_root=root,
        )

    classification = "flat" if chi_min >= -CHI_FLAT_TOL else "kink"
    try:
        t0, residual = _leftmost_zero(m, scheme, n, tol)
    except NoSignStructureError:
        if classification == "kink":
            # a sink keeps P positive on the whole interval: no zero exists
            return TransitionReport(
                t0=None,
                classification=classification,
                chi_min=chi_min,
                chi_max=chi_max,
                dynamical_dimension=None,
                residual=None,
            )
        raise
    return TransitionReport(
        t0=t0,
        classification=classification,
        chi_min=chi_min,
        chi_max=chi_max,
        dynamical_dimension=t0,
        residual=residual,
    )


def find_t0(m: CircleMap, scheme: str, n: int, tol: float = 1e-3,
            max_period: int = 8) -> TransitionReport:
    """Locate the transition parameter t0 = inf{t : P(t) = 0}.

    Expanding maps (checked via diagnose and periodic-orbit exponents)
    return expanding_no_transition with t0 = None and the Bowen root filled
    in separately.
    """
    return _transition_report(m, scheme, n, tol, max_period)


def classify_transition(m: CircleMap, scheme: str, n: int, tol: float = 1e-3,
                        max_period: int = 12) -> TransitionReport:
    """Bundle find_t0 with the flat/kink dichotomy: flat iff |chi_min| is
    below 1e-3, kink iff chi_min < -1e-3 (a periodic sink)."""
    return _transition_report(m, scheme, n, tol, max_period)


# ---------------------------------------------------------------------------
# Entropy, variance, essential bound
# ---------------------------------------------------------------------------

def entropy_rokhlin(m: CircleMap, t: float, scheme: str, n: int) -> float:
    """Metric entropy via the Jacobian: h = sum mu_i log J_i."""
    sd = spectral_data(m, t, scheme, n, with_gap=False)
    es = equilibrium_state(sd, m)
    return float(es.mu @ np.log(es.jacobian))


def variance(m: CircleMap, s: float, scheme: str, n: int,
             delta: float = 1e-3, n_corr: int = 64) -> VarianceReport:
    """CLT variance of psi = -log|Df| + chi at the equilibrium state of
    parameter s, via two independent estimators.

    sigma2_nagaev is the second central difference of P at s (the spectral
    second derivative); sigma2_green_kubo sums autocorrelations, computed by
    iterating the lambda_1-normalized matrix on psi*h against nu.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if n_corr < 0:
        raise ValueError(f"n_corr must be >= 0, got {n_corr}")
    sd = spectral_data(m, s, scheme, n, with_gap=False)
    p_mid = math.log(sd.lambda1)
    p_plus = pressure(m, s + delta, scheme, n)
    p_minus = pressure(m, s - delta, scheme, n)
    sigma2_nagaev = (p_plus - 2.0 * p_mid + p_minus) / delta ** 2

    log_df = np.log(np.asarray(m.deriv(sd.nodes), dtype=float))
    mu = sd.h * sd.nu
    mu = mu / np.sum(mu)
    chi = float(mu @ log_df)
    psi = -log_df + chi
    var0 = float(mu @ psi ** 2) - float(mu @ psi) ** 2
    gk = var0
    u = psi * sd.h
    A = sd.matrix.entries
    for _ in range(int(n_corr)):
        u = A @ u / sd.lambda1
        gk += 2.0 * float(sd.nu @ (psi * u))
    return VarianceReport(
        s=float(s),
        sigma2_nagaev=float(sigma2_nagaev),
        sigma2_green_kubo=float(gk),
        agreement=abs(float(sigma2_nagaev) - float(gk)),
    )


def essential_bound_check(m: CircleMap, t: float, alpha: float = 1.0,
                          scheme: str = "collocation",
                          n: int = 128) -> EssentialBoundCheck:
    """Compare the discrete gap ratio with exp(P(t + alpha) - P(t)).

    alpha plays the role of the smoothness exponent (1 = Lipschitz); the
    bound is the essential-to-leading radius ratio the function-space theory
    gives, and the check passes when observed <= bound + 5e-2.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    sd = spectral_data(m, t, scheme, n)
    p_t = math.log(sd.lambda1)
    p_shift = pressure(m, t + alpha, scheme, n)
    bound = math.exp(p_shift - p_t)
    observed = sd.gap_ratio
    return EssentialBoundCheck(
        t=float(t),
        alpha=float(alpha),
        observed_ratio=float(observed),
        bound=float(bound),
        ok=bool(observed <= bound + 5e-2),
    )
