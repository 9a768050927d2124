"""Pressure curves, transition reports, entropy, variance, gap bounds."""

import numpy as np
import pytest

from circlethermo import maps, oracles, spectral, thermo

TWO_PI = 2 * np.pi


def _sink_map():
    """Degree-2 specimen with an attracting fixed point at 0 (|Df(0)| = 1/2);
    periodic-orbit exponents dip negative, so it classifies as kink."""
    lift = lambda x: 2.0 * np.asarray(x, float) - 1.5 * np.sin(
        TWO_PI * np.asarray(x, float)
    ) / TWO_PI
    deriv = lambda x: 2.0 - 1.5 * np.cos(TWO_PI * np.asarray(x, float))
    return maps.CircleMap(
        family="custom_sink", degree=2, lift=lift, deriv=deriv, smooth=True
    )


def test_pressure_examples(m2, pw236):
    for t in (-1.0, 0.0, 0.5, 2.0):
        assert thermo.pressure(m2, t, "collocation", 64) == pytest.approx(
            (1 - t) * np.log(2), abs=1e-12
        )
    assert thermo.pressure(pw236, 0.0, "ulam", 60) == pytest.approx(
        np.log(3), abs=1e-12
    )
    assert thermo.pressure(pw236, 1.0, "ulam", 60) == pytest.approx(0.0, abs=1e-12)


def test_pressure_curve_linear_family(m2):
    grid = np.arange(-1.0, 2.01, 0.5)
    curve = thermo.pressure_curve(m2, grid, "collocation", 64)
    assert np.allclose(curve.P, (1 - grid) * np.log(2), atol=1e-10)
    assert np.allclose(curve.chi, np.log(2), atol=1e-10)
    assert np.allclose(curve.entropy, np.log(2), atol=1e-10)
    assert curve.failures == ()


def test_pressure_curve_exact_piecewise(pw236):
    grid = np.arange(-1.0, 2.01, 0.25)
    curve = thermo.pressure_curve(pw236, grid, "ulam", 60)
    exact = [oracles.exact_pressure_piecewise_linear([2, 3, 6], t) for t in grid]
    assert np.max(np.abs(curve.P - exact)) <= 1e-9
    # curve invariants: P(0) = log(deg); non-increasing where chi >= -1e-3;
    # discrete convexity
    i0 = int(np.argmin(np.abs(grid)))
    assert abs(curve.P[i0] - np.log(3)) <= 2e-3
    assert np.all(np.diff(curve.P)[curve.chi[:-1] >= -1e-3] <= 1e-12)
    assert np.all(np.diff(curve.P, 2) >= -1e-4)


def test_pressure_curve_requires_sorted_grid(m2):
    with pytest.raises(ValueError):
        thermo.pressure_curve(m2, [0.5, 0.0], "collocation", 16)


def test_pressure_curve_csv(tmp_path, m2):
    curve = thermo.pressure_curve(m2, [0.0, 0.5, 1.0], "collocation", 16,
                                  with_gap=True)
    path = tmp_path / "curve.csv"
    curve.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,P,chi,entropy,gap_ratio"
    assert len(lines) == 4


def test_find_t0_expanding_reports_bowen_root(pw236, m2):
    rep = thermo.find_t0(pw236, "ulam", 60)
    assert rep.classification == "expanding_no_transition"
    assert rep.t0 is None and rep.dynamical_dimension is None
    assert rep.bowen_root == pytest.approx(1.0, abs=1e-9)

    rep = thermo.find_t0(m2, "collocation", 64)
    assert rep.classification == "expanding_no_transition"
    assert rep.t0 is None
    assert rep.bowen_root == pytest.approx(1.0, abs=1e-9)


def test_find_t0_neutral_small_n(neutral):
    rep = thermo.find_t0(neutral, "ulam", 512, tol=1e-3)
    assert rep.classification == "flat"
    assert rep.t0 == pytest.approx(1.0, abs=0.05)
    assert 0.0 < rep.t0 <= 1.0 + 2e-2
    assert rep.dynamical_dimension == rep.t0
    assert rep.residual is not None and rep.residual <= 1e-2


def test_lyapunov_extrema_examples(m2, pw236, neutral):
    lo, hi = thermo.lyapunov_extrema(m2, 6)
    assert lo == pytest.approx(np.log(2), abs=1e-12)
    assert hi == pytest.approx(np.log(2), abs=1e-12)

    lo, hi = thermo.lyapunov_extrema(pw236, 4)
    assert lo == pytest.approx(np.log(2), abs=1e-9)
    assert hi == pytest.approx(np.log(6), abs=1e-9)

    lo, hi = thermo.lyapunov_extrema(neutral, 8)
    assert abs(lo) <= 1e-6
    assert hi > 0.5


def test_classify_expanding(m3):
    rep = thermo.classify_transition(m3, "collocation", 64, max_period=6)
    assert rep.classification == "expanding_no_transition"


def test_classify_flat(neutral):
    rep = thermo.classify_transition(neutral, "ulam", 512, max_period=8)
    assert rep.classification == "flat"
    assert rep.t0 == pytest.approx(1.0, abs=0.05)


def test_classify_dichotomy_follows_chi_min(perturbed25):
    # classification must be whatever the computed chi_min dictates
    rep = thermo.classify_transition(perturbed25, "collocation", 128,
                                     max_period=12)
    if abs(rep.chi_min) <= 1e-3:
        assert rep.classification == "flat"
    elif rep.chi_min < -1e-3:
        assert rep.classification == "kink"
    else:
        assert rep.classification == "expanding_no_transition"


def test_classify_kink_sink_map():
    sink = _sink_map()
    rep = thermo.classify_transition(sink, "ulam", 64, max_period=6)
    assert rep.chi_min <= np.log(0.5) + 1e-6
    assert rep.classification == "kink"
    # a sink keeps the pressure positive: no zero on [0, 2]
    assert rep.t0 is None and rep.residual is None


def test_entropy_rokhlin_examples(m2, pw236):
    assert thermo.entropy_rokhlin(m2, 0.0, "collocation", 64) == pytest.approx(
        np.log(2), abs=1e-10
    )
    assert thermo.entropy_rokhlin(m2, 0.5, "collocation", 64) == pytest.approx(
        np.log(2), abs=1e-10
    )
    expect = np.log(2) / 2 + np.log(3) / 3 + np.log(6) / 6
    assert thermo.entropy_rokhlin(pw236, 1.0, "ulam", 60) == pytest.approx(
        expect, abs=1e-9
    )


@pytest.mark.parametrize("name,scheme,n", [
    ("m2", "collocation", 256),
    ("pw236", "ulam", 60),
    ("neutral", "ulam", 256),
])
@pytest.mark.parametrize("t", [0.0, 0.5])
def test_entropy_consistency_and_margulis_ruelle(request, name, scheme, n, t):
    m = request.getfixturevalue(name)
    sd = spectral.spectral_data(m, t, scheme, n, with_gap=False)
    es = spectral.equilibrium_state(sd, m)
    rok = float(es.mu @ np.log(es.jacobian))
    P = np.log(sd.lambda1)
    chi = float(es.mu @ np.log(np.asarray(m.deriv(sd.nodes))))
    assert abs(rok - (P + t * chi)) <= 5e-3
    assert rok <= max(0.0, chi) + 5e-3


@pytest.mark.parametrize("name,scheme,n", [
    ("pw236", "ulam", 60),
    ("perturbed05", "collocation", 256),
])
def test_pressure_derivative_link(request, name, scheme, n):
    m = request.getfixturevalue(name)
    delta = 1e-3
    for t in (0.0, 0.5):
        sd = spectral.spectral_data(m, t, scheme, n, with_gap=False)
        mu = sd.h * sd.nu
        mu /= np.sum(mu)
        chi = float(mu @ np.log(np.asarray(m.deriv(sd.nodes))))
        slope = (
            thermo.pressure(m, t + delta, scheme, n)
            - thermo.pressure(m, t - delta, scheme, n)
        ) / (2 * delta)
        assert abs(slope + chi) <= 1e-3


def test_bounds_ordering(pw236):
    chi_min, chi_max = thermo.lyapunov_extrema(pw236, 8)
    for t in (0.0, 0.5, 1.0):
        sd = spectral.spectral_data(pw236, t, "ulam", 60, with_gap=False)
        mu = sd.h * sd.nu
        mu /= np.sum(mu)
        chi = float(mu @ np.log(np.asarray(pw236.deriv(sd.nodes))))
        assert chi_min - 1e-6 <= chi <= chi_max + 1e-6


def test_variance_piecewise(pw236):
    vr = thermo.variance(pw236, 0.0, "ulam", 60)
    expect = np.var(np.log([2.0, 3.0, 6.0]))
    assert vr.sigma2_nagaev == pytest.approx(expect, abs=1e-4)
    assert vr.sigma2_green_kubo == pytest.approx(expect, abs=1e-4)
    assert vr.agreement <= 1e-4
    assert vr.sigma2_nagaev >= -1e-6 and vr.sigma2_green_kubo >= -1e-6


def test_variance_degenerate_coboundary(m2):
    vr = thermo.variance(m2, 0.0, "collocation", 64)
    assert abs(vr.sigma2_nagaev) <= 1e-6
    assert abs(vr.sigma2_green_kubo) <= 1e-6


def test_variance_positive_before_transition(neutral):
    vr = thermo.variance(neutral, 0.3, "ulam", 512)
    assert vr.sigma2_nagaev > 0.0
    assert vr.sigma2_green_kubo > 0.0


def test_essential_bound_examples(m2, pw236, neutral):
    eb = thermo.essential_bound_check(m2, 0.0, 1.0, "collocation", 64)
    assert eb.bound == pytest.approx(0.5, abs=1e-10)
    assert eb.observed_ratio <= 0.01
    assert eb.ok

    eb = thermo.essential_bound_check(pw236, 0.0, 1.0, "collocation", 60)
    assert eb.bound == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert eb.ok

    eb = thermo.essential_bound_check(neutral, 0.0, 1.0, "collocation", 128)
    assert eb.bound == pytest.approx(0.5, abs=0.05)
    assert eb.ok


def test_essential_bound_alpha_validation(m2):
    with pytest.raises(ValueError):
        thermo.essential_bound_check(m2, 0.0, 1.5, "collocation", 64)


def test_gap_trend_small_scale(neutral):
    gaps = [
        spectral.spectral_data(neutral, t, "ulam", 512).gap_ratio
        for t in (0.5, 0.7, 0.9, 1.0)
    ]
    # bounded away from 1 well before the transition, creeping toward 1 at it
    assert gaps[0] <= 0.8
    assert gaps[0] < gaps[1] < gaps[2] < gaps[3]


def test_bowen_root_error_when_pressure_positive():
    from circlethermo.errors import NoSignStructureError
    sink = _sink_map()
    with pytest.raises(NoSignStructureError):
        thermo.bowen_root(sink, "ulam", 64, t_max=8.0)
