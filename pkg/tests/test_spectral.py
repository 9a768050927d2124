"""Eigen-analysis: Perron data, equilibrium states, power iteration."""

import numpy as np
import pytest

from circlethermo import maps, spectral, transfer
from circlethermo.errors import PerronStructureError

EXPANDING_CONFIGS = [
    ("m2", "collocation", 64),
    ("m3", "collocation", 64),
    ("pw236", "ulam", 60),
    ("perturbed05", "collocation", 128),
]


def _cfg(request, name, scheme, n):
    return request.getfixturevalue(name), scheme, n


def test_leading_spectrum_rank_one_matrix():
    # the 2-cell ulam matrix of the doubling map, written out literally
    M = transfer.OperatorMatrix(
        scheme="ulam", n=2, entries=np.array([[1.0, 1.0], [1.0, 1.0]]),
        t=0.0, nodes=np.array([0.25, 0.75]),
    )
    w, V = spectral.leading_spectrum(M, 2)
    assert w[0] == pytest.approx(2.0, abs=1e-14)
    assert abs(w[1]) <= 1e-14
    assert V.shape == (2, 2)


def test_leading_spectrum_examples(m2, pw236):
    M = transfer.assemble_collocation(m2, 1.0, 64)
    w, _ = spectral.leading_spectrum(M, 1)
    assert w[0] == pytest.approx(1.0, abs=1e-12)
    # refining ulam partition: row sums equal the degree exactly
    M = transfer.assemble_ulam(pw236, 0.0, 12)
    w, _ = spectral.leading_spectrum(M, 1)
    assert w[0] == pytest.approx(3.0, abs=1e-12)


def test_leading_spectrum_k_too_large(m2):
    M = transfer.assemble_ulam(m2, 0.0, 8)
    with pytest.raises(ValueError):
        spectral.leading_spectrum(M, 9)


def test_spectral_data_constant_derivative(m2):
    sd = spectral.spectral_data(m2, 0.7, "collocation", 64)
    assert sd.lambda1 == pytest.approx(2.0 ** 0.3, abs=1e-12)
    assert np.allclose(sd.h, sd.h[0], atol=1e-10)
    assert np.allclose(sd.nu, 1.0 / 64, atol=1e-12)
    assert sd.gap_ratio <= 0.01


def test_spectral_data_lebesgue_acip(pw236):
    sd = spectral.spectral_data(pw236, 1.0, "ulam", 60)
    assert sd.lambda1 == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(sd.h, sd.h[0], atol=1e-10)
    assert np.allclose(sd.nu, 1.0 / 60, atol=1e-10)


def test_spectral_data_neutral_t0(neutral):
    sd = spectral.spectral_data(neutral, 0.0, "collocation", 128)
    assert sd.lambda1 == pytest.approx(2.0, abs=1e-8)


def test_normalization_and_gap_bounds(pw236):
    sd = spectral.spectral_data(pw236, 0.5, "ulam", 60)
    assert float(sd.nu @ sd.h) == pytest.approx(1.0, abs=1e-10)
    assert np.sum(sd.nu) == pytest.approx(1.0, abs=1e-12)
    assert 0.0 <= sd.gap_ratio <= 1.0 + 1e-9
    assert np.min(sd.h) > 0.0


@pytest.mark.parametrize("name,scheme,n", EXPANDING_CONFIGS)
@pytest.mark.parametrize("t", [0.0, 0.5, 1.0])
def test_perron_property(request, name, scheme, n, t):
    m, scheme, n = _cfg(request, name, scheme, n)
    sd = spectral.spectral_data(m, t, scheme, n)
    # lambda1 real positive simple; no other peripheral eigenvalue
    assert sd.lambda1 > 0
    assert sd.lambda2_mod < sd.lambda1 * (1.0 - 1e-6)
    assert np.min(sd.h) > 0.0
    w = np.linalg.eigvals(sd.matrix.entries)
    w = w[np.argsort(-np.abs(w))]
    assert np.sum(np.abs(w) >= (1.0 - 1e-6) * sd.lambda1) == 1


@pytest.mark.parametrize("name,scheme,n", EXPANDING_CONFIGS)
def test_eigenmeasure_unique_across_starts(request, name, scheme, n):
    m, scheme, n = _cfg(request, name, scheme, n)
    M = transfer.assemble(m, 0.5, scheme, n)
    mvT = M.entries.T.dot
    lam_a, nu_a = spectral.power_leading(mvT, n)
    x = M.nodes
    lam_b, nu_b = spectral.power_leading(mvT, n, v0=1.0 + np.cos(2 * np.pi * x))
    assert lam_a == pytest.approx(lam_b, rel=1e-10)
    nu_a = np.abs(nu_a) / np.sum(np.abs(nu_a))
    nu_b = np.abs(nu_b) / np.sum(np.abs(nu_b))
    tv = 0.5 * np.sum(np.abs(nu_a - nu_b))
    assert tv <= 1e-8


@pytest.mark.parametrize("name", ["m2", "perturbed05"])
@pytest.mark.parametrize("gfun", [
    lambda x: np.cos(2 * np.pi * x),
    lambda x: np.sin(4 * np.pi * x),
])
def test_equilibrium_measure_invariance(request, name, gfun):
    m = request.getfixturevalue(name)
    sd = spectral.spectral_data(m, 0.5, "collocation", 512, with_gap=False)
    es = spectral.equilibrium_state(sd, m)
    fx = maps.evaluate(m, sd.nodes)
    drift = abs(float(es.mu @ gfun(fx)) - float(es.mu @ gfun(sd.nodes)))
    assert drift <= 5e-3


def test_equilibrium_examples(m2, pw236):
    for t in (0.0, 0.4, 1.0):
        sd = spectral.spectral_data(m2, t, "collocation", 64, with_gap=False)
        es = spectral.equilibrium_state(sd, m2)
        assert np.allclose(es.mu, 1.0 / 64, atol=1e-10)
        assert np.allclose(es.jacobian, 2.0, atol=1e-9)

    sd = spectral.spectral_data(pw236, 1.0, "ulam", 60, with_gap=False)
    es = spectral.equilibrium_state(sd, pw236)
    slopes_at_nodes = np.asarray(pw236.deriv(sd.nodes))
    assert np.allclose(es.jacobian, slopes_at_nodes, atol=1e-9)
    assert np.sum(es.mu) == pytest.approx(1.0, abs=1e-12)
    assert np.min(es.jacobian) > 0.0


def test_g_function_identity(neutral):
    # sum over preimages of 1/J equals 1: the conformal normalization of
    # the equilibrium Jacobian
    sd = spectral.spectral_data(neutral, 0.0, "collocation", 128, with_gap=False)

    def jac_at(y):
        hof = transfer.periodic_interpolate(
            sd.h, maps.evaluate(neutral, y), neutral, sd.scheme, sd.nodes
        )
        hy = transfer.periodic_interpolate(sd.h, y, neutral, sd.scheme, sd.nodes)
        return sd.lambda1 * np.asarray(neutral.deriv(y)) ** sd.t * hof / hy

    rng = np.random.default_rng(3)
    for x in rng.random(8):
        ys = maps.inverse_branches(neutral, x)
        total = float(np.sum(1.0 / jac_at(ys)))
        assert total == pytest.approx(1.0, abs=5e-3)


def test_equilibrium_rejected_beyond_transition(neutral):
    sd = spectral.spectral_data(neutral, 1.5, "ulam", 256, with_gap=False)
    assert np.min(sd.h) == 0.0  # far field underflows: no gap here
    with pytest.raises(PerronStructureError):
        spectral.equilibrium_state(sd, neutral)


def test_power_iteration_matches_dense(pw236):
    M = transfer.assemble_ulam(pw236, 0.5, 60)
    lam_dense = np.max(np.abs(np.linalg.eigvals(M.entries)))
    lam_pow, v = spectral.power_leading(M.entries.dot, 60)
    assert lam_pow == pytest.approx(lam_dense, rel=1e-10)
    _, nu = spectral.power_leading(M.entries.T.dot, 60)
    w = np.linalg.eigvals(M.entries)
    lam2_dense = np.sort(np.abs(w))[-2]
    lam2_pow, _ = spectral.power_subleading(M.entries.dot, lam_pow, v, nu)
    assert lam2_pow == pytest.approx(lam2_dense, rel=1e-6, abs=1e-9)


def test_spectral_data_deterministic(pw236):
    a = spectral.spectral_data(pw236, 0.5, "ulam", 60)
    b = spectral.spectral_data(pw236, 0.5, "ulam", 60)
    assert np.array_equal(a.h, b.h)
    assert np.array_equal(a.nu, b.nu)
    assert a.lambda1 == b.lambda1


def test_json_export_keys(m2):
    sd = spectral.spectral_data(m2, 0.3, "collocation", 16)
    d = sd.to_json_dict()
    assert set(d) == {"lambda1", "lambda2_mod", "gap_ratio", "nodes", "h", "nu"}
    assert len(d["h"]) == 16
