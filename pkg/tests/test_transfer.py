"""Transfer-operator action and both discretization schemes."""

import numpy as np
import pytest

from circlethermo import transfer
from circlethermo.spectral import leading_spectrum

SMOOTH_EXPANDING = ["m2", "m3", "perturbed05"]
ALL_FAMILIES = ["m2", "m3", "pw236", "neutral", "perturbed05", "mp_circle"]


@pytest.fixture
def family_map(request):
    return request.getfixturevalue(request.param)


def test_apply_pointwise_examples(m2, pw236):
    assert transfer.apply_pointwise(m2, 1.0, lambda y: 1.0, 0.37) == pytest.approx(
        1.0, abs=1e-12
    )
    assert transfer.apply_pointwise(pw236, 1.0, lambda y: 1.0, 0.37) == pytest.approx(
        1.0, abs=1e-12
    )
    # preimages of x under doubling carry opposite phases at t = 0
    val = transfer.apply_pointwise(
        m2, 0.0, lambda y: np.exp(2j * np.pi * y), 0.81
    )
    assert abs(val) <= 1e-12


def test_weight_at_neutral_point(neutral):
    w = transfer.GeometricPotential(1.5).weight(neutral, np.array([0.0, 0.25]))
    assert w[0] == 1.0
    assert 0.0 < w[1] < 1.0


def test_dimension_errors(m2):
    with pytest.raises(ValueError):
        transfer.assemble_ulam(m2, 0.0, 7)
    with pytest.raises(ValueError):
        transfer.assemble_collocation(m2, 0.0, 7)
    with pytest.raises(ValueError):
        transfer.assemble_collocation(m2, 0.0, 9)  # odd
    with pytest.raises(ValueError):
        transfer.assemble(m2, 0.0, "galerkin", 16)


@pytest.mark.parametrize("family_map", ALL_FAMILIES, indirect=True)
@pytest.mark.parametrize("scheme", ["ulam", "collocation"])
def test_degree_row_sum_identity(family_map, scheme):
    # L_0 1 = deg pointwise, so every row sums to the degree at t = 0
    M = transfer.assemble(family_map, 0.0, scheme, 64)
    sums = M.entries.sum(axis=1)
    assert np.max(np.abs(sums - family_map.degree)) <= 1e-10


def test_ulam_small_structure(m2):
    M = transfer.assemble_ulam(m2, 0.0, 8)
    # each row holds two unit entries (the two preimage cells)
    assert np.all(np.sort(M.entries, axis=1)[:, -2:] == 1.0)
    assert np.count_nonzero(M.entries) == 16
    M1 = transfer.assemble_ulam(m2, 1.0, 8)
    assert np.allclose(np.sort(M1.entries, axis=1)[:, -2:], 0.5, atol=1e-14)


def test_collocation_constants_eigen(m2):
    for t in (-0.5, 0.0, 0.7, 1.3):
        M = transfer.assemble_collocation(m2, t, 32)
        ones = np.ones(32)
        assert np.allclose(M.entries @ ones, 2.0 ** (1 - t) * ones, atol=1e-10)


def test_collocation_truncation_near_nilpotent(m2):
    # Exact arithmetic would make the doubling-map truncation nilpotent off
    # the constants.  Floating point lifts a length-~6 Jordan chain to
    # eigenvalues of size ~eps^(1/6) ~ 1e-3, so the honest bound is 1e-2,
    # not the exact-arithmetic 1e-10.
    M = transfer.assemble_collocation(m2, 0.0, 64)
    w, _ = leading_spectrum(M, 3)
    assert w[0].real == pytest.approx(2.0, abs=1e-12)
    assert abs(w[0].imag) <= 1e-12
    assert abs(w[1]) <= 1e-2


def test_hat_collocation_reproduces_constants(pw236):
    M = transfer.assemble_collocation(pw236, 1.0, 60)
    w, _ = leading_spectrum(M, 1)
    assert abs(w[0] - 1.0) <= 1e-9


@pytest.mark.parametrize("family_map", ALL_FAMILIES, indirect=True)
@pytest.mark.parametrize("t", [0.0, 1.0])
def test_ulam_entries_nonnegative(family_map, t):
    M = transfer.assemble_ulam(family_map, t, 64)
    assert np.min(M.entries) >= 0.0


@pytest.mark.parametrize("family_map", ["pw236", "mp_circle"], indirect=True)
def test_hat_collocation_entries_nonnegative(family_map):
    # hat kernels are nonnegative; trig cardinal kernels oscillate, so the
    # positivity of the underlying operator survives discretization only
    # for the ulam and hat schemes
    M = transfer.assemble_collocation(family_map, 0.5, 60)
    assert np.min(M.entries) >= -1e-14


@pytest.mark.parametrize("family_map", SMOOTH_EXPANDING, indirect=True)
def test_consistency_with_pointwise_action(family_map):
    m = family_map
    g = lambda y: np.exp(np.cos(2 * np.pi * y))
    n = 256
    exact = np.array(
        [transfer.apply_pointwise(m, 0.7, g, x) for x in np.arange(n) / n]
    )
    Mc = transfer.assemble_collocation(m, 0.7, n)
    approx_c = Mc.entries @ g(Mc.nodes)
    assert np.max(np.abs(approx_c - exact)) <= 1e-6

    exact_mid = np.array(
        [transfer.apply_pointwise(m, 0.7, g, x) for x in (np.arange(n) + 0.5) / n]
    )
    Mu = transfer.assemble_ulam(m, 0.7, n)
    approx_u = Mu.entries @ g(Mu.nodes)
    assert np.max(np.abs(approx_u - exact_mid)) <= 5e-2


def test_ulam_exact_on_refining_markov_partition(pw236):
    slopes = np.array(pw236.branch_slopes)
    for t in (-1.0, 0.0, 0.5, 1.0, 2.0):
        M = transfer.assemble_ulam(pw236, t, 60)
        lam = np.max(np.abs(np.linalg.eigvals(M.entries)))
        assert abs(lam - np.sum(slopes ** -t)) <= 1e-12 * max(
            1.0, np.sum(slopes ** -t)
        )


def test_matrix_csv_export(tmp_path, m2):
    M = transfer.assemble_ulam(m2, 0.0, 8)
    path = tmp_path / "matrix.csv"
    M.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "i,j,value"
    assert len(lines) == 1 + 64
    i, j, v = lines[1].split(",")
    assert (i, j) == ("0", "0")


def test_trig_cardinal_is_cardinal():
    n = 16
    nodes = np.arange(n) / n
    K = transfer.trig_cardinal(nodes[:, None] - nodes[None, :], n)
    assert np.allclose(K, np.eye(n), atol=1e-12)
    # reproduces constants between nodes
    x = np.linspace(0, 1, 37)
    sums = transfer.trig_cardinal(x[:, None] - nodes[None, :], n).sum(axis=1)
    assert np.allclose(sums, 1.0, atol=1e-12)
