import numpy as np
import pytest

from conftest import match_multisets, random_hermitian
from pencil_persist import (
    E0InSpectrum,
    Kind,
    NotHermitian,
    bs_reduce,
    count_in_unit_interval,
    exceptional_set,
    kernel_witness,
    pencil_from_eigenproblem,
)
from pencil_persist.birman_schwinger import CAVEAT


def gap_energy(rng, h0):
    """A random energy strictly inside a spectral gap (or outside the spectrum)."""
    w = np.linalg.eigvalsh(h0)
    edges = np.concatenate([[w[0] - 1.0], w, [w[-1] + 1.0]])
    k = rng.integers(len(edges) - 1)
    return float(edges[k] + (0.25 + 0.5 * rng.random()) * (edges[k + 1] - edges[k]))


def test_two_by_two_rotation():
    r = bs_reduce(np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]]), 0.0)
    assert np.allclose(r.K, [[0, -1], [1, 0]], atol=1e-14)
    ok, _ = match_multisets(r.mu, [1j, -1j], 1e-12)
    assert ok
    ok, _ = match_multisets(r.exceptional_t, [1j, -1j], 1e-12)
    assert ok
    assert count_in_unit_interval(r) == 0


def test_zero_potential_has_no_exceptional_t():
    r = bs_reduce(np.diag([1.0, 2.0, 3.0]), np.zeros((3, 3)), 0.0)
    assert np.all(r.K == 0)
    assert r.exceptional_t.size == 0
    assert count_in_unit_interval(r) == 0


def test_diagonal_shift_count():
    r = bs_reduce(np.diag([0.6, 5.0]), -np.eye(2), 0.1)
    assert np.allclose(np.sort(r.exceptional_t.real), [0.5, 4.9], atol=1e-12)
    assert np.all(np.abs(r.exceptional_t.imag) < 1e-14)
    assert count_in_unit_interval(r) == 1


@pytest.mark.parametrize("e0", [0.0, 1.0, 1.0 + 1e-12])
def test_energy_in_spectrum_is_rejected(e0):
    with pytest.raises(E0InSpectrum):
        bs_reduce(np.diag([0.0, 1.0]), np.eye(2), e0)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitian):
        bs_reduce(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2), 5.0)


def test_caveat_attached():
    r = bs_reduce(np.diag([1.0, 2.0]), np.eye(2), 0.0)
    assert r.note == CAVEAT
    assert "resolvent set" in CAVEAT


@pytest.mark.parametrize("seed", range(20))
def test_matches_pencil_route(seed):
    rng = np.random.default_rng(seed)
    n = 6
    h0 = random_hermitian(rng, n)
    v = random_hermitian(rng, n)
    e0 = gap_energy(rng, h0)
    r = bs_reduce(h0, v, e0)
    ex = exceptional_set(pencil_from_eigenproblem(h0, v, e0))
    assert ex.kind is Kind.FINITE
    ok, worst = match_multisets(r.exceptional_t, ex.values(), 1e-8)
    assert ok, worst


@pytest.mark.parametrize("seed", range(10))
def test_low_rank_potential_finiteness_and_residuals(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 9))
    rk = int(rng.integers(1, n + 1))
    g = rng.standard_normal((n, rk)) + 1j * rng.standard_normal((n, rk))
    v = g @ np.diag(rng.choice([-1.0, 1.0], rk)) @ g.conj().T
    h0 = random_hermitian(rng, n)
    e0 = gap_energy(rng, h0)
    r = bs_reduce(h0, v, e0)
    assert len(r.exceptional_t) <= rk <= n
    p = pencil_from_eigenproblem(h0, v, e0)
    scale = max(1.0, np.linalg.norm(h0), np.linalg.norm(v))
    for t in r.exceptional_t:
        basis = kernel_witness(p, t)
        assert basis.shape[1] >= 1
        w = basis[:, 0]
        res = np.linalg.norm((h0 + t * v - e0 * np.eye(n)) @ w)
        assert res <= 1e-6 * scale
