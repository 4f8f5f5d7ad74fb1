import numpy as np
import pytest

from conftest import match_multisets, random_hermitian, random_psd
from pencil_persist import (
    InternalInconsistency,
    Kind,
    NotPSD,
    PerturbationFamily,
    ValidationError,
    analyze,
    char_poly,
    classify_v,
    construct_persistent_family,
    cyclicity_check,
    exceptional_set,
    measure_estimate,
    pencil_from_eigenproblem,
    projection_vanishing_check,
)
from pencil_persist import persistence
from pencil_persist.persistence import CANONICAL_H0, CANONICAL_V

CANON = PerturbationFamily(CANONICAL_H0, CANONICAL_V)
PHI = np.diag([1.0, 0.0])
DIAG2 = PerturbationFamily(np.diag([0.0, 1.0]), np.eye(2))


def checks_by_name(rep):
    return {c.name: c for c in rep.theorem_checks}


# cyclicity and sign structure


def test_canonical_family_is_cyclic():
    v = cyclicity_check(CANON)
    assert v.cyclic and v.krylov_rank == 3 and v.generator_count == 3


def test_rank_one_projector_not_cyclic():
    v = cyclicity_check(PerturbationFamily(PHI, PHI))
    assert not v.cyclic
    assert v.krylov_rank == 1


@pytest.mark.parametrize("seed", range(5))
def test_invertible_v_is_cyclic(seed):
    rng = np.random.default_rng(seed)
    h0 = random_hermitian(rng, 5)
    v = random_psd(rng, 5, 5) + np.eye(5)
    assert cyclicity_check(PerturbationFamily(h0, v)).cyclic


def test_zero_potential_has_krylov_rank_zero():
    v = cyclicity_check(PerturbationFamily(np.eye(3), np.zeros((3, 3))))
    assert not v.cyclic and v.krylov_rank == 0


def test_krylov_rank_equals_block_matrix_rank():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        h0 = np.diag(rng.integers(-2, 3, n).astype(float))
        g = rng.standard_normal((n, 1))
        v = g @ g.T
        blocks = np.hstack([np.linalg.matrix_power(h0, k) @ v for k in range(n)])
        expected = np.linalg.matrix_rank(blocks, tol=1e-9)
        assert cyclicity_check(PerturbationFamily(h0, v)).krylov_rank == expected


def test_classify_canonical_v():
    c = classify_v(CANON)
    assert c.indefinite and not c.psd and not c.nsd
    assert (c.rank_plus, c.rank_minus, c.kernel_dim) == (1, 1, 1)


def test_classify_identity_and_zero():
    c = classify_v(PerturbationFamily(np.zeros((3, 3)), np.eye(3)))
    assert c.psd and not c.nsd and not c.indefinite and c.kernel_dim == 0
    z = classify_v(PerturbationFamily(np.zeros((3, 3)), np.zeros((3, 3))))
    assert z.psd and z.nsd and not z.indefinite
    assert (z.rank_plus, z.rank_minus, z.kernel_dim) == (0, 0, 3)


@pytest.mark.parametrize("seed", range(10))
def test_classification_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    w = rng.choice([-2.0, 0.0, 1.5], n)
    v = (q * w) @ q.conj().T
    c = classify_v(PerturbationFamily(np.zeros((n, n)), v))
    assert c.rank_plus + c.rank_minus + c.kernel_dim == n
    assert (c.rank_plus, c.rank_minus) == (int(np.sum(w > 0)), int(np.sum(w < 0)))
    if np.any(w != 0):
        assert sum([c.psd, c.nsd, c.indefinite]) == 1


# analyze


def test_analyze_canonical_counterexample():
    rep = analyze(CANON, 0.0)
    assert rep.exceptional.kind is Kind.ALL_COMPLEX
    assert rep.lambda0_in_spectrum
    assert rep.cyclicity.cyclic and rep.v_class.indefinite
    ch = checks_by_name(rep)
    assert not ch["injective-V-finite"].applicable
    assert not ch["psd-cyclic-not-persistent"].applicable
    assert ch["persistent-kernel-witness"].consistent
    assert "birman-schwinger-agreement" not in ch
    assert rep.witnesses
    for t, w in rep.witnesses:
        assert np.linalg.norm(CANON.at(t) @ w) <= 1e-10
    assert rep.generic_kernel_dim == 1
    assert "not nonnegative" in rep.diagnosis
    assert rep.consistent


def test_analyze_diagonal_identity():
    fam = PerturbationFamily(np.diag([0.0, 1.0, 2.0]), np.eye(3))
    rep = analyze(fam, 0.0)
    assert rep.exceptional.kind is Kind.FINITE
    ok, _ = match_multisets(rep.exceptional.values(), [0, -1, -2], 1e-12)
    assert ok
    real_unit = [t for t, _ in rep.exceptional.real_roots_in_unit_interval]
    assert len(real_unit) == 1 and abs(real_unit[0]) <= 1e-12
    assert checks_by_name(rep)["injective-V-finite"].applicable
    assert checks_by_name(rep)["psd-cyclic-not-persistent"].applicable


def test_rank_one_persistence_attributed_to_cyclicity():
    rep = analyze(PerturbationFamily(PHI, PHI), 0.0)
    assert rep.exceptional.kind is Kind.ALL_COMPLEX
    assert not rep.cyclicity.cyclic
    assert rep.v_class.psd
    assert "not cyclic" in rep.diagnosis
    assert "nonnegative" not in rep.diagnosis
    assert rep.measure_estimate == 1.0


def test_analyze_outside_spectrum_runs_birman_schwinger():
    rng = np.random.default_rng(4)
    h0, v = random_hermitian(rng, 5), random_hermitian(rng, 5)
    rep = analyze(PerturbationFamily(h0, v), float(np.linalg.eigvalsh(h0)[-1] + 1.0))
    assert not rep.lambda0_in_spectrum
    assert checks_by_name(rep)["birman-schwinger-agreement"].consistent
    assert rep.notes


def test_analyze_is_deterministic():
    rng = np.random.default_rng(8)
    fam = PerturbationFamily(random_hermitian(rng, 4), random_hermitian(rng, 4))
    a = analyze(fam, 0.3, seed=5)
    b = analyze(fam, 0.3, seed=5)
    assert a.exceptional.roots == b.exceptional.roots
    assert a.measure_estimate == b.measure_estimate
    assert a.theorem_checks == b.theorem_checks
    c = analyze(CANON, 0.0, seed=5)
    d = analyze(CANON, 0.0, seed=5)
    assert [t for t, _ in c.witnesses] == [t for t, _ in d.witnesses]
    assert all(np.array_equal(x, y) for (_, x), (_, y) in zip(c.witnesses, d.witnesses))


def test_failed_check_raises(monkeypatch):
    # a generic-kernel estimate that contradicts the determinant must abort
    monkeypatch.setattr(persistence, "generic_kernel_dimension", lambda *a, **k: 0)
    with pytest.raises(InternalInconsistency):
        analyze(CANON, 0.0)


@pytest.mark.parametrize("seed", range(40))
def test_psd_cyclic_never_persistent(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(2, 11))
    h0 = random_hermitian(rng, n)
    v = random_psd(rng, n, int(rng.integers(1, n + 1)))
    fam = PerturbationFamily(h0, v)
    if not cyclicity_check(fam).cyclic:
        pytest.skip("rejection: range not cyclic")
    lam = float(np.linalg.eigvalsh(h0)[rng.integers(n)])
    rep = analyze(fam, lam)
    assert rep.exceptional.kind is not Kind.ALL_COMPLEX
    assert len(rep.exceptional.real_roots_in_unit_interval) <= n


@pytest.mark.parametrize("seed", range(20))
def test_invertible_h0_reciprocal_roots(seed):
    rng = np.random.default_rng(2000 + seed)
    n = int(rng.integers(2, 8))
    h0 = random_hermitian(rng, n) + 3 * np.eye(n)
    g = rng.standard_normal((n, 1))
    v = g @ g.T if seed % 2 else random_hermitian(rng, n)
    ex = exceptional_set(pencil_from_eigenproblem(h0, v, 0.0))
    mu = np.linalg.eigvals(-np.linalg.solve(h0, v))
    mu = mu[np.abs(mu) > 1e-10 * np.linalg.norm(mu)]
    ok, worst = match_multisets(ex.values(), 1.0 / mu, 1e-8)
    assert ok, worst


# projection vanishing and measure


def test_projection_vanishing_diagonal():
    out = dict(projection_vanishing_check(DIAG2, 0.0, [0.5, 0.0]))
    assert out[0.5] <= 1e-12
    assert abs(out[0.0] - 1.0) <= 1e-12


def test_projection_vanishing_needs_psd():
    with pytest.raises(NotPSD):
        projection_vanishing_check(CANON, 0.0, [0.5])


@pytest.mark.parametrize("seed", range(10))
def test_projection_vanishing_off_roots(seed):
    rng = np.random.default_rng(3000 + seed)
    n = int(rng.integers(2, 8))
    h0 = random_hermitian(rng, n)
    v = random_psd(rng, n, n)
    lam = float(np.linalg.eigvalsh(h0)[0])
    fam = PerturbationFamily(h0, v)
    ex = exceptional_set(pencil_from_eigenproblem(h0, v, lam))
    roots = ex.values()
    ts = [t for t in rng.random(40) if np.all(np.abs(roots - t) > 1e-3)][:20]
    for _, nrm in projection_vanishing_check(fam, lam, ts):
        assert nrm <= 1e-8
    # positive at real roots when V is positive definite
    for t, _ in ex.roots:
        if abs(t.imag) < 1e-12:
            ((_, nrm),) = projection_vanishing_check(fam, lam, [t.real])
            assert nrm > 1e-6


def test_measure_canonical_is_one():
    assert measure_estimate(CANON, 0.0, 1e-6, 1000) == 1.0


def test_measure_diagonal_window():
    m = measure_estimate(DIAG2, 0.0, 1e-3, 1000)
    assert 1e-3 <= m <= 4e-3


def test_measure_far_energy_is_zero():
    assert measure_estimate(DIAG2, -10.0, 1e-3, 200) == 0.0


def test_measure_deterministic_and_validated():
    assert measure_estimate(DIAG2, 0.0, 0.1, 100, seed=3) == measure_estimate(DIAG2, 0.0, 0.1, 100, seed=3)
    with pytest.raises(ValidationError):
        measure_estimate(DIAG2, 0.0, 0.0, 10)
    with pytest.raises(ValidationError):
        measure_estimate(DIAG2, 0.0, 0.1, 0)


def test_measure_shrinks_with_eps():
    fam = PerturbationFamily(np.diag([0.0, 1.0, 2.0]), np.diag([1.0, 0.5, -1.0]))
    ms = [measure_estimate(fam, 0.5, e, 2000) for e in (1e-1, 1e-2, 1e-3)]
    assert ms[0] >= ms[1] >= ms[2]
    assert ms[2] <= 1e-2


# persistent families


def test_canonical_branch_returns_fixture():
    fam, wit = construct_persistent_family(3, seed=0)
    assert np.array_equal(fam.H0, CANONICAL_H0)
    assert np.array_equal(fam.V, CANONICAL_V)
    assert wit.residuals == (0.0, 0.0, 0.0)
    assert np.allclose(wit.vector(2.0), [1, -1, -2])


@pytest.mark.parametrize("n,seed,cplx", [(3, 1, False), (3, 7, True), (4, 2, False), (5, 3, False), (5, 4, True)])
def test_constructed_family_contract(n, seed, cplx):
    fam, wit = construct_persistent_family(n, seed=seed, complex_entries=cplx)
    scale = max(1.0, np.linalg.norm(fam.H0), np.linalg.norm(fam.V))
    assert max(wit.residuals) <= 1e-10 * scale
    assert np.linalg.norm(wit.u0) > 0
    rep = analyze(fam, 0.0)
    assert rep.exceptional.kind is Kind.ALL_COMPLEX
    assert rep.cyclicity.cyclic and rep.v_class.indefinite
    # witness identity: the interpolated determinant vanishes identically
    assert char_poly(pencil_from_eigenproblem(fam.H0, fam.V, 0.0)).identically_zero
    for t in (0.3, -1.7, 2 + 1j):
        f = wit.vector(t)
        assert np.linalg.norm(fam.at(t) @ f) <= 1e-9 * scale * max(1.0, abs(t)) ** 2


def test_construct_is_deterministic():
    a, _ = construct_persistent_family(4, seed=12)
    b, _ = construct_persistent_family(4, seed=12)
    assert np.array_equal(a.H0, b.H0) and np.array_equal(a.V, b.V)


@pytest.mark.parametrize("n", [1, 2])
def test_construct_small_dimension_rejected(n):
    with pytest.raises(ValidationError):
        construct_persistent_family(n)
