"""Analysis of ``H_t = H0 + tV``: for which ``t`` is ``lambda0`` an eigenvalue?

:func:`analyze` assembles the exceptional set, the cyclicity of ``ran V``
under ``H0`` and the sign structure of ``V``, then checks every consequence
that holds in exact arithmetic. A failed applicable check raises
:class:`~pencil_persist.errors.InternalInconsistency`.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .birman_schwinger import CAVEAT as BS_CAVEAT
from .birman_schwinger import bs_reduce
from .config import DEFAULT
from .errors import (
    DimensionMismatch,
    InternalInconsistency,
    SearchExhausted,
    ValidationError,
)
from .linalg import (
    eigen_hermitian,
    eigenprojection,
    hermitian_part,
    hermitian_sqrt,
    norm,
    nullspace_basis,
    rank,
    split_positive_negative,
)
from .pencil import (
    ExceptionalSet,
    Kind,
    exceptional_set,
    generic_kernel_dimension,
    kernel_witness,
    pencil_from_eigenproblem,
)

CANONICAL_SEED = 0

# the 3x3 counterexample: H0 (1,-1,-t) + t V (1,-1,-t) = 0 for every t
CANONICAL_H0 = np.array([[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 0.0]])
CANONICAL_V = np.diag([1.0, -1.0, 0.0])
CANONICAL_U0 = np.array([1.0, -1.0, 0.0])
CANONICAL_U1 = np.array([0.0, 0.0, -1.0])

_WITNESS_TOL = 1e-8
_BS_MATCH_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PerturbationFamily:
    H0: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        h0 = hermitian_part(self.H0, DEFAULT, "H0")
        v = hermitian_part(self.V, DEFAULT, "V")
        if h0.shape != v.shape:
            raise DimensionMismatch(f"H0 is {h0.shape} but V is {v.shape}")
        object.__setattr__(self, "H0", h0)
        object.__setattr__(self, "V", v)

    @property
    def n(self):
        return self.H0.shape[0]

    def at(self, t):
        return self.H0 + t * self.V


@dataclass(frozen=True)
class VClassification:
    psd: bool
    nsd: bool
    indefinite: bool
    rank_plus: int
    rank_minus: int
    kernel_dim: int


@dataclass(frozen=True)
class CyclicityVerdict:
    cyclic: bool
    krylov_rank: int
    generator_count: int


@dataclass(frozen=True)
class TheoremCheck:
    name: str
    applicable: bool
    predicted: str
    observed: str
    consistent: bool


@dataclass(frozen=True, eq=False)
class PersistentFamilyWitness:
    u0: np.ndarray
    u1: np.ndarray
    residuals: tuple

    def vector(self, t):
        return self.u0 + t * self.u1


@dataclass(eq=False)
class PersistenceReport:
    family: PerturbationFamily
    lambda0: float
    lambda0_in_spectrum: bool
    exceptional: ExceptionalSet
    cyclicity: CyclicityVerdict
    v_class: VClassification
    generic_kernel_dim: int
    theorem_checks: list
    witnesses: list = field(default_factory=list)
    measure_estimate: float = 0.0
    diagnosis: str = ""
    notes: list = field(default_factory=list)

    @property
    def consistent(self):
        return all(c.consistent for c in self.theorem_checks if c.applicable)


def _orth(w, threshold):
    if w.shape[1] == 0:
        return w
    _, _, vs, diag = _kernels.qr_pivoted(np.ascontiguousarray(w))
    r = int(np.count_nonzero(diag > threshold))
    return _kernels.form_q(vs)[:, :r]


def cyclicity_check(fam, cfg=DEFAULT):
    """Is ``ran V`` cyclic for ``H0``?

    Grows an orthonormal basis of ``span{H0^k V e_j}`` block by block (the
    Krylov space of ``ran V``) until it stops growing or fills the space.
    ``H0`` is normalised first; the span is unchanged.
    """
    n = fam.n
    h = fam.H0 / max(norm(fam.H0), np.finfo(float).tiny)
    basis = _orth(fam.V, cfg.tol_rank * norm(fam.V))
    new = basis
    while 0 < basis.shape[1] < n and new.shape[1] > 0:
        w = h @ new
        for _ in range(2):
            w = w - basis @ (basis.conj().T @ w)
        new = _orth(w, cfg.tol_rank)
        basis = np.hstack([basis, new])
    k = min(basis.shape[1], n)
    return CyclicityVerdict(k == n, k, n)


def classify_v(fam, cfg=DEFAULT):
    vp, vm = split_positive_negative(fam.V, cfg)
    rp, rm = rank(vp, cfg), rank(vm, cfg)
    kd = nullspace_basis(fam.V, cfg).shape[1]
    return VClassification(
        psd=rm == 0,
        nsd=rp == 0,
        indefinite=rp > 0 and rm > 0,
        rank_plus=rp,
        rank_minus=rm,
        kernel_dim=kd,
    )


def _match_multisets(a, b, tol):
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False, np.inf
    worst = 0.0
    for x in a:
        d = [abs(x - y) / max(1.0, abs(x)) for y in b]
        j = int(np.argmin(d))
        worst = max(worst, d[j])
        b.pop(j)
    return worst <= tol, worst


def _fmt_kind(ex):
    if ex.kind is Kind.FINITE:
        return f"Finite (total multiplicity {ex.total_multiplicity})"
    return ex.kind.value


def analyze(fam, lambda0, cfg=DEFAULT, seed=0, eps=1e-6, samples=1000):
    """Full persistence analysis of ``fam`` at the energy ``lambda0``."""
    lambda0 = float(lambda0)
    n = fam.n
    cyc = cyclicity_check(fam, cfg)
    vcls = classify_v(fam, cfg)
    spec = eigen_hermitian(fam.H0, cfg).values
    in_spec = bool(np.min(np.abs(spec - lambda0)) <= cfg.tol_cluster * max(1.0, norm(fam.H0)))
    pencil = pencil_from_eigenproblem(fam.H0, fam.V, lambda0, cfg)
    ex = exceptional_set(pencil, cfg)
    gkd = generic_kernel_dimension(pencil, cfg, seed=seed)
    all_c = ex.kind is Kind.ALL_COMPLEX
    checks = []

    applicable = vcls.kernel_dim == 0
    ok = ex.kind is Kind.FINITE and ex.total_multiplicity == n
    checks.append(TheoremCheck(
        "injective-V-finite", applicable, f"Finite (total multiplicity {n})", _fmt_kind(ex),
        ok or not applicable))

    applicable = vcls.psd and cyc.cyclic
    checks.append(TheoremCheck(
        "psd-cyclic-not-persistent", applicable, "not AllComplex", _fmt_kind(ex),
        (not all_c) or not applicable))

    checks.append(TheoremCheck(
        "singular-iff-generic-kernel", True, f"AllComplex iff generic kernel dim >= 1",
        f"{ex.kind.value}, generic kernel dim {gkd}", all_c == (gkd >= 1)))

    notes = []
    if not in_spec:
        bs = bs_reduce(fam.H0, fam.V, lambda0, cfg)
        # |t| beyond 1 / (tol_rank |K|) corresponds to a dropped mu
        horizon = 1.0 / max(cfg.tol_rank * norm(bs.K), np.finfo(float).tiny)
        pencil_t = ex.values()
        pencil_t = pencil_t[np.abs(pencil_t) < horizon * (1 - _BS_MATCH_TOL)]
        bs_t = bs.exceptional_t[np.abs(bs.exceptional_t) < horizon * (1 - _BS_MATCH_TOL)]
        ok, worst = (False, np.inf) if all_c else _match_multisets(bs_t, pencil_t, _BS_MATCH_TOL)
        checks.append(TheoremCheck(
            "birman-schwinger-agreement", True, f"{len(bs.exceptional_t)} roots via -1/mu",
            f"{ex.total_multiplicity} pencil roots, worst relative gap {worst:.2e}", ok))
        notes.append(BS_CAVEAT)

    witnesses = []
    if all_c:
        rng = np.random.default_rng([seed, 1])
        scale = max(1.0, norm(fam.H0), norm(fam.V))
        worst = 0.0
        for t in rng.uniform(-2.0, 2.0, size=2):
            basis = kernel_witness(pencil, t, cfg)
            if basis.shape[1] == 0:
                worst = np.inf
                continue
            w = basis[:, 0]
            res = norm((fam.at(t) - lambda0 * np.eye(n)) @ w)
            worst = max(worst, res / scale)
            witnesses.append((float(t), w))
        checks.append(TheoremCheck(
            "persistent-kernel-witness", True, f"residual <= {_WITNESS_TOL:g}",
            f"max residual {worst:.2e}", worst <= _WITNESS_TOL))

    if all_c and not cyc.cyclic:
        diagnosis = "persistent: ran(V) is not cyclic for H0, so persistence is not excluded"
    elif all_c and not vcls.psd:
        diagnosis = "persistent although ran(V) is cyclic: V is not nonnegative"
    elif all_c:
        diagnosis = "persistent with V >= 0 and cyclic range (inconsistent)"
    else:
        diagnosis = f"{ex.kind.value}: lambda0 is an eigenvalue of H_t for at most {ex.total_multiplicity} values of t"

    report = PersistenceReport(
        family=fam,
        lambda0=lambda0,
        lambda0_in_spectrum=in_spec,
        exceptional=ex,
        cyclicity=cyc,
        v_class=vcls,
        generic_kernel_dim=gkd,
        theorem_checks=checks,
        witnesses=witnesses,
        measure_estimate=measure_estimate(fam, lambda0, eps, samples, cfg, seed),
        diagnosis=diagnosis,
        notes=notes,
    )
    failed = [c.name for c in checks if c.applicable and not c.consistent]
    if failed:
        raise InternalInconsistency(f"theorem checks failed: {', '.join(failed)}")
    return report


def projection_vanishing_check(fam, lambda0, tset, cfg=DEFAULT):
    """Spectral norm of ``V^{1/2} E_{H_t}({lambda0}) V^{1/2}`` for each ``t``.

    Requires ``V >= 0``; the norm vanishes whenever ``lambda0`` is not an
    eigenvalue of ``H_t``.
    """
    root = hermitian_sqrt(fam.V, cfg)
    out = []
    for t in tset:
        e = eigenprojection(fam.at(t), lambda0, cfg)
        out.append((float(t), float(np.linalg.norm(root @ e @ root, 2))))
    return out


def measure_estimate(fam, lambda0, eps, samples, cfg=DEFAULT, seed=0):
    """Fraction of ``t in [0, 1]`` with ``dist(lambda0, sigma(H_t)) < eps``.

    Stratified sampling: one uniform draw in each of ``samples`` equal
    subintervals, so the estimate is exact up to ``1/samples`` per boundary
    of the qualifying set.
    """
    if not eps > 0:
        raise ValidationError("eps must be positive")
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    rng = np.random.default_rng([seed, 2])
    ts = (np.arange(samples) + rng.random(samples)) / samples
    hits = 0
    for t in ts:
        w = eigen_hermitian(fam.at(t), cfg).values
        hits += bool(np.min(np.abs(w - lambda0)) < eps)
    return hits / samples


def _random_hermitian(rng, n, complex_entries):
    m = rng.standard_normal((n, n))
    if complex_entries:
        m = m + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T)


def _witness_residuals(h0, v, u0, u1):
    return (
        norm(h0 @ u0),
        norm(h0 @ u1 + v @ u0),
        norm(v @ u1),
    )


def _draw_persistent(n, rng, complex_entries):
    # orthonormal u0, u1 and a unitary frame Q = [u0, u1, rest]
    g = rng.standard_normal((n, n))
    if complex_entries:
        g = g + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    u0, u1 = q[:, 0], q[:, 1]
    # V u1 = 0 and <u0, V u0> = 0
    p = np.eye(n) - np.outer(u1, u1.conj())
    v = p @ _random_hermitian(rng, n, complex_entries) @ p
    v = v - (u0.conj() @ v @ u0).real * np.outer(u0, u0.conj())
    v = 0.5 * (v + v.conj().T)
    # H0 u0 = 0, H0 u1 = -V u0, free Hermitian block on the rest
    w = q.conj().T @ (v @ u0)
    hh = np.zeros((n, n), dtype=q.dtype)
    hh[:, 1] = -w
    hh[1, :] = -w.conj()
    hh[1, 1] = 0.0
    hh[2:, 2:] = _random_hermitian(rng, n - 2, complex_entries)
    h0 = q @ hh @ q.conj().T
    return 0.5 * (h0 + h0.conj().T), v, u0, u1


def construct_persistent_family(n, seed=0, cfg=DEFAULT, retries=100, complex_entries=False):
    """Hermitian ``H0, V`` with ``0`` an eigenvalue of ``H0 + tV`` for all ``t``.

    The kernel vector is ``u0 + t u1`` where ``H0 u0 = 0``,
    ``H0 u1 = -V u0`` and ``V u1 = 0``. Hermiticity forces
    ``<u0, V u0> = 0``, so ``V`` is necessarily indefinite. Draws are
    retried until ``ran V`` is cyclic and :func:`analyze` confirms an
    ``AllComplex`` exceptional set. No such pair exists for ``n < 3``.

    With ``n == 3`` and ``seed == CANONICAL_SEED`` the canonical 3x3 pair
    is returned unchanged.
    """
    if n < 3:
        raise ValidationError("persistent families with cyclic range need n >= 3")
    if n == 3 and seed == CANONICAL_SEED:
        draws = [(CANONICAL_H0, CANONICAL_V, CANONICAL_U0, CANONICAL_U1)]
    else:
        rng = np.random.default_rng(seed)
        draws = (_draw_persistent(n, rng, complex_entries) for _ in range(retries))
    for h0, v, u0, u1 in draws:
        res = _witness_residuals(h0, v, u0, u1)
        scale = max(1.0, norm(h0), norm(v))
        if max(res) > 1e-10 * scale:
            continue
        fam = PerturbationFamily(h0, v)
        if not cyclicity_check(fam, cfg).cyclic or not classify_v(fam, cfg).indefinite:
            continue
        if exceptional_set(pencil_from_eigenproblem(h0, v, 0.0, cfg), cfg).kind is not Kind.ALL_COMPLEX:
            continue
        return fam, PersistentFamilyWitness(np.asarray(u0), np.asarray(u1), tuple(float(r) for r in res))
    raise SearchExhausted(f"no cyclic persistent family found for n={n}, seed={seed}")
