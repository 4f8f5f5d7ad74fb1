"""Linear pencils ``A f = t B f``: characteristic polynomial, roots, and the
regular/singular dichotomy.

``det(A - tB)`` is sampled on a circle and interpolated (an inverse DFT),
which decides whether the pencil is singular (determinant identically
zero, so every complex ``t`` is an eigenvalue) or regular (finitely many
roots, found from a companion matrix).
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import DEFAULT
from .errors import DimensionMismatch, NotPSD
from .linalg import (
    as_matrix,
    eigen_general,
    eigen_hermitian,
    hermitian_inverse_sqrt,
    hermitian_part,
    norm,
    nullspace_basis,
    rank,
)

_NEWTON_STEPS = 3


@dataclass(frozen=True, eq=False)
class PencilProblem:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.A, "A")
        b = as_matrix(self.B, "B")
        if a.shape != b.shape:
            raise DimensionMismatch(f"A is {a.shape} but B is {b.shape}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)

    @property
    def n(self):
        return self.A.shape[0]

    def at(self, t):
        return self.A - t * self.B

    def scale_at(self, t):
        """``|A| + |t| |B|``, the rank-threshold scale for ``A - tB``."""
        return norm(self.A) + abs(t) * norm(self.B)


@dataclass(frozen=True, eq=False)
class CharPoly:
    """``p(t) = det(A - tB)`` in ascending powers of ``t``.

    ``scale`` is the largest Hadamard bound (product of column norms) of
    ``A - tB`` over the interpolation nodes, each column norm floored at
    ``tol_rank (|A| + |t| |B|)``; ``identically_zero`` holds when every
    sampled determinant is below ``tol_zero_poly`` times its node's bound.
    """

    coefficients: np.ndarray
    identically_zero: bool
    scale: float
    radius: float

    @property
    def degree_bound(self):
        return len(self.coefficients) - 1

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coefficients)


class Kind(str, enum.Enum):
    EMPTY = "Empty"
    FINITE = "Finite"
    ALL_COMPLEX = "AllComplex"


@dataclass(frozen=True)
class ExceptionalSet:
    kind: Kind
    roots: tuple = ()
    real_roots_in_unit_interval: tuple = ()
    poly: CharPoly = field(default=None, repr=False, compare=False)

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.roots)

    def values(self):
        """Roots repeated by multiplicity, as a complex array."""
        return np.array([t for t, m in self.roots for _ in range(m)], dtype=np.complex128)


def pencil_from_eigenproblem(H0, V, lambda0, cfg=DEFAULT):
    """``H_t psi = lambda0 psi`` rewritten as ``(lambda0 I - H0) psi = t V psi``."""
    h0 = hermitian_part(H0, cfg, "H0")
    v = hermitian_part(V, cfg, "V")
    if h0.shape != v.shape:
        raise DimensionMismatch(f"H0 is {h0.shape} but V is {v.shape}")
    return PencilProblem(lambda0 * np.eye(h0.shape[0]) - h0, v)


def _require_psd(m, cfg, name):
    w = eigen_hermitian(m, cfg).values
    if w[0] < -cfg.tol_eig * norm(m):
        raise NotPSD(f"{name} has eigenvalue {w[0]:.3e} < 0")


def reduce_to_pencil(H0, V1, V2, lambda0, side=1, cfg=DEFAULT):
    """Symmetric pencil for ``V = V1 - V2`` with one invertible part.

    With ``S = V_j^{-1/2}`` for the designated ``j = side``::

        A = S H0 S - lambda0 S^2
        B = -(I - S V2 S)   (side 1)
        B = +(I - S V1 S)   (side 2)

    and the eigenvector transforms as ``f = V_j^{1/2} psi``.
    """
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    h0 = hermitian_part(H0, cfg, "H0")
    v1 = hermitian_part(V1, cfg, "V1")
    v2 = hermitian_part(V2, cfg, "V2")
    if not (h0.shape == v1.shape == v2.shape):
        raise DimensionMismatch("H0, V1, V2 must share one dimension")
    vj, vk = (v1, v2) if side == 1 else (v2, v1)
    s = hermitian_inverse_sqrt(vj, cfg)
    _require_psd(vk, cfg, "V2" if side == 1 else "V1")
    eye = np.eye(h0.shape[0])
    a = s @ h0 @ s - lambda0 * (s @ s)
    b = eye - s @ vk @ s
    if side == 1:
        b = -b
    return PencilProblem(0.5 * (a + a.conj().T), 0.5 * (b + b.conj().T))


def _det_and_bound(m, floor=0.0):
    # Hadamard bound, with column norms floored at the rank threshold so
    # that a node where A - tB is pure roundoff does not look regular
    lu, _, sign, _ = _kernels.lu_factor(m)
    cols = np.maximum(np.linalg.norm(m, axis=0), floor)
    return complex(_kernels.lu_det(lu, sign)), float(np.prod(cols))


def char_poly(P, cfg=DEFAULT):
    """Interpolate ``det(A - tB)`` from ``n + 1`` nodes on a circle of radius
    ``max(1, |A| / max(|B|, 1))``."""
    n = P.n
    r = max(1.0, norm(P.A) / max(norm(P.B), 1.0))
    nodes = r * np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    vals = np.empty(n + 1, dtype=np.complex128)
    bounds = np.empty(n + 1)
    for k, t in enumerate(nodes):
        vals[k], bounds[k] = _det_and_bound(P.at(t), cfg.tol_rank * P.scale_at(t))
    zero = bool(np.all(np.abs(vals) <= cfg.tol_zero_poly * bounds))
    coeffs = np.fft.fft(vals) / (n + 1) / r ** np.arange(n + 1)
    return CharPoly(coeffs, zero, float(bounds.max()), r)


def _snap(coeffs, radius, tol):
    # drop coefficients negligible at the interpolation radius
    weighted = np.abs(coeffs) * radius ** np.arange(len(coeffs))
    out = coeffs.copy()
    out[weighted <= tol * weighted.max()] = 0.0
    return out


def companion_roots(coeffs, cfg=DEFAULT):
    """Roots of ``sum c_k t^k`` (ascending, leading term non-zero) through
    the eigenvalues of the monic companion matrix."""
    c = np.asarray(coeffs, dtype=np.complex128)
    m = len(c) - 1
    if m < 1:
        return np.empty(0, dtype=np.complex128)
    comp = np.zeros((m, m), dtype=np.complex128)
    comp[0, :] = -c[m - 1::-1] / c[m]
    comp[np.arange(1, m), np.arange(m - 1)] = 1.0
    return eigen_general(comp, cfg).values


def cluster_roots(values, tol):
    """Single-linkage merge of roots within ``tol * max(1, |t|)``; returns
    ``[(mean, count), ...]`` sorted by (real, imag)."""
    groups = [[complex(v)] for v in values]
    merged = True
    while merged:
        merged = False
        centers = [np.mean(g) for g in groups]
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                d = abs(centers[i] - centers[j])
                if d <= tol * max(1.0, abs(centers[i]), abs(centers[j])):
                    groups[i].extend(groups.pop(j))
                    merged = True
                    break
            if merged:
                break
    out = [(complex(np.mean(g)), len(g)) for g in groups]
    return sorted(out, key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))


def _newton_polish(P, t, neighbour_gap):
    # Newton on det(A - tB): p'/p = -tr((A - tB)^{-1} B)
    for _ in range(_NEWTON_STEPS):
        lu, piv, _, min_pivot = _kernels.lu_factor(P.at(t))
        if min_pivot == 0.0:
            return t
        x = _kernels.lu_solve(lu, piv, P.B.copy())
        tr = np.trace(x)
        if tr == 0:
            return t
        step = 1.0 / tr
        if abs(step) > min(0.1 * neighbour_gap, 1e-4 * max(1.0, abs(t))):
            return t
        t = t + step
        if abs(step) <= 4 * _kernels.EPS * max(1.0, abs(t)):
            break
    return t


def exceptional_set(P, cfg=DEFAULT):
    """All ``t`` with ``A - tB`` singular, classified.

    Zero roots implied by vanishing low-order coefficients are exact; the
    rest come from a companion matrix and isolated ones are refined by a few
    guarded Newton steps on the determinant itself.
    """
    cp = char_poly(P, cfg)
    if cp.identically_zero:
        return ExceptionalSet(Kind.ALL_COMPLEX, poly=cp)
    c = _snap(cp.coefficients, cp.radius, cfg.tol_zero_poly)
    nz = np.flatnonzero(c)
    low, deg = int(nz[0]), int(nz[-1])
    if deg == 0:
        return ExceptionalSet(Kind.EMPTY, poly=cp)
    found = companion_roots(c[low:deg + 1], cfg)
    vals = np.concatenate([np.zeros(low, dtype=np.complex128), found])
    clusters = cluster_roots(vals, cfg.tol_cluster)

    roots = []
    for i, (t, mult) in enumerate(clusters):
        if mult == 1 and t != 0:
            gaps = [abs(t - s) for j, (s, _) in enumerate(clusters) if j != i]
            t = _newton_polish(P, t, min(gaps) if gaps else np.inf)
        roots.append((t, mult))
    roots = cluster_roots([t for t, m in roots for _ in range(m)], cfg.tol_cluster)
    real_unit = tuple(
        (t, m)
        for t, m in roots
        if abs(t.imag) <= cfg.tol_real and -cfg.tol_real <= t.real <= 1.0 + cfg.tol_real
    )
    return ExceptionalSet(Kind.FINITE, tuple(roots), real_unit, poly=cp)


def generic_kernel_dimension(P, cfg=DEFAULT, seed=0, samples=5):
    """``n - max rank(A - tB)`` over random ``t`` on a circle of radius
    ``1 + |A| / max(|B|, tol_rank)``."""
    rng = np.random.default_rng(seed)
    radius = 1.0 + norm(P.A) / max(norm(P.B), cfg.tol_rank)
    ts = radius * np.exp(2j * np.pi * rng.random(samples))
    return P.n - max(rank(P.at(t), cfg, scale=P.scale_at(t)) for t in ts)


def kernel_witness(P, t, cfg=DEFAULT):
    """Orthonormal basis (columns) of ``ker(A - tB)``, thresholded against
    ``|A| + |t| |B|`` so that a near-zero ``A - tB`` is not its own scale."""
    return nullspace_basis(P.at(t), cfg, scale=P.scale_at(t))
