"""Dense complex linear algebra with explicit tolerance contracts.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; ``as_matrix``
enforces the square/finite invariants. Norms used for scaling thresholds
are Frobenius norms throughout.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import DEFAULT
from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    NotPositiveDefinite,
    NotPSD,
    Singular,
    ValidationError,
)


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray
    hermitian: bool

    def __iter__(self):
        return iter((self.values, self.vectors))


def as_matrix(m, name="matrix"):
    """Validate and convert ``m`` to a square finite complex128 array."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def norm(m):
    return float(np.linalg.norm(m))


def hermitian_part(m, cfg=DEFAULT, name="matrix"):
    """Check ``|M - M^*| <= tol_herm |M|`` and return ``(M + M^*)/2``."""
    a = as_matrix(m, name)
    if norm(a - a.conj().T) > cfg.tol_herm * norm(a):
        raise NotHermitian(f"{name} is not Hermitian within tol_herm={cfg.tol_herm}")
    return 0.5 * (a + a.conj().T)


def is_hermitian(m, cfg=DEFAULT):
    try:
        hermitian_part(m, cfg)
    except NotHermitian:
        return False
    return True


def eigen_hermitian(m, cfg=DEFAULT):
    """Ascending real eigenvalues and a unitary eigenvector matrix."""
    a = hermitian_part(m, cfg)
    try:
        w, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return EigenDecomposition(w, u, True)


def eigen_general(m, cfg=DEFAULT):
    """Eigenvalues and unit right eigenvectors of a general complex matrix.

    Balancing, Householder-Hessenberg reduction, then shifted QR on the
    Hessenberg form with a cap of ``100 n`` sweeps.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n == 1:
        return EigenDecomposition(a[0].copy(), np.ones((1, 1), dtype=np.complex128), False)
    b, scale = _kernels.balance(a)
    h, z = _kernels.hessenberg(b)
    sweeps = _kernels.schur_qr(h, z, 100 * n)
    if sweeps < 0:
        raise NoConvergence(f"QR iteration exceeded {100 * n} sweeps")
    vals = np.diag(h).copy()
    vecs = z @ _kernels.triu_eigvecs(h)
    vecs *= scale[:, None]
    vecs /= np.linalg.norm(vecs, axis=0)
    return EigenDecomposition(vals, vecs, False)


def solve(m, rhs, cfg=DEFAULT):
    """Solve ``M x = rhs`` by pivoted elimination; ``rhs`` may be 1-D or 2-D."""
    a = as_matrix(m)
    b = np.asarray(rhs, dtype=np.complex128)
    if b.shape[0] != a.shape[0] or b.ndim not in (1, 2):
        raise DimensionMismatch(f"rhs shape {b.shape} incompatible with {a.shape}")
    lu, piv, _, min_pivot = _kernels.lu_factor(a)
    if min_pivot <= cfg.tol_rank * norm(a):
        raise Singular(f"pivot {min_pivot:.3e} below tol_rank * |M|")
    x = _kernels.lu_solve(lu, piv, b.reshape(b.shape[0], -1).copy())
    return x.reshape(b.shape)


def det(m):
    a = as_matrix(m)
    lu, _, sign, _ = _kernels.lu_factor(a)
    return complex(_kernels.lu_det(lu, sign))


def _pivoted_diag(a):
    return _kernels.qr_pivoted(np.ascontiguousarray(a, dtype=np.complex128))


def rank(m, cfg=DEFAULT, scale=None):
    """Numerical rank by column-pivoted Householder QR.

    Pivots above ``tol_rank * scale`` count; ``scale`` defaults to ``|M|``.
    Works for rectangular input too (used by the Krylov test).
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.size == 0:
        return 0
    scale = norm(a) if scale is None else scale
    _, _, _, diag = _pivoted_diag(a)
    return int(np.count_nonzero(diag > cfg.tol_rank * scale))


def nullspace_basis(m, cfg=DEFAULT, scale=None):
    """Orthonormal kernel basis, returned as the columns of an array.

    ``ker M`` is the orthogonal complement of ``ran M^*``, so it is read off
    the trailing columns of Q in a pivoted QR of ``M^*``. The threshold is
    as in :func:`rank`.
    """
    a = as_matrix(m)
    scale = norm(a) if scale is None else scale
    _, _, vs, diag = _pivoted_diag(a.conj().T.copy())
    r = int(np.count_nonzero(diag > cfg.tol_rank * scale))
    q = _kernels.form_q(vs)
    return q[:, r:].copy()


def _spectral(m, cfg):
    a = hermitian_part(m, cfg)
    dec = eigen_hermitian(a, cfg)
    return a, dec.values, dec.vectors


def _rebuild(u, w):
    r = (u * w) @ u.conj().T
    return 0.5 * (r + r.conj().T)


def hermitian_sqrt(m, cfg=DEFAULT):
    """PSD square root; eigenvalues in ``[-tol_eig |M|, 0)`` are clamped."""
    a, w, u = _spectral(m, cfg)
    floor = -cfg.tol_eig * norm(a)
    if w.size and w[0] < floor:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} below {floor:.3e}")
    return _rebuild(u, np.sqrt(np.clip(w, 0.0, None)))


def hermitian_inverse_sqrt(m, cfg=DEFAULT):
    """``M^{-1/2}`` for positive definite ``M`` (smallest eigenvalue above
    ``tol_eig |M|``)."""
    a, w, u = _spectral(m, cfg)
    if w[0] <= cfg.tol_eig * norm(a):
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} is not positive")
    return _rebuild(u, 1.0 / np.sqrt(w))


def split_positive_negative(m, cfg=DEFAULT):
    """``(V_+, V_-)`` with ``V = V_+ - V_-`` from the spectral decomposition.

    Eigenvalues below ``tol_rank |M|`` in magnitude are treated as zero so
    that ``rank(V_+) + rank(V_-) = rank(V)``.
    """
    a, w, u = _spectral(m, cfg)
    w = np.where(np.abs(w) > cfg.tol_rank * norm(a), w, 0.0)
    return _rebuild(u, np.clip(w, 0.0, None)), _rebuild(u, np.clip(-w, 0.0, None))


def eigenprojection(m, lambda0, cfg=DEFAULT):
    """Orthogonal projection onto the eigenspace of ``M`` at ``lambda0``.

    Eigenvalues within ``tol_cluster * max(1, |M|)`` of ``lambda0`` count.
    """
    a, w, u = _spectral(m, cfg)
    sel = np.abs(w - lambda0) <= cfg.tol_cluster * max(1.0, norm(a))
    us = u[:, sel]
    return _rebuild(us, np.ones(us.shape[1]))
