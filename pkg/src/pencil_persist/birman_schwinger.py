"""Birman-Schwinger reduction for an energy in the resolvent set of H0.

For real ``E0`` outside ``sigma(H0)``, ``E0`` is an eigenvalue of
``H0 + tV`` exactly when ``-1/t`` is an eigenvalue of
``K = V (H0 - E0)^{-1}``. This gives a route to the exceptional set that
is independent of the determinant interpolation in :mod:`pencil`.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DimensionMismatch, E0InSpectrum
from .linalg import eigen_general, eigen_hermitian, hermitian_part, norm, solve

CAVEAT = (
    "The reduction needs E0 in the resolvent set of H0, so it never applies "
    "to an eigenvalue of H0 itself; it is carried only as a cross-check of "
    "the pencil route. Every matrix is compact in finite dimensions, so the "
    "compactness hypothesis on V (H0 - E0)^-1 holds trivially."
)


@dataclass(frozen=True, eq=False)
class BSReduction:
    E0: float
    K: np.ndarray
    mu: np.ndarray
    exceptional_t: np.ndarray
    note: str = CAVEAT


def bs_reduce(H0, V, E0, cfg=DEFAULT):
    h0 = hermitian_part(H0, cfg, "H0")
    v = hermitian_part(V, cfg, "V")
    if h0.shape != v.shape:
        raise DimensionMismatch(f"H0 is {h0.shape} but V is {v.shape}")
    n = h0.shape[0]
    spec = eigen_hermitian(h0, cfg).values
    gap = float(np.min(np.abs(spec - E0)))
    if gap <= cfg.tol_cluster * max(1.0, norm(h0)):
        raise E0InSpectrum(f"E0={E0} lies within {gap:.3e} of the spectrum of H0")
    # (H0 - E0)^{-1} and V are Hermitian, so V R = (R V)^*
    k = solve(h0 - E0 * np.eye(n), v, cfg).conj().T
    mu = eigen_general(k, cfg).values
    keep = np.abs(mu) > cfg.tol_rank * norm(k)
    ts = -1.0 / mu[keep]
    ts = ts[np.lexsort((ts.imag, ts.real))]
    return BSReduction(float(E0), k, mu, ts)


def count_in_unit_interval(r, cfg=DEFAULT):
    ts = np.asarray(r.exceptional_t)
    ok = (np.abs(ts.imag) <= cfg.tol_real) & (ts.real >= -cfg.tol_real) & (ts.real <= 1.0 + cfg.tol_real)
    return int(np.count_nonzero(ok))
