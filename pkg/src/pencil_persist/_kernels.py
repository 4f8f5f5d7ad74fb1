"""Dense complex kernels: pivoted LU, pivoted Householder QR, Hessenberg
reduction, shifted-QR Schur iteration, triangular eigenvectors, balancing.

Every kernel takes and returns ``complex128`` arrays and is written in the
numpy subset numba understands; see ``_accel`` for backend selection.
Callers in ``linalg`` own validation and error mapping.
"""

import numpy as np

from ._accel import maybe_njit

EPS = 2.220446049250313e-16
_BIG = 1e100


@maybe_njit
def lu_factor(a):
    """Partial-pivoting LU of a copy of ``a``.

    Returns ``(lu, piv, sign, min_pivot)`` where ``a[piv] = L U`` and
    ``sign`` is the permutation parity. Zero pivots are skipped, so the
    factorization always completes.
    """
    n = a.shape[0]
    lu = a.copy()
    piv = np.arange(n)
    sign = 1.0
    min_pivot = np.inf
    for k in range(n):
        p = k
        best = np.abs(lu[k, k])
        for i in range(k + 1, n):
            v = np.abs(lu[i, k])
            if v > best:
                best = v
                p = i
        if best < min_pivot:
            min_pivot = best
        if p != k:
            row = lu[k, :].copy()
            lu[k, :] = lu[p, :]
            lu[p, :] = row
            tmp = piv[k]
            piv[k] = piv[p]
            piv[p] = tmp
            sign = -sign
        if best == 0.0 or k == n - 1:
            continue
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv, sign, min_pivot


@maybe_njit
def lu_det(lu, sign):
    d = sign + 0.0j
    for k in range(lu.shape[0]):
        d *= lu[k, k]
    return d


@maybe_njit
def lu_solve(lu, piv, b):
    """Solve with a factorization from ``lu_factor``; ``b`` is 2-D."""
    n = lu.shape[0]
    x = np.empty_like(b)
    for i in range(n):
        x[i, :] = b[piv[i], :]
    for i in range(1, n):
        x[i, :] -= np.dot(np.ascontiguousarray(lu[i, :i]), x[:i, :])
    for i in range(n - 1, -1, -1):
        if i < n - 1:
            x[i, :] -= np.dot(np.ascontiguousarray(lu[i, i + 1:]), x[i + 1:, :])
        x[i, :] /= lu[i, i]
    return x


@maybe_njit
def _reflector(x):
    # unit v with (I - 2 v v^*) x = alpha e_1; zero vector when x = 0
    nx = np.sqrt(np.sum(x.real ** 2 + x.imag ** 2))
    v = x.copy()
    if nx == 0.0:
        v[:] = 0.0
        return v, 0.0
    ax0 = np.abs(x[0])
    phase = x[0] / ax0 if ax0 > 0.0 else 1.0 + 0.0j
    v[0] += phase * nx
    nv = np.sqrt(np.sum(v.real ** 2 + v.imag ** 2))
    v /= nv
    return v, nx


@maybe_njit
def qr_pivoted(a):
    """Householder QR with greedy column pivoting: ``a[:, perm] = Q R``.

    Returns ``(r, perm, vs, diag)`` with the reflectors stored column-wise
    in ``vs`` and ``diag[k] = |R[k, k]|`` (non-increasing up to rounding).
    """
    m, p = a.shape
    r = a.copy()
    perm = np.arange(p)
    kmax = min(m, p)
    vs = np.zeros((m, kmax), dtype=np.complex128)
    diag = np.zeros(kmax)
    for k in range(kmax):
        best = -1.0
        jb = k
        for j in range(k, p):
            col = r[k:, j]
            s = np.sum(col.real ** 2 + col.imag ** 2)
            if s > best:
                best = s
                jb = j
        if jb != k:
            col = r[:, k].copy()
            r[:, k] = r[:, jb]
            r[:, jb] = col
            tmp = perm[k]
            perm[k] = perm[jb]
            perm[jb] = tmp
        v, nx = _reflector(r[k:, k].copy())
        diag[k] = nx
        if nx == 0.0:
            continue
        vs[k:, k] = v
        w = np.dot(np.conj(v), np.ascontiguousarray(r[k:, k:]))
        r[k:, k:] -= 2.0 * np.outer(v, w)
    return r, perm, vs, diag


@maybe_njit
def form_q(vs):
    """Accumulate the square unitary Q from stored reflectors."""
    m, kmax = vs.shape
    q = np.eye(m, dtype=np.complex128)
    for k in range(kmax - 1, -1, -1):
        v = np.ascontiguousarray(vs[k:, k])
        w = np.dot(np.conj(v), np.ascontiguousarray(q[k:, :]))
        q[k:, :] -= 2.0 * np.outer(v, w)
    return q


@maybe_njit
def balance(a, max_sweeps=100):
    """Diagonal similarity ``b = D^-1 a D`` with power-of-two scalings."""
    n = a.shape[0]
    b = a.copy()
    d = np.ones(n)
    radix = 2.0
    sqrdx = radix * radix
    for _ in range(max_sweeps):
        done = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += np.abs(b[j, i])
                    r += np.abs(b[i, j])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                d[i] *= f
                b[i, :] /= f
                b[:, i] *= f
        if done:
            break
    return b, d


@maybe_njit
def hessenberg(a):
    """Householder reduction ``a = Z H Z^*`` with ``H`` upper Hessenberg."""
    n = a.shape[0]
    h = a.copy()
    z = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        v, nx = _reflector(h[k + 1:, k].copy())
        if nx == 0.0:
            continue
        w = np.dot(np.conj(v), np.ascontiguousarray(h[k + 1:, :]))
        h[k + 1:, :] -= 2.0 * np.outer(v, w)
        w = np.dot(np.ascontiguousarray(h[:, k + 1:]), v)
        h[:, k + 1:] -= 2.0 * np.outer(w, np.conj(v))
        w = np.dot(np.ascontiguousarray(z[:, k + 1:]), v)
        z[:, k + 1:] -= 2.0 * np.outer(w, np.conj(v))
        h[k + 2:, k] = 0.0
    return h, z


@maybe_njit
def schur_qr(h, z, maxit):
    """Reduce Hessenberg ``h`` to upper triangular form in place.

    Single-shift complex QR with Wilkinson shifts, applied through Givens
    rotations on the active window; ``z`` accumulates the Schur vectors.
    Returns the number of QR sweeps used, or -1 when ``maxit`` is exceeded.
    """
    n = h.shape[0]
    hnorm = 0.0
    for i in range(n):
        for j in range(n):
            hnorm = max(hnorm, np.abs(h[i, j]))
    if hnorm == 0.0:
        return 0
    cs = np.empty(n, dtype=np.complex128)
    sn = np.empty(n, dtype=np.complex128)
    hi = n - 1
    total = 0
    its = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            s = np.abs(h[lo, lo]) + np.abs(h[lo - 1, lo - 1])
            if s == 0.0:
                s = hnorm
            if np.abs(h[lo, lo - 1]) <= EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        if total >= maxit:
            return -1
        total += 1
        its += 1

        if its % 10 == 0:
            mu = h[hi, hi] + 0.75 * np.abs(h[hi, hi - 1])
        else:
            a = h[hi - 1, hi - 1]
            b = h[hi - 1, hi]
            c = h[hi, hi - 1]
            d = h[hi, hi]
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            mid = 0.5 * (a + d)
            m1 = mid + disc
            m2 = mid - disc
            mu = m1 if np.abs(m1 - d) <= np.abs(m2 - d) else m2

        for k in range(lo, hi + 1):
            h[k, k] -= mu
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            r = np.sqrt(np.abs(x) ** 2 + np.abs(y) ** 2)
            if r == 0.0:
                c_ = 1.0 + 0.0j
                s_ = 0.0 + 0.0j
            else:
                c_ = x / r
                s_ = y / r
            cs[k] = c_
            sn[k] = s_
            rk = h[k, k:].copy()
            rk1 = h[k + 1, k:].copy()
            h[k, k:] = np.conj(c_) * rk + np.conj(s_) * rk1
            h[k + 1, k:] = -s_ * rk + c_ * rk1
            h[k + 1, k] = 0.0
        for k in range(lo, hi):
            c_ = cs[k]
            s_ = sn[k]
            top = min(k + 2, hi) + 1
            ck = h[:top, k].copy()
            ck1 = h[:top, k + 1].copy()
            h[:top, k] = c_ * ck + s_ * ck1
            h[:top, k + 1] = -np.conj(s_) * ck + np.conj(c_) * ck1
            zk = z[:, k].copy()
            zk1 = z[:, k + 1].copy()
            z[:, k] = c_ * zk + s_ * zk1
            z[:, k + 1] = -np.conj(s_) * zk + np.conj(c_) * zk1
        for k in range(lo, hi + 1):
            h[k, k] += mu
    for i in range(1, n):
        h[i, :i] = 0.0
    return total


@maybe_njit
def triu_eigvecs(t):
    """Right eigenvectors of an upper triangular matrix by back substitution.

    Near-zero divisors (repeated eigenvalues) are replaced by ``eps*|T|``;
    columns are rescaled on the fly to avoid overflow.
    """
    n = t.shape[0]
    x = np.zeros((n, n), dtype=np.complex128)
    tnorm = 0.0
    for i in range(n):
        for j in range(i, n):
            tnorm = max(tnorm, np.abs(t[i, j]))
    smin = max(EPS * tnorm, 1e-300)
    for k in range(n):
        lam = t[k, k]
        x[k, k] = 1.0
        for j in range(k - 1, -1, -1):
            s = 0.0 + 0.0j
            for i in range(j + 1, k + 1):
                s += t[j, i] * x[i, k]
            d = t[j, j] - lam
            if np.abs(d) < smin:
                d = smin + 0.0j
            x[j, k] = -s / d
            if np.abs(x[j, k]) > _BIG:
                x[:, k] /= _BIG
    return x
