"""The bordered hermitian matrix Z, its closed-form eigensystem and powers.

Z = I_n + [[0, z], [z^H, 0]] has eigenvalue 1 with multiplicity n-2 and the
simple eigenvalues 1 +/- a, a = |z|. Its powers are generated by

    E_m = ((1+a)^m + (1-a)^m) / 2,   O_m = ((1+a)^m - (1-a)^m) / 2.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .disc import b_seq


def build_Z(t):
    n = t.n
    z = t.z
    out = np.eye(n, dtype=np.complex128)
    out[0, 1:] = z
    out[1:, 0] = z.conj()
    return out


@dataclass(frozen=True)
class EOPair:
    m: int
    a: float
    E: float
    O: float


def eo(m, a):
    """Even/odd binomial combinations E_m(a), O_m(a)."""
    if a < 0:
        raise ValueError("a must be >= 0")
    p, q = (1.0 + a) ** m, (1.0 - a) ** m
    return EOPair(int(m), float(a), 0.5 * (p + q), 0.5 * (p - q))


def eo_array(m, a):
    a = np.asarray(a, dtype=float)
    p, q = (1.0 + a) ** m, (1.0 - a) ** m
    return 0.5 * (p + q), 0.5 * (p - q)


def closed_power(t, m):
    """Z^m assembled entry by entry from the E_m / O_m formulas."""
    return closed_power_batch(t.z[None, :], m)[0]


def closed_power_batch(z, m):
    """Closed-form Z^m for a batch of points ``z`` of shape (N, n-1).

    Rows with a = 0 return the identity (continuity limit).
    """
    z = np.asarray(z, dtype=np.complex128)
    N, k = z.shape
    n = k + 1
    r2 = (z * z.conj()).real
    a2 = r2.sum(axis=1)
    a = np.sqrt(a2)
    E, O = eo_array(m, a)
    degenerate = a2 == 0.0
    safe_a = np.where(degenerate, 1.0, a)
    safe_a2 = np.where(degenerate, 1.0, a2)

    out = np.zeros((N, n, n), dtype=np.complex128)
    out[:, 0, 0] = E
    ratio = (O / safe_a)[:, None]
    out[:, 0, 1:] = ratio * z
    out[:, 1:, 0] = ratio * z.conj()
    # lower block: I + (E_m - 1)/a^2 * conj(z_{l-1}) z_{j-1}
    lower = ((E - 1.0) / safe_a2)[:, None, None] * (z.conj()[:, :, None] * z[:, None, :])
    # mirror the strict upper triangle so the block is hermitian bit for bit
    upper = np.triu(lower, 1)
    lower = upper + np.conj(np.swapaxes(upper, 1, 2))
    idx = np.arange(k)
    # diagonal written separately so that it is exactly real
    lower[:, idx, idx] = ((r2 * E[:, None] + a2[:, None] - r2) / safe_a2[:, None])
    out[:, 1:, 1:] = lower
    if np.any(degenerate):
        out[degenerate] = np.eye(n)
    return out


@dataclass(frozen=True)
class ClosedEigensystem:
    """Columns of ``P`` are eigenvectors; ``eigenvalues`` aligned with them."""

    P: np.ndarray
    eigenvalues: np.ndarray
    construction: str
    flags: tuple = field(default=())


def _closed_vectors(t):
    n = t.n
    z = t.z
    r = t.radii
    a = t.a
    cols = []
    # b_0 = r_1^2 extends the partial sums so every V_j follows one pattern
    b = (r[0] ** 2,) + b_seq(t)
    for j in range(1, n - 1):
        v = np.zeros(n, dtype=np.complex128)
        coef = -z[0] * z[j] / b[j - 1]
        v[1 : j + 1] = coef * z[:j].conj()
        v[j + 1] = z[0]
        bj = b[j] if j < len(b) else t.a2
        v *= math.sqrt(b[j - 1]) / (r[0] * math.sqrt(bj))
        cols.append(v)
    for sign in (-1.0, 1.0):
        v = np.empty(n, dtype=np.complex128)
        v[0] = sign * a
        v[1:] = z.conj()
        cols.append(v / (math.sqrt(2.0) * a))
    return np.column_stack(cols)


def _numerical_system(t):
    zm = build_Z(t)
    eig = linalg.hermitian_eig(zm)
    lam = eig.eigenvalues
    u = eig.vectors.copy()
    ones = np.abs(lam - 1.0) <= linalg.CLUSTER_TOL
    if np.any(ones):
        u[:, ones] = linalg.orthonormalize(u[:, ones])
    return u, lam


def closed_eigvecs(t, fallback_tol=1e-8):
    """Orthonormal eigenvectors of Z.

    Uses the explicit vectors V_1 .. V_n when the tuple is well separated from
    the degenerate set (some r_j, a or b_j near zero); otherwise falls back to
    the Jacobi eigensolver. Eigenvalues are the Rayleigh quotients, so the
    (1-a, 1+a) order of the last two columns follows from computation.
    """
    zm = build_Z(t)
    flags = []
    degenerate = (
        t.n < 2
        or any(r < fallback_tol for r in t.radii)
        or t.a < fallback_tol
        or any(b < fallback_tol ** 2 for b in b_seq(t))
    )
    if not degenerate:
        p = _closed_vectors(t)
        lam = np.real(np.einsum("ij,ik,kj->j", p.conj(), zm, p))
        ortho = linalg.max_abs_diff(p.conj().T @ p, np.eye(t.n))
        resid = linalg.max_abs_diff(zm @ p, p * lam)
        if ortho <= 1e-9 and resid <= 1e-9:
            return ClosedEigensystem(p, lam, "closed-form", ())
        flags.append(f"closed-form pattern failed (ortho {ortho:.2e}, residual {resid:.2e})")
    else:
        flags.append("degenerate tuple")
    p, lam = _numerical_system(t)
    return ClosedEigensystem(p, lam, "numerical-fallback", tuple(flags))
