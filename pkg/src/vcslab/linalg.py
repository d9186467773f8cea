"""Dense complex matrix helpers and a cyclic Jacobi eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here
is the oracle side of the package: closed-form results elsewhere are checked
against these brute-force routines.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

HERMITIAN_TOL = 1e-13
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
CLUSTER_TOL = 1e-10


def as_matrix(a):
    """Coerce ``a`` to a 2-D complex array (copy-free when possible)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def identity(n):
    return np.eye(n, dtype=np.complex128)


def mat_mul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValidationError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a):
    return as_matrix(a).conj().T


def max_abs_diff(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def frobenius_diff(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def max_abs(a):
    a = as_matrix(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return max_abs_diff(a, a.conj().T) <= tol * max(1.0, max_abs(a))


def power_naive(a, m):
    """``a**m`` by repeated multiplication; ``a**0`` is the identity."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValidationError("power of a non-square matrix")
    if m < 0:
        raise ValidationError("negative matrix power")
    out = identity(a.shape[0])
    for _ in range(int(m)):
        out = out @ a
    return out


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues (ascending) and unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self):
        u = self.vectors
        return (u * self.eigenvalues) @ u.conj().T


def _off_norm(a):
    d = np.diag(np.diag(a))
    return float(np.linalg.norm(a - d))


def hermitian_eig(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Diagonalize a hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass drops to
    ``tol * ||A||_F``. Raises :class:`NumericalError` carrying the sweep count
    when that does not happen within ``max_sweeps``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n != a.shape[1]:
        raise ValidationError(f"eigensolver needs a square matrix, got {a.shape}")
    if not is_hermitian(a):
        raise ValidationError("eigensolver input is not hermitian")
    work = 0.5 * (a + a.conj().T)
    v = identity(n)
    scale = float(np.linalg.norm(work))
    target = tol * scale
    sweeps = 0
    while _off_norm(work) > target:
        if sweeps >= max_sweeps:
            raise NumericalError(
                f"Jacobi eigensolver did not converge after {sweeps} sweeps "
                f"(off-diagonal mass {_off_norm(work):.3e}, target {target:.3e})",
                iterations=sweeps,
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag <= 1e-18 * scale:
                    work[p, q] = work[q, p] = 0.0
                    continue
                phase = apq / mag
                tau = (work[q, q].real - work[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = work[:, [p, q]] @ g
                work[:, p], work[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ work[[p, q], :]
                work[p, :], work[q, :] = rows[0], rows[1]
                work[p, q] = work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
                vc = v[:, [p, q]] @ g
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    evals = np.diag(work).real.copy()
    order = np.argsort(evals, kind="stable")
    return HermitianEig(evals[order], v[:, order], sweeps)


def count_near(values, target, tol=CLUSTER_TOL):
    return int(np.sum(np.abs(np.asarray(values) - target) <= tol))


def orthonormalize(columns):
    """Orthonormal basis (QR) for the span of the given columns."""
    q, _ = np.linalg.qr(as_matrix(columns))
    return q


def truncated_inverse(g, cutoff=1e-12, strict=True):
    """Inverse of a hermitian PSD matrix through its eigensystem.

    Eigenvalues at or below ``cutoff * lambda_max`` are treated as zero. With
    ``strict`` such eigenvalues raise :class:`NumericalError`; otherwise they
    are dropped (pseudo-inverse).
    """
    eig = hermitian_eig(g)
    lam = eig.eigenvalues
    lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    if lam_max == 0.0:
        raise NumericalError("cannot invert the zero operator")
    keep = lam > cutoff * lam_max
    if strict and not np.all(keep):
        raise NumericalError(
            f"operator is singular at tolerance: {int(np.sum(~keep))} eigenvalue(s) "
            f"<= {cutoff:g} * lambda_max"
        )
    inv = np.zeros_like(lam)
    inv[keep] = 1.0 / lam[keep]
    u = eig.vectors
    return (u * inv) @ u.conj().T
