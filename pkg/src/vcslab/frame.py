"""Frame operator assembly, audits against the target T, and inverse growth.

Basis ordering throughout: index l*(M+1) + m for chi^l (x) phi_m, 0-based l.
The target is T = I_n (x) sum_m |psi_m><psi_m|, i.e. diag(1/(m+1)^2).
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, linalg
from .errors import ValidationError
from .quadrature import CHUNK, TensorGrid, reduce_chunks
from .states import coefficient_block
from .zmatrix import eo_array

ANOMALY_TOL = 1e-8
PINV_CUTOFF = 1e-12


def index_labels(n, M):
    return [(l + 1, m) for l in range(n) for m in range(M + 1)]


def target_T(n, M):
    d = np.tile(1.0 / (np.arange(M + 1) + 1.0) ** 2, n)
    return np.diag(d).astype(np.complex128)


@dataclass
class FrameOperator:
    n: int
    M: int
    matrix: np.ndarray
    mode: str
    weight: float
    family: str
    quadrature: dict = field(default_factory=dict)

    @property
    def labels(self):
        return index_labels(self.n, self.M)


def _check_angular(angular, M):
    rules = angular if isinstance(angular, (list, tuple)) else [angular]
    for rule in rules:
        if rule.size < 2 * M + 2:
            raise ValidationError(
                f"angular rule has {rule.size} points; the frame needs N >= 2M+2 = {2 * M + 2}"
            )


def frame_numeric(family, radial, angular, threads=1, chunk=None):
    """Sum over q of the quadrature of W |Z,q><Z,q| against the family's measure.

    Every grid node contributes w * G G^H with G the (D x n) block of state
    coefficients for q = 1..n at that node.
    """
    n, M = family.n, family.M
    _check_angular(angular, M)
    grid = TensorGrid(n - 1, radial, angular)
    d = n * (M + 1)
    if chunk is None:
        chunk = max(64, min(CHUNK, (1 << 21) // max(1, d * d)))

    def chunk_fn(radii, angles, w):
        g = np.ascontiguousarray(coefficient_block(family, radii, angles))
        wt = np.ascontiguousarray(w * family.weight * family.density(radii))
        return kernels.frame_accumulate(g, wt)

    mat = reduce_chunks(grid, chunk_fn, threads, chunk)
    mat = 0.5 * (mat + mat.conj().T)
    return FrameOperator(n, M, mat, "numeric", family.weight, family.name,
                         {**grid.metadata(), "backend": kernels.BACKEND})


@dataclass(frozen=True)
class AngularMonomial:
    """exp(i e . theta) times a radial coefficient; integrates to zero unless e == 0."""

    exponents: tuple
    radial_coeff: object

    def survives(self):
        return all(e == 0 for e in self.exponents)


def _power_entry(l, j, p, radii):
    """Radial part of (Z^p)_{lj} (0-based l, j) and its angular exponent vector."""
    k = radii.shape[1]
    r2 = radii * radii
    a2 = r2.sum(axis=1)
    a = np.sqrt(a2)
    E, O = eo_array(p, a)
    e = [0] * k
    if l == 0 and j == 0:
        return E, e
    if l == 0:
        e[j - 1] += 1
        return O * radii[:, j - 1] / a, e
    if j == 0:
        e[l - 1] -= 1
        return O * radii[:, l - 1] / a, e
    if l == j:
        return (r2[:, l - 1] * E + a2 - r2[:, l - 1]) / a2, e
    e[j - 1] += 1
    e[l - 1] -= 1
    return radii[:, j - 1] * radii[:, l - 1] * (E - 1.0) / a2, e


def frame_monomials(family, l, m, j, k):
    """Angular monomial of entry ((l, m), (j, k)) of sum_q R(m) Z^(m+k) R(k)^H.

    Uses sum_q Omega_q = I so the q-sum collapses to one matrix power.
    """
    n = family.n
    _, e = _power_entry(l, j, m + k, np.full((1, n - 1), 0.5))
    exps = tuple(x + (m - k) for x in e)
    scale = (family.modulator(m)[l] * family.modulator(k)[j]
             * family.basis_scale(m) * family.basis_scale(k))

    def radial_coeff(radii):
        val, _ = _power_entry(l, j, m + k, radii)
        return scale * val

    return AngularMonomial(exps, radial_coeff)


def frame_semianalytic(family, radial, threads=1):
    """Frame operator from exponent bookkeeping plus radial quadrature.

    A monomial survives angular integration only when its exponent vector
    vanishes; survivors are integrated over the radii (angles contribute
    (2 pi)^(n-1)). Survivors are not assumed to be diagonal.
    """
    n, M = family.n, family.M
    d = n * (M + 1)
    grid = TensorGrid(n - 1, radial)
    survivors = []
    for l in range(n):
        for m in range(M + 1):
            for j in range(n):
                for k in range(M + 1):
                    i1, i2 = l * (M + 1) + m, j * (M + 1) + k
                    if i2 < i1:
                        continue
                    mono = frame_monomials(family, l, m, j, k)
                    if mono.survives():
                        survivors.append((i1, i2, mono))
    mat = np.zeros((d, d), dtype=np.complex128)
    if survivors:
        ang = (2.0 * math.pi) ** (n - 1)

        def chunk_fn(radii, _angles, w):
            base = family.weight * ang * family.normalization(radii) ** 2 * family.density(radii) * w
            out = np.zeros(len(survivors))
            for s, (_, _, mono) in enumerate(survivors):
                out[s] = np.sum(mono.radial_coeff(radii) * base)
            return out

        vals = reduce_chunks(grid, chunk_fn, threads)
        for (i1, i2, _), v in zip(survivors, vals):
            mat[i1, i2] = v
            mat[i2, i1] = np.conj(v)
    return FrameOperator(n, M, mat, "semi-analytic", family.weight, family.name,
                         {**grid.metadata(), "survivors": len(survivors)})


def frame_bounds(F):
    mat = F.matrix if isinstance(F, FrameOperator) else linalg.as_matrix(F)
    lam = linalg.hermitian_eig(mat).eigenvalues
    return float(lam[0]), float(lam[-1])


@dataclass
class FrameAuditReport:
    diag_residual_max: float
    offdiag_max: float
    anomaly_entries: list
    frame_bounds: tuple
    hermitian_residual: float
    max_residual: float
    frobenius_residual: float
    verdicts: dict

    def to_dict(self):
        return {
            "diag_residual_max": self.diag_residual_max,
            "offdiag_max": self.offdiag_max,
            "max_residual": self.max_residual,
            "frobenius_residual": self.frobenius_residual,
            "hermitian_residual": self.hermitian_residual,
            "anomaly_entries": self.anomaly_entries,
            "frame_bounds": list(self.frame_bounds),
            "verdicts": self.verdicts,
        }


def audit(F, T=None, tol=ANOMALY_TOL):
    """Compare an assembled frame operator with the target diagonal operator."""
    if T is None:
        T = target_T(F.n, F.M)
    mat = F.matrix
    if mat.shape != T.shape:
        raise ValidationError(f"frame {mat.shape} and target {T.shape} differ in size")
    diff = mat - T
    d = np.abs(np.diag(diff))
    off = np.abs(diff - np.diag(np.diag(diff)))
    labels = index_labels(F.n, F.M)
    anomalies = []
    for i, j in zip(*np.nonzero(np.abs(diff) > tol)):
        if j < i:
            continue
        v = mat[i, j]
        anomalies.append({
            "row": int(i), "col": int(j),
            "row_label": list(labels[i]), "col_label": list(labels[j]),
            "re": float(v.real), "im": float(v.imag), "target": float(T[i, j].real),
        })
    anomalies.sort(key=lambda e: (-abs(complex(e["re"], e["im"]) - e["target"]), e["row"], e["col"]))
    bounds = frame_bounds(mat)
    offdiag_max = float(off.max()) if off.size else 0.0
    diag_max = float(d.max()) if d.size else 0.0
    verdicts = {
        "resolution": "paper-consistent" if offdiag_max <= tol else "anomaly",
        "diagonal": "match" if diag_max <= tol else "mismatch",
        "positive": bool(bounds[0] > -1e-10),
    }
    return FrameAuditReport(
        diag_max, offdiag_max, anomalies, bounds,
        linalg.max_abs_diff(mat, mat.conj().T), linalg.max_abs_diff(mat, T),
        linalg.frobenius_diff(mat, T), verdicts,
    )


def su11_offdiag_coeff(m, family=None, radial=None):
    """Predicted band entry 2 R_m R_{m+1} int O_{2m+1} r dr / ((m+1)(m+2)).

    The factor 2 is W * N^2 * density * 2 pi reduced to 2 r for the unit-disc
    choices; the radial integral is taken by Gauss-Legendre quadrature.
    """
    from .moments import su11_moment_quadrature
    from .states import SU11Family

    family = family or SU11Family(m + 1)
    p = 2 * m + 1
    io = su11_moment_quadrature("O", p, radial)
    return 2.0 * family.R[m] * family.R[m + 1] * io / ((m + 1) * (m + 2))


def inverse_growth(M_list, n=1):
    """||T_M^{-1}|| for each cutoff, with a log-log slope fit."""
    rows = []
    for M in M_list:
        # T^{-1} = I (x) diag((m+1)^2) exactly
        inv_diag = (np.arange(M + 1) + 1.0) ** 2
        rows.append({"M": int(M), "norm": float(np.max(inv_diag))})
    slope = None
    if len(rows) >= 2:
        x = np.log([r["M"] + 1.0 for r in rows])
        y = np.log([r["norm"] for r in rows])
        slope = float(np.polyfit(x, y, 1)[0])
    return {"rows": rows, "slope": slope}


def inverse_numeric_norm(n, M):
    """||T_M^{-1}|| through the eigensolver (cross-check of the exact value)."""
    inv = linalg.truncated_inverse(target_T(n, M))
    return frame_bounds(inv)[1]


@dataclass
class Reconstruction:
    phi_hat: np.ndarray
    rel_error: float
    mode: str


def reconstruct(phi, F, mode="paper-T"):
    """phi_hat = F G^{-1} phi with G = T (``paper-T``) or G = F (``computed-F``)."""
    mat = F.matrix
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (mat.shape[0],):
        raise ValidationError(f"phi has shape {phi.shape}, expected ({mat.shape[0]},)")
    if mode == "paper-T":
        G = target_T(F.n, F.M)
    elif mode == "computed-F":
        G = mat
    else:
        raise ValidationError(f"unknown reconstruction mode {mode!r}")
    ginv = linalg.truncated_inverse(G, PINV_CUTOFF, strict=True)
    phi_hat = mat @ (ginv @ phi)
    rel = float(np.linalg.norm(phi_hat - phi) / np.linalg.norm(phi))
    return Reconstruction(phi_hat, rel, mode)


def divergence_demo(M, verify_terms=(3,)):
    """Partial sums of the unscaled-basis norm series and the scaled control.

    Each unscaled term N^2 R_m^2 (E_m^2+O_m^2) integrated against the disc
    density is exactly 1; the listed ``verify_terms`` are recomputed by
    quadrature.
    """
    from fractions import Fraction

    from .moments import _frac_sum
    from .quadrature import gauss_legendre, tensor_integrate, uniform_angular

    if not 0 <= M <= 10 ** 4:
        raise ValidationError("divergence demo supports 0 <= M <= 10^4")
    rows = []
    partial = Fraction(0)
    scaled = Fraction(0)
    for m in range(M + 1):
        # (2 pi / 2 pi) * R_m^2 * N_m with R_m^2 = 1 / N_m
        term = (1 / _frac_sum(m)) * _frac_sum(m)
        partial += term
        scaled += term / (m + 1) ** 2
        rows.append({"m": m, "term": float(term), "partial": float(partial),
                     "scaled_partial": float(scaled)})
    checks = {}
    for m in verify_terms:
        if m > M or m > 60:
            continue
        rm2 = 1.0 / float(_frac_sum(m))

        def f(radii, _angles, m=m, rm2=rm2):
            r = radii[:, 0]
            E, O = eo_array(m, r)
            nn = (1.0 + r * r) ** 2 / 2.0
            return nn * rm2 * (E * E + O * O) * r / (math.pi * (1.0 + r * r) ** 2)

        checks[m] = tensor_integrate(f, 2, gauss_legendre(m + 4), uniform_angular(4)).real
    slope = None
    if M >= 1:
        ms = np.array([r["m"] for r in rows], dtype=float)
        ps = np.array([r["partial"] for r in rows])
        slope = float(np.polyfit(ms, ps, 1)[0])
    return {"rows": rows, "term_quadrature": checks, "slope": slope,
            "scaled_limit": math.pi ** 2 / 6.0}
