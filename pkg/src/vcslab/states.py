"""Truncated vector coherent states |Z, q> and their coefficient families.

A state is stored by its coefficients in the orthonormal basis chi^l (x) phi_m:

    coeff(l, m) = N(r) * [R(m) Z^m]_{l q} * s_m,

with R(m) = diag(R_m, S_m, ..., S_m) * exp(i m theta) and s_m = 1/(m+1) for
the rescaled basis psi_m = phi_m / (m+1) (s_m = 1 for the unscaled one).
Coefficients always come from the matrix product, never from transcribed
component lists.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .disc import TWO_PI
from .errors import ValidationError
from .moments import MomentTable, _frac_sum
from .zmatrix import closed_power, closed_power_batch

SU11_WEIGHT = math.pi ** 2 / 6.0


def normalization_general(t):
    """a / sqrt((2 pi)^(n-1)); zero (a degenerate state) when a = 0."""
    return t.a / math.sqrt(TWO_PI ** (t.n - 1))


def su11_R(m):
    """R_m = sqrt((2m+1)(m+1) / (2 * 4^m m + 1))."""
    if m < 0:
        raise ValidationError("m must be >= 0")
    return math.sqrt(Fraction((2 * m + 1) * (m + 1), 2 * 4 ** m * m + 1))


def su11_normalization(r):
    """sqrt(6)/pi * (1 + r^2)."""
    r = np.asarray(r, dtype=float)
    out = math.sqrt(6.0) / math.pi * (1.0 + r * r)
    return float(out) if out.ndim == 0 else out


class StateFamily:
    """Choice of normalization, modulator coefficients, measure and weight.

    Subclasses provide vectorized ``normalization(radii)`` and
    ``density(radii)`` over arrays of shape (N, n-1).
    """

    name = "family"
    scaled_basis = True

    def __init__(self, n, M, R, S, weight):
        self.n = int(n)
        self.M = int(M)
        self.R = tuple(float(x) for x in R)
        self.S = tuple(float(x) for x in S)
        self.weight = float(weight)
        if len(self.R) < self.M + 1 or len(self.S) < self.M + 1:
            raise ValidationError(f"family needs coefficients for m = 0..{self.M}")

    def basis_scale(self, m):
        return 1.0 / (m + 1) if self.scaled_basis else 1.0

    def modulator(self, m):
        """Diagonal of R(m) without its phase."""
        return np.array([self.R[m]] + [self.S[m]] * (self.n - 1))

    def describe(self):
        return {"family": self.name, "n": self.n, "M": self.M, "weight": self.weight,
                "scaled_basis": self.scaled_basis}


class GeneralFamily(StateFamily):
    """Poly-disc construction: N = a / sqrt((2pi)^(n-1)), weight 1, dmu = prod(r) dr dtheta."""

    name = "general"

    def __init__(self, table: MomentTable, M=None):
        M = table.M if M is None else M
        if M > table.M:
            raise ValidationError(f"moment table covers m <= {table.M}, need {M}")
        super().__init__(table.n, M, [e.R for e in table.entries], [e.S for e in table.entries], 1.0)
        self.table = table

    def normalization(self, radii):
        a = np.sqrt(np.sum(radii * radii, axis=1))
        return a / math.sqrt(TWO_PI ** (self.n - 1))

    def density(self, radii):
        return np.prod(radii, axis=1)


class SU11Family(StateFamily):
    """Unit-disc example: N = sqrt(6)/pi (1+r^2), R_m = S_m from the closed form, W = pi^2/6."""

    name = "su11"

    def __init__(self, M, weight=SU11_WEIGHT):
        R = [su11_R(m) for m in range(M + 1)]
        super().__init__(2, M, R, R, weight)

    def normalization(self, radii):
        return su11_normalization(radii[:, 0])

    def density(self, radii):
        r = radii[:, 0]
        return r / (math.pi * (1.0 + r * r) ** 2)


class UnscaledFamily(SU11Family):
    """Unscaled basis with N = (1+r^2)/sqrt(2), R_m = 1/sqrt(N_m), W = 1."""

    name = "unscaled"
    scaled_basis = False

    def __init__(self, M):
        R = [math.sqrt(1 / _frac_sum(m)) for m in range(M + 1)]
        StateFamily.__init__(self, 2, M, R, R, 1.0)

    def normalization(self, radii):
        r = radii[:, 0]
        return (1.0 + r * r) / math.sqrt(2.0)


def coefficient_block(family, radii, angles, m_max=None):
    """Coefficients for all q at a batch of points.

    Returns an array of shape (N, n*(M+1), n): entry [k, l*(M+1)+m, q] is
    coeff(l, m) of |Z, q> at point k (0-based l, q).
    """
    n, M = family.n, family.M if m_max is None else m_max
    radii = np.asarray(radii, dtype=float)
    angles = np.asarray(angles, dtype=float)
    z = radii * np.exp(1j * angles)
    theta = angles.sum(axis=1)
    norm = family.normalization(radii)
    out = np.empty((radii.shape[0], n * (M + 1), n), dtype=np.complex128)
    for m in range(M + 1):
        zm = closed_power_batch(z, m)
        phase = np.exp(1j * m * theta) * norm * family.basis_scale(m)
        rows = family.modulator(m)[None, :, None] * zm * phase[:, None, None]
        out[:, m :: M + 1, :] = rows
    return out


@dataclass(frozen=True)
class VcsState:
    n: int
    M: int
    q: int
    tuple: object
    coeffs: np.ndarray
    degenerate: bool = False

    def coeff(self, l, m):
        """Coefficient on chi^l (x) phi_m, 1-based l."""
        return self.coeffs[(l - 1) * (self.M + 1) + m]

    def to_dict(self):
        return {
            "n": self.n,
            "M": self.M,
            "q": self.q,
            "tuple": self.tuple.to_dict(),
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }


def assemble_state(t, q, M, family):
    """|Z, q> truncated at Fock cutoff M, from R(m) Z^m products."""
    if not 1 <= q <= t.n:
        raise ValidationError(f"component q must be in 1..{t.n}, got {q}")
    if M < 0:
        raise ValidationError("Fock cutoff must be >= 0")
    if family.n != t.n or family.M < M:
        raise ValidationError("family does not match the tuple dimension or cutoff")
    radii = np.array([t.radii])
    norm = float(family.normalization(radii)[0])
    coeffs = np.zeros(t.n * (M + 1), dtype=np.complex128)
    theta = t.theta
    for m in range(M + 1):
        rm = np.diag(family.modulator(m) * np.exp(1j * m * theta))
        col = (rm @ closed_power(t, m))[:, q - 1]
        coeffs[m :: M + 1] = norm * family.basis_scale(m) * col
    return VcsState(t.n, M, q, t, coeffs, degenerate=(norm == 0.0))


def overlap(s1, s2):
    if (s1.n, s1.M) != (s2.n, s2.M):
        raise ValidationError("states live in different truncated spaces")
    return complex(np.vdot(s1.coeffs, s2.coeffs))


def norm(s):
    return math.sqrt(max(overlap(s, s).real, 0.0))


@dataclass(frozen=True)
class NormCheck:
    r: float
    M: int
    partial: float
    tail_bound: float
    euler_tail: float
    pointwise_norm2: float
    terms_checked: int
    max_term_error: float
    verdict: str


def su11_norm_term(m):
    """Integrated m-th term of <Z,q|Z,q>, exact: (6/pi^2)/(m+1)^2 times 2 R_m^2 N_m."""
    ratio = Fraction((2 * m + 1) * (m + 1), 2 * 4 ** m * m + 1) * _frac_sum(m) * 2
    return 6.0 / math.pi ** 2 * float(ratio) / (m + 1) ** 2


def su11_norm_term_quadrature(m, radial=None, angular_points=4):
    """The m-th term by 2-D quadrature of N^2 R_m^2 (E_m^2+O_m^2) dnu / (m+1)^2."""
    from .quadrature import gauss_legendre, tensor_integrate, uniform_angular
    from .zmatrix import eo_array

    radial = radial or gauss_legendre(max(m + 4, 8))
    rm2 = su11_R(m) ** 2

    def f(radii, _angles):
        r = radii[:, 0]
        E, O = eo_array(m, r)
        nn = su11_normalization(r) ** 2
        return nn * rm2 * (E * E + O * O) * r / (math.pi * (1 + r * r) ** 2)

    return tensor_integrate(f, 2, radial, uniform_angular(angular_points)).real / (m + 1) ** 2


def su11_norm_check(r, M, check_terms=20):
    """Partial norm^2 at cutoff M versus the Euler-series limit 1.

    Terms m <= ``check_terms`` are recomputed by quadrature and compared with
    (6/pi^2)/(m+1)^2; the partial sum uses the exact rational terms.
    """
    from scipy.special import polygamma

    if not 0.0 < r < 1.0:
        raise ValidationError("su11_norm_check needs 0 < r < 1")
    max_err = 0.0
    for m in range(min(M, check_terms) + 1):
        expect = 6.0 / math.pi ** 2 / (m + 1) ** 2
        max_err = max(max_err, abs(su11_norm_term_quadrature(m) - expect))
    partial = math.fsum(su11_norm_term(m) for m in range(M + 1))
    tail_bound = 6.0 / math.pi ** 2 / max(M, 1)
    euler_tail = 6.0 / math.pi ** 2 * float(polygamma(1, M + 2))
    # pointwise |coeff|^2 sum at radius r, angle-free; reported, not asserted
    fam = SU11Family(min(M, 60))
    t_radii = np.array([[r]])
    block = coefficient_block(fam, t_radii, np.zeros((1, 1)))
    pointwise = float(np.sum(np.abs(block[0, :, 0]) ** 2))
    ok = abs(partial - 1.0) <= tail_bound and max_err <= 1e-12
    return NormCheck(float(r), M, partial, tail_bound, euler_tail, pointwise,
                     min(M, check_terms) + 1, max_err, "pass" if ok else "fail")
