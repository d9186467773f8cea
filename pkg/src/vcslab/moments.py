"""Radial moment integrals and the normalizing coefficients derived from them.

N1(m) = int a^2 (E_m^2 + O_m^2) prod(r_j) dr
N2(m) = int [r_l^2 (E_m^2 + O_m^2) + a^2 - r_l^2] prod(r_j) dr   (any l)

with R_m = 1/sqrt(N1), S_m = 1/sqrt(N2). The ``display`` convention drops the
radial Jacobian prod(r_j); it exists only for auditing.
"""
import json
import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .quadrature import Rule1D, gauss_legendre, tensor_integrate
from .zmatrix import eo_array

SCHEMA_VERSION = 1
CONVENTIONS = ("radial-jacobian", "display")
MAX_M = 64


def _check_m(m):
    if not 0 <= m <= MAX_M:
        raise ValidationError(f"moment index m must be in 0..{MAX_M}, got {m}")


def _jacobian(radii, convention):
    if convention == "radial-jacobian":
        return np.prod(radii, axis=1)
    if convention == "display":
        return np.ones(radii.shape[0])
    raise ValidationError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")


def _e2(radii, m):
    a = np.sqrt(np.sum(radii * radii, axis=1))
    E, O = eo_array(m, a)
    return a * a, E * E + O * O


def compute_N1(n, m, radial, convention="radial-jacobian", threads=1):
    _check_m(m)

    def f(radii, _angles):
        a2, s = _e2(radii, m)
        return a2 * s * _jacobian(radii, convention)

    return tensor_integrate(f, n, radial, threads=threads).real


def compute_N2(n, m, l, radial, convention="radial-jacobian", threads=1):
    _check_m(m)
    if not 2 <= l <= n:
        raise ValidationError(f"component index l must be in 2..{n}, got {l}")

    def f(radii, _angles):
        a2, s = _e2(radii, m)
        rl2 = radii[:, l - 2] ** 2
        return (rl2 * s + a2 - rl2) * _jacobian(radii, convention)

    return tensor_integrate(f, n, radial, threads=threads).real


@dataclass(frozen=True)
class MomentEntry:
    m: int
    N1: float
    N2: float
    R: float
    S: float


@dataclass(frozen=True)
class MomentTable:
    n: int
    M: int
    convention: str
    radial_rule: dict
    entries: tuple = field(default=())

    def R(self, m):
        return self.entries[m].R

    def S(self, m):
        return self.entries[m].S

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "M": self.M,
            "convention": self.convention,
            "radial_rule": self.radial_rule,
            "entries": [asdict(e) for e in self.entries],
        }

    @classmethod
    def from_dict(cls, doc):
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValidationError(f"unsupported moment table schema {doc.get('schema_version')!r}")
        entries = tuple(MomentEntry(**e) for e in doc["entries"])
        return cls(doc["n"], doc["M"], doc["convention"], doc["radial_rule"], entries)


def moment_table(n, M, radial=None, convention="radial-jacobian", threads=1):
    """Moments and coefficients for m = 0..M at dimension n."""
    if not 0 <= M <= MAX_M:
        raise ValidationError(f"Fock cutoff must be in 0..{MAX_M}, got {M}")
    if radial is None:
        radial = gauss_legendre(max(M + 3, 8))
    entries = []
    for m in range(M + 1):
        n1 = compute_N1(n, m, radial, convention, threads)
        n2 = compute_N2(n, m, 2, radial, convention, threads)
        if not (n1 > 0 and n2 > 0):
            raise ValidationError(f"non-positive moment at m={m}: N1={n1}, N2={n2}")
        entries.append(MomentEntry(m, n1, n2, 1.0 / math.sqrt(n1), 1.0 / math.sqrt(n2)))
    return MomentTable(n, M, convention, radial.describe(), tuple(entries))


def printed_relation_constant(n):
    """Constant printed with the N1/N2 relation: (n-2)/4."""
    return (n - 2) / 4.0


def derived_relation_constant(n):
    """Constant (n-2)(n-1)/2^n from int a^2 prod(r_j) dr = (n-1)/2^n."""
    return (n - 2) * (n - 1) / 2.0 ** n


@dataclass(frozen=True)
class RelationResidual:
    m: int
    printed: float
    derived: float
    scale: float


def relation_residual(table, n=None):
    """Residuals of N1 = (n-1) N2 - c for the printed and the derived constant c."""
    n = table.n if n is None else n
    out = []
    for e in table.entries:
        base = e.N1 - (n - 1) * e.N2
        out.append(
            RelationResidual(
                e.m,
                base + printed_relation_constant(n),
                base + derived_relation_constant(n),
                max(1.0, abs(e.N1)),
            )
        )
    return out


# closed-form radial moments for the unit-disc example (a = r), exact rationals


def _frac_E2(m):
    return Fraction(m * 4 ** m + m + 1, 2 * (2 * m + 1) * (m + 1))


def _frac_E2_printed(m):
    return Fraction(4 ** m + 1 + m, 2 * (2 * m + 1) * (m + 1))


def _frac_O2(m):
    return Fraction(m * (4 ** m - 1), 2 * (2 * m + 1) * (m + 1))


def _frac_sum(m):
    return Fraction(2 * 4 ** m * m + 1, 2 * (2 * m + 1) * (m + 1))


def su11_moment_E2(m):
    """int_0^1 E_m(r)^2 r dr, recomputed by direct integration."""
    _check_m(m)
    return float(_frac_E2(m))


def su11_moment_E2_printed(m):
    """The printed value (4^m + 1 + m) / (2 (2m+1)(m+1)); wrong for m = 0 and m >= 2."""
    _check_m(m)
    return float(_frac_E2_printed(m))


def su11_moment_O2(m):
    """int_0^1 O_m(r)^2 r dr."""
    _check_m(m)
    return float(_frac_O2(m))


def su11_moment_sum(m):
    """int_0^1 (E_m^2 + O_m^2) r dr = (2 * 4^m m + 1) / (2 (2m+1)(m+1))."""
    _check_m(m)
    return float(_frac_sum(m))


def remark_N(m):
    """The unscaled-basis moment N_m; same integral as :func:`su11_moment_sum`."""
    return su11_moment_sum(m)


def su11_moment_quadrature(kind, m, radial=None):
    """Gauss-Legendre value of the unit-disc radial moment ``kind``.

    ``kind`` is one of ``"E2"``, ``"O2"``, ``"sum"``, ``"O"`` (the last is
    int O_m r dr, used by the off-diagonal band).
    """
    if radial is None:
        radial = gauss_legendre(max(m + 2, 2))

    def f(radii, _angles):
        r = radii[:, 0]
        E, O = eo_array(m, r)
        vals = {"E2": E * E, "O2": O * O, "sum": E * E + O * O, "O": O}[kind]
        return vals * r

    return tensor_integrate(f, 2, radial).real


def su11_discrepancy(m_values=range(0, 13)):
    """Rows comparing the printed E^2 moment with direct integration."""
    rows = []
    for m in m_values:
        derived = su11_moment_E2(m)
        printed = su11_moment_E2_printed(m)
        rows.append(
            {
                "m": m,
                "quadrature": su11_moment_quadrature("E2", m),
                "derived": derived,
                "printed": printed,
                "printed_minus_derived": printed - derived,
            }
        )
    return rows


# on-disk cache


def cache_dir(explicit=None):
    path = explicit or os.environ.get("VCSLAB_CACHE_DIR")
    return Path(path) if path else None


def _cache_key(n, M, radial, convention):
    return f"moments-v{SCHEMA_VERSION}-n{n}-M{M}-{radial.kind}{radial.size}-{convention}.json"


def save_table(table, path):
    Path(path).write_text(json.dumps(table.to_dict(), indent=2, sort_keys=True) + "\n")


def load_table(path):
    return MomentTable.from_dict(json.loads(Path(path).read_text()))


def cached_moment_table(n, M, radial, convention="radial-jacobian", directory=None, threads=1):
    """Build or reuse a table stored under ``directory`` (or VCSLAB_CACHE_DIR)."""
    d = cache_dir(directory)
    if d is None:
        return moment_table(n, M, radial, convention, threads)
    path = d / _cache_key(n, M, radial, convention)
    if path.exists():
        return load_table(path)
    table = moment_table(n, M, radial, convention, threads)
    d.mkdir(parents=True, exist_ok=True)
    save_table(table, path)
    return table


def as_rule(radial):
    return radial if isinstance(radial, Rule1D) else gauss_legendre(int(radial))
