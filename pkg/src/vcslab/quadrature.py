"""One-dimensional rules, tensor-product integration and seeded Monte Carlo.

Tensor grids over [0,1]^(n-1) x [0,2pi]^(n-1) are traversed in fixed-size
chunks in row-major order. Each chunk is reduced by a compensated kernel and
the chunk partials are combined with Neumaier summation in chunk order, so a
result does not depend on how many worker threads evaluated the chunks.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError

TWO_PI = 2.0 * math.pi
CHUNK = 4096
MAX_GL = 512


@dataclass(frozen=True)
class Rule1D:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple

    @property
    def size(self):
        return len(self.nodes)

    def describe(self):
        return {"kind": self.kind, "points": self.size, "domain": list(self.domain)}


def gauss_legendre(k):
    """k-point Gauss-Legendre rule mapped to [0, 1]."""
    k = int(k)
    if not 1 <= k <= MAX_GL:
        raise ValidationError(f"Gauss-Legendre size must be in 1..{MAX_GL}, got {k}")
    x, w = np.polynomial.legendre.leggauss(k)
    return Rule1D("gauss-legendre", 0.5 * (x + 1.0), 0.5 * w, (0.0, 1.0))


def uniform_angular(N):
    """N-point uniform (periodic trapezoidal) rule on [0, 2 pi)."""
    N = int(N)
    if N < 1:
        raise ValidationError(f"angular rule needs at least one node, got {N}")
    nodes = TWO_PI * np.arange(N) / N
    return Rule1D("uniform-periodic", nodes, np.full(N, TWO_PI / N), (0.0, TWO_PI))


class Neumaier:
    """Compensated accumulator for scalars or same-shape arrays."""

    def __init__(self):
        self.s = None
        self.c = None

    def add(self, x):
        x = np.asarray(x)
        if self.s is None:
            self.s = np.array(x, dtype=np.result_type(x, float))
            self.c = np.zeros_like(self.s)
            return
        if np.iscomplexobj(x) and not np.iscomplexobj(self.s):
            self.s = self.s.astype(complex)
            self.c = self.c.astype(complex)
        t = self.s + x
        if np.iscomplexobj(t):
            self.c = self.c + (
                _neumaier_part(self.s.real, x.real, t.real)
                + 1j * _neumaier_part(self.s.imag, np.imag(x), t.imag)
            )
        else:
            self.c = self.c + _neumaier_part(self.s, x, t)
        self.s = t

    def value(self):
        return self.s + self.c


def _neumaier_part(s, x, t):
    s, x, t = np.asarray(s), np.asarray(x), np.asarray(t)
    return np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)


def _as_rules(rule, count, what):
    if rule is None:
        return None
    if isinstance(rule, Rule1D):
        return [rule] * count
    rules = list(rule)
    if len(rules) != count:
        raise ValidationError(f"{what} rule arity {len(rules)} does not match n-1 = {count}")
    return rules


class TensorGrid:
    """Lazy tensor-product grid over radii (and optionally angles).

    Coordinates are ordered (r_1, .., r_{d}, theta_1, .., theta_{d}); the
    flat index runs row-major over that list.
    """

    def __init__(self, dim, radial, angular=None):
        self.dim = dim
        self.radial = _as_rules(radial, dim, "radial")
        self.angular = _as_rules(angular, dim, "angular")
        rules = list(self.radial) + (list(self.angular) if self.angular else [])
        self.rules = rules
        self.shape = tuple(r.size for r in rules)
        self.size = int(np.prod(self.shape)) if rules else 1

    def chunks(self, chunk=CHUNK):
        for start in range(0, self.size, chunk):
            yield start, min(start + chunk, self.size)

    def points(self, start, stop):
        """(radii, angles or None, weights) for flat indices [start, stop)."""
        flat = np.arange(start, stop)
        idx = np.unravel_index(flat, self.shape)
        w = np.ones(stop - start)
        coords = []
        for rule, ix in zip(self.rules, idx):
            coords.append(rule.nodes[ix])
            w = w * rule.weights[ix]
        d = self.dim
        radii = np.column_stack(coords[:d]) if d else np.zeros((stop - start, 0))
        angles = np.column_stack(coords[d:]) if self.angular else None
        return radii, angles, w

    def metadata(self):
        meta = {"radial": [r.describe() for r in self.radial], "nodes": self.size}
        if self.angular:
            meta["angular"] = [r.describe() for r in self.angular]
        return meta


def reduce_chunks(grid, chunk_fn, threads=1, chunk=CHUNK):
    """Apply ``chunk_fn(radii, angles, w)`` per chunk; combine in chunk order."""
    spans = list(grid.chunks(chunk))

    def work(span):
        return chunk_fn(*grid.points(*span))

    if threads and threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(work, spans))
    else:
        partials = [work(s) for s in spans]
    acc = Neumaier()
    for p in partials:
        acc.add(p)
    return acc.value()


def tensor_integrate(f, n, radial, angular=None, threads=1):
    """Integrate ``f(radii, angles)`` over the tensor grid.

    ``f`` is vectorized: it receives ``radii`` of shape (N, n-1) and
    ``angles`` of shape (N, n-1) (or ``None`` for a radial-only integral) and
    returns N real or complex values. Measure densities are the caller's job.
    """
    grid = TensorGrid(n - 1, radial, angular)

    def chunk_fn(radii, angles, w):
        vals = np.asarray(f(radii, angles))
        if vals.shape != w.shape:
            raise ValidationError(f"integrand returned shape {vals.shape}, expected {w.shape}")
        re = np.ascontiguousarray(vals.real, dtype=float)
        im = np.ascontiguousarray(np.imag(vals), dtype=float)
        sr, si = kernels.weighted_sum(re, im, np.ascontiguousarray(w))
        return np.array(complex(sr, si))

    return complex(reduce_chunks(grid, chunk_fn, threads))


@dataclass(frozen=True)
class MCEstimate:
    value: complex
    stderr: float
    samples: int
    seed: int


def mc_integrate(f, n, samples, seed):
    """Plain Monte Carlo over [0,1]^(n-1) x [0,2pi]^(n-1) with flat density."""
    samples = int(samples)
    if samples < 100:
        raise ValidationError("Monte Carlo needs at least 100 samples")
    rng = np.random.default_rng(seed)
    d = n - 1
    radii = rng.random((samples, d))
    angles = rng.random((samples, d)) * TWO_PI
    vals = np.asarray(f(radii, angles))
    if vals.ndim == 0:
        vals = np.full(samples, vals)
    volume = TWO_PI ** d
    mean = np.mean(vals)
    if np.all(vals == vals.flat[0]):
        spread = 0.0
    else:
        spread = float(np.sqrt(np.sum(np.abs(vals - mean) ** 2) / (samples - 1)))
    value = volume * mean
    if not np.iscomplexobj(vals):
        value = float(value)
    return MCEstimate(value, volume * spread / math.sqrt(samples), samples, int(seed))
