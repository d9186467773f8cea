"""Pure Python/numpy versions of the accumulation kernels.

Scalar sums go through ``math.fsum``. The frame accumulation reduces along a
contiguous last axis so numpy's pairwise summation applies.
"""
import math

import numpy as np


def weighted_sum(re, im, w):
    w = np.asarray(w, dtype=float)
    re = np.ascontiguousarray(np.asarray(re, dtype=float) * w)
    im = np.ascontiguousarray(np.asarray(im, dtype=float) * w)
    if re.shape != w.shape or im.shape != w.shape:
        raise ValueError("length mismatch")
    return math.fsum(re.tolist()), math.fsum(im.tolist())


def frame_accumulate(g, w):
    g = np.asarray(g, dtype=np.complex128)
    w = np.asarray(w, dtype=float)
    if w.shape[0] != g.shape[0]:
        raise ValueError("weight length mismatch")
    # (D, D, nodes) with the node axis contiguous for pairwise reduction
    terms = np.einsum("kiq,kjq->ijk", g, g.conj(), optimize=True) * w
    terms = np.ascontiguousarray(terms)
    out = terms.real.sum(axis=-1) + 1j * terms.imag.sum(axis=-1)
    upper = np.triu(out)
    return upper + np.triu(out, 1).conj().T
