"""Backend selection for the hot accumulation kernels.

The compiled extension is used when it was built; otherwise, or when
``VCSLAB_PURE_PYTHON=1`` is set, the numpy fallback is used. Both expose
``weighted_sum`` and ``frame_accumulate`` with identical semantics.
"""
import os

from . import _kernels_py

try:
    if os.environ.get("VCSLAB_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]


def use_backend(name):
    """Switch the active backend (``"cython"`` or ``"python"``)."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}")
    BACKEND, _impl = name, BACKENDS[name]


def weighted_sum(re, im, w):
    return _impl.weighted_sum(re, im, w)


def frame_accumulate(g, w):
    return _impl.frame_accumulate(g, w)
