"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-numpy fallback is used. Set ``NMFCOMM_KERNELS=pure`` (or ``compiled``)
to force a backend; forcing ``compiled`` raises if the extension is
missing rather than silently falling back.
"""

import os

import numpy as np

from . import _kernels_py

_FORCED = os.environ.get("NMFCOMM_KERNELS", "").strip().lower()

if _FORCED == "pure":
    _impl = _kernels_py
elif _FORCED == "compiled":
    from . import _kernels_cy as _impl
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'pure'."""
    return _impl.BACKEND


def _c64(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def reconstruct(w, h):
    return _impl.reconstruct(_c64(w), _c64(h))


def kl_data_fit(v, v_hat, eps):
    return float(_impl.kl_data_fit(_c64(v), _c64(v_hat), float(eps)))


def multiplicative_update_h(v, w, h, beta, eps):
    return np.asarray(
        _impl.multiplicative_update_h(_c64(v), _c64(w), _c64(h), _c64(beta), float(eps))
    )


def multiplicative_update_w(v, w, h, beta, eps):
    return np.asarray(
        _impl.multiplicative_update_w(_c64(v), _c64(w), _c64(h), _c64(beta), float(eps))
    )
