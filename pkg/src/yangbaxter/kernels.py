"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``YANGBAXTER_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

BACKENDS = {"python": _fallback}

try:
    from ._ext import _kernels as _compiled
except ImportError:
    _compiled = None
else:
    BACKENDS["cython"] = _compiled

if _compiled is not None and os.environ.get("YANGBAXTER_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]


def transfer_matrix(w, n, backend=None):
    impl = _impl if backend is None else BACKENDS[backend]
    return impl.transfer_matrix(w, n)
