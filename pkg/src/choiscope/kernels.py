"""Select the see-saw kernel: compiled extension if importable, else pure Python.

Set ``CHOISCOPE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _seesaw_py
from .errors import ArgumentError

try:
    from . import _seesaw_ext
except ImportError:  # extension not built
    _seesaw_ext = None

BACKENDS = {"python": _seesaw_py}
if _seesaw_ext is not None:
    BACKENDS["compiled"] = _seesaw_ext

if os.environ.get("CHOISCOPE_PURE_PYTHON", "") not in ("", "0"):
    default = _seesaw_py
else:
    default = _seesaw_ext or _seesaw_py


def get_backend(name=None):
    if name is None:
        return default
    try:
        return BACKENDS[name]
    except KeyError:
        raise ArgumentError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
