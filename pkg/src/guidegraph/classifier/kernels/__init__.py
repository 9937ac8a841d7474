"""SGD kernel selection: compiled extension with pure-Python fallback.

``GUIDEGRAPH_PURE_KERNEL=1`` forces the fallback (useful for the
benchmark and for debugging).
"""

import os

from . import pure

COMPILED_AVAILABLE = False
try:
    from . import _hinge as _compiled

    COMPILED_AVAILABLE = True
except ImportError:
    _compiled = None

if COMPILED_AVAILABLE and os.environ.get("GUIDEGRAPH_PURE_KERNEL") != "1":
    hinge_epoch = _compiled.hinge_epoch
    KERNEL_NAME = "compiled"
else:
    hinge_epoch = pure.hinge_epoch
    KERNEL_NAME = "pure"

__all__ = ["hinge_epoch", "COMPILED_AVAILABLE", "KERNEL_NAME", "pure"]
