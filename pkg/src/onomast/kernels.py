"""Similarity kernel selection.

Imports the compiled extension when present, otherwise the pure-Python
fallback.  ONOMAST_PURE_PYTHON=1 forces the fallback (used by tests and
benchmarks to compare backends).
"""

from __future__ import annotations

import os

if os.environ.get("ONOMAST_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on build environment
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
encode = _impl.encode
cosine = _impl.cosine
cosine_many = _impl.cosine_many
