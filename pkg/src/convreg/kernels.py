"""Float kernel selector: compiled extension when built, numpy otherwise.

Set ``CONVREG_KERNELS=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CONVREG_KERNELS") == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
nnls = _impl.nnls
project_polyhedron = _impl.project_polyhedron
batch_polyhedron_distance = _impl.batch_polyhedron_distance
project_cone = _impl.project_cone
min_decomposition = _impl.min_decomposition
batch_min_decomposition = _impl.batch_min_decomposition
batch_cone_distance_ratio = _impl.batch_cone_distance_ratio
