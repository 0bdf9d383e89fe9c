"""Backend selection for the hot numerical kernels.

The compiled extension is preferred when importable; otherwise the numpy
fallback is used.  ``LMFD_BACKEND`` overrides the choice: ``native`` requires
the extension (ImportError if missing), ``python`` forces the fallback,
``auto`` (default) picks the best available.
"""

from __future__ import annotations

import os

from . import numpy_backend

_choice = os.environ.get("LMFD_BACKEND", "auto").lower()

if _choice not in ("auto", "native", "python"):
    raise ValueError(f"LMFD_BACKEND must be auto, native, or python, not {_choice!r}")

if _choice == "python":
    _impl = numpy_backend
    BACKEND = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _choice == "native":
            raise
        _impl = numpy_backend
        BACKEND = "python"

rank_avg = _impl.rank_avg
pearson = _impl.pearson
spearman_vs_index = _impl.spearman_vs_index
ewma_imputed = _impl.ewma_imputed

__all__ = ["BACKEND", "rank_avg", "pearson", "spearman_vs_index", "ewma_imputed"]
