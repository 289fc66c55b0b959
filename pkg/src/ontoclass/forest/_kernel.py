"""Split-kernel selection: compiled extension when available, numpy otherwise.

Set ONTOCLASS_PURE_PYTHON=1 to force the fallback. Both kernels produce
bit-identical splits (tested), so the choice never changes a trained model.
"""

import os

from . import _split_py

BACKEND = "python"
best_split_sorted = _split_py.best_split_sorted

if not os.environ.get("ONTOCLASS_PURE_PYTHON"):
    try:
        from . import _split_cy

        BACKEND = "cython"
        best_split_sorted = _split_cy.best_split_sorted
    except ImportError:
        pass
