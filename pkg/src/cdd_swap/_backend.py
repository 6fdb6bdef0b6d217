"""Selects the memory-convolution implementation at import time.

The compiled extension is used when it was built; set
``CDD_SWAP_BACKEND=python`` to force the NumPy fallback.
"""

import os

from . import _history_py

if os.environ.get("CDD_SWAP_BACKEND", "").lower() == "python":
    history_convolution = _history_py.history_convolution
    BACKEND = "python"
else:
    try:
        from ._history_ext import history_convolution
        BACKEND = "cython"
    except ImportError:
        history_convolution = _history_py.history_convolution
        BACKEND = "python"
