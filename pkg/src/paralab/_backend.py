"""Select the jet kernel implementation at import time.

The compiled extension is used when it has been built; setting the
environment variable ``PARALAB_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _jetcore_py

NAME = "python"
mul = _jetcore_py.mul
compose = _jetcore_py.compose

if os.environ.get("PARALAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _jetcore
    except ImportError:  # extension not built
        pass
    else:
        NAME = "cython"
        mul = _jetcore.mul
        compose = _jetcore.compose
