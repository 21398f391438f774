"""Select the compiled arithmetic kernels when available.

Set ``REALROADMAP_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

BACKEND = "python"

if os.environ.get("REALROADMAP_PURE_PYTHON") != "1":
    try:
        from ._kernels import *  # noqa: F401,F403

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import *  # noqa: F401,F403
