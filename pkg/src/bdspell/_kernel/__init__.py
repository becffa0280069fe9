"""Kernel selection: compiled extension when built, pure Python otherwise.

Set BDSPELL_PURE=1 to force the pure-Python loop (used by the kernel
benchmark and by tests that cross-check the two implementations).
"""

import os

from . import pyloop

HAVE_FAST = False
run_stream = pyloop.run_stream
KERNEL_NAME = "pure-python"

if os.environ.get("BDSPELL_PURE") != "1":
    try:
        from . import _fastloop

        run_stream = _fastloop.run_stream
        HAVE_FAST = True
        KERNEL_NAME = "compiled"
    except ImportError:
        pass
