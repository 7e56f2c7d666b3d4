"""Pick the compiled kernels when available, the pure-Python ones otherwise."""
import os

if os.environ.get("REANNEAL_PURE_PYTHON"):
    from . import _pykernels as kernels
    NAME = "python"
else:
    try:
        from . import _kernels as kernels
        NAME = "cython"
    except ImportError:
        from . import _pykernels as kernels
        NAME = "python"

piqa_mcs = kernels.piqa_mcs
classical_sweeps = kernels.classical_sweeps
