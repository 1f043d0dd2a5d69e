"""Select the compiled kernel module when available, else the pure-Python one.

Set QONSAGER_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("QONSAGER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

qpoch = active.qpoch
qpoch_inf = active.qpoch_inf
qsum_divfree = active.qsum_divfree
sum_divfree = active.sum_divfree
aw_poly = active.aw_poly
aw_poly_array = active.aw_poly_array
qpoch_inf_array = active.qpoch_inf_array
