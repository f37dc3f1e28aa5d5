"""Hot numeric kernels with backend selection at import.

The compiled Cython extension is preferred when present; the pure-Python twin
in reference.py is the fallback.  Set POMLAB_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the backend-parity tests).
"""

import os

from . import reference

if os.environ.get("POMLAB_PURE_PYTHON"):
    _impl = reference
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = reference

BACKEND = _impl.BACKEND
herm2_eigvals = _impl.herm2_eigvals
trace_norm_herm2 = _impl.trace_norm_herm2
hermitian_eigvals = _impl.hermitian_eigvals
pom_success_penalty = _impl.pom_success_penalty
pom_objective = _impl.pom_objective
