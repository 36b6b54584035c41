"""Backend selection for the vector kernels.

The compiled extension is preferred when it imported cleanly; the pure
Python module is the fallback and the reference implementation.  Set
``QMONTY_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the backend-equivalence tests).  Both backends draw from the
supplied numpy Generator in the same order, so simulations are
reproducible regardless of which one is active.
"""

from __future__ import annotations

import os

if os.environ.get("QMONTY_PURE_PYTHON"):
    from . import _pure as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        # built without the extension, e.g. QMONTY_SKIP_NATIVE installs
        from . import _pure as _impl

BACKEND = _impl.BACKEND

inner = _impl.inner
norm_sq = _impl.norm_sq
normalize = _impl.normalize
cross_conj = _impl.cross_conj
phase_normalize = _impl.phase_normalize
born = _impl.born
project_onto = _impl.project_onto
project_out = _impl.project_out
lueders = _impl.lueders
haar_unit = _impl.haar_unit
real_unit = _impl.real_unit
complement_basis = _impl.complement_basis
unit_in_complement = _impl.unit_in_complement

__all__ = [
    "BACKEND",
    "inner",
    "norm_sq",
    "normalize",
    "cross_conj",
    "phase_normalize",
    "born",
    "project_onto",
    "project_out",
    "lueders",
    "haar_unit",
    "real_unit",
    "complement_basis",
    "unit_in_complement",
]
