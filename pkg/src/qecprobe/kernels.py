"""Backend dispatch for the numeric hot kernels.

By default the numba-compiled kernels are used when numba imports cleanly.
Set ``QECPROBE_NO_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) before
import to force the pure-numpy implementations; ``BACKEND`` records which
one is active.  Both backends expose the same four functions and agree
numerically (see tests/test_kernels.py and benchmarks/).
"""

from __future__ import annotations

import os


def _truthy(value) -> bool:
    return str(value).strip().lower() in {"1", "true", "yes", "on"}


_forced_numpy = _truthy(os.environ.get("QECPROBE_NO_NUMBA", "")) or _truthy(
    os.environ.get("NUMBA_DISABLE_JIT", "")
)

if _forced_numpy:
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"

pauli_apply = _impl.pauli_apply
pauli_expectation = _impl.pauli_expectation
evolve_terms = _impl.evolve_terms
run_trajectories = _impl.run_trajectories


def warmup() -> str:
    """Trigger JIT compilation (no-op on the numpy backend); returns BACKEND."""
    import numpy as np

    amps = np.array([1.0 + 0j, 0.0 + 0j], dtype=np.complex128)
    pauli_apply(amps, 1, 0, 1.0 + 0j)
    pauli_expectation(amps, 0, 1, 1.0 + 0j)
    one = np.ones(1, dtype=np.int64)
    evolve_terms(amps, one, one * 0, np.ones(1, dtype=np.complex128), np.zeros(1))
    run_trajectories(
        amps,
        amps,
        1,
        one, one * 0, np.ones(1, dtype=np.complex128), np.zeros(1),
        one, one * 0, np.ones(1, dtype=np.complex128), 0.0,
        one * 0, one, np.ones(1, dtype=np.complex128),
        np.zeros(2, dtype=np.int64), np.zeros(2, dtype=np.int64),
        np.ones(2, dtype=np.complex128), np.ones(2, dtype=bool),
        0, 1, 1.0 + 0j,
        np.full((1, 2), 0.5),
    )
    return BACKEND
