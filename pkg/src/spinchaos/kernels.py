"""Kernel backend selection.

Imports the compiled extension when present, otherwise the numpy fallback.
Set SPINCHAOS_FORCE_PY=1 to force the fallback (used by the benchmark and
by backend-equivalence tests).
"""

from __future__ import annotations

import os

import numpy as np

from .walsh import CharacterExpansion, energies_by_fwht, parities, popcount_int64, spin_neighbors

if os.environ.get("SPINCHAOS_FORCE_PY"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND

run_metropolis = _impl.run_metropolis
gray_energy_table_raw = _impl.gray_energy_table


def gray_energy_table(exp: CharacterExpansion) -> np.ndarray:
    """All-configuration field table via the incremental Gray-code walk."""
    indptr, indices = spin_neighbors(exp.masks, exp.n)
    m0 = np.where(popcount_int64(exp.masks) % 2 == 0, 1.0, -1.0)
    e0 = float(exp.weights @ m0)
    out = np.empty(1 << exp.n, dtype=np.float64)
    gray_energy_table_raw(exp.n, indptr, indices,
                          np.ascontiguousarray(exp.weights), m0, e0, out)
    return out


def fwht_energy_table(exp: CharacterExpansion) -> np.ndarray:
    """All-configuration field table via the Walsh-Hadamard transform."""
    return energies_by_fwht(exp)


def energy_table(exp: CharacterExpansion) -> np.ndarray:
    """Default strategy: Gray walk when compiled, otherwise the transform."""
    if BACKEND == "cython":
        return gray_energy_table(exp)
    return fwht_energy_table(exp)


def initial_parities(exp: CharacterExpansion, spins: np.ndarray) -> np.ndarray:
    """Subset parities chi_U(sigma) as the float vector the kernels mutate."""
    return parities(exp.masks, spins).astype(np.float64)
