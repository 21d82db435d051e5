"""Pure-Python/numpy fallback for the hot kernels.

Same call signatures and semantics as the compiled ``spinchaos._kernels``
extension; used when the extension is unavailable or when forced via the
SPINCHAOS_FORCE_PY environment variable.  Roughly two orders of magnitude
slower on the sequential loops, so large-N work should use the extension.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def gray_energy_table(n, indptr, indices, weights, m0, e0, out):
    """Fill ``out`` (size 2^n) with field values in configuration-bit order.

    Walks the binary-reflected Gray code: step i flips spin ctz(i), the
    parities of the subsets containing that spin flip sign, and the field
    changes by twice their new weighted sum.
    """
    m = np.asarray(m0, dtype=np.float64)
    nbrs = [indices[indptr[k] : indptr[k + 1]] for k in range(n)]
    w = np.asarray(weights, dtype=np.float64)
    out[0] = e = e0
    g = 0
    for i in range(1, 1 << n):
        k = (i & -i).bit_length() - 1
        sel = nbrs[k]
        m[sel] = -m[sel]
        e += 2.0 * float(w[sel] @ m[sel])
        g ^= 1 << k
        out[g] = e
    return out


def run_metropolis(spins, m, indptr, indices, weights, scale, uniforms, energy):
    """Systematic single-spin-flip Metropolis sweeps on exp(scale * H).

    ``uniforms`` has one row per sweep and one column per spin; the state
    arrays ``spins`` (+-1 int8) and ``m`` (subset parities) are updated in
    place.  Returns (new energy, accepted proposal count).
    """
    n = len(spins)
    nbrs = [indices[indptr[k] : indptr[k + 1]] for k in range(n)]
    w = np.asarray(weights, dtype=np.float64)
    accepts = 0
    for sweep in range(uniforms.shape[0]):
        row = uniforms[sweep]
        for k in range(n):
            sel = nbrs[k]
            dh = -2.0 * float(w[sel] @ m[sel])
            x = scale * dh
            if x >= 0.0 or row[k] < math.exp(x):
                spins[k] = -spins[k]
                m[sel] = -m[sel]
                energy += dh
                accepts += 1
    return energy, accepts
