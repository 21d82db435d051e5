"""Character expansion of p-spin forms over the hypercube.

Because sigma_i^2 = 1, the dense degree-p form sum_T g_T sigma_{i1}..sigma_ip
collapses exactly to a multilinear polynomial sum_U w_U chi_U(sigma), where U
ranges over index subsets of size <= p with |U| = p (mod 2) and chi_U is the
parity over U.  Everything downstream (exact tables, incremental Metropolis
updates, overlap laws, factorized moments) works on this representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MemoryBudget

MAX_SPINS = 63  # subset masks are stored in int64 words


def popcount_table(n_bits: int) -> np.ndarray:
    """Popcount of every integer in [0, 2^n_bits) as uint8."""
    pc = np.zeros(1 << n_bits, dtype=np.uint8)
    for b in range(n_bits):
        half = 1 << b
        pc[half : 2 * half] = pc[:half] + 1
    return pc


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    Output[b] = sum_m a[m] * (-1)^popcount(b & m); applying it twice gives
    2^n times the input.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        a = a.reshape(a.shape[:-1] + (-1, 2, h))
        x = a[..., 0, :].copy()
        y = a[..., 1, :].copy()
        a[..., 0, :] = x + y
        a[..., 1, :] = x - y
        a = a.reshape(a.shape[:-3] + (n,))
        h *= 2
    return a


def tuple_masks(n: int, p: int) -> np.ndarray:
    """Odd-multiplicity subset mask of every ordered p-tuple over [0, n).

    Entry t of the returned int64 array is XOR of (1 << i_k) over the tuple
    coordinates, with tuples enumerated in row-major (C) order, matching the
    flat layout of coupling tensors.
    """
    if n > MAX_SPINS:
        raise MemoryBudget(f"N={n} exceeds the {MAX_SPINS}-bit mask limit")
    masks = np.zeros(1, dtype=np.int64)
    bits = (np.int64(1) << np.arange(n, dtype=np.int64))
    for _ in range(p):
        masks = (masks[:, None] ^ bits[None, :]).reshape(-1)
    return masks


@dataclass
class CharacterExpansion:
    """One scalar field on the hypercube: E(sigma) = sum_k weights[k] * chi_{masks[k]}(sigma)."""

    n: int
    masks: np.ndarray  # int64, strictly increasing
    weights: np.ndarray  # float64, aligned with masks

    def __len__(self):
        return len(self.masks)

    def evaluate(self, spins: np.ndarray) -> float:
        """Direct evaluation for one +-1 spin vector (reference path)."""
        return float(self.weights @ parities(self.masks, spins))

    def scaled(self, c: float) -> "CharacterExpansion":
        return CharacterExpansion(self.n, self.masks, self.weights * c)


def expand_tensor(entries: np.ndarray, n: int, p: int, scale: float = 1.0) -> CharacterExpansion:
    """Aggregate a flat dense p-tensor into its character expansion.

    ``scale`` multiplies all weights (used for the N^{-(p-1)/2} Hamiltonian
    normalization and coefficient factors).
    """
    if entries.shape != (n**p,):
        raise ValueError(f"expected {n**p} entries, got {entries.shape}")
    masks = tuple_masks(n, p)
    order = np.argsort(masks, kind="stable")
    sorted_masks = masks[order]
    sorted_w = entries[order]
    uniq, start = np.unique(sorted_masks, return_index=True)
    sums = np.add.reduceat(sorted_w, start)
    return CharacterExpansion(n, uniq, sums * scale)


def merge_expansions(parts: list[CharacterExpansion]) -> CharacterExpansion:
    """Sum several expansions over the union of their masks."""
    if not parts:
        raise ValueError("nothing to merge")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise ValueError("mixed system sizes")
    masks = np.concatenate([p.masks for p in parts])
    weights = np.concatenate([p.weights for p in parts])
    order = np.argsort(masks, kind="stable")
    masks = masks[order]
    weights = weights[order]
    uniq, start = np.unique(masks, return_index=True)
    return CharacterExpansion(n, uniq, np.add.reduceat(weights, start))


def align_to_masks(exp: CharacterExpansion, masks: np.ndarray) -> np.ndarray:
    """Weights of ``exp`` re-indexed onto a superset mask array."""
    out = np.zeros(len(masks), dtype=np.float64)
    pos = np.searchsorted(masks, exp.masks)
    if np.any(pos >= len(masks)) or np.any(masks[pos] != exp.masks):
        raise ValueError("mask array does not contain the expansion masks")
    out[pos] = exp.weights
    return out


def parities(masks: np.ndarray, spins: np.ndarray) -> np.ndarray:
    """chi_U(sigma) for each mask, sigma given as a +-1 int vector."""
    n = len(spins)
    neg = np.where(np.asarray(spins) < 0)[0]
    neg_mask = np.int64(0)
    for i in neg:
        neg_mask |= np.int64(1) << np.int64(i)
    counts = popcount_int64(masks & neg_mask)
    return np.where(counts % 2 == 0, 1.0, -1.0)


def popcount_int64(x: np.ndarray) -> np.ndarray:
    """Vectorized popcount of an int64 array."""
    x = x.astype(np.uint64)
    c = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        c += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return c


def spin_neighbors(masks: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR lists of the subsets containing each spin.

    Returns (indptr, indices): indices[indptr[k]:indptr[k+1]] are positions
    in ``masks`` whose subset contains spin k.  This is the adjacency used
    by the Gray-code and Metropolis kernels.
    """
    counts = np.zeros(n + 1, dtype=np.int64)
    hit = []
    for k in range(n):
        sel = np.nonzero((masks >> np.int64(k)) & np.int64(1))[0]
        hit.append(sel.astype(np.int64))
        counts[k + 1] = counts[k] + len(sel)
    indices = np.concatenate(hit) if hit else np.zeros(0, dtype=np.int64)
    return counts, indices


def energies_by_fwht(exp: CharacterExpansion, budget: int = 1 << 26) -> np.ndarray:
    """Field values at every configuration, indexed by spin bits.

    Configuration b has sigma_i = +1 where bit i of b is set.  Exact up to
    floating point; cost O(2^n * n).
    """
    size = 1 << exp.n
    if size > budget:
        raise MemoryBudget(f"2^{exp.n} table exceeds budget {budget}")
    coeff = np.zeros(size, dtype=np.float64)
    signs = np.where(popcount_int64(exp.masks) % 2 == 0, 1.0, -1.0)
    np.add.at(coeff, exp.masks, signs * exp.weights)
    return fwht(coeff)


def correlation_table(probs: np.ndarray) -> np.ndarray:
    """<chi_U> for every mask U under a probability vector on configurations.

    corr[U] = sum_b probs[b] * chi_U(sigma_b); computed as a single Walsh
    transform with the parity sign fixup.
    """
    n = int(np.log2(len(probs)))
    t = fwht(probs)
    pc = popcount_table(n)
    signs = np.where(pc % 2 == 0, 1.0, -1.0)
    return signs * t


def xor_convolve(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """(p1 * p2)[e] = sum_b p1[b] p2[b ^ e], via Walsh transforms."""
    if len(p1) != len(p2):
        raise ValueError("length mismatch")
    out = fwht(fwht(p1) * fwht(p2))
    out /= len(p1)
    return out
