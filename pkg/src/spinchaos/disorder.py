"""Correlated Gaussian disorder for the coupled pair, with counter-based seeding.

Each degree p gets three independent standard-Gaussian tensors (shared g,
private z1, private z2) drawn from streams keyed by (master seed, sample
index, role, degree), so any tensor can be regenerated independently and in
any order.  The system tensors are the exact mixture
g^j = sqrt(t_p) g + sqrt(1 - t_p) z^j, which realizes the target entrywise
correlation t_p by construction.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import DimensionMismatch, MemoryBudget
from .model import CoupledModelSpec

GENERATOR = "philox"  # recorded in run manifests; bit-exactness is per generator

_ROLE_SHARED = 0
_ROLE_PRIVATE = {1: 1, 2: 2}

DEFAULT_ENTRY_BUDGET = 1 << 26


@dataclass(frozen=True)
class DisorderSeed:
    """(master, sample_index) fully determines every generated tensor."""

    master: int
    sample_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master < 2**64:
            raise ValueError("master seed must fit in 64 bits")
        if self.sample_index < 0:
            raise ValueError("sample_index must be >= 0")


@dataclass
class CouplingTensor:
    """Flat row-major array of N^p standard-Gaussian couplings."""

    degree: int
    n: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.n**self.degree,):
            raise ValueError("entry count != N^p")


def _stream(seed: DisorderSeed, role: int, p: int) -> np.random.Generator:
    ss = np.random.SeedSequence(
        entropy=seed.master, spawn_key=(seed.sample_index, role, p)
    )
    return np.random.Generator(np.random.Philox(ss))


def _draw(seed: DisorderSeed, role: int, p: int, n: int) -> CouplingTensor:
    g = _stream(seed, role, p)
    return CouplingTensor(p, n, g.standard_normal(n**p))


@dataclass
class DegreeDisorder:
    """Realized tensors for one degree: mixture parts and the two systems."""

    degree: int
    n: int
    t: float
    g1: CouplingTensor
    g2: CouplingTensor
    shared: Optional[CouplingTensor] = None
    private1: Optional[CouplingTensor] = None
    private2: Optional[CouplingTensor] = None


@dataclass
class CoupledDisorder:
    """All tensors for one disorder realization of the coupled pair."""

    n: int
    spec: CoupledModelSpec
    seed: DisorderSeed
    degrees: dict[int, DegreeDisorder] = field(default_factory=dict)

    def tensor(self, system: int, p: int) -> CouplingTensor:
        dd = self.degrees[p]
        return dd.g1 if system == 1 else dd.g2

    def private_tensor(self, system: int, p: int) -> CouplingTensor:
        """Independent part z^j for degree p, materializing it if skipped.

        Needed by the concentration diagnostics even when t_p = 1 (where the
        mixture itself never touches z).
        """
        if p not in self.degrees:
            self.degrees[p] = _build_degree(self.spec, self.n, self.seed, p)
        dd = self.degrees[p]
        attr = "private1" if system == 1 else "private2"
        if getattr(dd, attr) is None:
            setattr(dd, attr, _draw(self.seed, _ROLE_PRIVATE[system], p, self.n))
        return getattr(dd, attr)


def _build_degree(spec: CoupledModelSpec, n: int, seed: DisorderSeed, p: int) -> DegreeDisorder:
    t = spec.coupling.t(p)
    if t >= 1.0:
        shared = _draw(seed, _ROLE_SHARED, p, n)
        return DegreeDisorder(p, n, t, g1=shared, g2=shared, shared=shared)
    if t <= 0.0:
        z1 = _draw(seed, _ROLE_PRIVATE[1], p, n)
        z2 = _draw(seed, _ROLE_PRIVATE[2], p, n)
        return DegreeDisorder(p, n, t, g1=z1, g2=z2, private1=z1, private2=z2)
    shared = _draw(seed, _ROLE_SHARED, p, n)
    z1 = _draw(seed, _ROLE_PRIVATE[1], p, n)
    z2 = _draw(seed, _ROLE_PRIVATE[2], p, n)
    rt, ru = np.sqrt(t), np.sqrt(1.0 - t)
    g1 = CouplingTensor(p, n, rt * shared.entries + ru * z1.entries)
    g2 = CouplingTensor(p, n, rt * shared.entries + ru * z2.entries)
    return DegreeDisorder(p, n, t, g1=g1, g2=g2, shared=shared, private1=z1, private2=z2)


def sample_coupled_disorder(
    spec: CoupledModelSpec,
    n: int,
    seed: DisorderSeed,
    entry_budget: int = DEFAULT_ENTRY_BUDGET,
) -> CoupledDisorder:
    """Materialize tensors for every degree in the union support."""
    if n < 1:
        raise DimensionMismatch("N must be >= 1")
    degrees = spec.degrees
    total = sum(n**p for p in degrees)
    if total > entry_budget:
        raise MemoryBudget(
            f"sum of N^p = {total} entries exceeds budget {entry_budget}"
        )
    out = CoupledDisorder(n, spec, seed)
    for p in degrees:
        out.degrees[p] = _build_degree(spec, n, seed, p)
    return out


_MAGIC = b"SPCD"
_VERSION = 1


def dump_disorder(dis: CoupledDisorder, path: str) -> None:
    """Binary dump (little-endian float64 tensors with a small header)."""
    degs = sorted(dis.degrees)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IIQQI", _VERSION, dis.n, dis.seed.master,
                             dis.seed.sample_index, len(degs)))
        for p in degs:
            dd = dis.degrees[p]
            fh.write(struct.pack("<Id", p, dd.t))
            for tensor in (dd.g1, dd.g2):
                fh.write(tensor.entries.astype("<f8").tobytes())


def load_disorder(path: str, spec: CoupledModelSpec) -> CoupledDisorder:
    """Reload a dump; only the system tensors g1/g2 are stored for replay."""
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ValueError("not a disorder dump")
        version, n, master, sample_index, n_deg = struct.unpack("<IIQQI", fh.read(28))
        if version != _VERSION:
            raise ValueError(f"unsupported dump version {version}")
        out = CoupledDisorder(n, spec, DisorderSeed(master, sample_index))
        for _ in range(n_deg):
            p, t = struct.unpack("<Id", fh.read(12))
            size = n**p
            g1 = np.frombuffer(fh.read(8 * size), dtype="<f8").copy()
            g2 = np.frombuffer(fh.read(8 * size), dtype="<f8").copy()
            out.degrees[p] = DegreeDisorder(
                p, n, t,
                g1=CouplingTensor(p, n, g1),
                g2=CouplingTensor(p, n, g2),
            )
        return out


def harness_seed(master: int, n: int, sample_index: int) -> DisorderSeed:
    """Per-unit seed derivation used by experiment sweeps.

    Folds N into the sample counter so that every (N, sample) pair maps to
    a distinct, scheduler-independent stream family.
    """
    mix = np.random.SeedSequence(entropy=master, spawn_key=(n,))
    sub = int(mix.generate_state(1, np.uint64)[0])
    return DisorderSeed(sub, sample_index)


def iter_seeds(master: int, n: int, count: int) -> Iterable[DisorderSeed]:
    for idx in range(count):
        yield harness_seed(master, n, idx)
