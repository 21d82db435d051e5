"""Model specification and the decision procedures for the chaos conditions.

A coupled model is two mixed p-spin coefficient sequences plus a per-degree
correlation t_p between their Gaussian disorders.  The condition checker
decides which of the decorrelation / temperature-perturbation criteria hold
for a given pair, using the Muntz divergence criterion (sum of 1/p diverges)
to certify that a symbolic set of degrees spans a dense family of powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .errors import InvalidWitness

# relative tolerance for "beta2 == tau * beta1" ratio matching
_RATIO_RTOL = 1e-9


@dataclass(frozen=True)
class MixedSpinParams:
    """Coefficient sequence beta_p of a mixed p-spin Hamiltonian.

    Only nonzero coefficients are stored; the support is therefore finite,
    which automatically satisfies the sum 2^p beta_p^2 < inf requirement.
    """

    betas: Mapping[int, float]

    def __post_init__(self):
        clean = {}
        for p, b in self.betas.items():
            p = int(p)
            if p < 1:
                raise ValueError(f"degree {p} < 1")
            b = float(b)
            if not math.isfinite(b):
                raise ValueError(f"beta_{p} not finite")
            if b != 0.0:
                clean[p] = b
        object.__setattr__(self, "betas", dict(sorted(clean.items())))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.betas)

    def beta(self, p: int) -> float:
        return self.betas.get(p, 0.0)

    def __getitem__(self, p: int) -> float:
        return self.betas[p]


@dataclass(frozen=True)
class IndexSetPattern:
    """Symbolic description of a (possibly infinite) set of degrees.

    Variants: a finite explicit list, all evens from ``start``, all odds
    from ``start``, or every integer from ``start``.  Membership is
    decidable for each variant.
    """

    kind: str  # "finite" | "evens" | "odds" | "all"
    degrees: tuple[int, ...] = ()
    start: int = 1

    def __post_init__(self):
        if self.kind not in ("finite", "evens", "odds", "all"):
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "finite":
            degs = tuple(sorted(set(int(p) for p in self.degrees)))
            if degs and degs[0] < 1:
                raise ValueError("degrees must be >= 1")
            object.__setattr__(self, "degrees", degs)
        else:
            if self.start < 1:
                raise ValueError("start must be >= 1")
            if self.kind == "evens" and self.start % 2:
                raise ValueError("evens pattern needs an even start")
            if self.kind == "odds" and self.start % 2 == 0:
                raise ValueError("odds pattern needs an odd start")

    @classmethod
    def finite(cls, degrees: Sequence[int]) -> "IndexSetPattern":
        return cls("finite", degrees=tuple(degrees))

    @classmethod
    def evens(cls, start: int = 2) -> "IndexSetPattern":
        return cls("evens", start=start)

    @classmethod
    def odds(cls, start: int = 1) -> "IndexSetPattern":
        return cls("odds", start=start)

    @classmethod
    def all_from(cls, start: int = 1) -> "IndexSetPattern":
        return cls("all", start=start)

    @classmethod
    def parse(cls, text: str) -> "IndexSetPattern":
        """Parse ``"evens:4"``, ``"odds:3"``, ``"all:1"`` or ``"2,4,6"``."""
        text = text.strip()
        if ":" in text:
            kind, _, start = text.partition(":")
            return cls(kind.strip(), start=int(start))
        if text in ("evens", "odds", "all"):
            return cls(text, start={"evens": 2, "odds": 1, "all": 1}[text])
        return cls.finite([int(tok) for tok in text.split(",") if tok.strip()])

    def contains(self, p: int) -> bool:
        if self.kind == "finite":
            return p in self.degrees
        if p < self.start:
            return False
        if self.kind == "evens":
            return p % 2 == 0
        if self.kind == "odds":
            return p % 2 == 1
        return True

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def members_upto(self, p_max: int) -> tuple[int, ...]:
        return tuple(p for p in range(1, p_max + 1) if self.contains(p))

    def parity_part(self, parity: int) -> Optional["IndexSetPattern"]:
        """Restrict to even (parity=0) or odd (parity=1) degrees."""
        if self.kind == "finite":
            kept = tuple(p for p in self.degrees if p % 2 == parity)
            return IndexSetPattern.finite(kept) if kept else None
        if self.kind == "evens":
            return self if parity == 0 else None
        if self.kind == "odds":
            return self if parity == 1 else None
        start = self.start + (0 if self.start % 2 == parity else 1)
        return IndexSetPattern("evens" if parity == 0 else "odds", start=start)

    def __str__(self):
        if self.kind == "finite":
            return "{" + ",".join(map(str, self.degrees)) + "}"
        return f"{self.kind}>={self.start}"


@dataclass(frozen=True)
class CouplingSpec:
    """Per-degree disorder correlations t_p in [0, 1]."""

    correlations: Mapping[int, float] = field(default_factory=dict)
    default_correlation: float = 1.0

    def __post_init__(self):
        clean = {}
        for p, t in self.correlations.items():
            t = float(t)
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"t_{p}={t} outside [0,1]")
            clean[int(p)] = t
        if not 0.0 <= self.default_correlation <= 1.0:
            raise ValueError("default correlation outside [0,1]")
        object.__setattr__(self, "correlations", clean)

    def t(self, p: int) -> float:
        return self.correlations.get(p, self.default_correlation)


@dataclass(frozen=True)
class CoupledModelSpec:
    """Two coefficient sequences plus the disorder coupling between them."""

    params1: MixedSpinParams
    params2: MixedSpinParams
    coupling: CouplingSpec = field(default_factory=CouplingSpec)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.params1.support) | set(self.params2.support)))

    def params(self, system: int) -> MixedSpinParams:
        if system == 1:
            return self.params1
        if system == 2:
            return self.params2
        raise ValueError("system must be 1 or 2")

    @classmethod
    def from_dict(cls, d: Mapping) -> "CoupledModelSpec":
        """Build from the harness config mapping (beta/t as [p, value] pairs)."""
        b1 = {int(p): float(v) for p, v in d["betas1"]}
        b2 = {int(p): float(v) for p, v in d["betas2"]}
        ts = {int(p): float(v) for p, v in d.get("t", [])}
        return cls(
            MixedSpinParams(b1),
            MixedSpinParams(b2),
            CouplingSpec(ts, float(d.get("default_t", 1.0))),
        )

    def to_dict(self) -> dict:
        return {
            "betas1": [[p, v] for p, v in self.params1.betas.items()],
            "betas2": [[p, v] for p, v in self.params2.betas.items()],
            "t": [[p, v] for p, v in self.coupling.correlations.items()],
            "default_t": self.coupling.default_correlation,
        }


@dataclass(frozen=True)
class ClauseWitness:
    """Evidence for one decorrelation clause.

    ``via_set_difference`` means a degree exists in the other system only;
    otherwise ``pattern``/``tau``/``p0`` certify the proportional-on-a-dense-
    subset route.
    """

    holds: bool
    via_set_difference: bool = False
    p0: Optional[int] = None
    tau: Optional[float] = None
    pattern: Optional[IndexSetPattern] = None
    reason: str = ""


@dataclass
class ConditionReport:
    corrp_even: Optional[int]
    corrp_odd: Optional[int]
    c1e: ClauseWitness
    c1o: ClauseWitness
    c2e: ClauseWitness
    c2o: ClauseWitness

    @property
    def ce(self) -> bool:
        return (self.c1e.holds or self.c1o.holds) and (
            self.c2e.holds or self.c2o.holds
        )

    @property
    def co(self) -> bool:
        return self.c1o.holds and self.c2o.holds

    def summary_lines(self) -> list[str]:
        lines = [
            f"corrp_even={self.corrp_even}",
            f"corrp_odd={self.corrp_odd}",
        ]
        for name in ("c1e", "c1o", "c2e", "c2o"):
            w: ClauseWitness = getattr(self, name)
            lines.append(f"{name}={str(w.holds).lower()} ({w.reason})")
        lines.append(f"ce={str(self.ce).lower()}")
        lines.append(f"co={str(self.co).lower()}")
        return lines


def index_sets(
    params: MixedSpinParams,
) -> tuple[IndexSetPattern, IndexSetPattern, IndexSetPattern]:
    """Split the support into (all, even, odd) finite patterns."""
    sup = params.support
    evens = [p for p in sup if p % 2 == 0]
    odds = [p for p in sup if p % 2 == 1]
    return (
        IndexSetPattern.finite(sup),
        IndexSetPattern.finite(evens),
        IndexSetPattern.finite(odds),
    )


def muntz_dense(pattern: IndexSetPattern) -> bool:
    """Whether sum of 1/p over the pattern diverges.

    Divergence of the reciprocal sum is the Muntz criterion for the linear
    span of the powers x^p to be dense; finite patterns always fail it,
    every infinite arithmetic-progression variant passes.
    """
    return not pattern.is_finite


def _ratios_match(r1: float, r2: float) -> bool:
    return math.isclose(r1, r2, rel_tol=_RATIO_RTOL, abs_tol=1e-15)


def _check_clause(
    source: MixedSpinParams,
    other: MixedSpinParams,
    parity: int,
    witness: Optional[IndexSetPattern],
) -> ClauseWitness:
    """Decide one perturbation clause for (source -> other) at given parity.

    First route: the other system carries a degree of this parity that the
    source lacks.  Second route: on a witnessed dense sub-pattern the two
    sequences are proportional with ratio tau, while some remaining source
    degree breaks the proportionality.
    """
    i_src = set(p for p in source.support if p % 2 == parity)
    i_oth = set(p for p in other.support if p % 2 == parity)

    diff = sorted(i_oth - i_src)
    if diff:
        return ClauseWitness(
            True,
            via_set_difference=True,
            p0=diff[0],
            reason=f"degree {diff[0]} present only in the other system",
        )

    if witness is None:
        return ClauseWitness(False, reason="no set difference and no witness pattern")
    sub = witness.parity_part(parity)
    if sub is None:
        return ClauseWitness(False, reason="witness has no degrees of this parity")

    if not i_src:
        return ClauseWitness(False, reason="empty index set")
    p_max = max(i_src)
    members = [p for p in sub.members_upto(p_max)]
    stray = [p for p in members if p not in i_src]
    if stray:
        raise InvalidWitness(
            f"witness degrees {stray} not in the index set {sorted(i_src)}"
        )
    if not muntz_dense(sub):
        return ClauseWitness(False, reason="witness pattern fails the Muntz criterion")
    if not members:
        return ClauseWitness(False, reason="witness pattern empty below truncation")

    ratios = [other.beta(p) / source[p] for p in members]
    tau = ratios[0]
    if not all(_ratios_match(r, tau) for r in ratios[1:]):
        return ClauseWitness(
            False, reason="coefficient ratio not constant on the witness pattern"
        )
    breakers = sorted(
        p for p in i_src - set(members) if not _ratios_match(other.beta(p) / source[p], tau)
    )
    if not breakers:
        return ClauseWitness(
            False, reason="no degree outside the witness breaks the ratio"
        )
    p0 = breakers[0]
    return ClauseWitness(
        True,
        p0=p0,
        tau=tau,
        pattern=sub,
        reason=f"ratio {tau:g} on {sub}, broken at degree {p0}",
    )


def check_chaos_conditions(
    spec: CoupledModelSpec,
    c0_witness_1: Optional[IndexSetPattern] = None,
    c0_witness_2: Optional[IndexSetPattern] = None,
) -> ConditionReport:
    """Evaluate the decorrelation degrees and all four perturbation clauses.

    ``c0_witness_j`` is an optional symbolic pattern certifying the dense
    subset used by the second route of the system-j clauses (the finite
    truncated support can never certify density by itself).
    """
    shared = sorted(set(spec.params1.support) & set(spec.params2.support))
    decorr = [p for p in shared if spec.coupling.t(p) < 1.0]
    corrp_even = next((p for p in decorr if p % 2 == 0), None)
    corrp_odd = next((p for p in decorr if p % 2 == 1), None)

    return ConditionReport(
        corrp_even=corrp_even,
        corrp_odd=corrp_odd,
        c1e=_check_clause(spec.params1, spec.params2, 0, c0_witness_1),
        c1o=_check_clause(spec.params1, spec.params2, 1, c0_witness_1),
        c2e=_check_clause(spec.params2, spec.params1, 0, c0_witness_2),
        c2o=_check_clause(spec.params2, spec.params1, 1, c0_witness_2),
    )
