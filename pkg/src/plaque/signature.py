"""Signatures of backward orbits estimated from truncated index data.

Every verdict here is conditional on the depth and radii it was computed
with; the estimators never extrapolate past what the index words show.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (Cycle, Polynomial, Tolerances, critical_points, evaluate_orbit,
                       periodic_cycles)
from .pullback import (BackwardOrbit, PullbackChain, TraceConfig, backward_orbit_from_cycle,
                       engulf_search, index_bits, pullback_chain)
from .seqlattice import (EventuallyPeriodicSequence, Signature, TailClass, ZERO, canonicalize,
                         meet_chain_reduce, sig_shift, sq_class)

__all__ = [
    "EngineConfig",
    "IndexResult",
    "SignatureEstimate",
    "Prediction",
    "infer_tail",
    "index_class",
    "estimate_signature",
    "regularity_verdict",
    "predict_signature",
    "verify_cycle_theorem",
    "branching_count",
    "inverse_critical_probe",
]


@dataclass(frozen=True)
class EngineConfig:
    depth: int = 32
    r0: float = 0.1
    n_radii: int = 6
    radii: tuple[float, ...] | None = None
    eps: float = 1e-2             # admissibility radius around the orbit-closure sample
    budget: int = 10_000          # search nodes for engulfing chains
    n_sample: int = 5000          # forward steps for orbit-closure samples
    trace: TraceConfig = TraceConfig()
    tol: Tolerances = Tolerances()
    seed: int = 0

    def schedule(self) -> tuple[float, ...]:
        if self.radii is not None:
            return tuple(self.radii)
        return tuple(self.r0 * 2.0 ** -j for j in range(self.n_radii))

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k not in ("trace", "tol", "radii")}
        out["radii"] = list(self.schedule())
        out["trace"] = self.trace.as_dict()
        out["tol"] = self.tol.as_dict()
        return out


@dataclass(frozen=True)
class IndexResult:
    radius: float
    depth: int
    bits: str
    tail: TailClass | None
    preperiod: int | None = None
    period: int | None = None
    failure: str | None = None

    @property
    def resolved(self) -> bool:
        return self.tail is not None


def infer_tail(bits: str) -> tuple[TailClass, int, int] | None:
    """Smallest period (then smallest preperiod) explaining the word.

    Preperiod at most half the word, period at most a quarter, and the
    periodic part must show at least two full periods.
    """
    n = len(bits)
    for p in range(1, n // 4 + 1):
        for s in range(0, n // 2 + 1):
            if n - s < 2 * p:
                break
            tail = bits[s:]
            if all(tail[i] == tail[i % p] for i in range(len(tail))):
                cls = canonicalize(EventuallyPeriodicSequence(bits[:s], tail[:p]))
                return cls, s, p
    return None


def _chain_cache(f, orbit, radii, depth, cfg: EngineConfig, chains):
    if chains is None:
        chains = {}
    for r in radii:
        if r not in chains:
            chains[r] = pullback_chain(f, orbit, r, depth, cfg.trace)
    return chains


def _index_from_chain(chain: PullbackChain, c) -> IndexResult:
    bits = index_bits(chain, c)
    if not chain.complete:
        return IndexResult(chain.radius, chain.depth, bits, None, failure=chain.failure)
    got = infer_tail(bits)
    if got is None:
        return IndexResult(chain.radius, chain.depth, bits, None)
    cls, s, p = got
    return IndexResult(chain.radius, chain.depth, bits, cls, s, p)


def index_class(f: Polynomial, orbit: BackwardOrbit, c, radius: float, depth: int,
                cfg: EngineConfig = EngineConfig()) -> IndexResult:
    if depth < 16:
        raise ValueError("index class inference needs depth >= 16")
    chain = pullback_chain(f, orbit, radius, depth, cfg.trace)
    return _index_from_chain(chain, c)


@dataclass
class SignatureEstimate:
    value: Signature | None
    per_radius: list[IndexResult]
    stabilization_depth: int | None
    verdict: str                      # "Stable" | "Inconclusive"
    monotone: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.verdict == "Stable"


def estimate_signature(f: Polynomial, orbit: BackwardOrbit, c, radii, depth: int,
                       cfg: EngineConfig = EngineConfig(), chains=None) -> SignatureEstimate:
    radii = tuple(radii)
    if len(radii) < 3 or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radius schedule must be strictly decreasing with at least 3 entries")
    chains = _chain_cache(f, orbit, radii, depth, cfg, chains)
    per = [_index_from_chain(chains[r], c) for r in radii]
    if not any(p.resolved for p in per):
        raise ValueError("every radius is inconclusive")
    notes = []
    tails = [p.tail for p in per if p.resolved]
    monotone = all(b <= a for a, b in zip(tails, tails[1:]))
    if not monotone:
        notes.append("index classes not monotone in the radius")
    if len(tails) < len(per):
        notes.append(f"{len(per) - len(tails)} radii inconclusive at depth {depth}")
        return SignatureEstimate(None, per, None, "Inconclusive", monotone, notes)
    red = meet_chain_reduce(tails, len(tails))
    if not red.stabilized:
        notes.append("partial meets still decreasing at the smallest radius")
        return SignatureEstimate(None, per, None, "Inconclusive", monotone, notes)
    notes.append(f"at depth {depth}, radii {list(radii)}")
    return SignatureEstimate(Signature.alpha(red.meet), per, red.n, "Stable", monotone, notes)


@dataclass
class Verdict:
    kind: str                                  # Regular | Irregular | Inconclusive
    classes: dict[float, list[TailClass | None]]
    depth: int
    radii: tuple[float, ...]

    def caveat(self) -> str:
        return f"at depth {self.depth}, radii {list(self.radii)}"


def regularity_verdict(f: Polynomial, orbit: BackwardOrbit, depth: int, radii=None,
                       cfg: EngineConfig = EngineConfig(), chains=None) -> Verdict:
    radii = cfg.schedule() if radii is None else tuple(radii)
    crit = critical_points(f, seed=cfg.seed)
    chains = _chain_cache(f, orbit, radii, depth, cfg, chains)
    classes = {}
    for r in radii:
        classes[r] = [_index_from_chain(chains[r], k).tail for k in range(len(crit))]
    some_regular = any(all(t is not None and t.is_zero for t in cl) for cl in classes.values())
    all_irregular = all(any(t is not None and not t.is_zero for t in cl) for cl in classes.values())
    kind = "Regular" if some_regular else "Irregular" if all_irregular else "Inconclusive"
    return Verdict(kind, classes, depth, radii)


# -- cycle predictions ---------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    kind: str                      # "bottom" | "shift_sq"
    period: int
    candidates: tuple[Signature, ...]
    note: str = ""

    def match(self, sig: Signature | None) -> int | None:
        """Shift offset ``k`` whose candidate equals ``sig`` (0 for a bottom prediction)."""
        if sig is None:
            return None
        for k, cand in enumerate(self.candidates):
            if cand == sig:
                return k
        return None

    def __str__(self) -> str:
        if self.kind == "bottom":
            return "bottom"
        return f"shift_k(alpha[sq({self.period})]), 0<=k<{self.period}"


def _critical_orbit_reaches(f: Polynomial, c: complex, cycle: Cycle, steps: int = 20_000,
                            radius: float = 1e-3) -> bool:
    pts = np.array(cycle.points)
    orb = evaluate_orbit(f, c, steps)
    z = np.array(orb.points)
    if orb.escaped:
        return False
    return bool(np.min(np.abs(z[:, None] - pts[None, :])) < radius)


def predict_signature(cycle: Cycle, c: complex, f: Polynomial) -> Prediction:
    n = cycle.period
    kind = cycle.label.kind if cycle.label else None
    if kind == "Repelling":
        return Prediction("bottom", n, (Signature.bottom(),), "repelling cycle")
    if kind == "NeutralIrrational":
        return Prediction("bottom", n, (Signature.bottom(),), "Siegel-case prediction")
    if kind in ("AttractingNonSuper", "SuperAttracting", "Parabolic"):
        if not _critical_orbit_reaches(f, c, cycle):
            return Prediction("bottom", n, (Signature.bottom(),),
                              "critical point not attracted to the cycle")
        base = Signature.alpha(sq_class(n))
        return Prediction("shift_sq", n, tuple(sig_shift(base, k) for k in range(n)),
                          f"{kind} cycle")
    raise ValueError(f"cycle has no usable label: {cycle.label}")


@dataclass
class VerifyRow:
    period: int
    points: tuple[complex, ...]
    multiplier: complex
    label: str
    critical: complex
    prediction: Prediction
    estimate: SignatureEstimate
    verdict: str
    k: int | None
    match: bool


@dataclass
class VerifyReport:
    rows: list[VerifyRow]
    passed: bool
    config: EngineConfig


def verify_cycle_theorem(f: Polynomial, n_max: int, cfg: EngineConfig = EngineConfig()) -> VerifyReport:
    """Compare estimated and predicted signatures for every cycle up to ``n_max``.

    The orbit used for a cycle is its invariant lift from the first stored point.
    A row matches when its estimate is Stable and equals one of the candidates;
    the report passes when every Stable row matches.
    """
    crit = critical_points(f, seed=cfg.seed)
    radii = cfg.schedule()
    rows = []
    for n in range(1, n_max + 1):
        for cyc in periodic_cycles(f, n, tol=cfg.tol, seed=cfg.seed, crit=crit):
            orbit = backward_orbit_from_cycle(cyc, 1)
            chains = _chain_cache(f, orbit, radii, cfg.depth, cfg, None)
            verdict = regularity_verdict(f, orbit, cfg.depth, radii, cfg, chains).kind
            for ci, c in enumerate(crit):
                pred = predict_signature(cyc, c, f)
                est = estimate_signature(f, orbit, ci, radii, cfg.depth, cfg, chains)
                k = pred.match(est.value) if est.stable else None
                rows.append(VerifyRow(n, cyc.points, cyc.multiplier, str(cyc.label), c,
                                      pred, est, verdict, k, k is not None))
    passed = all(r.match for r in rows if r.estimate.stable)
    return VerifyReport(rows, passed, cfg)


def branching_count(chain: PullbackChain) -> tuple[int, int]:
    """Levels whose component holds a critical point, and the ``2**B`` lift-class bound."""
    b = sum(1 for lv in chain.levels if any(lv.flags))
    return b, 2 ** b


@dataclass
class ProbeEntry:
    point: complex
    radius: float
    status: str
    chain: list[complex]
    nodes: int


@dataclass
class ProbeReport:
    entries: list[ProbeEntry]

    @property
    def fraction(self) -> float:
        if not self.entries:
            return math.nan
        return sum(e.status == "satisfied" for e in self.entries) / len(self.entries)


def inverse_critical_probe(f: Polynomial, c: complex, sample, radii, depth: int,
                           cfg: EngineConfig = EngineConfig(), points=None) -> ProbeReport:
    """Test the inverse-critical property on sample points.

    For each tested point and radius, look for a chain of preimages staying
    within ``cfg.eps`` of ``sample`` whose pulled-back disk contains ``c``.
    ``points`` restricts which sample points are tested (default: all).
    """
    sample = [complex(z) for z in sample]
    if not sample:
        raise ValueError("empty sample")
    test = sample if points is None else [complex(z) for z in points]
    entries = []
    for x in test:
        for r in radii:
            status, chain, nodes = engulf_search(f, x, c, r, sample, cfg.eps, depth,
                                                 budget=cfg.budget, cfg=cfg.trace)
            entries.append(ProbeEntry(x, r, status, chain, nodes))
    return ProbeReport(entries)
