"""Backward orbits and pulled-back Jordan curves.

A neighborhood ``U_1`` of ``x_1`` is a round disk, sampled on its boundary.
``U_{i+1}`` is the component of ``f^{-1}(U_i)`` containing ``x_{i+1}``; its
boundary is traced by continuing all ``d`` preimage branches along the
boundary polyline of ``U_i``.  Branch choice at each sample goes to the root
nearest a first-order prediction, and a step is only accepted when the
nearest root is at most ``eta`` times as far as the runner-up; otherwise the
polyline segment is bisected.  After one circuit the branches come back
permuted; the cycles of that permutation are the boundary curves of the
preimage components, and a cycle of length ``k`` is a component whose
boundary needs ``k`` circuits (a branched cover of local degree ``k``).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import Cycle, Polynomial, critical_points, orbit_closure_sample, recurrence_probe
from .roots import aberth, clustered_roots, horner

__all__ = [
    "TraceConfig",
    "SampledLoop",
    "BackwardOrbit",
    "ChainLevel",
    "PullbackChain",
    "AmbiguousBranchError",
    "OpenCurveError",
    "OnCurveError",
    "NoPcMembershipError",
    "SearchExhaustedError",
    "circle_loop",
    "preimage_set",
    "trace_components",
    "pullback_loop",
    "winding_contains",
    "backward_orbit_from_cycle",
    "pullback_chain",
    "index_bits",
    "forward_residual",
    "construct_regular_plaque",
    "IrregularOrbit",
    "construct_irregular_orbit",
    "engulf_search",
]

log = logging.getLogger(__name__)


class AmbiguousBranchError(RuntimeError):
    """Refinement cap reached: the curve passes too close to a critical value."""


class OpenCurveError(RuntimeError):
    """The traced preimage curve failed to close."""


class OnCurveError(ValueError):
    """Winding number requested for a point lying on the curve."""


class NoPcMembershipError(ValueError):
    """Critical point not recurrent, or start point not near its orbit closure."""


class SearchExhaustedError(RuntimeError):
    """No admissible preimage chain within the search budget."""


@dataclass(frozen=True)
class TraceConfig:
    samples: int = 256            # samples on a seed circle
    eta: float = 0.5              # nearest / second-nearest acceptance ratio
    cap: int = 2 ** 16            # refinement cap, samples per loop
    min_step: float = 2.0 ** -40  # smallest bisected step, in sample spacings
    keep: int = 1024              # samples retained per level after tracing
    seed: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SampledLoop:
    """Closed polyline; ``samples[-1] == samples[0]``."""

    samples: np.ndarray
    center: complex
    traversals: int = 1

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 4:
            raise ValueError("a loop needs at least three distinct samples")
        if abs(s[-1] - s[0]) > 1e-9:
            s = np.append(s, s[0])
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def open_samples(self) -> np.ndarray:
        return self.samples[:-1]

    def __len__(self) -> int:
        return self.samples.size - 1

    def point_at(self, t: np.ndarray) -> np.ndarray:
        """Points on the polyline at fractional sample index ``t`` (periodic)."""
        s = self.samples
        n = len(self)
        t = np.mod(t, n)
        i = np.floor(t).astype(int)
        frac = t - i
        return s[i] + frac * (s[i + 1] - s[i])


def circle_loop(center: complex, radius: float, n: int = 256) -> SampledLoop:
    if radius <= 0:
        raise ValueError("radius must be positive")
    th = 2 * np.pi * np.arange(n + 1) / n
    s = center + radius * np.exp(1j * th)
    s[-1] = s[0]
    return SampledLoop(s, complex(center), 1)


# -- preimages ---------------------------------------------------------------


def _polish(f: Polynomial, z: np.ndarray, w: np.ndarray, steps: int = 2) -> np.ndarray:
    for _ in range(steps):
        v, dv = horner(f.coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (v - w[..., None]) / dv
        z = z - np.where(np.isfinite(step), step, 0)
    return z


def _preimages(f: Polynomial, w: np.ndarray, seed: int = 0) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    z = aberth(f.preimage_coeffs(w), seed=seed, maxiter=200)
    return _polish(f, z, w)


def preimage_set(f: Polynomial, w: complex, *, seed: int = 0) -> list[complex]:
    """All ``d`` solutions of ``f(z) = w`` with multiplicity, sorted by ``(re, im)``."""
    out = []
    for r, m in clustered_roots(f.preimage_coeffs(complex(w)), seed=seed):
        out.extend([complex(r)] * m)
    return out


# -- winding -----------------------------------------------------------------


def _segment_distance(samples: np.ndarray, z: complex) -> float:
    a, b = samples[:-1], samples[1:]
    ab = b - a
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.real((z - a) * np.conj(ab)) / np.abs(ab) ** 2
    t = np.clip(np.nan_to_num(t), 0, 1)
    return float(np.min(np.abs(a + t * ab - z)))


def winding_contains(loop: SampledLoop | np.ndarray, z: complex, tol: float = 1e-12) -> tuple[int, bool]:
    """Winding number of a closed polyline around ``z`` and whether it is nonzero."""
    s = loop.samples if isinstance(loop, SampledLoop) else np.asarray(loop, dtype=complex)
    if abs(s[-1] - s[0]) > 1e-9:
        s = np.append(s, s[0])
    if _segment_distance(s, z) <= tol:
        raise OnCurveError(f"{z} lies on the curve")
    v = s - z
    total = np.angle(v[1:] / v[:-1]).sum()
    wn = int(round(total / (2 * math.pi)))
    return wn, wn != 0


def _winding_many(samples: np.ndarray, pts) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(pts, dtype=complex))
    v = samples[None, :] - pts[:, None]
    total = np.angle(v[:, 1:] / v[:, :-1]).sum(axis=1)
    return np.rint(total / (2 * math.pi)).astype(int)


# -- tracing -----------------------------------------------------------------


def _continuation(f: Polynomial, w: np.ndarray, R: np.ndarray, eta: float):
    """Branch maps between consecutive samples (cyclically) and their acceptance."""
    w_next = np.roll(w, -1)
    R_next = np.roll(R, -1, axis=0)
    dv = f.derivative(R)
    with np.errstate(divide="ignore", invalid="ignore"):
        pred = R + ((w_next - w)[:, None] / dv)
    pred = np.where(np.isfinite(pred), pred, R)
    dist = np.abs(R_next[:, None, :] - pred[:, :, None])      # (M, branch, root)
    order = np.argsort(dist, axis=-1)
    perm = order[..., 0]
    d_sorted = np.take_along_axis(dist, order[..., :2], axis=-1)
    ok = d_sorted[..., 0] <= eta * d_sorted[..., 1]
    d = R.shape[1]
    bij = np.sort(perm, axis=-1) == np.arange(d)
    good = ok.all(axis=-1) & bij.all(axis=-1)
    return perm, good


def _nearest_critical_value(f: Polynomial, pts: np.ndarray) -> complex:
    cvs = np.array([f(c) for c in critical_points(f)])
    k = np.argmin(np.abs(pts[:, None] - cvs[None, :]).min(axis=0))
    return complex(cvs[k])


def trace_components(f: Polynomial, loop: SampledLoop, cfg: TraceConfig = TraceConfig()):
    """Boundary curves of all components of ``f^{-1}`` of the region bounded by ``loop``.

    Returns a list of ``(samples, traversals)``; each ``samples`` array is
    closed and every entry maps into the polyline of ``loop``.
    """
    t = np.arange(len(loop), dtype=float)
    w = loop.open_samples.copy()
    R = _preimages(f, w, cfg.seed)
    while True:
        perm, good = _continuation(f, w, R, cfg.eta)
        if good.all():
            break
        bad = np.flatnonzero(~good)
        t_next = np.where(bad + 1 < t.size, t[(bad + 1) % t.size], len(loop))
        if t.size + bad.size > cfg.cap or np.min(t_next - t[bad]) < cfg.min_step:
            cv = _nearest_critical_value(f, w[bad])
            raise AmbiguousBranchError(
                f"refinement limit reached ({t.size} samples); "
                f"curve passes near critical value {cv:.6g}")
        t_mid = 0.5 * (t[bad] + t_next)
        w_mid = loop.point_at(t_mid)
        R_mid = _preimages(f, w_mid, cfg.seed)
        t = np.insert(t, bad + 1, t_mid)
        w = np.insert(w, bad + 1, w_mid)
        R = np.insert(R, bad + 1, R_mid, axis=0)
    M, d = R.shape
    # follow every branch once around the loop
    idx = np.empty((M + 1, d), dtype=int)
    idx[0] = np.arange(d)
    for j in range(M):
        idx[j + 1] = perm[j][idx[j]]
    sigma = idx[M]
    seen = [False] * d
    comps = []
    for a in range(d):
        if seen[a]:
            continue
        pieces = []
        b = a
        while not seen[b]:
            seen[b] = True
            pieces.append(R[np.arange(M), idx[:M, b]])
            b = sigma[b]
        if b != a:
            raise OpenCurveError("branch permutation failed to close")
        samples = np.concatenate(pieces + [pieces[0][:1]])
        comps.append((samples, len(pieces)))
    return comps


def _decimate(samples: np.ndarray, keep: int) -> np.ndarray:
    n = samples.size - 1
    if n <= keep:
        return samples
    seg = np.abs(np.diff(samples))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    h = s[-1] / keep
    bins = np.floor(s[:-1] / h).astype(int)
    first = np.flatnonzero(np.diff(np.concatenate([[-1], bins])) != 0)
    out = samples[first]
    return np.append(out, out[0])


def pullback_loop(f: Polynomial, loop: SampledLoop, target: complex,
                  cfg: TraceConfig = TraceConfig()) -> SampledLoop:
    """The component of the preimage of ``loop``'s region that contains ``target``."""
    comps = trace_components(f, loop, cfg)
    target = complex(target)
    scale = 1.0 + abs(target)
    gaps = [_segment_distance(samples, target) for samples, _ in comps]
    if min(gaps) <= 1e-9 * scale:
        # target sits on the boundary fiber: take the curve through it
        samples, trav = comps[int(np.argmin(gaps))]
        inner = [z for z in preimage_set(f, loop.center, seed=cfg.seed)
                 if _segment_distance(samples, z) > 1e-9 * scale
                 and winding_contains(samples, z)[1]]
        center = inner[0] if inner else target
        return SampledLoop(_decimate(samples, cfg.keep), complex(center), trav)
    hits = [(samples, trav) for samples, trav in comps
            if winding_contains(samples, target, tol=0.0)[1]]
    if len(hits) != 1:
        raise OpenCurveError(f"{len(hits)} traced components contain the target {target}")
    samples, trav = hits[0]
    return SampledLoop(_decimate(samples, cfg.keep), target, trav)


# -- orbits and chains ---------------------------------------------------------


@dataclass(frozen=True)
class BackwardOrbit:
    """``(x_1, x_2, ...)`` with ``f(x_{i+1}) = x_i``.

    Periodic orbits store one period and repeat it on demand.
    """

    points: tuple[complex, ...]
    generator: str
    periodic: bool = False

    def __len__(self):
        return len(self.points)

    def point(self, i: int) -> complex:
        """1-based access; periodic orbits wrap around."""
        if self.periodic:
            return self.points[(i - 1) % len(self.points)]
        return self.points[i - 1]

    def take(self, n: int) -> list[complex]:
        if not self.periodic and n > len(self.points):
            raise ValueError(f"orbit has only {len(self.points)} points, {n} requested")
        return [self.point(i) for i in range(1, n + 1)]

    def reindexed(self, m: int) -> "BackwardOrbit":
        """Drop the first ``m`` coordinates (periodic orbits rotate)."""
        if self.periodic:
            k = m % len(self.points)
            pts = self.points[k:] + self.points[:k]
        else:
            pts = self.points[m:]
        return BackwardOrbit(pts, f"{self.generator}+reindex({m})", self.periodic)

    def max_residual(self, f: Polynomial, n: int | None = None) -> float:
        n = len(self.points) + (1 if self.periodic else 0) if n is None else n
        pts = np.array(self.take(n))
        if pts.size < 2:
            return 0.0
        return float(np.max(np.abs(f(pts[1:]) - pts[:-1])))


def backward_orbit_from_cycle(cycle: Cycle, base: int = 1) -> BackwardOrbit:
    """Invariant lift of a cycle, starting at the 1-based cycle index ``base``."""
    n = cycle.period
    if not 1 <= base <= n:
        raise ValueError(f"base must be in 1..{n}")
    pts = cycle.points[base - 1:] + cycle.points[:base - 1]
    return BackwardOrbit(tuple(pts), f"InvariantLiftOfCycle(base={base})", periodic=True)


@dataclass(frozen=True)
class ChainLevel:
    loop: SampledLoop
    center: complex
    flags: tuple[bool, ...]
    windings: tuple[int, ...]


@dataclass
class PullbackChain:
    levels: list[ChainLevel]
    orbit: BackwardOrbit
    radius: float
    depth: int
    critical: tuple[complex, ...]
    failure: str | None = None
    failed_level: int | None = None

    @property
    def complete(self) -> bool:
        return self.failure is None and len(self.levels) == self.depth

    def flags_for(self, k: int) -> list[bool]:
        return [lv.flags[k] for lv in self.levels]


def _flags(loop: SampledLoop, crit: Sequence[complex]) -> tuple[tuple[bool, ...], tuple[int, ...]]:
    wn = []
    for c in crit:
        try:
            wn.append(winding_contains(loop, c)[0])
        except OnCurveError:
            # critical point on the traced boundary; report as outside
            wn.append(0)
    return tuple(w != 0 for w in wn), tuple(wn)


def pullback_chain(f: Polynomial, orbit: BackwardOrbit, radius: float, depth: int,
                   cfg: TraceConfig = TraceConfig(), crit=None) -> PullbackChain:
    """Pull a round disk about ``x_1`` back along ``orbit`` for ``depth`` levels."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    crit = tuple(critical_points(f, seed=cfg.seed)) if crit is None else tuple(crit)
    pts = orbit.take(depth)
    chain = PullbackChain([], orbit, radius, depth, crit)
    if depth == 0:
        return chain
    loop = circle_loop(pts[0], radius, cfg.samples)
    for i in range(depth):
        if i > 0:
            try:
                loop = pullback_loop(f, loop, pts[i], cfg)
            except (AmbiguousBranchError, OpenCurveError) as exc:
                chain.failure = f"{type(exc).__name__}: {exc}"
                chain.failed_level = i + 1
                log.info("chain stopped at level %d: %s", i + 1, exc)
                return chain
        flags, wn = _flags(loop, crit)
        chain.levels.append(ChainLevel(loop, pts[i], flags, wn))
    return chain


def index_bits(chain: PullbackChain, c: complex | int) -> str:
    """``'1'`` at level ``i`` iff the critical point lies inside ``U_i``."""
    k = c if isinstance(c, (int, np.integer)) else int(np.argmin([abs(c - x) for x in chain.critical]))
    return "".join("1" if lv.flags[k] else "0" for lv in chain.levels)


def forward_residual(f: Polynomial, chain: PullbackChain, window: int = 2) -> float:
    """Largest distance from ``f(sample of U_{i+1})`` to the polyline ``U_i``.

    Each image point is measured against the ``2 * window`` segments around
    its nearest polyline vertex only, so the value is an upper bound on the
    true distance (exact whenever the nearest segment is among them).
    """
    worst = 0.0
    for lo, hi in zip(chain.levels, chain.levels[1:]):
        img = f(hi.loop.open_samples)
        verts = lo.loop.open_samples
        n = verts.size
        vx, vy = verts.real[None, :], verts.imag[None, :]
        for chunk in np.array_split(img, max(1, img.size // 256)):
            d2 = (chunk.real[:, None] - vx) ** 2 + (chunk.imag[:, None] - vy) ** 2
            near = np.argmin(d2, axis=1)
            idx = (near[:, None] + np.arange(-window, window)[None, :]) % n
            a, b = verts[idx], verts[(idx + 1) % n]
            ab = b - a
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.real((chunk[:, None] - a) * np.conj(ab)) / np.abs(ab) ** 2
            t = np.clip(np.nan_to_num(t), 0, 1)
            d = np.abs(a + t * ab - chunk[:, None]).min(axis=1)
            worst = max(worst, float(d.max()))
    return worst


# -- constructions -----------------------------------------------------------


def _min_distance(samples: np.ndarray, pts) -> float:
    pts = np.asarray(pts, dtype=complex)
    if pts.size == 0:
        return math.inf
    return float(np.abs(samples[:, None] - pts[None, :]).min())


def _default_seeds(f: Polynomial, crit) -> list[tuple[complex, float]]:
    d = f.degree
    cvs = [complex(f(c)) for c in crit]
    R = 1.5 * max([1.0] + [abs(v) for v in cvs])
    centers = [R * np.exp(2j * np.pi * (k + 0.5) / d) for k in range(d)]
    sep = min(abs(a - b) for i, a in enumerate(centers) for b in centers[i + 1:])
    clear = min(abs(c - v) for c in centers for v in cvs)
    r = min(0.1, 0.25 * sep, 0.5 * clear)
    return [(complex(c), float(r)) for c in centers]


def construct_regular_plaque(f: Polynomial, depth: int, *, seeds=None,
                             cfg: TraceConfig = TraceConfig()) -> tuple[BackwardOrbit, PullbackChain]:
    """Chain whose every level avoids all critical points.

    Keeps a population of as many disks as there are seeds; at each level
    every member's preimage components are traced, those containing a
    critical point are discarded, and the best-cleared survivors (ties to
    larger real part) are kept.
    """
    crit = tuple(critical_points(f, seed=cfg.seed))
    if depth == 0:
        orbit = BackwardOrbit((), "Regular(depth=0)")
        return orbit, PullbackChain([], orbit, 0.0, 0, crit)
    seeds = _default_seeds(f, crit) if seeds is None else [(complex(c), float(r)) for c, r in seeds]
    cvs = [complex(f(c)) for c in crit]
    for c0, r0 in seeds:
        if any(abs(c0 - v) <= r0 for v in cvs):
            raise ValueError(f"seed disk D({c0}, {r0}) contains a critical value")
    # member: (levels, points)
    population = []
    for c0, r0 in seeds:
        loop = circle_loop(c0, r0, cfg.samples)
        flags, wn = _flags(loop, crit)
        population.append(([ChainLevel(loop, c0, flags, wn)], [c0]))
    for _ in range(depth - 1):
        cands = []
        for levels, pts in population:
            loop = levels[-1].loop
            for samples, trav in trace_components(f, loop, cfg):
                if trav != 1 or np.any(_winding_many(samples, crit) != 0):
                    continue
                pre = np.array(preimage_set(f, pts[-1], seed=cfg.seed))
                inside = pre[_winding_many(samples, pre) != 0]
                if inside.size != 1:
                    continue
                x = complex(inside[0])
                new = SampledLoop(_decimate(samples, cfg.keep), x, trav)
                flags, wn = _flags(new, crit)
                clearance = _min_distance(samples, crit)
                cands.append(((round(clearance, 6), round(x.real, 9), round(x.imag, 9)),
                              levels + [ChainLevel(new, x, flags, wn)], pts + [x]))
        if not cands:
            raise SearchExhaustedError("no preimage component avoids the critical points")
        cands.sort(key=lambda t: t[0], reverse=True)
        population = [(lv, p) for _, lv, p in cands[:len(seeds)]]
    levels, pts = population[0]
    orbit = BackwardOrbit(tuple(pts), "Greedy(regular-plaque)")
    chain = PullbackChain(levels, orbit, seeds[0][1], depth, crit)
    for c0, r0 in seeds:
        if c0 == pts[0]:
            chain.radius = r0
    return orbit, chain


@dataclass
class IrregularOrbit:
    orbit: BackwardOrbit
    engulf_depths: list[int]
    radii: list[float]
    nodes: int
    sample_size: int
    recurrence: float
    notes: list[str] = field(default_factory=list)


class _Budget:
    def __init__(self, n: int):
        self.left = n
        self.used = 0

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        self.used += 1
        return True


def _admissible(f: Polynomial, x: complex, sample: np.ndarray, eps: float, seed: int) -> list[complex]:
    pre = [r for r, _ in clustered_roots(f.preimage_coeffs(complex(x)), seed=seed)]
    scored = []
    for z in pre:
        dist = float(np.min(np.abs(sample - z))) if sample.size else math.inf
        if dist <= eps:
            scored.append((dist, z.real, z.imag, complex(z)))
    scored.sort()
    return [s[-1] for s in scored]


def _engulf_dfs(f, loop, pts, c, sample, eps, max_len, budget, cfg, min_level):
    """Depth-first extension of ``pts`` until the pulled-back loop contains ``c``.

    Returns the extension (new points) or ``None``.  ``min_level`` is the first
    level at which engulfing counts.
    """
    level = len(pts)
    if level >= max_len:
        return None
    for z in _admissible(f, pts[-1], sample, eps, cfg.seed):
        if not budget.spend():
            return None
        try:
            new = pullback_loop(f, loop, z, cfg)
        except (AmbiguousBranchError, OpenCurveError):
            continue
        if level + 1 >= min_level and _winding_many(new.samples, [c])[0] != 0:
            return [z]
        rest = _engulf_dfs(f, new, pts + [z], c, sample, eps, max_len, budget, cfg, min_level)
        if rest is not None:
            return [z] + rest
    return None


def _lift_along(f, center_loop, pts, cfg):
    loop = center_loop
    for z in pts[1:]:
        loop = pullback_loop(f, loop, z, cfg)
    return loop


def engulf_search(f: Polynomial, x: complex, c: complex, radius: float, sample, eps: float,
                  max_depth: int, *, budget: int = 10_000, cfg: TraceConfig = TraceConfig()):
    """Search for a preimage chain of ``x`` inside the ``eps``-net ``sample`` whose
    pulled-back disk ``D(x, radius)`` contains ``c``.

    Returns ``(status, chain_points, nodes)`` with status ``'satisfied'``,
    ``'unsatisfied'`` (search space exhausted) or ``'exhausted'`` (budget hit).
    """
    sample = np.asarray(list(sample), dtype=complex)
    b = _Budget(budget)
    loop = circle_loop(x, radius, cfg.samples)
    ext = _engulf_dfs(f, loop, [complex(x)], c, sample, eps, max_depth, b, cfg, 2)
    if ext is not None:
        return "satisfied", [complex(x)] + ext, b.used
    return ("exhausted" if b.left <= 0 else "unsatisfied"), [complex(x)], b.used


def construct_irregular_orbit(f: Polynomial, c: complex, x0: complex, depth: int, *,
                              radius: float = 0.4, eps: float = 1e-2, n_sample: int = 5000,
                              include_c: bool = False, budget: int = 10_000,
                              cfg: TraceConfig = TraceConfig()) -> IrregularOrbit:
    """Backward orbit of ``x0`` inside the orbit closure of ``c`` that engulfs ``c``
    at increasing depths ``k_1 < k_2 < ...``, using disks of radius
    ``radius * 2**-j`` about ``x0`` for the ``j``-th engulfment.
    """
    c = complex(c)
    samp = orbit_closure_sample(f, c, n_sample, dedup=1e-8, include_c=include_c)
    sample = np.array(samp.points, dtype=complex)
    rec = recurrence_probe(f, c, n_sample)
    if rec.distance > eps:
        raise NoPcMembershipError(
            f"critical point not recurrent within {eps} after {n_sample} steps (min return {rec.distance:.3g})")
    if sample.size == 0 or float(np.min(np.abs(sample - x0))) > eps:
        raise NoPcMembershipError(f"start point {x0} is not within {eps} of the orbit sample")
    b = _Budget(budget)
    pts = [complex(x0)]
    engulf, radii = [], []
    notes = []
    j = 0
    while len(pts) < depth:
        r = radius * 2.0 ** -j
        loop = _lift_along(f, circle_loop(pts[0], r, cfg.samples), pts, cfg)
        ext = _engulf_dfs(f, loop, pts, c, sample, eps, depth, b, cfg, max(2, len(pts) + 1))
        if ext is None:
            notes.append(f"no further engulfing within depth {depth} at radius {r:.3g}")
            break
        pts += ext
        engulf.append(len(pts))
        radii.append(r)
        j += 1
    # fill the remaining levels greedily
    while len(pts) < depth:
        nxt = _admissible(f, pts[-1], sample, eps, cfg.seed)
        if not nxt:
            raise SearchExhaustedError(f"no admissible preimage within {eps} at level {len(pts) + 1}")
        pts.append(nxt[0])
    if not engulf:
        raise SearchExhaustedError(f"no engulfing preimage chain found (nodes used {b.used})")
    orbit = BackwardOrbit(tuple(pts), f"Greedy(irregular, eps={eps})")
    return IrregularOrbit(orbit, engulf, radii, b.used, int(sample.size), rec.distance, notes)
