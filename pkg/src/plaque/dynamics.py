"""Polynomial maps of the plane: orbits, critical points, cycles, multipliers."""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial as _NpPoly

from .roots import RootFinderError, clustered_roots, horner

__all__ = [
    "Polynomial",
    "Tolerances",
    "CycleLabel",
    "Cycle",
    "Orbit",
    "EscapedError",
    "GOLDEN",
    "siegel_golden",
    "quadratic",
    "parse_map",
    "evaluate_orbit",
    "critical_points",
    "periodic_cycles",
    "classify_cycle",
    "rotation_convergents",
    "orbit_closure_sample",
    "recurrence_probe",
]

GOLDEN = (math.sqrt(5) - 1) / 2


class EscapedError(RuntimeError):
    """Forward orbit left the escape disk."""


@dataclass(frozen=True)
class Tolerances:
    band: float = 1e-9          # |lambda| = 1 band half-width
    critical: float = 1e-9      # cycle point vs critical point coincidence
    root: float = 1e-9          # |lambda^p - 1| for root-of-unity detection
    p_max: int = 64
    dedup: float = 1e-8         # orbit sample deduplication radius
    residual: float = 1e-9      # |f^n(z) - z| certification
    separation: float = 1e-6    # exact-period test and cycle grouping
    cluster: float = 1e-6       # merge radius for multiple roots

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class Polynomial:
    """Complex polynomial map of degree at least 2, ascending coefficients."""

    def __init__(self, coeffs, name: str | None = None):
        c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
        if len(c) < 3:
            raise ValueError("degree must be at least 2")
        self.coeffs = c
        self.coeffs.setflags(write=False)
        self.name = name

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def escape_radius(self) -> float:
        return max(4.0, 2.0 * float(np.abs(self.coeffs).max()))

    def __call__(self, z):
        return horner(self.coeffs, z)[0]

    def value_and_derivative(self, z):
        return horner(self.coeffs, z)

    def derivative(self, z):
        return horner(self.coeffs, z)[1]

    def derivative_coeffs(self) -> np.ndarray:
        return self.coeffs[1:] * np.arange(1, len(self.coeffs))

    def iterate(self, z, n: int):
        for _ in range(n):
            z = self(z)
        return z

    def iterate_with_derivative(self, z, n: int):
        """``f^n(z)`` and ``(f^n)'(z)`` by the chain rule."""
        dz = np.ones_like(np.asarray(z, dtype=complex))
        for _ in range(n):
            v, dv = horner(self.coeffs, z)
            dz = dz * dv
            z = v
        return z, dz

    def composed_coeffs(self, n: int) -> np.ndarray:
        p = _NpPoly(self.coeffs)
        out = _NpPoly([0, 1])
        for _ in range(n):
            out = p(out)
        return np.asarray(out.coef, dtype=complex)

    def preimage_coeffs(self, w) -> np.ndarray:
        """Coefficients of ``f(z) - w``; batched over an array of ``w``."""
        w = np.asarray(w, dtype=complex)
        c = np.broadcast_to(self.coeffs, w.shape + self.coeffs.shape).copy()
        c[..., 0] -= w
        return c

    def spec(self) -> str:
        if self.name:
            return self.name
        return ",".join(_fmt_complex(a) for a in self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({self.spec()!r})"


def _fmt_complex(a: complex) -> str:
    a = complex(a)
    if a.imag == 0:
        return repr(a.real)
    return f"{a.real!r}{a.imag:+}i"


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") and (t == "j" or t[-2] in "+-"):
        t = t[:-1] + "1j"
    return complex(t)


def quadratic(c: complex) -> Polynomial:
    return Polynomial([c, 0, 1], name=f"quad:c={_fmt_complex(c)}")


def siegel_golden() -> Polynomial:
    """``z^2 + lam z`` with ``lam = exp(2 pi i (sqrt 5 - 1) / 2)``."""
    lam = cmath.exp(2j * math.pi * GOLDEN)
    return Polynomial([0, lam, 1], name="siegel:golden")


def parse_map(text: str) -> Polynomial:
    """``"quad:c=<complex>"``, ``"siegel:golden"`` or ascending coefficients ``"-1,0,1"``."""
    text = text.strip()
    if text == "siegel:golden":
        return siegel_golden()
    m = re.fullmatch(r"quad:c=(.+)", text)
    if m:
        return quadratic(_parse_complex(m.group(1)))
    try:
        return Polynomial([_parse_complex(t) for t in text.split(",")])
    except ValueError as exc:
        raise ValueError(f"cannot parse map {text!r}: {exc}") from None


# -- orbits ------------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    points: tuple[complex, ...]
    escaped: bool = False


def evaluate_orbit(f: Polynomial, z0: complex, n: int, escape_radius: float | None = None) -> Orbit:
    if n < 0:
        raise ValueError("number of steps must be nonnegative")
    R = f.escape_radius if escape_radius is None else escape_radius
    z = complex(z0)
    pts = [z]
    for _ in range(n):
        z = complex(f(z))
        if not cmath.isfinite(z):
            raise FloatingPointError("non-finite orbit value")
        pts.append(z)
        if abs(z) > R:
            return Orbit(tuple(pts), escaped=True)
    return Orbit(tuple(pts))


def critical_points(f: Polynomial, *, seed: int = 0, tol: float = 1e-12) -> list[complex]:
    """Distinct zeros of ``f'``, sorted by ``(re, im)``."""
    found = clustered_roots(f.derivative_coeffs(), seed=seed)
    pts = []
    for r, _m in found:
        if abs(f.derivative(r)) > tol * max(1.0, abs(r)) ** (f.degree - 1):
            raise RootFinderError(f"critical point {r} not polished (|f'| = {abs(f.derivative(r)):.3g})")
        pts.append(complex(r))
    if not 1 <= len(pts) <= f.degree - 1:
        raise RootFinderError(f"found {len(pts)} critical points for degree {f.degree}")
    return pts


def critical_values(f: Polynomial, crit=None) -> list[complex]:
    crit = critical_points(f) if crit is None else crit
    return [complex(f(c)) for c in crit]


# -- cycles ------------------------------------------------------------------


@dataclass(frozen=True)
class CycleLabel:
    kind: str
    q: int | None = None
    p: int | None = None

    KINDS = ("Repelling", "AttractingNonSuper", "SuperAttracting", "Parabolic", "NeutralIrrational")

    def __str__(self) -> str:
        if self.kind == "Parabolic":
            return f"Parabolic({self.q},{self.p})"
        return self.kind

    @property
    def attracting(self) -> bool:
        return self.kind in ("AttractingNonSuper", "SuperAttracting")


@dataclass(frozen=True)
class Cycle:
    """Periodic orbit stored backwards: ``f(points[i + 1]) == points[i]``."""

    points: tuple[complex, ...]
    multiplier: complex
    label: CycleLabel | None = None
    multiplicity: int = 1
    flagged: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def period(self) -> int:
        return len(self.points)

    def index_of(self, z: complex) -> int:
        """1-based index of the cycle point nearest ``z``."""
        d = [abs(p - z) for p in self.points]
        return int(np.argmin(d)) + 1


def rotation_convergents(theta: float, p_max: int) -> list[Fraction]:
    """Continued-fraction convergents of ``theta mod 1`` with denominator <= ``p_max``."""
    x = theta % 1.0
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    for _ in range(64):
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > p_max:
            break
        out.append(Fraction(h1, k1))
        frac = x - a
        if frac < 1e-15:
            break
        x = 1.0 / frac
    return out


def classify_cycle(multiplier: complex, points, crit, tol: Tolerances = Tolerances()) -> CycleLabel:
    lam = complex(multiplier)
    mod = abs(lam)
    if mod < 1 - tol.band:
        if any(abs(x - c) <= tol.critical for x in points for c in crit):
            return CycleLabel("SuperAttracting")
        return CycleLabel("AttractingNonSuper")
    if mod > 1 + tol.band:
        return CycleLabel("Repelling")
    theta = cmath.phase(lam) / (2 * math.pi)
    for fr in rotation_convergents(theta, tol.p_max):
        if abs(lam ** fr.denominator - 1) <= tol.root:
            return CycleLabel("Parabolic", fr.numerator % fr.denominator, fr.denominator)
    return CycleLabel("NeutralIrrational")


def _composition_newton(f: Polynomial, z: complex, n: int, steps: int = 6) -> complex:
    for _ in range(steps):
        v, dv = f.iterate_with_derivative(z, n)
        g, dg = v - z, dv - 1
        if dg == 0:
            break
        step = complex(g / dg)
        if not cmath.isfinite(step):
            break
        z -= step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return complex(z)


def _exact_period(f: Polynomial, z: complex, n: int, sep: float) -> int:
    w = z
    for m in range(1, n + 1):
        w = complex(f(w))
        if n % m == 0 and abs(w - z) <= sep:
            return m
    return n


def periodic_cycles(f: Polynomial, n: int, *, tol: Tolerances = Tolerances(), seed: int = 0,
                    crit=None, max_degree: int = 128) -> list[Cycle]:
    """All cycles of exact period ``n``, sorted by their first point."""
    if n < 1:
        raise ValueError("period must be positive")
    if f.degree ** n > max_degree:
        raise ValueError(f"d^n = {f.degree ** n} exceeds the root-finding budget {max_degree}")
    crit = critical_points(f, seed=seed) if crit is None else crit
    g = f.composed_coeffs(n)
    g[1] -= 1
    found = clustered_roots(g, seed=seed, cluster_tol=tol.cluster)
    cands = []
    for r, m in found:
        if m == 1:
            r = _composition_newton(f, r, n)
        res = abs(f.iterate(r, n) - r)
        if res > tol.residual:
            raise RootFinderError(f"periodic point {r} has residual {res:.3g}")
        if _exact_period(f, r, n, tol.separation) == n:
            cands.append((r, m))
    if sum(m for _, m in cands) > f.degree ** n:
        raise RootFinderError("more periodic points than d^n")
    cands.sort(key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))
    used = [False] * len(cands)
    cycles = []
    for i, (r, m) in enumerate(cands):
        if used[i]:
            continue
        used[i] = True
        forward = [(r, m)]
        z = r
        for _ in range(n - 1):
            z = complex(f(z))
            best, dist = None, math.inf
            for j, (s, _) in enumerate(cands):
                if not used[j] and abs(s - z) < dist:
                    best, dist = j, abs(s - z)
            if best is None or dist > tol.separation:
                raise RootFinderError(f"could not close cycle through {r}")
            used[best] = True
            forward.append(cands[best])
        pts = [forward[0][0]] + [forward[k][0] for k in range(n - 1, 0, -1)]
        lam = complex(np.prod(f.derivative(np.array(pts))))
        mult = max(mm for _, mm in forward)
        label = classify_cycle(lam, pts, crit, tol)
        notes = (f"root multiplicity {mult} in f^{n}(z) - z",) if mult > 1 else ()
        cycles.append(Cycle(tuple(complex(p) for p in pts), lam, label, mult, mult > 1, notes))
    return cycles


def orbit_closure_sample(f: Polynomial, c: complex, n: int, *, dedup: float = 1e-8,
                         include_c: bool = False) -> Orbit:
    """Deduplicated forward orbit ``f(c), ..., f^n(c)`` (optionally with ``c``)."""
    orb = evaluate_orbit(f, c, n)
    pts = orb.points if include_c else orb.points[1:]
    kept: list[complex] = []
    arr = np.empty(0, dtype=complex)
    for z in pts:
        if arr.size and np.min(np.abs(arr - z)) <= dedup:
            continue
        kept.append(z)
        arr = np.append(arr, z)
    return Orbit(tuple(kept), orb.escaped)


@dataclass(frozen=True)
class Recurrence:
    distance: float
    step: int
    steps: int
    escaped: bool = False


def recurrence_probe(f: Polynomial, c: complex, n: int) -> Recurrence:
    """``min |f^m(c) - c|`` over ``1 <= m <= n`` and the first step attaining it."""
    orb = evaluate_orbit(f, c, n)
    d = np.abs(np.array(orb.points[1:]) - c)
    if d.size == 0:
        return Recurrence(math.inf, 0, 0, orb.escaped)
    k = int(np.argmin(d))
    return Recurrence(float(d[k]), k + 1, len(d), orb.escaped)
