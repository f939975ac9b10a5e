"""Maps and radius schedules shared by the dynamics-level tests.

Each schedule is chosen so that no boundary circle passes through a
critical value (the tracer cannot continue branches across one).
"""
from __future__ import annotations

from dataclasses import dataclass

from plaque.dynamics import parse_map


@dataclass(frozen=True)
class Fixture:
    spec: str
    period_max: int
    r0: float
    depth: int

    @property
    def map(self):
        return parse_map(self.spec)

    def radii(self, n: int = 6, factor: float = 2.0, scale: float = 1.0):
        return tuple(scale * self.r0 * factor ** -j for j in range(n))


FIXTURES = {
    "z2": Fixture("quad:c=0", 1, 0.4, 32),
    "z2-1": Fixture("quad:c=-1", 2, 0.1, 32),
    "parabolic": Fixture("quad:c=0.25", 1, 1.2, 64),
    "siegel": Fixture("siegel:golden", 1, 0.1, 32),
}
