"""
Periodic cycles and their multipliers
=====================================

Cycles of period ``n`` are roots of ``f^n(z) - z`` that are not already
cycles of a smaller period.  The multiplier (the derivative of ``f^n``
along the cycle) decides the type of the cycle.
"""
import cmath

from plaque.dynamics import critical_points, parse_map, periodic_cycles

for spec, nmax in [("quad:c=0", 2), ("quad:c=-1", 2), ("quad:c=0.25", 1), ("siegel:golden", 1)]:
    f = parse_map(spec)
    print(f"\n{spec}   critical points {critical_points(f)}")
    for n in range(1, nmax + 1):
        for cyc in periodic_cycles(f, n):
            pts = ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in cyc.points)
            lam = cyc.multiplier
            print(f"  period {n}: [{pts}]  |lambda| = {abs(lam):.6f}  -> {cyc.label}")

# The Siegel map z^2 + lambda z has multiplier lambda = exp(2 pi i theta) at 0,
# with theta the golden mean: the rotation number is irrational.
f = parse_map("siegel:golden")
lam = f.coeffs[1]
print("\nrotation number at 0:", cmath.phase(lam) / (2 * cmath.pi) % 1)

# Counting: z^2 has 2, 1, 2, 3, 6, 9 cycles of exact period 1..6.
print("z^2 cycle counts:", [len(periodic_cycles(parse_map("quad:c=0"), n)) for n in range(1, 7)])
