"""
Signatures of cycle lifts
=========================

The signature of a backward orbit at a critical point is read off from the
index words over a decreasing schedule of radii.  Repelling cycles give the
bottom signature; attracting and parabolic cycles capturing the critical
point give a shift of the class of sq(n).  Every verdict holds only at the
depth and radii it was computed with.
"""
from plaque.dynamics import parse_map
from plaque.signature import EngineConfig, verify_cycle_theorem

cases = [("quad:c=0", 1, 0.4, 32), ("quad:c=-1", 2, 0.1, 32),
         ("quad:c=0.25", 1, 1.2, 64), ("siegel:golden", 1, 0.1, 32)]

for spec, nmax, r0, depth in cases:
    cfg = EngineConfig(depth=depth, r0=r0)
    report = verify_cycle_theorem(parse_map(spec), nmax, cfg)
    print(f"\n{spec}  (depth {depth}, radii {r0} * 2**-j, j = 0..5)")
    for row in report.rows:
        est = row.estimate
        print(f"  period {row.period} {row.label:<18} signature {str(est.value):<10}"
              f" {est.verdict:<12} {row.verdict:<10} predicted {row.prediction}  k={row.k}")
    print("  all stable rows match:", report.passed)

# The parabolic map needs large disks: the critical orbit creeps toward 1/2
# like 1/k, so a disk of radius r first captures it after roughly 1/r levels.
