"""
A non-periodic irregular orbit for the Siegel map
=================================================

For ``z^2 + lambda z`` with golden rotation number the critical point is
recurrent: its orbit returns arbitrarily close (at Fibonacci times).  A
backward orbit inside the closure of that orbit can be chosen so that the
pulled-back disks swallow the critical point again and again.
"""
from plaque.dynamics import critical_points, orbit_closure_sample, recurrence_probe, siegel_golden
from plaque.pullback import construct_irregular_orbit, index_bits, pullback_chain
from plaque.signature import estimate_signature, inverse_critical_probe

g = siegel_golden()
c = critical_points(g)[0]

for steps in (2000, 5000, 10000):
    rec = recurrence_probe(g, c, steps)
    print(f"closest return within {steps:>5} steps: {rec.distance:.5f} at step {rec.step}")

io = construct_irregular_orbit(g, c, c, 40)
print("\nengulfing depths:", io.engulf_depths, "with disk radii", io.radii)
print("orbit residual  :", io.orbit.max_residual(g))

# Index words along this orbit.  At the largest radius the word is not
# eventually periodic at this depth, so no class is inferred there.
for r in (0.4, 0.2, 0.1):
    print(f"r = {r:<4}:", index_bits(pullback_chain(g, io.orbit, r, 40), c))

est = estimate_signature(g, io.orbit, 0, [0.1 * 2.0 ** -j for j in range(6)], 40)
print("\nestimate at radii 0.1 * 2**-j:", est.value, est.verdict, est.notes)

# Inverse-critical probe: from a few points of the orbit closure, look for
# preimage chains staying near the closure whose pulled-back disk holds c.
sample = orbit_closure_sample(g, c, 5000).points
rep = inverse_critical_probe(g, c, sample, [1e-2], 6, points=sample[:3])
for e in rep.entries:
    print(f"  from {e.point:.4f}: {e.status} after {len(e.chain) - 1} preimages")
print("inverse-critical fraction on 3 points:", rep.fraction)
