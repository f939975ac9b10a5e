"""
Pulling disks back along a backward orbit
=========================================

Start with a round disk ``U_1`` around ``x_1`` and take ``U_{i+1}`` to be the
component of ``f^{-1}(U_i)`` containing ``x_{i+1}``.  Boundaries are traced
numerically; the index word records at which levels a critical point lies
inside ``U_i``.
"""
import numpy as np

from plaque.dynamics import periodic_cycles, quadratic
from plaque.pullback import backward_orbit_from_cycle, forward_residual, index_bits, pullback_chain
from plaque.signature import branching_count

f = quadratic(0)
zero, one = sorted(periodic_cycles(f, 1), key=lambda c: abs(c.points[0]))

# Around the super-attracting point 0 every level contains the critical point,
# and the disks grow like 0.25 ** (2 ** -i) toward the unit circle.
chain = pullback_chain(f, backward_orbit_from_cycle(zero), 0.25, 8)
print("fixed point 0, r = 0.25 :", index_bits(chain, 0))
print("  boundary radii        :", [round(float(np.abs(lv.loop.samples).mean()), 6) for lv in chain.levels])
print("  traversals            :", [lv.loop.traversals for lv in chain.levels])
print("  forward residual      :", forward_residual(f, chain))
print("  branching count B     :", branching_count(chain))

# Around the repelling point 1 the disks shrink and never meet 0.
chain = pullback_chain(f, backward_orbit_from_cycle(one), 0.1, 8)
print("fixed point 1, r = 0.1  :", index_bits(chain, 0), " B =", branching_count(chain)[0])

# The super-attracting two-cycle {0, -1} of z^2 - 1: the critical point is
# inside at every other level, and which levels depends on the base point.
g = quadratic(-1)
(two,) = periodic_cycles(g, 2)
for base in (1, 2):
    orbit = backward_orbit_from_cycle(two, base)
    chain = pullback_chain(g, orbit, 0.05, 12)
    print(f"two-cycle, x_1 = {orbit.point(1).real:2.0f} :", index_bits(chain, 0))
