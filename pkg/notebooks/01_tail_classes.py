"""
Binary sequences up to finitely many changes
============================================

Two 0/1 sequences are identified when they differ in finitely many places.
For eventually periodic sequences a class is just a residue word: the bit
at every late enough position ``k`` is ``w[(k - 1) % p]``.
"""
from plaque.seqlattice import (EventuallyPeriodicSequence, Signature, canonicalize,
                               diagonal_witness, evaluate, meet_chain_reduce, shift_class,
                               sig_shift, sq_class)

# A concrete sequence: three leading ones, then 0, 0, 1 repeated.
seq = EventuallyPeriodicSequence("111", "001")
print("first 12 bits :", "".join(map(str, seq.truncate(12))))

# The preperiod is forgotten, and residues are taken from absolute positions.
cls = canonicalize(seq)
print("its class     :", cls, " (eventually: ones exactly at the multiples of 3)")

# sq(n) has ones exactly at multiples of n.  Meets of these obey the lcm law.
print("sq(2) & sq(3) :", sq_class(2) & sq_class(3))
print("sq(4) <= sq(2):", sq_class(4) <= sq_class(2))

# Shifting prepends zeros; the group law holds exactly on residue words.
a = sq_class(3)
print("shift(1, sq3) :", shift_class(a, 1), "  shift(-1, shift(1, sq3)) == sq3:",
      shift_class(shift_class(a, 1), -1) == a)

# The same algebra through the small expression language used by the CLI.
print("expression    :", evaluate("!(sq(2) | shift(1, sq(4)))"))

# Downsets generated by classes (signatures).  The two shifts of sq(2) meet at 0.
s = Signature.alpha(sq_class(2))
print("alpha[sq2] & shift :", s & sig_shift(s, 1), "(bottom)")

# A strictly decreasing chain never stabilizes, yet a nonzero class sits below
# every member: its n-th one is the n-th one of the n-th partial meet.
chain = [sq_class(2 ** k) for k in range(1, 5)]
print("chain stabilized?  :", meet_chain_reduce(chain, len(chain)).stabilized)
print("diagonal witness   :", diagonal_witness(chain, 4))
