"""Almost-equality classes of eventually periodic binary sequences.

A class is stored by its tail: a minimal period ``p`` and a residue word ``w``
with ``w[(k - 1) % p]`` the bit at every sufficiently large position ``k``.
Positions are 1-based and residues are absolute (taken from the global
position, not from the end of some preperiod), so every operation reduces to
bitwise work on residue-aligned words.

Downsets ``alpha(a) = {b : b <= a}`` and finite unions of them are modelled by
:class:`Signature`, kept in antichain normal form.
"""
from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "EventuallyPeriodicSequence",
    "TailClass",
    "Signature",
    "ChainReduction",
    "BottomReachedError",
    "canonicalize",
    "boolean_op",
    "leq",
    "shift_class",
    "sq_class",
    "sig_op",
    "sig_contains",
    "sig_shift",
    "meet_chain_reduce",
    "diagonal_witness",
    "parse_class",
    "parse_signature",
    "evaluate",
    "ZERO",
    "ONE",
]


def _bits(word) -> tuple[int, ...]:
    if isinstance(word, str):
        if not set(word) <= {"0", "1"}:
            raise ValueError(f"bit word may only contain 0/1: {word!r}")
        return tuple(map(int, word))
    out = tuple(map(int, word))
    if not set(out) <= {0, 1}:
        raise ValueError(f"bit word may only contain 0/1: {word!r}")
    return out


def _minimal_period(w: tuple[int, ...]) -> tuple[int, ...]:
    # the smallest rotation mapping a cyclic word to itself is its period
    b = bytes(w)
    return w[:(b + b).find(b, 1)]


@dataclass(frozen=True)
class EventuallyPeriodicSequence:
    """A concrete sequence: ``preperiod`` at positions 1..s, then ``period`` repeated."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __init__(self, preperiod="", period="0"):
        object.__setattr__(self, "preperiod", _bits(preperiod))
        object.__setattr__(self, "period", _bits(period))
        if not self.period:
            raise ValueError("period word must be nonempty")

    def bit(self, k: int) -> int:
        if k < 1:
            raise IndexError("positions are 1-based")
        s = len(self.preperiod)
        if k <= s:
            return self.preperiod[k - 1]
        return self.period[(k - s - 1) % len(self.period)]

    def truncate(self, length: int) -> list[int]:
        return [self.bit(k) for k in range(1, length + 1)]

    def canonical(self) -> "EventuallyPeriodicSequence":
        """Minimal period, then minimal preperiod."""
        per = _minimal_period(self.period)
        pre = list(self.preperiod)
        # peel preperiod bits that already agree with the periodic tail
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = (per[-1],) + per[:-1]
        return EventuallyPeriodicSequence(tuple(pre), per)


@dataclass(frozen=True)
class TailClass:
    """Element of the algebra of binary sequences modulo finite differences."""

    p: int
    w: tuple[int, ...]

    def __init__(self, p: int | None = None, w=None):
        if w is None:
            raise ValueError("residue word required")
        w = _bits(w)
        if not w:
            raise ValueError("residue word must be nonempty")
        if p is not None and p != len(w):
            raise ValueError(f"period {p} does not match word length {len(w)}")
        w = _minimal_period(w)
        object.__setattr__(self, "p", len(w))
        object.__setattr__(self, "w", w)

    @classmethod
    def from_word(cls, w) -> "TailClass":
        return cls(None, w)

    @classmethod
    def _trusted(cls, w: tuple[int, ...]) -> "TailClass":
        # internal fast path: ``w`` is already a nonempty tuple of 0/1 ints
        obj = object.__new__(cls)
        w = _minimal_period(w)
        object.__setattr__(obj, "p", len(w))
        object.__setattr__(obj, "w", w)
        return obj

    def bit(self, k: int) -> int:
        """Bit of the purely periodic representative at 1-based position ``k``."""
        return self.w[(k - 1) % self.p]

    def lifted(self, q: int) -> tuple[int, ...]:
        if q % self.p:
            raise ValueError(f"{q} is not a multiple of the period {self.p}")
        return self.w * (q // self.p)

    def ones(self):
        """Yield the one-positions of the periodic representative, in order."""
        if not any(self.w):
            return
        k = 1
        while True:
            if self.w[(k - 1) % self.p]:
                yield k
            k += 1

    @property
    def is_zero(self) -> bool:
        return self.w == (0,)

    @property
    def is_one(self) -> bool:
        return self.w == (1,)

    def __or__(self, other: "TailClass") -> "TailClass":
        return boolean_op("join", self, other)

    def __and__(self, other: "TailClass") -> "TailClass":
        return boolean_op("meet", self, other)

    def __invert__(self) -> "TailClass":
        return boolean_op("neg", self)

    def __le__(self, other):
        if not isinstance(other, TailClass):
            return NotImplemented
        return leq(self, other)

    def __lt__(self, other):
        if not isinstance(other, TailClass):
            return NotImplemented
        return self != other and leq(self, other)

    def __ge__(self, other):
        if not isinstance(other, TailClass):
            return NotImplemented
        return leq(other, self)

    def __gt__(self, other):
        if not isinstance(other, TailClass):
            return NotImplemented
        return self != other and leq(other, self)

    def sort_key(self):
        return (self.p, self.w)

    def __str__(self) -> str:
        return f"p={self.p};w={''.join(map(str, self.w))}"

    def __repr__(self) -> str:
        return f"<{self.p};{','.join(map(str, self.w))}>"


ZERO = TailClass(1, (0,))
ONE = TailClass(1, (1,))


def canonicalize(seq: EventuallyPeriodicSequence) -> TailClass:
    """Map a concrete sequence to its almost-equality class."""
    s, per = len(seq.preperiod), seq.period
    p = len(per)
    w = [0] * p
    for k in range(s + 1, s + p + 1):
        w[(k - 1) % p] = per[(k - s - 1) % p]
    return TailClass(None, w)


@lru_cache(maxsize=1 << 16)
def _binary(op: str, a: TailClass, b: TailClass) -> TailClass:
    q = math.lcm(a.p, b.p)
    return TailClass._trusted(tuple(map(op, a.lifted(q), b.lifted(q))))


_OPS = {"join": operator.or_, "meet": operator.and_}


def boolean_op(op: str, a: TailClass, b: TailClass | None = None) -> TailClass:
    """``join``, ``meet`` or ``neg`` on residue-aligned words."""
    if op == "neg":
        if b is not None:
            raise ValueError("neg takes a single argument")
        return TailClass._trusted(tuple(map((1).__xor__, a.w)))
    if op not in _OPS:
        raise ValueError(f"unknown boolean operation {op!r}")
    if b is None:
        raise ValueError(f"{op} needs two arguments")
    return _binary(_OPS[op], a, b)


def leq(b: TailClass, a: TailClass) -> bool:
    return boolean_op("join", a, b) == a


def shift_class(a: TailClass, m: int) -> TailClass:
    """Prepend ``m`` zeros (``m > 0``) or drop ``-m`` leading entries (``m < 0``)."""
    k = m % a.p
    return TailClass._trusted(a.w[a.p - k:] + a.w[:a.p - k])


def sq_class(n: int) -> TailClass:
    """Class of the sequence with ones exactly at ``n, 2n, 3n, ...``."""
    if n < 1:
        raise ValueError("sq(n) needs n >= 1")
    return TailClass(None, [0] * (n - 1) + [1])


def _antichain(classes: Iterable[TailClass]) -> tuple[TailClass, ...]:
    uniq = sorted(set(classes), key=TailClass.sort_key)
    keep = [a for a in uniq if not any(a != b and leq(a, b) for b in uniq)]
    return tuple(keep)


@dataclass(frozen=True)
class Signature:
    """Finite union of principal downsets ``alpha(a_1) | ... | alpha(a_k)``."""

    generators: tuple[TailClass, ...]

    def __init__(self, generators: Iterable[TailClass]):
        gens = _antichain(generators)
        if not gens:
            raise ValueError("a signature needs at least one generator")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def alpha(cls, a: TailClass) -> "Signature":
        return cls((a,))

    @classmethod
    def bottom(cls) -> "Signature":
        return cls((ZERO,))

    @classmethod
    def top(cls) -> "Signature":
        return cls((ONE,))

    @property
    def is_bottom(self) -> bool:
        return self.generators == (ZERO,)

    @property
    def is_principal(self) -> bool:
        return len(self.generators) == 1

    def __contains__(self, b: TailClass) -> bool:
        return sig_contains(self, b)

    def __or__(self, other: "Signature") -> "Signature":
        return sig_op("union", self, other)

    def __and__(self, other: "Signature") -> "Signature":
        return sig_op("intersect", self, other)

    def __le__(self, other: "Signature") -> bool:
        return all(sig_contains(other, a) for a in self.generators)

    def __str__(self) -> str:
        return ";".join(str(a) for a in self.generators)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"alpha{a!r}" for a in self.generators) + "}"


def sig_op(op: str, s: Signature, t: Signature) -> Signature:
    if op == "union":
        return Signature(s.generators + t.generators)
    if op == "intersect":
        return Signature(a & b for a in s.generators for b in t.generators)
    raise ValueError(f"unknown signature operation {op!r}")


def sig_contains(s: Signature, b: TailClass) -> bool:
    return any(leq(b, a) for a in s.generators)


def sig_shift(s: Signature, m: int) -> Signature:
    return Signature(shift_class(a, m) for a in s.generators)


# -- countable intersections, reduced to finite data ----------------------


class BottomReachedError(ValueError):
    """A partial meet of the chain is the zero class."""


@dataclass(frozen=True)
class ChainReduction:
    stabilized: bool
    n: int | None
    meet: TailClass
    partial_meets: tuple[TailClass, ...]


def _partial_meets(ts: Sequence[TailClass]) -> list[TailClass]:
    out: list[TailClass] = []
    for t in ts:
        out.append(t if not out else out[-1] & t)
    return out


def meet_chain_reduce(ts: Sequence[TailClass], window: int) -> ChainReduction:
    """Detect where the partial meets ``t_1 & ... & t_n`` stop changing.

    Looks at the first ``window`` partial meets. Stabilization needs the final
    value to be confirmed by at least one later partial meet; the exception
    is a window of one, which is stable by definition.
    """
    if not ts:
        raise ValueError("empty chain")
    if not 1 <= window <= len(ts):
        raise ValueError(f"window must be in 1..{len(ts)}")
    meets = _partial_meets(ts[:window])
    last = meets[-1]
    n = window
    while n > 1 and meets[n - 2] == last:
        n -= 1
    stable = n < window or window == 1
    return ChainReduction(stable, n if stable else None, last, tuple(meets))


def diagonal_witness(ts: Sequence[TailClass], k: int) -> list[int]:
    """First ``k`` one-positions of the diagonal sequence below every partial meet.

    The ``n``-th one of the witness is the ``n``-th one of the ``n``-th partial
    meet (purely periodic representative). Past the end of ``ts`` the chain
    is taken to be constant.
    """
    if not ts:
        raise ValueError("empty chain")
    if k < 1:
        raise ValueError("k must be positive")
    meets = _partial_meets(ts)
    positions = []
    for n in range(1, k + 1):
        t = meets[min(n, len(meets)) - 1]
        if t.is_zero:
            raise BottomReachedError(f"partial meet {n} is the zero class")
        ones = t.ones()
        for _ in range(n):
            pos = next(ones)
        positions.append(pos)
    return positions


# -- text forms ----------------------------------------------------------

_CLASS_RE = re.compile(r"p=(\d+);w=([01]+)")


def parse_class(text: str) -> TailClass:
    m = _CLASS_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"not a class literal: {text!r}")
    return TailClass(int(m.group(1)), m.group(2))


def parse_signature(text: str) -> Signature:
    text = text.strip()
    gens = [TailClass(int(p), w) for p, w in _CLASS_RE.findall(text)]
    if not gens or _CLASS_RE.sub("", text).strip(";") != "":
        raise ValueError(f"not a signature: {text!r}")
    return Signature(gens)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<lit>p=\d+;w=[01]+)|(?P<num>-?\d+)|(?P<name>sq|shift)"
    r"|(?P<op><=|[|&!(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ValueError(f"unexpected input at {pos}: {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    # grammar, loosest first:  cmp := or ['<=' or];  or := and {'|' and};
    # and := unary {'&' unary};  unary := '!' unary | atom
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        kind, val = self.peek()
        if kind is None or (value is not None and val != value):
            raise ValueError(f"expected {value or 'token'}, got {val!r}")
        self.i += 1
        return kind, val

    def parse(self):
        out = self.cmp()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input: {self.toks[self.i][1]!r}")
        return out

    def cmp(self):
        left = self.disj()
        if self.peek()[1] == "<=":
            self.take()
            return leq(left, self.disj())
        return left

    def disj(self):
        out = self.conj()
        while self.peek()[1] == "|":
            self.take()
            out = out | self.conj()
        return out

    def conj(self):
        out = self.unary()
        while self.peek()[1] == "&":
            self.take()
            out = out & self.unary()
        return out

    def unary(self):
        if self.peek()[1] == "!":
            self.take()
            return ~self.unary()
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "lit":
            return parse_class(val)
        if kind == "num" and val in ("0", "1"):
            return ONE if val == "1" else ZERO
        if kind == "name" and val == "sq":
            self.take("(")
            n = int(self.take()[1])
            self.take(")")
            return sq_class(n)
        if kind == "name" and val == "shift":
            self.take("(")
            m = int(self.take()[1])
            self.take(",")
            inner = self.disj()
            self.take(")")
            return shift_class(inner, m)
        if val == "(":
            inner = self.disj()
            self.take(")")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def evaluate(expr: str) -> TailClass | bool:
    """Evaluate a lattice expression such as ``"shift(1, sq(2)) | !sq(3)"``."""
    return _Parser(expr).parse()
