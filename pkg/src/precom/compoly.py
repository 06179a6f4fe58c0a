"""Commutative polynomials in weighted generator symbols.

Symbols carry a base name, a filtration level, and a weight (their
t-degree in the series picture); a symbol exists only for weight >= level.
Monomials are multisets of symbols compared by

    (factor count, total weight, sorted symbol keys lexicographically),

so fewer factors always means smaller.  A relation "quadratic part =
linear part" therefore rewrites the quadratic side downward and single
symbols stay irreducible unless completion *proves* a linear leading
monomial — the alarm the embedding drivers watch for.  The order is
multiplicative: appending a symbol to two multisets shifts the
multiplicity of that symbol in both, which moves neither the smallest
symbol whose multiplicities differ nor the direction of the difference.
"""

from __future__ import annotations

import heapq
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

__all__ = [
    "GenSymbol",
    "ComMonomial",
    "COM_ONE",
    "ComPoly",
    "com_compare",
    "com_reduce",
    "com_reduce_with_trace",
    "s_polynomial",
    "BuchbergerReport",
    "buchberger_bounded",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class GenSymbol:
    """A generator symbol: ``base`` seen at t-degree ``weight``, tagged
    with the filtration ``level`` of its base element.  ``rank`` is the
    base's position in the algebra's ordered basis and only breaks ties
    between distinct bases at equal weight and level."""

    base: str
    level: int
    weight: int
    rank: int = 0

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("symbol level must be positive")
        if self.weight < self.level:
            raise ValueError(
                "symbol weight must be at least its level (got weight %d, level %d)"
                % (self.weight, self.level))

    @property
    def key(self) -> tuple:
        return (self.weight, self.level, self.rank, self.base)

    def __lt__(self, other: "GenSymbol") -> bool:
        return self.key < other.key

    def __le__(self, other: "GenSymbol") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "GenSymbol") -> bool:
        return self.key > other.key

    def __ge__(self, other: "GenSymbol") -> bool:
        return self.key >= other.key

    def __str__(self) -> str:
        return "%s[%d]" % (self.base, self.weight)


class ComMonomial:
    """A commutative monomial: a multiset of symbols kept as a sorted
    tuple, with the comparison key cached."""

    __slots__ = ("factors", "key", "_hash")

    def __init__(self, factors: Iterable[GenSymbol] = ()):
        fs = tuple(sorted(factors, key=lambda s: s.key))
        self.factors = fs
        self.key = (len(fs), sum(f.weight for f in fs),
                    tuple(f.key for f in fs))
        self._hash = hash(fs)

    @property
    def count(self) -> int:
        return len(self.factors)

    @property
    def weight(self) -> int:
        return self.key[1]

    def __mul__(self, other: "ComMonomial") -> "ComMonomial":
        return ComMonomial(self.factors + other.factors)

    def divides(self, other: "ComMonomial") -> bool:
        if self.count > other.count or self.weight > other.weight:
            return False
        mine = Counter(self.factors)
        theirs = Counter(other.factors)
        return all(theirs[s] >= n for s, n in mine.items())

    def div(self, other: "ComMonomial") -> "ComMonomial":
        """self / other; raises if other does not divide self."""
        left = Counter(self.factors)
        left.subtract(Counter(other.factors))
        if any(n < 0 for n in left.values()):
            raise ValueError("monomial %r does not divide %r" % (other, self))
        return ComMonomial(left.elements())

    def lcm(self, other: "ComMonomial") -> "ComMonomial":
        a, b = Counter(self.factors), Counter(other.factors)
        return ComMonomial((a | b).elements())

    def __eq__(self, other) -> bool:
        return isinstance(other, ComMonomial) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def __repr__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(str(f) for f in self.factors)


COM_ONE = ComMonomial(())


def com_compare(m1: ComMonomial, m2: ComMonomial) -> int:
    """-1, 0, or 1 as m1 is below, equal to, or above m2."""
    if m1.key < m2.key:
        return -1
    if m1.key > m2.key:
        return 1
    return 0


class ComPoly:
    """A polynomial as a finite monomial -> nonzero-Fraction map."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean: dict[ComMonomial, Fraction] = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, _ZERO) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "ComPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls) -> "ComPoly":
        return cls._raw({})

    @classmethod
    def monomial(cls, m: ComMonomial, coeff=1) -> "ComPoly":
        c = Fraction(coeff)
        return cls._raw({m: c} if c else {})

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple]) -> "ComPoly":
        out: dict[ComMonomial, Fraction] = {}
        for m, c in pairs:
            c = Fraction(c)
            nc = out.get(m, _ZERO) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return cls._raw(out)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, ComPoly) and self.terms == other.terms

    def __add__(self, other: "ComPoly") -> "ComPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, _ZERO) + c
            if nc:
                out[m] = nc
            else:
                del out[m]
        return ComPoly._raw(out)

    def __sub__(self, other: "ComPoly") -> "ComPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, _ZERO) - c
            if nc:
                out[m] = nc
            else:
                del out[m]
        return ComPoly._raw(out)

    def __neg__(self) -> "ComPoly":
        return ComPoly._raw({m: -c for m, c in self.terms.items()})

    def scale(self, coeff) -> "ComPoly":
        c = Fraction(coeff)
        if not c:
            return ComPoly.zero()
        return ComPoly._raw({m: a * c for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ComPoly):
            out: dict[ComMonomial, Fraction] = {}
            for m, a in self.terms.items():
                for n, b in other.terms.items():
                    mn = m * n
                    nc = out.get(mn, _ZERO) + a * b
                    if nc:
                        out[mn] = nc
                    else:
                        del out[mn]
            return ComPoly._raw(out)
        return self.scale(other)

    __rmul__ = __mul__

    def mul_monomial(self, m: ComMonomial, coeff=1) -> "ComPoly":
        c = Fraction(coeff)
        if not c:
            return ComPoly.zero()
        return ComPoly._raw({n * m: a * c for n, a in self.terms.items()})

    def leading(self) -> ComMonomial:
        if not self.terms:
            raise ValueError("no leading monomial: zero polynomial")
        return max(self.terms)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading()]

    def monic(self) -> "ComPoly":
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self.scale(1 / lc)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0].key, reverse=True)

    def weights(self) -> set:
        return {m.weight for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if c == 1:
                txt = repr(m)
            elif c == -1:
                txt = "-" + repr(m)
            else:
                txt = "%s %s" % (c, repr(m))
            parts.append(txt)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _require_monic(G: Sequence[ComPoly]) -> None:
    for g in G:
        if not g:
            raise ValueError("zero polynomial in relation list")
        if g.leading_coeff() != 1:
            raise ValueError("relations must be monic")


def _find_divisor(m: ComMonomial, G: Sequence[ComPoly]):
    for i, g in enumerate(G):
        if g.leading().divides(m):
            return i
    return None


class _MaxItem:
    __slots__ = ("m",)

    def __init__(self, m: ComMonomial):
        self.m = m

    def __lt__(self, other: "_MaxItem") -> bool:
        return self.m.key > other.m.key


def _reduce_largest(terms: dict, G: Sequence[ComPoly], trace=None) -> dict:
    # Descending sweep: replacements only introduce strictly smaller
    # monomials (tail < lead, and the order is multiplicative), so a
    # popped monomial never returns.
    heap = [_MaxItem(m) for m in terms]
    heapq.heapify(heap)
    pending = set(terms)
    while heap:
        m = heapq.heappop(heap).m
        pending.discard(m)
        c = terms.get(m, _ZERO)
        if not c:
            terms.pop(m, None)
            continue
        i = _find_divisor(m, G)
        if i is None:
            continue
        g = G[i]
        q = m.div(g.leading())
        if trace is not None:
            trace.append((c, q, i))
        del terms[m]
        for t, a in g.terms.items():
            if t == g.leading():
                continue
            w = t * q
            nc = terms.get(w, _ZERO) - c * a
            if nc:
                terms[w] = nc
                if w not in pending:
                    pending.add(w)
                    heapq.heappush(heap, _MaxItem(w))
            else:
                terms.pop(w, None)
    return terms


def _reduce_smallest(terms: dict, G: Sequence[ComPoly]) -> dict:
    while True:
        target = None
        for m in sorted(terms):
            if _find_divisor(m, G) is not None:
                target = m
                break
        if target is None:
            return terms
        c = terms.pop(target)
        g = G[_find_divisor(target, G)]
        q = target.div(g.leading())
        for t, a in g.terms.items():
            if t == g.leading():
                continue
            w = t * q
            nc = terms.get(w, _ZERO) - c * a
            if nc:
                terms[w] = nc
            else:
                terms.pop(w, None)


def com_reduce(p: ComPoly, G: Sequence[ComPoly],
               strategy: str = "largest") -> ComPoly:
    """Normal form of p modulo the monic relation list G: no monomial of
    the result is divisible by any leading monomial of G."""
    _require_monic(G)
    terms = dict(p.terms)
    if strategy == "largest":
        return ComPoly._raw(_reduce_largest(terms, G))
    if strategy == "smallest":
        return ComPoly._raw(_reduce_smallest(terms, G))
    raise ValueError("unknown strategy %r" % (strategy,))


def com_reduce_with_trace(p: ComPoly, G: Sequence[ComPoly]):
    """Normal form plus the steps (coeff, quotient monomial, index into G)
    taken; p - nf == sum of coeff * quotient * G[index] over the steps."""
    _require_monic(G)
    trace: list = []
    terms = dict(p.terms)
    return ComPoly._raw(_reduce_largest(terms, G, trace)), trace


def s_polynomial(f: ComPoly, g: ComPoly) -> ComPoly:
    """lcm-cancellation of the leading terms of two monic polynomials."""
    if not f or not g:
        raise ValueError("zero polynomial has no S-polynomial")
    _require_monic([f, g])
    lf, lg = f.leading(), g.leading()
    big = lf.lcm(lg)
    return f.mul_monomial(big.div(lf)) - g.mul_monomial(big.div(lg))


@dataclass
class BuchbergerReport:
    basis: list
    added: list
    pairs_considered: int
    pairs_processed: int
    pairs_skipped_bound: int
    pairs_skipped_coprime: int
    weight_bound: int
    factor_bound: int

    @property
    def linear_leadings(self) -> list:
        return [p for p in self.basis if p.leading().count == 1]

    @property
    def injective(self) -> bool:
        """No completed relation rewrites a bare generator symbol."""
        return not self.linear_leadings


def buchberger_bounded(G: Sequence[ComPoly], weight_bound: int,
                       factor_bound: int = 4):
    """Complete G over S-pairs whose lcm has weight <= weight_bound and
    at most factor_bound factors.  Input must be weight-homogeneous;
    reductions then stay homogeneous and, because tails never have more
    factors than their leading monomial under this order, the factor
    budget is only ever tested at the lcm.

    Returns (basis, report).  Any factor-count-1 leading monomial in the
    final basis is collected in report.linear_leadings.
    """
    basis: list[ComPoly] = []
    for g in G:
        if not g:
            raise ValueError("zero polynomial in relation list")
        if not g.is_homogeneous():
            raise ValueError(
                "relations must be weight-homogeneous; got weights %s in %r"
                % (sorted(g.weights()), g))
        basis.append(g.monic())
    pairs: deque = deque()
    for j in range(len(basis)):
        for i in range(j):
            pairs.append((i, j))
    considered = processed = skipped_bound = skipped_coprime = 0
    added: list[ComPoly] = []
    while pairs:
        i, j = pairs.popleft()
        considered += 1
        f, g = basis[i], basis[j]
        lf, lg = f.leading(), g.leading()
        big = lf.lcm(lg)
        if big.weight > weight_bound or big.count > factor_bound:
            skipped_bound += 1
            continue
        if big.count == lf.count + lg.count:
            # Coprime leading monomials: the S-polynomial reduces to zero
            # by the product criterion.
            skipped_coprime += 1
            continue
        processed += 1
        nf = com_reduce(s_polynomial(f, g), basis)
        if nf:
            nf = nf.monic()
            basis.append(nf)
            added.append(nf)
            k = len(basis) - 1
            for i2 in range(k):
                pairs.append((i2, k))
    report = BuchbergerReport(basis, added, considered, processed,
                              skipped_bound, skipped_coprime,
                              weight_bound, factor_bound)
    return basis, report
