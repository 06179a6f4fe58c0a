"""Universal pre-commutative envelopes of commutative algebras.

A commutative algebra A on an ordered basis presents an envelope by the
defining tree family together with one quadratic relation per basis pair:

    xy + yx - (x*y)        for x < y,
    xx - (x*x)/2           on the diagonal.

For the zero-multiplication (trivial) algebra the completed rewriting
system is known in closed form; this module carries those relation
families, the dimension formula for the envelope's graded pieces, and
drivers that verify the basis claims, sweep the odd-even vanishing law,
and detect collapse of an envelope onto a smaller algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Optional

from .magma import (
    Alphabet,
    Letter,
    MagmaPoly,
    NaWord,
    bracket,
    leaf,
    node,
)
from .rewrite import (
    ExplicitRelation,
    GsbReport,
    RelationSchema,
    ZinbielFamily,
    complete,
    irreducible_counts,
    normal_form,
    verify_gsb,
)

__all__ = [
    "CommAlgebra",
    "trivial_algebra",
    "idempotent_algebra",
    "truncated_power_algebra",
    "default_alphabet",
    "TailAnticommFamily",
    "TailSquareFamily",
    "enveloping_relations",
    "trivial_gsb",
    "trivial_envelope_dimension",
    "truncated_poly_relations",
    "verify_zinbiel_basis",
    "TrivialEnvelopeReport",
    "verify_trivial_envelope",
    "CollapseReport",
    "collapse_check",
    "OddEvenReport",
    "odd_even_zero_sweep",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class CommAlgebra:
    """A commutative algebra on an ordered basis with exact structure
    constants.  Only products x*y with rank(x) <= rank(y) are stored."""

    def __init__(self, alphabet: Alphabet,
                 products: Optional[dict] = None):
        self.alphabet = alphabet
        basis = set(alphabet.letters)
        table: dict[tuple[Letter, Letter], dict[Letter, Fraction]] = {}
        for (x, y), combo in (products or {}).items():
            if x not in basis or y not in basis:
                raise ValueError("product key uses letters outside the basis")
            if x.rank > y.rank:
                raise ValueError("store products with rank(x) <= rank(y) only")
            clean = {}
            for z, c in combo.items():
                if z not in basis:
                    raise ValueError("product value uses letters outside the basis")
                c = Fraction(c)
                if c:
                    clean[z] = c
            if clean:
                table[(x, y)] = clean
        self._products = table

    @property
    def basis(self) -> tuple[Letter, ...]:
        return self.alphabet.letters

    def product(self, x: Letter, y: Letter) -> dict[Letter, Fraction]:
        """The structure constants of x*y as a letter -> coefficient map."""
        if x.rank > y.rank:
            x, y = y, x
        return dict(self._products.get((x, y), {}))

    def __repr__(self) -> str:
        return "CommAlgebra(%r, %d products)" % (self.alphabet, len(self._products))


def default_alphabet(d: int) -> Alphabet:
    if d < 1:
        raise ValueError("need at least one letter")
    if d <= 4:
        return Alphabet("xyzw"[:d])
    return Alphabet(["x%d" % i for i in range(1, d + 1)])


def trivial_algebra(d: int = 2, names: Optional[Iterable[str]] = None) -> CommAlgebra:
    """The d-dimensional algebra with all products zero."""
    ab = Alphabet(names) if names is not None else default_alphabet(d)
    return CommAlgebra(ab, {})


def idempotent_algebra(name: str = "x") -> CommAlgebra:
    """The one-dimensional algebra with e*e = e."""
    ab = Alphabet([name])
    e = ab[0]
    return CommAlgebra(ab, {(e, e): {e: 1}})


def truncated_power_algebra(n: int) -> CommAlgebra:
    """Basis x1..xn with x_i * x_j = x_(i+j), zero once i+j exceeds n.

    This is the augmentation ideal of a truncated polynomial algebra in
    one variable, with x_i the i-th power of the variable.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ab = Alphabet(["x%d" % i for i in range(1, n + 1)])
    products = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if i + j <= n:
                products[(ab[i - 1], ab[j - 1])] = {ab[i + j - 1]: 1}
    return CommAlgebra(ab, products)


# ---------------------------------------------------------------------------
# Relation families for the trivial algebra's envelope

class TailAnticommFamily(RelationSchema):
    """(a x) y + (a y) x for letters x < y and left-combed a of even length.

    Leading monomial (a x) y; rewriting swaps the two letters after an
    even-length combed prefix, at the cost of a sign.
    """

    def __init__(self, alphabet: Optional[Alphabet] = None):
        self.alphabet = alphabet

    def match(self, word: NaWord) -> Optional[MagmaPoly]:
        if word.letter is not None:
            return None
        ax, y = word.left, word.right
        if y.letter is None or ax.letter is not None:
            return None
        a, x = ax.left, ax.right
        if x.letter is None:
            return None
        if not x.letter.rank < y.letter.rank:
            return None
        if a.length % 2 or not a.is_comb:
            return None
        other = node(node(a, y), x)
        return MagmaPoly._raw({word: _ONE, other: _ONE})

    def instances(self, bound: int) -> tuple[MagmaPoly, ...]:
        if self.alphabet is None:
            raise ValueError("family cannot enumerate instances without an alphabet")
        out = []
        letters = self.alphabet.letters
        for m in range(2, bound - 1, 2):
            for tup in iproduct(letters, repeat=m):
                a = bracket(tup, "left")
                for x in letters:
                    for y in letters:
                        if x.rank < y.rank:
                            out.append(self.match(node(node(a, leaf(x)), leaf(y))))
        return tuple(out)


class TailSquareFamily(RelationSchema):
    """(a x) x for any letter x and left-combed a of even length."""

    def __init__(self, alphabet: Optional[Alphabet] = None):
        self.alphabet = alphabet

    def match(self, word: NaWord) -> Optional[MagmaPoly]:
        if word.letter is not None:
            return None
        ax, y = word.left, word.right
        if y.letter is None or ax.letter is not None:
            return None
        a, x = ax.left, ax.right
        if x.letter is None or x.letter is not y.letter:
            return None
        if a.length % 2 or not a.is_comb:
            return None
        return MagmaPoly._raw({word: _ONE})

    def instances(self, bound: int) -> tuple[MagmaPoly, ...]:
        if self.alphabet is None:
            raise ValueError("family cannot enumerate instances without an alphabet")
        out = []
        letters = self.alphabet.letters
        for m in range(2, bound - 1, 2):
            for tup in iproduct(letters, repeat=m):
                a = bracket(tup, "left")
                for x in letters:
                    out.append(self.match(node(node(a, leaf(x)), leaf(x))))
        return tuple(out)


def enveloping_relations(A: CommAlgebra) -> list[RelationSchema]:
    """Defining relations of the universal envelope of A.

    The tree family plus, for each basis pair x <= y, the monic quadratic
    relation whose leading monomial is xy.  The length-first order makes
    the quadratic monomial lead regardless of the structure constants.
    """
    rels: list[RelationSchema] = [ZinbielFamily(A.alphabet)]
    letters = A.alphabet.letters
    for i, x in enumerate(letters):
        for y in letters[i:]:
            if x is y:
                terms = {node(leaf(x), leaf(x)): Fraction(2)}
            else:
                terms = {node(leaf(x), leaf(y)): _ONE, node(leaf(y), leaf(x)): _ONE}
            for z, c in A.product(x, y).items():
                w = leaf(z)
                nc = terms.get(w, _ZERO) - c
                if nc:
                    terms[w] = nc
                else:
                    terms.pop(w, None)
            poly = MagmaPoly._raw(terms)
            if poly.leading().length != 2:
                raise AssertionError("quadratic monomial must lead an enveloping relation")
            rels.append(ExplicitRelation(poly))
    return rels


def trivial_gsb(alphabet: Alphabet) -> list[RelationSchema]:
    """The completed rewriting system for the trivial algebra's envelope:
    the tree family, letter anticommutators and squares, and the
    even-prefix tail families."""
    rels: list[RelationSchema] = [ZinbielFamily(alphabet)]
    letters = alphabet.letters
    for i, x in enumerate(letters):
        for y in letters[i + 1:]:
            rels.append(ExplicitRelation(
                MagmaPoly._raw({node(leaf(x), leaf(y)): _ONE,
                                node(leaf(y), leaf(x)): _ONE})))
    for x in letters:
        rels.append(ExplicitRelation(MagmaPoly._raw({node(leaf(x), leaf(x)): _ONE})))
    rels.append(TailAnticommFamily(alphabet))
    rels.append(TailSquareFamily(alphabet))
    return rels


def trivial_envelope_dimension(d: int, n: int) -> int:
    """Dimension of the length-n piece of the trivial envelope on d letters:
    C(d,2)^(n//2) * d^(n%2).  The basis consists of left combs whose
    letters strictly descend in odd-even adjacent pairs."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    return math.comb(d, 2) ** (n // 2) * d ** (n % 2)


def truncated_poly_relations(n: int, alphabet: Optional[Alphabet] = None
                             ) -> list[RelationSchema]:
    """The completed rewriting system for the truncated power algebra:
    the tree family plus, for every ordered pair (i, j),

        x_i x_j - (j/(i+j)) x_(i+j)    when i+j <= n,
        x_i x_j                        when i+j >  n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ab = alphabet if alphabet is not None else Alphabet(
        ["x%d" % i for i in range(1, n + 1)])
    if len(ab) != n:
        raise ValueError("alphabet size must equal n")
    rels: list[RelationSchema] = [ZinbielFamily(ab)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            terms = {node(leaf(ab[i - 1]), leaf(ab[j - 1])): _ONE}
            if i + j <= n:
                terms[leaf(ab[i + j - 1])] = Fraction(-j, i + j)
            rels.append(ExplicitRelation(MagmaPoly._raw(terms)))
    return rels


# ---------------------------------------------------------------------------
# Drivers

def verify_zinbiel_basis(d: int, bound: int) -> GsbReport:
    """Confluence of the bare tree family on d letters up to the bound."""
    return verify_gsb([ZinbielFamily(default_alphabet(d))], bound)


@dataclass
class TrivialEnvelopeReport:
    gsb: GsbReport
    counts: list[int]
    expected_counts: list[int]
    completion_counts: Optional[list[int]]

    @property
    def verified(self) -> bool:
        ok = self.gsb.verified and self.counts == self.expected_counts
        if self.completion_counts is not None:
            ok = ok and self.completion_counts == self.expected_counts[:len(self.completion_counts)]
        return ok


def verify_trivial_envelope(d: int, bound: int,
                            completion_bound: Optional[int] = None,
                            run_completion: bool = True) -> TrivialEnvelopeReport:
    """Three checks on the trivial algebra's envelope over d letters:
    the closed-form relation set is confluent to the bound, its
    irreducible counts match the dimension formula, and completing the
    raw defining relations reproduces the same counts."""
    ab = default_alphabet(d)
    rels = trivial_gsb(ab)
    rep = verify_gsb(rels, bound)
    counts = irreducible_counts(rels, ab, bound)
    expected = [trivial_envelope_dimension(d, n) for n in range(1, bound + 1)]
    completion_counts = None
    if run_completion:
        cb = completion_bound if completion_bound is not None else bound
        A = trivial_algebra(d)
        completed = complete(enveloping_relations(A), cb)
        completion_counts = irreducible_counts(completed, A.alphabet, cb)
    return TrivialEnvelopeReport(rep, counts, expected, completion_counts)


@dataclass
class CollapseReport:
    completed: list[RelationSchema]
    counts: list[int]
    star_table: dict
    mismatches: list

    @property
    def matches_structure(self) -> bool:
        return not self.mismatches

    @property
    def collapsed(self) -> bool:
        """True when some generator product fails to reproduce A."""
        return bool(self.mismatches)


def collapse_check(A: CommAlgebra, bound: int) -> CollapseReport:
    """Complete the enveloping relations and compare the induced star
    products of generators, nf(xy + yx), against A's structure constants."""
    completed = complete(enveloping_relations(A), bound)
    counts = irreducible_counts(completed, A.alphabet, bound)
    table = {}
    mismatches = []
    letters = A.alphabet.letters
    for i, x in enumerate(letters):
        for y in letters[i:]:
            p = MagmaPoly.from_terms([(node(leaf(x), leaf(y)), 1),
                                      (node(leaf(y), leaf(x)), 1)])
            got = normal_form(p, completed)
            expected = MagmaPoly.from_terms(
                [(leaf(z), c) for z, c in A.product(x, y).items()])
            table[(x, y)] = got
            if got != expected:
                mismatches.append((x, y, got, expected))
    return CollapseReport(completed, counts, table, mismatches)


@dataclass
class OddEvenReport:
    checked: int
    violations: list

    @property
    def verified(self) -> bool:
        return not self.violations


def odd_even_zero_sweep(d: int, m_max: int, k_max: int) -> OddEvenReport:
    """In the trivial envelope, the product of an odd-length comb by an
    even-length comb vanishes.  Sweep all combed words a (odd length up
    to m_max) and b (even length up to k_max) over d letters and reduce
    a b; report any nonzero normal form."""
    if m_max < 1 or m_max % 2 == 0:
        raise ValueError("m_max must be odd and positive")
    if k_max < 2 or k_max % 2:
        raise ValueError("k_max must be even and at least 2")
    ab = default_alphabet(d)
    rels = trivial_gsb(ab)
    letters = ab.letters
    checked = 0
    violations = []
    for m in range(1, m_max + 1, 2):
        for atup in iproduct(letters, repeat=m):
            a = bracket(atup, "left")
            for k in range(2, k_max + 1, 2):
                for btup in iproduct(letters, repeat=k):
                    b = bracket(btup, "left")
                    checked += 1
                    nf = normal_form(MagmaPoly.monomial(node(a, b)), rels)
                    if nf:
                        violations.append((a, b, nf))
    return OddEvenReport(checked, violations)
