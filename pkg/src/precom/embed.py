"""Power-series embeddings of positively filtered commutative algebras.

A positively filtered commutative algebra assigns each basis element a
level so that products of levels i and j land in level >= i+j.  Each
basis element x of level k maps to the truncated series

    x  ->  sum over i = k..N of  i * x[i] t^i

whose coefficients are generator symbols.  The averaging operator
R(t^n) = t^n/n is a weight-zero Rota-Baxter operator, and the induced
symmetric product R(f)g + fR(g) sends the image series of x and y to the
image of x*y modulo the coefficient relations: the t^l discrepancy is
exactly l times one defining relation, so it reduces to zero in a single
step.  Injectivity is certified per instance by bounded Buchberger
completion of the coefficient relations: a completed relation whose
leading monomial is a single symbol would rewrite a generator away, and
the report flags any such linear leading monomial.

Filtration levels can be supplied directly or computed: the chain of
power subspaces A, A^2 = A*A, A^3 = A*A^2, ... is computed by exact
Gaussian elimination, and the algebra is rewritten on a basis adapted to
the chain.  A chain that stabilizes at a nonzero subspace means the
algebra is not nilpotent and carries no such filtration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .compoly import (
    BuchbergerReport,
    ComMonomial,
    ComPoly,
    GenSymbol,
    buchberger_bounded,
    com_reduce,
)
from .envelope import CommAlgebra
from .magma import Alphabet, Letter

__all__ = [
    "FilteredAlgebra",
    "validate_filtration",
    "standard_filtration",
    "pair_relation",
    "coefficient_relations",
    "TruncSeries",
    "rb_apply",
    "series_product",
    "generator_series",
    "series_star",
    "splitting_product",
    "EmbeddingReport",
    "verify_embedding",
    "default_symbol_pool",
    "random_series",
    "random_nilpotent_algebra",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class FilteredAlgebra:
    """A commutative algebra together with a positive level for each
    basis element."""

    def __init__(self, algebra: CommAlgebra, levels: Mapping[Letter, int]):
        self.algebra = algebra
        lv = {}
        for x in algebra.basis:
            if x not in levels:
                raise ValueError("no level assigned to %r" % (x,))
            k = int(levels[x])
            if k < 1:
                raise ValueError("levels must be positive")
            lv[x] = k
        self.levels = lv

    @property
    def alphabet(self) -> Alphabet:
        return self.algebra.alphabet

    @property
    def basis(self) -> tuple[Letter, ...]:
        return self.algebra.basis

    def level(self, x: Letter) -> int:
        return self.levels[x]

    def max_level(self) -> int:
        return max(self.levels.values())

    def product(self, x: Letter, y: Letter) -> dict[Letter, Fraction]:
        return self.algebra.product(x, y)

    def symbol(self, x: Letter, weight: int) -> GenSymbol:
        return GenSymbol(x.name, self.levels[x], weight, x.rank)

    def __repr__(self) -> str:
        return "FilteredAlgebra(%r, levels=%s)" % (
            self.algebra, {x.name: k for x, k in self.levels.items()})


def validate_filtration(F: FilteredAlgebra) -> list:
    """All level violations: entries (x, y, z, level(z), required) where z
    appears in x*y but sits below level(x)+level(y).  Empty means valid."""
    bad = []
    basis = F.basis
    for i, x in enumerate(basis):
        for y in basis[i:]:
            need = F.level(x) + F.level(y)
            for z, c in F.product(x, y).items():
                if c and F.level(z) < need:
                    bad.append((x, y, z, F.level(z), need))
    return bad


# ---------------------------------------------------------------------------
# Exact linear algebra on rows of Fractions (for the power-chain filtration)

def _row_sub(row, coeff, other):
    return tuple(a - coeff * b for a, b in zip(row, other))


def _eliminate(row, rows, pivots):
    """Reduce row against rref rows (pivots: column -> row index)."""
    row = tuple(row)
    for col, idx in pivots.items():
        if row[col]:
            row = _row_sub(row, row[col], rows[idx])
    return row


def _rref(vectors: Iterable[Sequence[Fraction]]):
    """Reduced row echelon form: canonical rows sorted by pivot column.
    First-come rows win pivots; leftmost nonzero entry is the pivot."""
    rows: list[tuple] = []
    pivots: dict[int, int] = {}
    for v in vectors:
        r = _eliminate(v, rows, pivots)
        if not any(r):
            continue
        col = next(i for i, c in enumerate(r) if c)
        r = tuple(c / r[col] for c in r)
        rows = [_row_sub(row, row[col], r) for row in rows]
        pivots = {c: i for c, i in pivots.items()}
        rows.append(r)
        pivots[col] = len(rows) - 1
    order = sorted(pivots)
    return [rows[pivots[c]] for c in order]


def _invert(rows: Sequence[Sequence[Fraction]]):
    """Inverse of a square matrix given as rows; raises on singular input."""
    n = len(rows)
    aug = [tuple(r) + tuple(_ONE if i == j else _ZERO for j in range(n))
           for i, r in enumerate(rows)]
    done: list[tuple] = []
    pivots: dict[int, int] = {}
    for r in aug:
        r = _eliminate(r, done, pivots)
        col = next((i for i in range(n) if r[i]), None)
        if col is None:
            raise ValueError("singular matrix")
        r = tuple(c / r[col] for c in r)
        done = [_row_sub(row, row[col], r) for row in done]
        done.append(r)
        pivots[col] = len(done) - 1
    inv = [None] * n
    for col, idx in pivots.items():
        inv[col] = done[idx][n:]
    return [tuple(r) for r in inv]


def _vec_mat(v, mat):
    n = len(mat[0])
    return tuple(sum((v[i] * mat[i][j] for i in range(len(v))), _ZERO)
                 for j in range(n))


def _product_vector(A: CommAlgebra, u, v):
    """Bilinear extension of A's product to coefficient vectors."""
    basis = A.basis
    out = [_ZERO] * len(basis)
    index = {x: i for i, x in enumerate(basis)}
    for i, a in enumerate(u):
        if not a:
            continue
        for j, b in enumerate(v):
            if not b:
                continue
            for z, c in A.product(basis[i], basis[j]).items():
                out[index[z]] += a * b * c
    return tuple(out)


def standard_filtration(A: CommAlgebra) -> FilteredAlgebra:
    """The filtration by power subspaces A >= A^2 >= A^3 >= ..., with the
    algebra rewritten on an adapted basis.

    The chain is computed exactly; if it stabilizes at a nonzero subspace
    the algebra is not nilpotent and no positive filtration of this kind
    exists.  The adapted basis extends a basis of the deepest nonzero
    power upward level by level, each element's level being the deepest
    power containing it.  Basis vectors that come out as unit coordinate
    vectors keep their original names; mixed vectors get fresh names.
    The adapted basis is ordered by (level, pivot column) ascending.
    """
    d = len(A.basis)
    unit = [tuple(_ONE if j == i else _ZERO for j in range(d)) for i in range(d)]
    spans = {1: unit}
    n = 1
    while spans[n]:
        n += 1
        generators = []
        for i in range(1, n // 2 + 1):
            j = n - i
            for u in spans[i]:
                for v in spans[j]:
                    generators.append(_product_vector(A, u, v))
        spans[n] = _rref(generators)
        if spans[n] == spans[n - 1]:
            raise ValueError("no positive filtration: algebra not nilpotent")
    deepest = n - 1

    adapted: list[tuple] = []          # vectors, deepest level first
    level_of: list[int] = []
    rows: list[tuple] = []
    pivots: dict[int, int] = {}
    for k in range(deepest, 0, -1):
        for v in spans[k]:
            r = _eliminate(v, rows, pivots)
            if not any(r):
                continue
            col = next(i for i, c in enumerate(r) if c)
            r = tuple(c / r[col] for c in r)
            rows = [_row_sub(row, row[col], r) for row in rows]
            rows.append(r)
            pivots[col] = len(rows) - 1
            adapted.append(r)
            level_of.append(k)

    order = sorted(range(d), key=lambda i: (
        level_of[i], next(j for j, c in enumerate(adapted[i]) if c)))
    vectors = [adapted[i] for i in order]
    levels_list = [level_of[i] for i in order]

    names = []
    used = set()
    fresh = 0
    for v in vectors:
        ones = [j for j, c in enumerate(v) if c]
        if len(ones) == 1 and v[ones[0]] == 1:
            name = A.basis[ones[0]].name
        else:
            fresh += 1
            name = "v%d" % fresh
        while name in used:
            name += "_"
        used.add(name)
        names.append(name)
    ab = Alphabet(names)

    inv = _invert(vectors)
    products = {}
    for i in range(d):
        for j in range(i, d):
            w = _product_vector(A, vectors[i], vectors[j])
            coords = _vec_mat(w, inv)
            combo = {ab[k]: c for k, c in enumerate(coords) if c}
            if combo:
                products[(ab[i], ab[j])] = combo
    levels = {ab[i]: levels_list[i] for i in range(d)}
    return FilteredAlgebra(CommAlgebra(ab, products), levels)


# ---------------------------------------------------------------------------
# Coefficient relations

def pair_relation(F: FilteredAlgebra, x: Letter, y: Letter, l: int,
                  monic: bool = True) -> ComPoly:
    """The weight-l relation tying the coefficient symbols of x and y:

        sum over i+j=l of x[i]y[j]  minus  sum over z in x*y of c_z z[l],

    where the linear sum keeps only those z whose level is at most l.
    The quadratic sum is over ordered splits, so diagonal pairs (x = y)
    pick up doubled coefficients before the optional monic scaling.
    """
    k, m = F.level(x), F.level(y)
    if l < k + m:
        raise ValueError("weight %d below level sum %d" % (l, k + m))
    terms: dict[ComMonomial, Fraction] = {}
    for i in range(k, l - m + 1):
        mono = ComMonomial((F.symbol(x, i), F.symbol(y, l - i)))
        terms[mono] = terms.get(mono, _ZERO) + _ONE
    for z, c in F.product(x, y).items():
        if F.level(z) <= l:
            mono = ComMonomial((F.symbol(z, l),))
            nc = terms.get(mono, _ZERO) - c
            if nc:
                terms[mono] = nc
            else:
                del terms[mono]
    poly = ComPoly._raw(terms)
    if poly.leading().count != 2:
        raise AssertionError("coefficient relation must lead with a quadratic monomial")
    return poly.monic() if monic else poly


def coefficient_relations(F: FilteredAlgebra, weight_bound: int) -> list[ComPoly]:
    """All pair relations for basis pairs x <= y and weights up to the
    bound, each monic and weight-homogeneous."""
    if weight_bound < 2:
        raise ValueError("weight bound must be at least 2")
    out = []
    basis = F.basis
    for i, x in enumerate(basis):
        for y in basis[i:]:
            for l in range(F.level(x) + F.level(y), weight_bound + 1):
                out.append(pair_relation(F, x, y, l))
    return out


# ---------------------------------------------------------------------------
# Truncated series

class TruncSeries:
    """A series sum of c_n t^n for 1 <= n <= N with ComPoly coefficients,
    everything beyond t^N discarded."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Optional[Mapping[int, ComPoly]] = None):
        if N < 1:
            raise ValueError("truncation degree must be positive")
        self.N = N
        clean: dict[int, ComPoly] = {}
        for n, p in (coeffs or {}).items():
            if not 1 <= n <= N:
                raise ValueError("series exponent %d outside 1..%d" % (n, N))
            if p:
                clean[n] = p
        self.coeffs = clean

    @classmethod
    def zero(cls, N: int) -> "TruncSeries":
        return cls(N)

    @classmethod
    def term(cls, n: int, poly: ComPoly, N: int) -> "TruncSeries":
        return cls(N, {n: poly})

    def coeff(self, n: int) -> ComPoly:
        return self.coeffs.get(n, ComPoly.zero())

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncSeries) and self.N == other.N
                and self.coeffs == other.coeffs)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        if self.N != other.N:
            raise ValueError("truncation mismatch: %d vs %d" % (self.N, other.N))
        out = dict(self.coeffs)
        for n, p in other.coeffs.items():
            q = out.get(n)
            s = p if q is None else q + p
            if s:
                out[n] = s
            else:
                out.pop(n, None)
        return TruncSeries(self.N, out)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.N, {n: -p for n, p in self.coeffs.items()})

    def map_coeffs(self, fn) -> "TruncSeries":
        return TruncSeries(self.N, {n: fn(n, p) for n, p in self.coeffs.items()})

    def __repr__(self) -> str:
        if not self.coeffs:
            return "O(t^%d)" % (self.N + 1,)
        parts = ["(%r) t^%d" % (p, n) for n, p in sorted(self.coeffs.items())]
        return " + ".join(parts) + " + O(t^%d)" % (self.N + 1,)


def rb_apply(s: TruncSeries) -> TruncSeries:
    """The averaging operator t^n -> t^n/n, a Rota-Baxter operator of
    weight zero on truncated series."""
    return s.map_coeffs(lambda n, p: p.scale(Fraction(1, n)))


def series_product(s: TruncSeries, u: TruncSeries,
                   G: Sequence[ComPoly] = ()) -> TruncSeries:
    """Cauchy product through the common truncation degree, each
    resulting coefficient reduced by the relation list G."""
    if s.N != u.N:
        raise ValueError("truncation mismatch: %d vs %d" % (s.N, u.N))
    out: dict[int, ComPoly] = {}
    for i, p in s.coeffs.items():
        for j, q in u.coeffs.items():
            n = i + j
            if n > s.N:
                continue
            pq = p * q
            r = out.get(n)
            out[n] = pq if r is None else r + pq
    if G:
        out = {n: com_reduce(p, G) for n, p in out.items()}
    return TruncSeries(s.N, {n: p for n, p in out.items() if p})


def generator_series(x: Letter, F: FilteredAlgebra, N: int) -> TruncSeries:
    """The image series of a basis element: sum of i * x[i] t^i for i
    from level(x) to N."""
    k = F.level(x)
    if N < k:
        raise ValueError("truncation below level: N=%d < level %d" % (N, k))
    coeffs = {i: ComPoly.monomial(ComMonomial((F.symbol(x, i),)), i)
              for i in range(k, N + 1)}
    return TruncSeries(N, coeffs)


def series_star(s: TruncSeries, u: TruncSeries,
                G: Sequence[ComPoly] = ()) -> TruncSeries:
    """R(s)u + sR(u): the symmetrized product induced by the averaging
    operator."""
    return series_product(rb_apply(s), u, G) + series_product(s, rb_apply(u), G)


def splitting_product(s: TruncSeries, u: TruncSeries,
                      G: Sequence[ComPoly] = ()) -> TruncSeries:
    """The one-sided product R(s)u; satisfies the defining identity
    a(bc) = (ab)c + (ba)c of pre-commutative algebras."""
    return series_product(rb_apply(s), u, G)


# ---------------------------------------------------------------------------
# The embedding verifier

@dataclass
class EmbeddingReport:
    truncation: int
    relation_count: int
    homomorphism_failures: list
    splitting_failures: list
    injectivity_certified_to: Optional[int]
    buchberger: BuchbergerReport
    notes: str = ""

    @property
    def linear_leadings(self) -> list:
        return self.buchberger.linear_leadings

    @property
    def verified(self) -> bool:
        return (not self.homomorphism_failures
                and not self.splitting_failures
                and self.injectivity_certified_to is not None)


def verify_embedding(F: FilteredAlgebra, N: int,
                     factor_bound: int = 4) -> EmbeddingReport:
    """Check that the series assignment embeds F:

    *  for every basis pair, R(fx)fy + fxR(fy) minus the image of x*y
       reduces to zero coefficientwise (fx the image series of x);
    *  the one-sided product R(a)b satisfies the pre-commutative identity
       on all basis-image triples, with no reduction involved;
    *  bounded Buchberger completion of the coefficient relations up to
       weight N yields no linear leading monomial, so no generator symbol
       is rewritten away (injectivity certificate at weight N).
    """
    bad = validate_filtration(F)
    if bad:
        x, y, z, got, need = bad[0]
        raise ValueError(
            "filtration violation: %s*%s contains %s at level %d < %d"
            % (x.name, y.name, z.name, got, need))
    if N < 2 * F.max_level():
        raise ValueError(
            "truncation too small: N=%d but products need N >= %d"
            % (N, 2 * F.max_level()))
    G = coefficient_relations(F, N)

    images = {x: generator_series(x, F, N) for x in F.basis}
    hom_failures = []
    basis = F.basis
    for i, x in enumerate(basis):
        for y in basis[i:]:
            target = TruncSeries.zero(N)
            for z, c in F.product(x, y).items():
                target = target + TruncSeries(
                    N, {n: p.scale(c) for n, p in images[z].coeffs.items()})
            residue = series_star(images[x], images[y], G) - target
            for l in sorted(residue.coeffs):
                r = com_reduce(residue.coeff(l), G)
                if r:
                    hom_failures.append((x.name, y.name, l, r))

    split_failures = []
    for x in basis:
        for y in basis:
            for z in basis:
                a, b, c = images[x], images[y], images[z]
                lhs = splitting_product(a, splitting_product(b, c))
                rhs = (splitting_product(splitting_product(a, b), c)
                       + splitting_product(splitting_product(b, a), c))
                diff = lhs - rhs
                for l in sorted(diff.coeffs):
                    split_failures.append((x.name, y.name, z.name, l, diff.coeff(l)))

    _, brep = buchberger_bounded(G, N, factor_bound)
    certified = N if not brep.linear_leadings else None
    notes = ("certified injective to weight %d" % N if certified
             else "linear leading monomial found: injectivity not certified")
    return EmbeddingReport(N, len(G), hom_failures, split_failures,
                           certified, brep, notes)


# ---------------------------------------------------------------------------
# Random data helpers

def default_symbol_pool() -> list[GenSymbol]:
    pool = [GenSymbol("x", 1, i, 0) for i in range(1, 5)]
    pool += [GenSymbol("y", 2, i, 1) for i in range(2, 5)]
    return pool


def random_series(rng: random.Random, N: int,
                  pool: Optional[Sequence[GenSymbol]] = None,
                  max_terms: int = 2) -> TruncSeries:
    """A random truncated series over a small symbol pool; coefficients
    are small random polynomials, possibly with constant terms."""
    symbols = list(pool) if pool is not None else default_symbol_pool()
    coeffs = {}
    for n in range(1, N + 1):
        if rng.random() < 0.4:
            continue
        terms = []
        for _ in range(rng.randint(1, max_terms)):
            mono = ComMonomial(rng.choice(symbols)
                               for _ in range(rng.randint(0, 2)))
            coeff = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            terms.append((mono, coeff))
        p = ComPoly.from_terms(terms)
        if p:
            coeffs[n] = p
    return TruncSeries(N, coeffs)


def random_nilpotent_algebra(rng: random.Random) -> CommAlgebra:
    """A random 3-dimensional nilpotent commutative associative algebra.

    Two shapes, both associative by construction: either every product
    lands on the last basis vector and that vector annihilates (two-step
    nilpotent), or the chain b1*b1 = a b2, b1*b2 = b b3 with all other
    products zero.
    """
    ab = Alphabet(["b1", "b2", "b3"])
    b1, b2, b3 = ab.letters

    def nz() -> Fraction:
        return rng.choice([Fraction(c) for c in (-2, -1, 1, 2)]
                          + [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2)])

    if rng.random() < 0.5:
        products = {(b1, b1): {b3: nz()}, (b1, b2): {b3: nz()}}
        if rng.random() < 0.5:
            products[(b2, b2)] = {b3: nz()}
    else:
        products = {(b1, b1): {b2: nz()}, (b1, b2): {b3: nz()}}
    return CommAlgebra(ab, products)
