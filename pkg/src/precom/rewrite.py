"""Subtree rewriting and Groebner-Shirshov machinery for tree polynomials.

Relations are monic polynomials used as rewrite rules: an occurrence of a
leading monomial as a subtree is replaced by the negated tail.  Because
monomials are trees, two occurrences are always nested or disjoint, so the
only compositions are inclusions: f minus the grafting of g into f's
leading monomial at an occurrence of g's leading monomial.

A relation set is a list of :class:`RelationSchema`.  A schema either
wraps one explicit monic polynomial or describes an infinite family; a
family can match a given word structurally (for reduction, no
instantiation needed) and can enumerate every instance whose leading
monomial fits under a length bound (for composition search).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .magma import (
    Alphabet,
    MagmaPoly,
    NaWord,
    node,
    words_of_length,
)

__all__ = [
    "LEFT",
    "RIGHT",
    "Path",
    "RelationSchema",
    "ExplicitRelation",
    "ZinbielFamily",
    "ReductionStep",
    "CompositionFailure",
    "GsbReport",
    "subtree",
    "graft",
    "occurrences",
    "substitute",
    "reducible",
    "normal_form",
    "normal_form_with_trace",
    "replay_trace",
    "inclusion_compositions",
    "verify_gsb",
    "complete",
    "interreduce",
    "irreducible_words",
    "irreducible_counts",
]

LEFT, RIGHT = 0, 1
Path = tuple  # paths are tuples over {LEFT, RIGHT}

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Paths, occurrences, grafting

def subtree(w: NaWord, path: Sequence[int]) -> NaWord:
    """The subword at a path of {0, 1} steps (0 = left factor)."""
    for step in path:
        if w.letter is not None:
            raise ValueError("invalid path %r: ran past a leaf" % (tuple(path),))
        w = w.left if step == 0 else w.right
    return w


def graft(w: NaWord, path: Sequence[int], repl: NaWord) -> NaWord:
    """The word obtained by replacing the subword at ``path`` with ``repl``."""
    if not path:
        return repl
    if w.letter is not None:
        raise ValueError("invalid path %r: ran past a leaf" % (tuple(path),))
    if path[0] == 0:
        return node(graft(w.left, path[1:], repl), w.right)
    return node(w.left, graft(w.right, path[1:], repl))


def occurrences(w: NaWord, pattern: NaWord) -> list[tuple[int, ...]]:
    """Paths of all subtree occurrences of ``pattern`` in ``w``, preorder.

    The root occurrence is included.  Hash-consing makes each test O(1).
    """
    return [path for path, sub in w.subtrees() if sub is pattern]


def substitute(w: NaWord, path: Sequence[int], replacement: MagmaPoly) -> MagmaPoly:
    """Graft a polynomial into ``w`` at ``path``, linearly per monomial."""
    out: dict[NaWord, Fraction] = {}
    for m, c in replacement.terms.items():
        g = graft(w, path, m)
        nc = out.get(g, _ZERO) + c
        if nc:
            out[g] = nc
        else:
            out.pop(g, None)
    return MagmaPoly._raw(out)


# ---------------------------------------------------------------------------
# Relation schemas

class RelationSchema:
    """A finitely described set of monic rewrite relations."""

    def match(self, word: NaWord) -> Optional[MagmaPoly]:
        """The instance whose leading monomial is ``word``, if any."""
        raise NotImplementedError

    def instances(self, bound: int) -> tuple[MagmaPoly, ...]:
        """All instances whose leading monomial has length <= bound."""
        raise NotImplementedError


class ExplicitRelation(RelationSchema):
    """A single relation given outright; rescaled monic on construction."""

    def __init__(self, poly: MagmaPoly):
        if not poly:
            raise ValueError("zero polynomial is not a relation")
        self.poly = poly.monic()
        self.lead = self.poly.leading()

    def match(self, word: NaWord) -> Optional[MagmaPoly]:
        return self.poly if word is self.lead else None

    def instances(self, bound: int) -> tuple[MagmaPoly, ...]:
        return (self.poly,) if self.lead.length <= bound else ()

    def __repr__(self) -> str:
        return "ExplicitRelation(%r)" % (self.poly,)


class ZinbielFamily(RelationSchema):
    """The defining rewrite family of free pre-commutative algebras:

        a(bc)  ->  (ab)c + (ba)c        for all words a, b, c.

    Matching is purely structural (any word whose right factor is
    compound), so reduction needs no instantiation.  Enumerating instances
    requires an alphabet.
    """

    def __init__(self, alphabet: Optional[Alphabet] = None):
        self.alphabet = alphabet

    def match(self, word: NaWord) -> Optional[MagmaPoly]:
        if word.letter is not None:
            return None
        bc = word.right
        if bc.letter is not None:
            return None
        a, b, c = word.left, bc.left, bc.right
        terms = {word: _ONE}
        for w in (node(node(a, b), c), node(node(b, a), c)):
            nc = terms.get(w, _ZERO) - _ONE
            if nc:
                terms[w] = nc
            else:
                del terms[w]
        return MagmaPoly._raw(terms)

    def instances(self, bound: int) -> tuple[MagmaPoly, ...]:
        if self.alphabet is None:
            raise ValueError("family cannot enumerate instances without an alphabet")
        out = []
        for total in range(3, bound + 1):
            for la in range(1, total - 1):
                for lb in range(1, total - la):
                    lc = total - la - lb
                    for a in words_of_length(self.alphabet, la):
                        for b in words_of_length(self.alphabet, lb):
                            for c in words_of_length(self.alphabet, lc):
                                out.append(self.match(node(a, node(b, c))))
        return tuple(out)

    def __repr__(self) -> str:
        return "ZinbielFamily(%r)" % (self.alphabet,)


# ---------------------------------------------------------------------------
# Redex lookup

class _RedexIndex:
    """Leading-monomial lookup across a schema list, honoring list order."""

    def __init__(self, schemas: Sequence[RelationSchema]):
        self.schemas = list(schemas)
        self.families: list[tuple[int, RelationSchema]] = []
        self.explicit: dict[NaWord, tuple[int, MagmaPoly]] = {}
        for pos, s in enumerate(self.schemas):
            if isinstance(s, ExplicitRelation):
                self.explicit.setdefault(s.lead, (pos, s.poly))
            else:
                self.families.append((pos, s))
        self._next_pos = len(self.schemas)

    def add_explicit(self, poly: MagmaPoly) -> int:
        pos = self._next_pos
        self._next_pos += 1
        self.explicit.setdefault(poly.leading(), (pos, poly))
        return pos

    def find(self, word: NaWord) -> Optional[MagmaPoly]:
        """First schema (in list order) whose leading monomial is ``word``."""
        exp = self.explicit.get(word)
        exp_pos = exp[0] if exp is not None else None
        for pos, fam in self.families:
            if exp_pos is not None and pos > exp_pos:
                break
            m = fam.match(word)
            if m is not None:
                return m
        return exp[1] if exp is not None else None


def _find_redex(word: NaWord, index: _RedexIndex):
    """First reducible position in preorder: (path, relation) or None."""
    for path, sub in word.subtrees():
        rel = index.find(sub)
        if rel is not None:
            return path, rel
    return None


def _match_all(schemas: Sequence[RelationSchema], word: NaWord) -> list[tuple[int, MagmaPoly]]:
    out = []
    for pos, s in enumerate(schemas):
        m = s.match(word)
        if m is not None:
            out.append((pos, m))
    return out


# ---------------------------------------------------------------------------
# Normal forms

@dataclass
class ReductionStep:
    """One rewrite: the term ``coeff * word`` was rewritten with ``relation``
    grafted at ``path``.  Replaying subtracts coeff * substitute(word, path,
    relation) from the polynomial."""
    coeff: Fraction
    word: NaWord
    path: tuple[int, ...]
    relation: MagmaPoly


class _MaxItem:
    """heapq wrapper turning the min-heap into a max-heap on word keys."""

    __slots__ = ("word",)

    def __init__(self, word: NaWord):
        self.word = word

    def __lt__(self, other: "_MaxItem") -> bool:
        return self.word.key > other.word.key


def _nf_terms(terms: dict, index: _RedexIndex, trace: Optional[list] = None) -> dict:
    """Reduce a term dict to normal form, largest reducible monomial first.

    Each rewrite replaces the current largest reducible monomial by
    strictly smaller ones, so monomials can be processed in one descending
    sweep: once a monomial is popped it never reappears.
    """
    coeffs: dict[NaWord, Fraction] = {}
    heap: list[_MaxItem] = []
    pending: set[NaWord] = set()
    for w, c in terms.items():
        coeffs[w] = coeffs.get(w, _ZERO) + c
        if w not in pending:
            pending.add(w)
            heapq.heappush(heap, _MaxItem(w))
    out: dict[NaWord, Fraction] = {}
    while heap:
        w = heapq.heappop(heap).word
        pending.discard(w)
        c = coeffs.pop(w, None)
        if not c:
            continue
        hit = _find_redex(w, index)
        if hit is None:
            out[w] = c
            continue
        path, rel = hit
        if trace is not None:
            trace.append(ReductionStep(c, w, path, rel))
        lead = rel.leading()
        for m, q in rel.terms.items():
            if m is lead:
                continue
            nw = graft(w, path, m)
            nc = coeffs.get(nw, _ZERO) - c * q
            if nc:
                coeffs[nw] = nc
                if nw not in pending:
                    pending.add(nw)
                    heapq.heappush(heap, _MaxItem(nw))
            else:
                coeffs.pop(nw, None)
    return out


def _check_bound(p: MagmaPoly, bound: Optional[int]) -> int:
    maxlen = p.max_length()
    if bound is None:
        return max(maxlen, 2)
    if bound < maxlen:
        raise ValueError("instantiation bound exceeded: bound %d < monomial length %d"
                         % (bound, maxlen))
    return bound


def normal_form(p: MagmaPoly, relations: Iterable[RelationSchema],
                bound: Optional[int] = None, strategy: str = "largest") -> MagmaPoly:
    """Fully rewrite ``p`` modulo the relations.

    The default strategy rewrites the largest reducible monomial first (at
    its first reducible position in preorder).  ``strategy="smallest"``
    rewrites the smallest reducible monomial first instead; for confluent
    relation sets both strategies agree.
    """
    _check_bound(p, bound)
    index = _RedexIndex(list(relations))
    if strategy == "largest":
        return MagmaPoly._raw(_nf_terms(p.terms, index))
    if strategy == "smallest":
        return MagmaPoly._raw(_nf_smallest(p.terms, index))
    raise ValueError("unknown strategy %r" % (strategy,))


def _nf_smallest(terms: dict, index: _RedexIndex) -> dict:
    work = dict(terms)
    while True:
        found = None
        for w in sorted(work, key=lambda t: t.key):
            hit = _find_redex(w, index)
            if hit is not None:
                found = (w, hit)
                break
        if found is None:
            return work
        w, (path, rel) = found
        c = work.pop(w)
        lead = rel.leading()
        for m, q in rel.terms.items():
            if m is lead:
                continue
            nw = graft(w, path, m)
            nc = work.get(nw, _ZERO) - c * q
            if nc:
                work[nw] = nc
            else:
                work.pop(nw, None)


def normal_form_with_trace(p: MagmaPoly, relations: Iterable[RelationSchema],
                           bound: Optional[int] = None):
    """Like :func:`normal_form`, also returning the list of rewrite steps.

    The trace is a constructive ideal-membership certificate:
    ``p - normal_form(p)`` equals the replayed sum of the steps, and every
    rewritten word is <= the leading monomial of ``p``.
    """
    _check_bound(p, bound)
    index = _RedexIndex(list(relations))
    trace: list[ReductionStep] = []
    nf = MagmaPoly._raw(_nf_terms(p.terms, index, trace))
    return nf, trace


def replay_trace(steps: Iterable[ReductionStep]) -> MagmaPoly:
    """Sum of coeff * substitute(word, path, relation) over the steps."""
    total = MagmaPoly.zero()
    for s in steps:
        total = total + substitute(s.word, s.path, s.relation).scale(s.coeff)
    return total


def reducible(word: NaWord, relations: Iterable[RelationSchema]) -> bool:
    return _find_redex(word, _RedexIndex(list(relations))) is not None


# ---------------------------------------------------------------------------
# Compositions and verification

def _require_monic(p: MagmaPoly) -> MagmaPoly:
    if p.leading_coeff() != 1:
        raise ValueError("relations must be monic")
    return p


def inclusion_compositions(f: MagmaPoly, g: MagmaPoly) -> list[tuple[NaWord, MagmaPoly]]:
    """All (ambiguity, composition) pairs of the inclusion f - graft of g.

    One entry per occurrence of g's leading monomial inside f's leading
    monomial.  The root occurrence is kept for distinct relations with
    equal leading monomials and skipped when f equals g.
    """
    _require_monic(f)
    _require_monic(g)
    fl = f.leading()
    gl = g.leading()
    out = []
    for path in occurrences(fl, gl):
        if not path and f == g:
            continue
        out.append((fl, f - substitute(fl, path, g)))
    return out


@dataclass
class CompositionFailure:
    f: MagmaPoly
    g: MagmaPoly
    ambiguity: NaWord
    normal_form: MagmaPoly


@dataclass
class GsbReport:
    ambiguities_checked: int
    failures: list[CompositionFailure]
    instantiation_bound: int

    @property
    def verified(self) -> bool:
        return not self.failures


def _instantiate(schemas: Sequence[RelationSchema], bound: int) -> list[MagmaPoly]:
    """All instances with leading length <= bound, deduplicated, in schema
    order then enumeration order (the creation index is the list position)."""
    out: list[MagmaPoly] = []
    seen: set[frozenset] = set()
    for s in schemas:
        for p in s.instances(bound):
            key = frozenset(p.terms.items())
            if key not in seen:
                seen.add(key)
                out.append(p)
    return out


def _pair_compositions(insts: list[MagmaPoly], schemas: Sequence[RelationSchema]):
    """Composition sites among instances, sorted by (ambiguity length,
    ambiguity word, creation index of f, schema position of g, path)."""
    comps = []
    for fi, f in enumerate(insts):
        fl = f.leading()
        for path, sub in fl.subtrees():
            for gpos, g in _match_all(schemas, sub):
                if not path and g == f:
                    continue
                comps.append((fl.length, fl.key, fi, gpos, path, f, g))
    comps.sort(key=lambda t: t[:5])
    return comps


def verify_gsb(relations: Iterable[RelationSchema], bound: int) -> GsbReport:
    """Check triviality of every composition with ambiguity length <= bound.

    Instantiates each schema up to the bound, forms all inclusion
    compositions among the instances, and reduces each one; reductions
    only ever rewrite monomials strictly below the ambiguity, so a zero
    normal form witnesses triviality.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    schemas = list(relations)
    insts = _instantiate(schemas, bound)
    index = _RedexIndex(schemas)
    failures: list[CompositionFailure] = []
    checked = 0
    for _, _, fi, gpos, path, f, g in _pair_compositions(insts, schemas):
        checked += 1
        h = f - substitute(f.leading(), path, g)
        nf = _nf_terms(h.terms, index)
        if nf:
            failures.append(CompositionFailure(f, g, f.leading(), MagmaPoly._raw(nf)))
    return GsbReport(checked, failures, bound)


def complete(relations: Iterable[RelationSchema], bound: int) -> list[RelationSchema]:
    """Bounded Shirshov completion.

    Runs full passes over all compositions with ambiguity length <= bound,
    in the fixed composition order, appending each nonzero normal form as
    a new monic explicit relation (effective immediately for later
    reductions in the same pass).  Stops after a pass that adds nothing;
    that final clean pass is precisely a successful verification of the
    returned set at the same bound.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    schemas = list(relations)
    added: list[MagmaPoly] = []
    while True:
        work: list[RelationSchema] = schemas + [ExplicitRelation(p) for p in added]
        index = _RedexIndex(work)
        insts = _instantiate(work, bound)
        grew = False
        for _, _, fi, gpos, path, f, g in _pair_compositions(insts, work):
            h = f - substitute(f.leading(), path, g)
            nf = _nf_terms(h.terms, index)
            if nf:
                p = MagmaPoly._raw(nf).monic()
                added.append(p)
                index.add_explicit(p)
                grew = True
        if not grew:
            return work


def interreduce(relations: Iterable[RelationSchema]) -> list[RelationSchema]:
    """Minimalize and tail-reduce the explicit relations of a set.

    Families pass through unchanged.  An explicit relation is dropped when
    its leading monomial is reducible by the other relations; the
    survivors' tails are then fully reduced modulo the whole surviving
    set.  The explicit survivors are returned sorted by leading monomial.
    """
    schemas = list(relations)
    fams = [s for s in schemas if not isinstance(s, ExplicitRelation)]
    exps = [s.poly for s in schemas if isinstance(s, ExplicitRelation)]
    exps.sort(key=lambda p: p.leading().key)
    kept: list[MagmaPoly] = []
    for i, p in enumerate(exps):
        others = fams + [ExplicitRelation(q) for j, q in enumerate(exps) if j != i]
        idx = _RedexIndex(others)
        if _find_redex(p.leading(), idx) is not None:
            continue
        kept.append(p)
    keep_idx = _RedexIndex(fams + [ExplicitRelation(q) for q in kept])
    reduced = []
    for p in kept:
        lead = p.leading()
        tail = MagmaPoly._raw({w: c for w, c in p.terms.items() if w is not lead})
        nf_tail = MagmaPoly._raw(_nf_terms(tail.terms, keep_idx))
        reduced.append(MagmaPoly.monomial(lead) + nf_tail)
    return fams + [ExplicitRelation(p) for p in reduced]


# ---------------------------------------------------------------------------
# Irreducible words

def irreducible_words(relations: Iterable[RelationSchema], alphabet: Alphabet,
                      max_len: int) -> dict[int, list[NaWord]]:
    """Words with no relation leading monomial as a subtree, by length.

    Within each length words are listed in increasing weight order.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    index = _RedexIndex(list(relations))
    out: dict[int, list[NaWord]] = {}
    for n in range(1, max_len + 1):
        row = [w for w in words_of_length(alphabet, n)
               if _find_redex(w, index) is None]
        row.sort(key=lambda w: w.key)
        out[n] = row
    return out


def irreducible_counts(relations: Iterable[RelationSchema], alphabet: Alphabet,
                       max_len: int) -> list[int]:
    """Counts of irreducible words at lengths 1..max_len."""
    table = irreducible_words(relations, alphabet, max_len)
    return [len(table[n]) for n in range(1, max_len + 1)]
