from __future__ import annotations

import random
from fractions import Fraction

import pytest

from precom import (
    ExplicitRelation,
    MagmaPoly,
    ZinbielFamily,
    bracket,
    complete,
    inclusion_compositions,
    interreduce,
    irreducible_counts,
    irreducible_words,
    leaf,
    node,
    normal_form,
    normal_form_with_trace,
    occurrences,
    reducible,
    replay_trace,
    graft,
    subtree,
    substitute,
    trivial_gsb,
    truncated_poly_relations,
    verify_gsb,
    words_of_length,
)


def rel(*terms):
    return ExplicitRelation(MagmaPoly.from_terms(list(terms)))


def random_poly(rng, ab, max_len, max_terms=3):
    pool = []
    for n in range(1, max_len + 1):
        pool.extend(words_of_length(ab, n))
    items = []
    for _ in range(rng.randint(1, max_terms)):
        items.append((rng.choice(pool), Fraction(rng.randint(-3, 3), rng.randint(1, 2))))
    return MagmaPoly.from_terms(items)


class TestPaths:
    def test_subtree(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        w = node(x, node(y, z))
        assert subtree(w, ()) is w
        assert subtree(w, (1,)) is node(y, z)
        assert subtree(w, (1, 0)) is y

    def test_subtree_bad_path(self, ab2):
        x = leaf(ab2["x"])
        with pytest.raises(ValueError, match="ran past a leaf"):
            subtree(x, (0,))

    def test_graft(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        w = node(x, node(y, z))
        assert graft(w, (1, 1), x) is node(x, node(y, x))
        assert graft(w, (), z) is z

    def test_graft_bad_path(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        with pytest.raises(ValueError, match="ran past a leaf"):
            graft(node(x, y), (0, 1), x)


class TestOccurrences:
    def test_single(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        assert occurrences(node(x, node(y, z)), node(y, z)) == [(1,)]

    def test_disjoint_pair(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        xy = node(x, y)
        assert occurrences(node(xy, xy), xy) == [(0,), (1,)]

    def test_none(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        assert occurrences(node(x, y), node(y, x)) == []

    def test_root_included(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        assert occurrences(node(x, y), node(x, y)) == [()]

    def test_nested_or_disjoint(self, ab2):
        # Tree geometry: two subtree occurrences never properly overlap.
        def leaf_span(w, path):
            start = 0
            for step in path:
                if step == 0:
                    w = w.left
                else:
                    start += w.left.length
                    w = w.right
            return (start, start + w.length)

        for n in range(2, 6):
            for w in words_of_length(ab2, n):
                subs = list(w.subtrees())
                for i, (p, _) in enumerate(subs):
                    for q, _ in subs[i + 1:]:
                        nested = p == q[: len(p)] or q == p[: len(q)]
                        if nested:
                            continue
                        a0, a1 = leaf_span(w, p)
                        b0, b1 = leaf_span(w, q)
                        assert a1 <= b0 or b1 <= a0


class TestSubstitute:
    def test_linear(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        w = node(x, node(y, z))
        repl = MagmaPoly.from_terms([(node(y, z), 1), (node(z, y), -1)])
        got = substitute(w, (1,), repl)
        assert got == MagmaPoly.from_terms([(w, 1), (node(x, node(z, y)), -1)])

    def test_at_root(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        repl = MagmaPoly.from_terms([(x, 2), (y, -1)])
        assert substitute(node(x, y), (), repl) == repl

    def test_single_monomial(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        got = substitute(node(x, node(y, z)), (1,), MagmaPoly.monomial(node(z, y), -1))
        assert got == MagmaPoly.monomial(node(x, node(z, y)), -1)

    def test_bad_path(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        with pytest.raises(ValueError, match="invalid path"):
            substitute(node(x, y), (1, 1), MagmaPoly.monomial(x))


class TestZinbielFamily:
    def test_match(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        got = ZinbielFamily().match(node(x, node(y, z)))
        assert got == MagmaPoly.from_terms(
            [(node(x, node(y, z)), 1), (node(node(x, y), z), -1), (node(node(y, x), z), -1)])

    def test_match_collision(self, ab2):
        # a = b makes the two tail terms coincide with coefficient -2.
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        got = ZinbielFamily().match(node(x, node(x, y)))
        assert got == MagmaPoly.from_terms(
            [(node(x, node(x, y)), 1), (node(node(x, x), y), -2)])

    def test_no_match(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        fam = ZinbielFamily()
        assert fam.match(x) is None
        assert fam.match(node(node(x, y), z)) is None

    def test_instance_counts(self, ab2):
        assert len(ZinbielFamily(ab2).instances(3)) == 8
        assert len(ZinbielFamily(ab2).instances(4)) == 56

    def test_instances_need_alphabet(self):
        with pytest.raises(ValueError, match="without an alphabet"):
            ZinbielFamily().instances(3)


class TestNormalForm:
    def test_defining_rewrite(self, ab3):
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        nf = normal_form(MagmaPoly.monomial(node(x, node(y, z))), [ZinbielFamily()])
        assert nf == MagmaPoly.from_terms(
            [(node(node(x, y), z), 1), (node(node(y, x), z), 1)])

    def test_relation_itself_dies(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        p = MagmaPoly.from_terms([(node(x, y), 1), (node(y, x), 1)])
        assert not normal_form(p, trivial_gsb(ab2))

    def test_truncated_cube(self):
        rels = truncated_poly_relations(3)
        ab = rels[0].alphabet
        x1, x3 = leaf(ab["x1"]), leaf(ab["x3"])
        p = MagmaPoly.monomial(node(x1, node(x1, x1)))
        want = MagmaPoly.monomial(x3, Fraction(1, 3))
        assert normal_form(p, rels) == want
        assert normal_form(p, rels, strategy="smallest") == want

    def test_irreducible_fixed(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        p = MagmaPoly.from_terms([(node(y, x), 2), (x, -1)])
        assert normal_form(p, trivial_gsb(ab2)) == p

    def test_idempotent(self, ab2):
        rng = random.Random(11)
        rels = trivial_gsb(ab2)
        for _ in range(50):
            p = random_poly(rng, ab2, 5)
            nf = normal_form(p, rels)
            assert normal_form(nf, rels) == nf

    def test_strategies_agree_on_confluent_set(self, ab2):
        rng = random.Random(23)
        rels = trivial_gsb(ab2)
        for _ in range(200):
            p = random_poly(rng, ab2, 6)
            assert normal_form(p, rels) == normal_form(p, rels, strategy="smallest")

    def test_bound_too_small(self, ab2):
        x = leaf(ab2["x"])
        p = MagmaPoly.monomial(node(node(x, x), x))
        with pytest.raises(ValueError, match="instantiation bound exceeded"):
            normal_form(p, trivial_gsb(ab2), bound=2)

    def test_unknown_strategy(self, ab2):
        with pytest.raises(ValueError, match="unknown strategy"):
            normal_form(MagmaPoly.monomial(leaf(ab2["x"])), [], strategy="leftmost")

    def test_reducible(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        rels = trivial_gsb(ab2)
        assert reducible(node(x, y), rels)
        assert not reducible(node(y, x), rels)


class TestTrace:
    def test_replay_reproduces_difference(self):
        rels = truncated_poly_relations(3)
        ab = rels[0].alphabet
        x1, x2 = leaf(ab["x1"]), leaf(ab["x2"])
        p = MagmaPoly.from_terms(
            [(node(x1, node(x1, x1)), 1), (node(x2, x1), Fraction(1, 2))])
        nf, trace = normal_form_with_trace(p, rels)
        assert trace
        assert p - nf == replay_trace(trace)

    def test_steps_below_leading(self, ab2):
        rng = random.Random(5)
        rels = trivial_gsb(ab2)
        for _ in range(30):
            p = random_poly(rng, ab2, 5)
            if not p:
                continue
            nf, trace = normal_form_with_trace(p, rels)
            assert nf == normal_form(p, rels)
            for step in trace:
                assert step.word.key <= p.leading().key

    def test_empty_trace_when_irreducible(self, ab2):
        x = leaf(ab2["x"])
        nf, trace = normal_form_with_trace(MagmaPoly.monomial(x), trivial_gsb(ab2))
        assert nf == MagmaPoly.monomial(x)
        assert trace == []


class TestCompositions:
    def test_inclusion_value(self, ab3):
        # f is the defining rewrite at (x, y, z); g rewrites yz -> -zy.
        x, y, z = (leaf(ab3[n]) for n in "xyz")
        f = MagmaPoly.from_terms(
            [(node(x, node(y, z)), 1), (node(node(x, y), z), -1), (node(node(y, x), z), -1)])
        g = MagmaPoly.from_terms([(node(y, z), 1), (node(z, y), 1)])
        comps = inclusion_compositions(f, g)
        assert len(comps) == 1
        amb, h = comps[0]
        assert amb is node(x, node(y, z))
        assert h == MagmaPoly.from_terms(
            [(node(node(x, y), z), -1), (node(node(y, x), z), -1),
             (node(x, node(z, y)), -1)])

    def test_no_occurrence(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        f = MagmaPoly.monomial(node(x, y))
        g = MagmaPoly.monomial(node(y, x))
        assert inclusion_compositions(f, g) == []

    def test_equal_leads_distinct_relations(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        f = MagmaPoly.from_terms([(node(x, y), 1), (node(y, x), 1)])
        g = MagmaPoly.monomial(node(x, y))
        comps = inclusion_compositions(f, g)
        assert comps == [(node(x, y), MagmaPoly.monomial(node(y, x)))]

    def test_self_root_skipped(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        f = MagmaPoly.from_terms([(node(x, y), 1), (node(y, x), 1)])
        assert inclusion_compositions(f, f) == []

    def test_rejects_nonmonic(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        f = MagmaPoly.monomial(node(x, y), 2)
        with pytest.raises(ValueError, match="monic"):
            inclusion_compositions(f, f)


class TestVerify:
    def test_defining_family_confluent(self, ab2):
        rep = verify_gsb([ZinbielFamily(ab2)], 4)
        assert rep.verified
        assert rep.ambiguities_checked > 0
        assert rep.instantiation_bound == 4

    def test_closed_form_set_confluent(self, ab2):
        assert verify_gsb(trivial_gsb(ab2), 4).verified

    def test_idempotent_generator_collapses(self, ab2):
        # x*x = x forces x itself into the ideal; confluence must fail.
        x = leaf(ab2["x"])
        rels = [ZinbielFamily(ab2), rel((node(x, x), 2), (x, -1))]
        rep = verify_gsb(rels, 4)
        assert not rep.verified
        hit = [f for f in rep.failures
               if set(f.normal_form.terms) == {x}]
        assert hit

    def test_bound_validation(self, ab2):
        with pytest.raises(ValueError, match="at least 2"):
            verify_gsb([ZinbielFamily(ab2)], 1)


class TestComplete:
    def test_idempotent_completion_finds_generator(self, ab2):
        x = leaf(ab2["x"])
        rels = [ZinbielFamily(ab2), rel((node(x, x), 2), (x, -1))]
        done = complete(rels, 4)
        explicit = [s.poly for s in done if isinstance(s, ExplicitRelation)]
        assert MagmaPoly.monomial(x) in explicit
        assert verify_gsb(done, 4).verified

    def test_already_complete_unchanged(self, ab2):
        rels = trivial_gsb(ab2)
        assert complete(rels, 4) == rels

    def test_reaches_closed_form_counts(self):
        from precom import enveloping_relations, trivial_algebra
        A = trivial_algebra(2)
        done = complete(enveloping_relations(A), 4)
        assert irreducible_counts(done, A.alphabet, 4) \
            == irreducible_counts(trivial_gsb(A.alphabet), A.alphabet, 4)

    def test_bound_validation(self, ab2):
        with pytest.raises(ValueError, match="at least 2"):
            complete(trivial_gsb(ab2), 1)


class TestInterreduce:
    def test_truncated_two(self):
        rels = truncated_poly_relations(2)
        ab = rels[0].alphabet
        x1, x2 = leaf(ab["x1"]), leaf(ab["x2"])
        done = interreduce(complete(rels, 4))
        explicit = {frozenset(s.poly.terms.items())
                    for s in done if isinstance(s, ExplicitRelation)}
        want = {
            frozenset([(node(x1, x1), Fraction(1)), (x2, Fraction(-1, 2))]),
            frozenset([(node(x1, x2), Fraction(1))]),
            frozenset([(node(x2, x1), Fraction(1))]),
            frozenset([(node(x2, x2), Fraction(1))]),
        }
        assert explicit == want

    def test_drops_redundant_leading(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        r1 = rel((node(x, y), 1), (node(y, x), 1))
        r2 = rel((node(node(x, y), x), 1))  # leading reducible via r1
        kept = interreduce([r1, r2])
        polys = [s.poly for s in kept if isinstance(s, ExplicitRelation)]
        assert polys == [r1.poly]

    def test_reduces_tails(self, ab2):
        x, y = leaf(ab2["x"]), leaf(ab2["y"])
        r1 = rel((node(x, x), 1), (x, -1))
        r2 = rel((node(x, y), 1), (node(x, x), 1))
        kept = interreduce([r1, r2])
        polys = {frozenset(s.poly.terms.items())
                 for s in kept if isinstance(s, ExplicitRelation)}
        assert frozenset([(node(x, y), Fraction(1)), (x, Fraction(1))]) in polys


class TestIrreducibles:
    def test_closed_form_counts(self, ab2):
        assert irreducible_counts(trivial_gsb(ab2), ab2, 4) == [2, 1, 2, 1]

    def test_one_letter(self):
        from precom import Alphabet
        ab = Alphabet(["x"])
        assert irreducible_counts(trivial_gsb(ab), ab, 3) == [1, 0, 0]

    def test_family_alone_leaves_combs(self, ab2):
        table = irreducible_words([ZinbielFamily(ab2)], ab2, 4)
        assert [len(table[n]) for n in range(1, 5)] == [2, 4, 8, 16]
        assert all(w.is_comb for row in table.values() for w in row)

    def test_ordering_within_length(self, ab2):
        table = irreducible_words(trivial_gsb(ab2), ab2, 4)
        for row in table.values():
            assert row == sorted(row, key=lambda w: w.key)

    def test_counts_complement_reducibles(self, ab2):
        rels = trivial_gsb(ab2)
        for n in range(1, 5):
            red = sum(1 for w in words_of_length(ab2, n) if reducible(w, rels))
            assert irreducible_counts(rels, ab2, n)[-1] == len(words_of_length(ab2, n)) - red

    def test_rejects_nonpositive_length(self, ab2):
        with pytest.raises(ValueError):
            irreducible_words(trivial_gsb(ab2), ab2, 0)
