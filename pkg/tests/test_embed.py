from __future__ import annotations

import random
from fractions import Fraction

import pytest

from precom import (
    Alphabet,
    ComMonomial,
    ComPoly,
    CommAlgebra,
    FilteredAlgebra,
    TruncSeries,
    coefficient_relations,
    generator_series,
    idempotent_algebra,
    pair_relation,
    random_nilpotent_algebra,
    random_series,
    rb_apply,
    series_product,
    series_star,
    splitting_product,
    standard_filtration,
    trivial_algebra,
    truncated_power_algebra,
    validate_filtration,
    verify_embedding,
)


def trivial_filtered(d=1):
    A = trivial_algebra(d)
    return FilteredAlgebra(A, {x: 1 for x in A.basis})


def truncated_filtered(n):
    A = truncated_power_algebra(n)
    return FilteredAlgebra(A, {A.alphabet["x%d" % i]: i for i in range(1, n + 1)})


def c_mono(F, *pairs):
    """Monomial from (letter name, weight) pairs."""
    return ComMonomial(F.symbol(F.alphabet[name], w) for name, w in pairs)


class TestFilteredAlgebra:
    def test_levels(self):
        F = truncated_filtered(3)
        assert [F.level(x) for x in F.basis] == [1, 2, 3]
        assert F.max_level() == 3

    def test_missing_level(self):
        A = trivial_algebra(2)
        with pytest.raises(ValueError, match="no level assigned"):
            FilteredAlgebra(A, {A.alphabet["x"]: 1})

    def test_nonpositive_level(self):
        A = trivial_algebra(1)
        with pytest.raises(ValueError, match="positive"):
            FilteredAlgebra(A, {A.alphabet["x"]: 0})

    def test_symbol_fields(self):
        F = truncated_filtered(2)
        s = F.symbol(F.alphabet["x2"], 5)
        assert (s.base, s.level, s.weight, s.rank) == ("x2", 2, 5, 1)


class TestValidateFiltration:
    def test_trivial_any_levels(self):
        A = trivial_algebra(2)
        F = FilteredAlgebra(A, {A.alphabet["x"]: 3, A.alphabet["y"]: 1})
        assert validate_filtration(F) == []

    def test_truncated_valid(self):
        assert validate_filtration(truncated_filtered(3)) == []

    def test_corrupted_level_reported(self):
        A = truncated_power_algebra(3)
        ab = A.alphabet
        F = FilteredAlgebra(A, {ab["x1"]: 1, ab["x2"]: 1, ab["x3"]: 3})
        bad = validate_filtration(F)
        assert (ab["x1"], ab["x1"], ab["x2"], 1, 2) in bad


class TestStandardFiltration:
    def test_truncated_chain(self):
        F = standard_filtration(truncated_power_algebra(3))
        names = [x.name for x in F.basis]
        assert names == ["x1", "x2", "x3"]
        assert [F.level(x) for x in F.basis] == [1, 2, 3]
        ab = F.alphabet
        assert F.product(ab["x1"], ab["x2"]) == {ab["x3"]: 1}

    def test_trivial_all_level_one(self):
        F = standard_filtration(trivial_algebra(3))
        assert sorted(F.levels.values()) == [1, 1, 1]

    def test_idempotent_rejected(self):
        with pytest.raises(ValueError, match="no positive filtration: algebra not nilpotent"):
            standard_filtration(idempotent_algebra())

    def test_adapted_basis_with_mixed_vector(self):
        # a*a = b + c: the square span is one mixed line, renamed v1.
        ab = Alphabet(["a", "b", "c"])
        a, b, c = ab.letters
        A = CommAlgebra(ab, {(a, a): {b: 1, c: 1}})
        F = standard_filtration(A)
        names = [x.name for x in F.basis]
        assert names == ["a", "c", "v1"]
        assert [F.level(x) for x in F.basis] == [1, 1, 2]
        nab = F.alphabet
        assert F.product(nab["a"], nab["a"]) == {nab["v1"]: 1}
        assert validate_filtration(F) == []


class TestPairRelation:
    def test_trivial_square(self):
        F = trivial_filtered()
        s2 = pair_relation(F, F.alphabet["x"], F.alphabet["x"], 2)
        assert s2 == ComPoly.monomial(c_mono(F, ("x", 1), ("x", 1)))

    def test_trivial_weight_three_collision(self):
        F = trivial_filtered()
        x = F.alphabet["x"]
        raw = pair_relation(F, x, x, 3, monic=False)
        assert raw == ComPoly.monomial(c_mono(F, ("x", 1), ("x", 2)), 2)
        assert pair_relation(F, x, x, 3) \
            == ComPoly.monomial(c_mono(F, ("x", 1), ("x", 2)))

    def test_trivial_weight_four(self):
        F = trivial_filtered()
        x = F.alphabet["x"]
        s4 = pair_relation(F, x, x, 4, monic=False)
        assert s4 == ComPoly.from_terms([
            (c_mono(F, ("x", 2), ("x", 2)), 1),
            (c_mono(F, ("x", 1), ("x", 3)), 2),
        ])
        assert s4.leading() == c_mono(F, ("x", 2), ("x", 2))

    def test_truncated_lift(self):
        F = truncated_filtered(2)
        x1 = F.alphabet["x1"]
        s2 = pair_relation(F, x1, x1, 2)
        assert s2 == ComPoly.from_terms([
            (c_mono(F, ("x1", 1), ("x1", 1)), 1),
            (c_mono(F, ("x2", 2)), -1),
        ])

    def test_mixed_pair_lift(self):
        F = truncated_filtered(3)
        x1, x2 = F.alphabet["x1"], F.alphabet["x2"]
        s5 = pair_relation(F, x1, x2, 5, monic=False)
        assert s5.terms[c_mono(F, ("x3", 5))] == -1
        assert s5.terms[c_mono(F, ("x1", 1), ("x2", 4))] == 1
        assert s5.terms[c_mono(F, ("x1", 3), ("x2", 2))] == 1

    def test_deep_component_dropped_below_its_level(self):
        # a*a lands at level 3; the weight-2 relation cannot see it.
        ab = Alphabet(["a", "c"])
        a, c = ab.letters
        A = CommAlgebra(ab, {(a, a): {c: 1}})
        F = FilteredAlgebra(A, {a: 1, c: 3})
        assert pair_relation(F, a, a, 2) \
            == ComPoly.monomial(c_mono(F, ("a", 1), ("a", 1)))
        s3 = pair_relation(F, a, a, 3)
        assert s3 == ComPoly.from_terms([
            (c_mono(F, ("a", 1), ("a", 2)), 1),
            (c_mono(F, ("c", 3)), Fraction(-1, 2)),
        ])

    def test_weight_below_level_sum(self):
        F = truncated_filtered(2)
        with pytest.raises(ValueError, match="below level sum"):
            pair_relation(F, F.alphabet["x2"], F.alphabet["x2"], 3)

    def test_relation_counts(self):
        F = truncated_filtered(2)
        G = coefficient_relations(F, 6)
        assert len(G) == 5 + 4 + 3
        assert all(g.leading_coeff() == 1 for g in G)
        assert all(g.leading().count == 2 for g in G)

    def test_weight_bound_validated(self):
        with pytest.raises(ValueError, match="at least 2"):
            coefficient_relations(trivial_filtered(), 1)


class TestTruncSeries:
    def test_validation(self):
        with pytest.raises(ValueError, match="positive"):
            TruncSeries(0)
        with pytest.raises(ValueError, match="outside"):
            TruncSeries(3, {4: ComPoly.monomial(ComMonomial())})
        with pytest.raises(ValueError, match="outside"):
            TruncSeries(3, {0: ComPoly.monomial(ComMonomial())})

    def test_zero_coefficients_dropped(self):
        s = TruncSeries(3, {2: ComPoly.zero()})
        assert not s
        assert s == TruncSeries.zero(3)

    def test_coeff_accessor(self):
        p = ComPoly.monomial(ComMonomial())
        s = TruncSeries.term(2, p, 4)
        assert s.coeff(2) == p
        assert s.coeff(3) == ComPoly.zero()

    def test_addition_and_negation(self):
        p = ComPoly.monomial(ComMonomial())
        s = TruncSeries.term(1, p, 3)
        u = TruncSeries.term(1, p.scale(-1), 3)
        assert s + u == TruncSeries.zero(3)
        assert s - s == TruncSeries.zero(3)
        assert -(-s) == s

    def test_mismatch_rejected(self):
        p = ComPoly.monomial(ComMonomial())
        with pytest.raises(ValueError, match="truncation mismatch"):
            TruncSeries.term(1, p, 3) + TruncSeries.term(1, p, 4)

    def test_repr(self):
        assert repr(TruncSeries.zero(4)) == "O(t^5)"


ONE = ComPoly.monomial(ComMonomial())


def const_term(c, n, N):
    return TruncSeries.term(n, ONE.scale(c), N)


class TestRbApply:
    def test_scales_by_inverse_exponent(self):
        F = trivial_filtered()
        g = ComPoly.monomial(c_mono(F, ("x", 2)))
        s = TruncSeries.term(3, g, 5)
        assert rb_apply(s) == TruncSeries.term(3, g.scale(Fraction(1, 3)), 5)

    def test_zero(self):
        assert rb_apply(TruncSeries.zero(4)) == TruncSeries.zero(4)

    def test_rb_identity_on_monomials(self):
        a = const_term(1, 2, 8)
        b = const_term(1, 3, 8)
        left = series_product(rb_apply(a), rb_apply(b))
        assert left == const_term(Fraction(1, 6), 5, 8)
        right = rb_apply(series_product(rb_apply(a), b)
                         + series_product(a, rb_apply(b)))
        assert left == right

    def test_rb_identity_random(self):
        rng = random.Random(57)
        for _ in range(200):
            N = rng.randint(2, 8)
            s = random_series(rng, N)
            u = random_series(rng, N)
            left = series_product(rb_apply(s), rb_apply(u))
            right = rb_apply(series_product(rb_apply(s), u)
                             + series_product(s, rb_apply(u)))
            assert left == right


class TestSeriesProduct:
    def test_single_diagonal(self):
        F = trivial_filtered()
        a = TruncSeries.term(1, ComPoly.monomial(c_mono(F, ("x", 1))), 4)
        got = series_product(a, a)
        assert got == TruncSeries.term(
            2, ComPoly.monomial(c_mono(F, ("x", 1), ("x", 1))), 4)

    def test_truncation_discards_overflow(self):
        s = const_term(1, 3, 4)
        assert series_product(s, s) == TruncSeries.zero(4)

    def test_mismatch_rejected(self):
        with pytest.raises(ValueError, match="truncation mismatch"):
            series_product(const_term(1, 1, 3), const_term(1, 1, 4))

    def test_reduction_applied(self):
        F = trivial_filtered()
        G = coefficient_relations(F, 4)
        x = F.alphabet["x"]
        fx = generator_series(x, F, 4)
        assert series_star(fx, fx, G) == TruncSeries.zero(4)

    def test_double_sum_shape(self):
        # phi(x) phi(y) carries j * x_i y_j at t^(i+j).
        F = truncated_filtered(2)
        x1, x2 = F.alphabet["x1"], F.alphabet["x2"]
        prod = series_product(generator_series(x1, F, 5),
                              generator_series(x2, F, 5))
        c5 = prod.coeff(5)
        for i in (1, 2, 3):
            j = 5 - i
            assert c5.terms[c_mono(F, ("x1", i), ("x2", j))] == i * j


class TestGeneratorSeries:
    def test_level_one(self):
        F = trivial_filtered()
        x = F.alphabet["x"]
        s = generator_series(x, F, 3)
        assert s.coeff(1) == ComPoly.monomial(c_mono(F, ("x", 1)), 1)
        assert s.coeff(2) == ComPoly.monomial(c_mono(F, ("x", 2)), 2)
        assert s.coeff(3) == ComPoly.monomial(c_mono(F, ("x", 3)), 3)

    def test_level_two_starts_at_two(self):
        F = truncated_filtered(2)
        s = generator_series(F.alphabet["x2"], F, 3)
        assert sorted(s.coeffs) == [2, 3]
        assert s.coeff(2) == ComPoly.monomial(c_mono(F, ("x2", 2)), 2)
        assert s.coeff(3) == ComPoly.monomial(c_mono(F, ("x2", 3)), 3)

    def test_boundary_single_term(self):
        F = truncated_filtered(2)
        s = generator_series(F.alphabet["x2"], F, 2)
        assert sorted(s.coeffs) == [2]

    def test_below_level_rejected(self):
        F = truncated_filtered(3)
        with pytest.raises(ValueError, match="truncation below level"):
            generator_series(F.alphabet["x3"], F, 2)


class TestSeriesStar:
    def test_monomial_formula(self):
        for i, j in [(1, 2), (2, 3), (3, 4)]:
            a = const_term(1, i, 8)
            b = const_term(1, j, 8)
            want = const_term(Fraction(1, i) + Fraction(1, j), i + j, 8)
            assert series_star(a, b) == want

    def test_commutative(self):
        rng = random.Random(71)
        for _ in range(50):
            N = rng.randint(2, 7)
            s, u = random_series(rng, N), random_series(rng, N)
            assert series_star(s, u) == series_star(u, s)

    def test_associative(self):
        rng = random.Random(73)
        for _ in range(50):
            N = rng.randint(2, 6)
            s, u, v = (random_series(rng, N) for _ in range(3))
            assert series_star(series_star(s, u), v) == series_star(s, series_star(u, v))

    def test_residue_is_weight_times_relation(self):
        # Unreduced, the t^l discrepancy is exactly l times one relation.
        F = truncated_filtered(3)
        N = 6
        images = {x: generator_series(x, F, N) for x in F.basis}
        for xi, x in enumerate(F.basis):
            for y in F.basis[xi:]:
                target = TruncSeries.zero(N)
                for z, c in F.product(x, y).items():
                    target = target + TruncSeries(
                        N, {n: p.scale(c) for n, p in images[z].coeffs.items()})
                residue = series_star(images[x], images[y]) - target
                for l in range(F.level(x) + F.level(y), N + 1):
                    want = pair_relation(F, x, y, l, monic=False).scale(l)
                    assert residue.coeff(l) == want

    def test_grading_of_products(self):
        F = truncated_filtered(3)
        prod = series_star(generator_series(F.alphabet["x1"], F, 6),
                           generator_series(F.alphabet["x2"], F, 6))
        for n, p in prod.coeffs.items():
            assert p.weights() == {n}


class TestSplitting:
    def test_zinbiel_identity_on_random_series(self):
        rng = random.Random(83)
        for _ in range(60):
            N = rng.randint(2, 6)
            a, b, c = (random_series(rng, N) for _ in range(3))
            lhs = splitting_product(a, splitting_product(b, c))
            rhs = splitting_product(splitting_product(a, b), c) \
                + splitting_product(splitting_product(b, a), c)
            assert lhs == rhs

    def test_star_is_symmetrized_splitting(self):
        rng = random.Random(89)
        for _ in range(20):
            N = rng.randint(2, 6)
            s, u = random_series(rng, N), random_series(rng, N)
            assert series_star(s, u) \
                == splitting_product(s, u) + splitting_product(u, s)


class TestVerifyEmbedding:
    def test_trivial_one_dim(self):
        rep = verify_embedding(trivial_filtered(), 4)
        assert rep.verified
        assert rep.relation_count == 3
        assert rep.homomorphism_failures == []
        assert rep.splitting_failures == []
        assert rep.injectivity_certified_to == 4
        assert "certified" in rep.notes

    def test_truncated_two(self):
        rep = verify_embedding(truncated_filtered(2), 6)
        assert rep.verified
        assert rep.buchberger.added  # completion genuinely discovers relations

    def test_truncated_three_standard_filtration(self):
        F = standard_filtration(truncated_power_algebra(3))
        rep = verify_embedding(F, 6)
        assert rep.verified

    def test_truncation_too_small(self):
        with pytest.raises(ValueError, match="truncation too small"):
            verify_embedding(truncated_filtered(3), 5)

    def test_invalid_filtration_rejected(self):
        A = truncated_power_algebra(2)
        F = FilteredAlgebra(A, {x: 1 for x in A.basis})
        with pytest.raises(ValueError, match="filtration violation"):
            verify_embedding(F, 4)

    def test_random_nilpotent_instances(self):
        rng = random.Random(97)
        for _ in range(2):
            F = standard_filtration(random_nilpotent_algebra(rng))
            assert verify_embedding(F, 6).verified


def product_combo(A, combo1, combo2):
    out = {}
    for x, a in combo1.items():
        for y, b in combo2.items():
            for z, c in A.product(x, y).items():
                out[z] = out.get(z, Fraction(0)) + a * b * c
    return {z: c for z, c in out.items() if c}


class TestRandomInputs:
    def test_random_series_bounds(self):
        rng = random.Random(3)
        for _ in range(40):
            s = random_series(rng, 5, max_terms=2)
            assert s.N == 5
            assert all(1 <= n <= 5 for n in s.coeffs)
            assert all(len(p.terms) <= 2 for p in s.coeffs.values())

    def test_random_series_deterministic(self):
        a = random_series(random.Random(13), 6)
        b = random_series(random.Random(13), 6)
        assert a == b

    def test_random_nilpotent_algebras_are_associative(self):
        rng = random.Random(19)
        for _ in range(20):
            A = random_nilpotent_algebra(rng)
            basis = A.basis
            for x in basis:
                for y in basis:
                    for z in basis:
                        left = product_combo(A, A.product(x, y), {z: Fraction(1)})
                        right = product_combo(A, {x: Fraction(1)}, A.product(y, z))
                        assert left == right, (x, y, z)

    def test_random_nilpotent_algebras_filter(self):
        rng = random.Random(31)
        for _ in range(10):
            F = standard_filtration(random_nilpotent_algebra(rng))
            assert validate_filtration(F) == []
