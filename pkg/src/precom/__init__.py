"""Exact rewriting in free non-associative and pre-commutative (Zinbiel)
algebras, with power-series embeddings of filtered commutative algebras.

The layers, bottom up:

``magma``
    letters, binary tree words with a length-then-right-factor order,
    and polynomials over them;
``rewrite``
    subtree rewriting, normal forms, inclusion compositions, bounded
    completion, and irreducible-word enumeration;
``shuffle``
    the free pre-commutative algebra on associative words, conversion to
    and from left-combed trees, and the Perm-tensor check;
``envelope``
    enveloping relations of commutative algebras and the verification
    drivers around the trivial, idempotent, and truncated-power cases;
``compoly`` / ``embed``
    commutative polynomials in weighted symbols, truncated series, the
    averaging Rota-Baxter operator, and the embedding verifier;
``sexpr`` / ``cli``
    the text formats and the ``precom`` command.
"""

from .magma import (
    Alphabet,
    Letter,
    MagmaPoly,
    NaWord,
    bracket,
    compare_words,
    leading_and_monic,
    leaf,
    magma_product,
    node,
    words_of_length,
)
from .rewrite import (
    CompositionFailure,
    ExplicitRelation,
    GsbReport,
    ReductionStep,
    RelationSchema,
    ZinbielFamily,
    complete,
    graft,
    inclusion_compositions,
    interreduce,
    irreducible_counts,
    irreducible_words,
    normal_form,
    normal_form_with_trace,
    occurrences,
    reducible,
    replay_trace,
    substitute,
    subtree,
    verify_gsb,
)
from .shuffle import (
    PermAlgebra,
    PermTensorReport,
    ZinbElement,
    comb,
    from_left_comb,
    perm_tensor_check,
    random_element,
    shuffle,
    star,
    to_left_comb,
    zinbiel_product,
)
from .envelope import (
    CollapseReport,
    CommAlgebra,
    OddEvenReport,
    TailAnticommFamily,
    TailSquareFamily,
    TrivialEnvelopeReport,
    collapse_check,
    default_alphabet,
    enveloping_relations,
    idempotent_algebra,
    odd_even_zero_sweep,
    trivial_algebra,
    trivial_envelope_dimension,
    trivial_gsb,
    truncated_poly_relations,
    truncated_power_algebra,
    verify_trivial_envelope,
    verify_zinbiel_basis,
)
from .compoly import (
    COM_ONE,
    BuchbergerReport,
    ComMonomial,
    ComPoly,
    GenSymbol,
    buchberger_bounded,
    com_compare,
    com_reduce,
    com_reduce_with_trace,
    s_polynomial,
)
from .embed import (
    EmbeddingReport,
    FilteredAlgebra,
    TruncSeries,
    coefficient_relations,
    generator_series,
    pair_relation,
    random_nilpotent_algebra,
    random_series,
    rb_apply,
    series_product,
    series_star,
    splitting_product,
    standard_filtration,
    validate_filtration,
    verify_embedding,
)

__version__ = "0.1.0"
