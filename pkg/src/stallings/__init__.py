"""Stallings core graphs, subgroup covers and bases of the free group F2."""

from .errors import (
    AlphabetError,
    CapExceededError,
    InternalConsistencyError,
    NotABasisError,
    NotFoldedError,
    ParseError,
    PreconditionError,
    RankMismatchError,
    StallingsError,
)
from .f2 import (
    Basis2,
    EuclidSequence,
    ExponentPattern,
    GeneralBasisDecomposition,
    ReverseEuclid,
    decompose_general_basis,
    enumerate_bases,
    enumerate_cr_bases,
    euclid_sequence,
    exponent_pattern,
    generate_cr_basis,
    inverse_substitution,
    is_basis,
    is_primitive,
    primitive_complement,
    reverse_euclid,
)
from .graphs import (
    CoreGraph,
    CoreStats,
    Morphism,
    RawGraph,
    canonical_form,
    compute_morphism,
    fold_all,
    no_trim_condition,
    quotient,
    to_core,
    to_dot,
    to_records,
    trim,
)
from .subgroups import (
    AppearWitness,
    Cover,
    Subgroup,
    appears,
    core_graph,
    covers_simple,
    embeds_as_subgraph,
    is_member,
    principal_overgroups,
    x_covers,
)
from .verifier import (
    CoverReport,
    check_lemma_conditions,
    search_noncovering_basis,
    verify_counterexample,
    verify_f3_example,
)
from .words import CyclicDecomposition, Letter, Word, cyclic_decompose, exponent_sums, heads_distinct, is_monotone, is_prefix_of_power, reduce

__version__ = "0.1.0"
