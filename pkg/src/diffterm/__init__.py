"""Difference terms and difference term operations of finite idempotent algebras."""

from .algebra import FiniteAlgebra, Operation, close, generate_subalgebra, generate_subproduct, quotient
from .commutator import commutator_fast, commutator_matrices, delta_sequence, m_closure
from .congruence import all_congruences, congruence_generated, is_congruence, ji_lower_cover, principal_congruence
from .construct import TableBuilder, build_dt_table, ldto_table_for_pair, stage_table, verify_dt_table
from .decision import (
    Verdict,
    enumerate_ternary_clone,
    failing_subalgebras,
    has_dto,
    pair_has_ldto,
    variety_has_dt_local,
    variety_has_dt_pentagon,
)
from .errors import (
    CloneTooLarge,
    MalformedAlgebraError,
    NoLocalDifferenceTerm,
    NotIdempotentError,
    ParseError,
    PreconditionError,
)
from .io import format_algebra, load_fixture, parse_algebra
from .partition import Partition
from .tables import TernaryTable, pair_enumeration
from .tct import omits_type_one, type_one_witness

__version__ = "0.1.0"

__all__ = [
    "FiniteAlgebra",
    "Operation",
    "close",
    "generate_subalgebra",
    "generate_subproduct",
    "quotient",
    "commutator_fast",
    "commutator_matrices",
    "delta_sequence",
    "m_closure",
    "all_congruences",
    "congruence_generated",
    "is_congruence",
    "ji_lower_cover",
    "principal_congruence",
    "TableBuilder",
    "build_dt_table",
    "ldto_table_for_pair",
    "stage_table",
    "verify_dt_table",
    "Verdict",
    "enumerate_ternary_clone",
    "failing_subalgebras",
    "has_dto",
    "pair_has_ldto",
    "variety_has_dt_local",
    "variety_has_dt_pentagon",
    "CloneTooLarge",
    "MalformedAlgebraError",
    "NoLocalDifferenceTerm",
    "NotIdempotentError",
    "ParseError",
    "PreconditionError",
    "format_algebra",
    "load_fixture",
    "parse_algebra",
    "Partition",
    "TernaryTable",
    "pair_enumeration",
    "omits_type_one",
    "type_one_witness",
]
