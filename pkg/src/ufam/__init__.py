"""Uniform families of finite subsets of the naturals under the lexicographic topology."""

from .adequacy import AdequacyTranscript, is_adequate, is_omega_adequate, m_set_contains
from .derivative import (
    cb_index_pow,
    finite_derivative_member_pow,
    finite_derivative_sufficient,
    is_limit_point,
    nash_williams_demo,
    witness_oracle,
)
from .errors import DSLError, PreconditionError, RejectedGroundSet, UfamError
from .family import (
    Family,
    enumerate_members,
    fam_member,
    lex_next,
    lex_rank,
    min_completion,
    parse_family,
    restrict_step,
    t_min,
    uniform_rank,
)
from .ftree import FTreeSchema, a_front_member, et_adequate_certificate, et_expand, validate_ftree
from .ordinal import Ordinal
from .setcore import gs_member, gs_min_above, gs_runs, parse_finset, parse_groundset

__all__ = [
    "AdequacyTranscript",
    "is_adequate",
    "is_omega_adequate",
    "m_set_contains",
    "cb_index_pow",
    "finite_derivative_member_pow",
    "finite_derivative_sufficient",
    "is_limit_point",
    "nash_williams_demo",
    "witness_oracle",
    "DSLError",
    "PreconditionError",
    "RejectedGroundSet",
    "UfamError",
    "Family",
    "enumerate_members",
    "fam_member",
    "lex_next",
    "lex_rank",
    "min_completion",
    "parse_family",
    "restrict_step",
    "t_min",
    "uniform_rank",
    "FTreeSchema",
    "a_front_member",
    "et_adequate_certificate",
    "et_expand",
    "validate_ftree",
    "Ordinal",
    "gs_member",
    "gs_min_above",
    "gs_runs",
    "parse_finset",
    "parse_groundset",
]
