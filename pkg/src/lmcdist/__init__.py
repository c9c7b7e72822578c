"""Total variation distance between labelled Markov chains."""
from ._backend import BACKEND
from .bounds import ApproxReport, ApproxStatus, Bracket, approximate, bracket_history
from .core import (Lmc, LmcError, ProblemInstance, SubDistribution, apply_word, disjoint_union,
                   format_lmc, parse_lmc, read_lmc, step, validate_lmc, write_lmc)
from .dist_one import distance_one, reach_set
from .linalg import distance_zero, equivalence_basis, is_equivalent

__all__ = [
    "BACKEND", "ApproxReport", "ApproxStatus", "Bracket", "Lmc", "LmcError", "ProblemInstance",
    "SubDistribution", "apply_word", "approximate", "bracket_history", "disjoint_union",
    "distance_one", "distance_zero", "equivalence_basis", "format_lmc", "is_equivalent",
    "parse_lmc", "reach_set", "read_lmc", "step", "validate_lmc", "write_lmc",
]
