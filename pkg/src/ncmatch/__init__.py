"""Longest non-crossing matchings in random bipartite (hyper-)graphs.

Samplers for five random models, exact solvers for the longest
non-crossing matching statistic L, block/partition constructions, and a
deterministic parallel Monte Carlo engine with convergence sweeps and
concentration checks.
"""

__version__ = "0.1.0"

from .errors import ContractViolation, NcmatchError, ResourceLimitError, ValidationError
from .graphs import (
    HyperGraph,
    MatchingResult,
    induced_subgraph,
    orient_symmetric,
    reduce_degree_one,
    strictly_dominates,
    validate,
)
from .samplers import ModelSpec, WordSample
from .seeds import Seed
from .solvers import (
    brute_force_lnm,
    lis_permutation,
    lis_strict_2d,
    longest_chain_dd,
    longest_noncrossing_matching,
)

__all__ = [
    "__version__",
    "ContractViolation",
    "HyperGraph",
    "MatchingResult",
    "ModelSpec",
    "NcmatchError",
    "ResourceLimitError",
    "Seed",
    "ValidationError",
    "WordSample",
    "brute_force_lnm",
    "induced_subgraph",
    "lis_permutation",
    "lis_strict_2d",
    "longest_chain_dd",
    "longest_noncrossing_matching",
    "orient_symmetric",
    "reduce_degree_one",
    "strictly_dominates",
    "validate",
]
