"""Utility distributions, subjective conditional utility, and utility networks."""
from .errors import (
    DecompositionError,
    DegenerateError,
    InapplicableError,
    NonQuantizableError,
    NullConditioningError,
    ResourceError,
    SelfCheckError,
    UnknownFactorError,
    UtilityError,
    ValidationError,
)
from .factors import (
    AffineRecord,
    TioliFunction,
    UtilityDistribution,
    conditional_utility,
    is_subjectively_independent,
    normalize,
    utility,
)
from .maut import (
    AttributeSpace,
    IndependenceReport,
    Lottery,
    Ordering,
    TabulatedUtility,
    additive_decomposition,
    classify,
    conditional_prefers,
    expected_utility,
    is_additive_independent,
    is_mutually_independent,
    is_singularly_independent,
    is_tioli,
    is_utility_independent,
    prefers,
)
from .factorize import FactorSpace, binary_factorization, prefix_chain
from .unet import (
    CUT,
    UEvent,
    UtilityNetwork,
    conditional_utility_query,
    d_separated,
    joint_utility,
    marginal_utility,
    numerically_independent,
    validate,
)
from .binet import BiNetwork, Bridge, ProbabilityNetwork, expected_utility_query

__version__ = "0.1.0"
