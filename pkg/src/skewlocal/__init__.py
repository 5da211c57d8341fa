"""Split two-dimensional local skew fields: normal forms, classifying
invariants, pseudo-differential operators and the Dubrovin example algebra.
"""

from .autonorm import (
    DiskAutomorphism,
    NormalFormInvariants,
    auto_compose,
    auto_inverse,
    auto_iterate,
    conjugate,
    conjugate_test,
    normalize,
)
from .coeff import Field
from .dubrovin import Descriptor, HeisenbergElement, heis_mul, valuation_w
from .errors import (
    DivisionByZero,
    FieldMismatch,
    InadmissibleSet,
    NonConvergent,
    NotCompInvertible,
    NotInvertible,
    NotSolvable,
    ParseError,
    PrecisionExhausted,
    SkewFieldError,
    UnsupportedField,
    ZeroDivisorCandidate,
    ZeroElement,
    ZeroSeries,
)
from .parsing import (
    parse_heis,
    parse_psido,
    parse_rule_text,
    parse_scalar,
    parse_series,
    rule_to_text,
)
from .psido import PsiDO, psido_compose, psido_invert, to_skew, transcribe
from .series import DEFAULT_PRECISION, LaurentSeries
from .skew import (
    CommutationRule,
    ParameterChange,
    SkewInvariantSet,
    SkewSeries,
    build_from_invariants,
    build_from_rule,
    canonicalize,
    change_t1,
    change_t2,
    conj_by_t2,
    delta_extract,
    invariants,
    isomorphic,
    reduce_support,
    scale_t2,
    skew_invert,
    skew_mul,
)

__version__ = "1.0.0"

__all__ = [
    "CommutationRule",
    "DEFAULT_PRECISION",
    "Descriptor",
    "DiskAutomorphism",
    "DivisionByZero",
    "Field",
    "FieldMismatch",
    "HeisenbergElement",
    "InadmissibleSet",
    "LaurentSeries",
    "NonConvergent",
    "NormalFormInvariants",
    "NotCompInvertible",
    "NotInvertible",
    "NotSolvable",
    "ParameterChange",
    "ParseError",
    "PrecisionExhausted",
    "PsiDO",
    "SkewFieldError",
    "SkewInvariantSet",
    "SkewSeries",
    "UnsupportedField",
    "ZeroDivisorCandidate",
    "ZeroElement",
    "ZeroSeries",
    "auto_compose",
    "auto_inverse",
    "auto_iterate",
    "build_from_invariants",
    "build_from_rule",
    "canonicalize",
    "change_t1",
    "change_t2",
    "conj_by_t2",
    "conjugate",
    "conjugate_test",
    "delta_extract",
    "heis_mul",
    "invariants",
    "isomorphic",
    "normalize",
    "parse_heis",
    "parse_psido",
    "parse_rule_text",
    "parse_scalar",
    "parse_series",
    "psido_compose",
    "psido_invert",
    "reduce_support",
    "rule_to_text",
    "scale_t2",
    "skew_invert",
    "skew_mul",
    "to_skew",
    "transcribe",
    "valuation_w",
]
