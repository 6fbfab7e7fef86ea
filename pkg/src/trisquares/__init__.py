"""Exact verification that the square-sum functional equation forces the identity.

The package derives, for a multiplicative f with
f(a^2+b^2+c^2) = f(a)^2 + f(b)^2 + f(c)^2, the values f(n) = n for all
n up to a bound, entirely in rational arithmetic, and emits replayable
certificates checked by an independent validator.  A separate
constraint solver reaches the same values without the staged derivation.
"""

from .certificate import (
    Certificate,
    CheckReport,
    ParseError,
    check,
    deserialize,
    load,
    save,
    serialize,
)
from .constraints import Coprime, SumOfSquares
from .partial_fn import ConflictError, PartialFn
from .replay import (
    BOOTSTRAP_SLOTS,
    CaseFallthrough,
    HypothesisGap,
    ReplayError,
    ReplayRun,
    bootstrap,
    induction_step,
    run_replay,
    verify_up_to,
)
from .solver import (
    BudgetExceeded,
    SearchReport,
    generate_constraints,
    propagate,
    search,
)
from .three_squares import (
    NonvanishingRepresentable,
    NotRepresentable,
    PureSquareOnly,
    Representation,
    TwoSquareOnly,
    classify,
    hurwitz_expected,
    representations,
    verify_hurwitz,
)

__version__ = "1.0.0"

__all__ = [
    "BOOTSTRAP_SLOTS",
    "BudgetExceeded",
    "CaseFallthrough",
    "Certificate",
    "CheckReport",
    "ConflictError",
    "Coprime",
    "HypothesisGap",
    "NonvanishingRepresentable",
    "NotRepresentable",
    "ParseError",
    "PartialFn",
    "PureSquareOnly",
    "ReplayError",
    "ReplayRun",
    "Representation",
    "SearchReport",
    "SumOfSquares",
    "TwoSquareOnly",
    "bootstrap",
    "check",
    "classify",
    "deserialize",
    "generate_constraints",
    "hurwitz_expected",
    "induction_step",
    "load",
    "propagate",
    "representations",
    "run_replay",
    "save",
    "search",
    "serialize",
    "verify_hurwitz",
    "verify_up_to",
]
