"""Large-argument expansions of the Lommel function S_{mu,nu}(z) and related
special functions, each returned with a rigorous error bound."""

from .coefficients import OrderPair
from .errors import (ConvergenceError, DomainError, InapplicableError, InvariantViolation,
                     LommelError, PoleError, PreconditionError)
from .hyper import certified_eval_hyper, optimal_truncation, reexpand_bound, reexpand_remainder
from .lommel import (CertifiedValue, TruncationScheme, certified_eval_S, certified_eval_S_prime,
                     oracle_remainder_S, oracle_remainder_S_prime)
from .related import RelatedQuery, related_tail
from .terminant import TerminantQuery, terminant_eval, terminant_sup_bound

__version__ = "0.1.0"

__all__ = [
    "OrderPair",
    "TruncationScheme",
    "CertifiedValue",
    "certified_eval_S",
    "certified_eval_S_prime",
    "certified_eval_hyper",
    "oracle_remainder_S",
    "oracle_remainder_S_prime",
    "reexpand_remainder",
    "reexpand_bound",
    "optimal_truncation",
    "RelatedQuery",
    "related_tail",
    "TerminantQuery",
    "terminant_eval",
    "terminant_sup_bound",
    "LommelError",
    "DomainError",
    "PreconditionError",
    "PoleError",
    "InapplicableError",
    "ConvergenceError",
    "InvariantViolation",
]
