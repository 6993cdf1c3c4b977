"""Exact verification of alternating sums of (q-)binomial products."""

__version__ = "0.1.0"

from .exact import LaurentPoly, NotDivisible, lp_eval
from .qcore import qbinom
from .sums import S, SumSpec, alt_sum

__all__ = ["__version__", "LaurentPoly", "NotDivisible", "lp_eval", "qbinom", "S", "SumSpec",
           "alt_sum"]
