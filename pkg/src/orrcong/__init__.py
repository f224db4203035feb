"""Exact verification of truncated hypergeometric congruences modulo prime powers."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BadPrime,
    ConfigInvalid,
    DivisionUndefined,
    NonPIntegral,
    NonUnitDenominator,
    OrderMismatch,
    PrecisionExhausted,
    ZeroDenominator,
)
from .padic import PadicApprox, Residue, ResidueRing, parse_rational  # noqa: E402
from .records import CongruenceCheck, Valuation, Verdict  # noqa: E402
