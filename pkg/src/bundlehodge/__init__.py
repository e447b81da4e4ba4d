"""Hodge numbers of moduli spaces of stable vector bundles over a curve."""

from .errors import (
    CapMismatchError,
    ConsistencyError,
    CoprimalityError,
    DomainError,
    HodgeError,
    InvalidInputError,
    NonUnitError,
    TruncationError,
)
from .hntypes import HNType, codimension, enumerate_types
from .moduli import (
    F,
    HodgeReport,
    ambient_hp,
    chi_characteristic,
    euler_and_signature,
    hp_fixed_det,
    hp_full,
    report,
)
from .series import BiSeries, UniPoly, div_exact, geom

__version__ = "0.1.0"
