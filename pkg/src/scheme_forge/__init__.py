"""Construction schemes over countable ordinals, computed on finite windows."""

from .errors import SchemeError
from .metric import ball, delta, rho
from .ordinals import Ord, ordinal, parse_ordinal
from .scheme import OmegaScheme, omega_scheme
from .typespec import PRESETS, TypeSpec, make_type, preset

__all__ = [
    "Ord",
    "OmegaScheme",
    "PRESETS",
    "SchemeError",
    "TypeSpec",
    "ball",
    "delta",
    "make_type",
    "omega_scheme",
    "ordinal",
    "parse_ordinal",
    "preset",
    "rho",
]

__version__ = "0.1.0"
