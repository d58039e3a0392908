"""Linear algebra of complex G2 structures: octonions, 3-forms, planes and a flat Dirac model."""
from . import exterior, flatdeform, g2core, grassmann, octonion, sympcompat
from .errors import DegeneracyError, G2KitError, InputError, PreconditionError

__version__ = "0.1.0"

__all__ = [
    "DegeneracyError", "G2KitError", "InputError", "PreconditionError",
    "exterior", "flatdeform", "g2core", "grassmann", "octonion", "sympcompat",
]
