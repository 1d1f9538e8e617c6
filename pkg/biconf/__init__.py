"""biconf: numerical verification of bi-conformal geometry."""

__version__ = "0.1.0"

# Import obstructions to ensure they are registered
from . import analysis
