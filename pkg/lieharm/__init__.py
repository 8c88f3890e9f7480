"""Harmonic Riemannian submersions NA -> N^βA^β and the harmonic morphisms they carry."""
from .config import TOOL_VERSION as __version__
from .catalog import AlgebraSpec, realize, resolve
from .errors import InputError, LieHarmError, NumericalFailure
from .suites import VerificationContext, run_verification

__all__ = [
    "AlgebraSpec",
    "InputError",
    "LieHarmError",
    "NumericalFailure",
    "VerificationContext",
    "__version__",
    "realize",
    "resolve",
    "run_verification",
]
