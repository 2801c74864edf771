"""twistalg: exact computation with scalar 2-cocycles, twisted group
algebras, projective representations and group actions at desk scale."""

__version__ = "0.1.0"

from .scalars import (Alpha, Formal, RootUnity, half_power, make_alpha,
                      parse_scalar, symbolic_alpha)

__all__ = [
    "Alpha", "Formal", "RootUnity", "half_power", "make_alpha",
    "parse_scalar", "symbolic_alpha", "__version__",
]
