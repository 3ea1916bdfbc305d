"""Exact computation with finite-rank torsion-free abelian groups.

Submodules, bottom up: :mod:`rational` (exact matrices, HNF/SNF),
:mod:`lattices`, :mod:`groups` (type-presented groups), :mod:`towers`
(filtrations, tower maps, Mittag-Leffler), :mod:`completions`,
:mod:`lim1`, :mod:`ext`, :mod:`serialize` and :mod:`cli`.
"""

from .errors import TfextError
from .groups import INF

__version__ = "0.1.0"

__all__ = ["INF", "TfextError", "__version__"]
