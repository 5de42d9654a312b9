"""Degree and height bounds for modular equations, with exact tools to check them.

Submodules: ``polycore`` (exact polynomials and fractions), ``gradedring``
(graded presentations and weight rewriting), ``heckefam`` (Hecke families),
``heightlab`` (Weil heights), ``constpipe`` (explicit bounds), ``qexp``
(q-expansions and classical modular polynomials), ``evaltree``
(reconstruction from evaluations) and ``audit`` (file checks).
"""

from .kernels import BACKEND
from .polycore import MPoly, RatFrac, parse_frac, parse_poly

__version__ = "0.1.0"

__all__ = ["BACKEND", "MPoly", "RatFrac", "parse_frac", "parse_poly", "__version__"]
