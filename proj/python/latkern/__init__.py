"""Lattice kernels of 1D diffusions joined with path functionals.

Thin wrapper over the compiled extension; everything lives in ``_latkern``.
"""

from ._latkern import *  # noqa: F401,F403
from ._latkern import __version__  # noqa: F401
