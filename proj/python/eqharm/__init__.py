"""Gaussian random equivariant spherical harmonics on the 3-sphere."""

from ._eqharm import *  # noqa: F401,F403
from ._eqharm import __version__  # noqa: F401
