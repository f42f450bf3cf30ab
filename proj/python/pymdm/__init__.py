"""Optimal output/estimation fidelity trade-off for coherent states.

All trade-off values are computed in a truncated Fock space and are lower
bounds on the true optimum.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
