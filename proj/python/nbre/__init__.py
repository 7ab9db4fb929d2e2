"""Relative equilibria of the planar N-body problem."""

from ._nbre import *  # noqa: F401,F403
from ._nbre import NbreError, DomainError, MassError, ConvergenceError, BudgetError  # noqa: F401

__version__ = "0.1.0"
