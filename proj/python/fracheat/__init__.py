"""Numerical laboratory for the nonlinear stochastic fractional heat equation."""

try:
    from ._fracheat import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _fracheat import *  # noqa: F401,F403  (build-tree layout)

__version__ = "0.1.0"
