"""Boundary null-control laboratory for a 1D advection-diffusion system
with dynamic boundary conditions."""

from advdifflab._core import *  # noqa: F401,F403
from advdifflab import _core

__version__ = "0.1.0"
__all__ = [name for name in dir(_core) if not name.startswith("_")]
