"""Kinetic relaxation solver for 2D convection-diffusion systems.

The solver evolves a Jin-Xin relaxation system (equivalently, a regularized
discrete-velocity kinetic model) whose Chapman-Enskog limit reproduces a target
diffusion tensor. Transport is explicit and upwind; relaxation is implicit and
local to each cell.
"""

from .lattice import MomentBasis, WaveModel, build
from .systems import AdmissibilityError, CompressibleNS, ScalarAdvDiff

__all__ = ["AdmissibilityError", "CompressibleNS", "MomentBasis", "ScalarAdvDiff",
           "WaveModel", "build"]
__version__ = "0.1.0"
