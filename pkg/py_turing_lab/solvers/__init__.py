from .linear_stability import LinearStability
from .ode_solver import OdeSolver
from .pattern_analysis import PatternAnalysis
from .pde_solver import PdeSolver

__all__ = [
    "LinearStability",
    "OdeSolver",
    "PatternAnalysis",
    "PdeSolver",
]
