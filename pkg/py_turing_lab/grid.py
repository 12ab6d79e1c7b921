"""
Rectangular no-flux lattice

Grid geometry, per-species fields, the simulation settings and the nine-point
Laplacian with mirrored boundaries.

Example usage:
    >>> grid = Grid(nx=100, ny=100, dx=1.0, dy=1.0)
    >>> lap = nine_point_laplacian(Field(values, grid))
"""

__all__ = [
    "Grid",
    "Field",
    "SimConfig",
    "SCHEMES",
    "nine_point_laplacian",
    "laplacian_values",
    "cell_weights",
    "discrete_mass",
]

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from py_turing_lab.constants import (
    DEFAULT_DT,
    DEFAULT_PERTURB_AMPLITUDE,
    DEFAULT_PICARD_MAX_ITERS,
    DEFAULT_PICARD_TOL,
    DEFAULT_PROGRESS_EVERY,
    DEFAULT_SEED,
    DEFAULT_STEPS,
)
from py_turing_lab.exceptions import ValidationError

py_turing_lab_logger = logging.getLogger("py_turing_lab")

SCHEMES = ("explicit", "semi-implicit")

# 4 on the edges, 1 on the corners, -20 at the centre; scaled by 1/(6 dx^2)
NINE_POINT_KERNEL = np.array(
    [
        [1.0, 4.0, 1.0],
        [4.0, -20.0, 4.0],
        [1.0, 4.0, 1.0],
    ]
)


@dataclass(frozen=True)
class Grid:
    nx: int
    ny: int
    dx: float = 1.0
    dy: float = 1.0

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValidationError("grid needs nx, ny >= 3", reason="grid-size")
        if self.dx <= 0.0 or self.dy <= 0.0:
            raise ValidationError("grid spacing must be > 0", reason="grid-spacing")
        if not np.isclose(self.dx, self.dy, rtol=1e-12, atol=0.0):
            raise ValidationError(
                "the nine-point stencil needs square cells (dx == dy)",
                reason="square-cells",
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def lx(self) -> float:
        """Domain length along x, boundary site to boundary site"""
        return (self.nx - 1) * self.dx

    @property
    def ly(self) -> float:
        return (self.ny - 1) * self.dy

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Site coordinates as (x, y) arrays of shape (nx, ny), origin at site (0, 0)"""
        x = np.arange(self.nx) * self.dx
        y = np.arange(self.ny) * self.dy
        return np.meshgrid(x, y, indexing="ij")

    def to_dict(self):
        return {"nx": self.nx, "ny": self.ny, "dx": self.dx, "dy": self.dy}


@dataclass
class Field:
    """Density of one species on every site of a grid"""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    @classmethod
    def constant(cls, value: float, grid: Grid) -> "Field":
        return cls(np.full(grid.shape, float(value)), grid)

    @property
    def min(self) -> float:
        return float(self.values.min())

    @property
    def max(self) -> float:
        return float(self.values.max())

    @property
    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class SimConfig:
    dt: float = DEFAULT_DT
    steps: int = DEFAULT_STEPS
    snapshot_every: Optional[int] = None
    seed: int = DEFAULT_SEED
    perturb_amplitude: float = DEFAULT_PERTURB_AMPLITUDE
    scheme: str = "explicit"
    picard_tol: float = DEFAULT_PICARD_TOL
    picard_max_iters: int = DEFAULT_PICARD_MAX_ITERS
    progress_every: int = DEFAULT_PROGRESS_EVERY

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValidationError("dt must be > 0", reason="dt")
        if self.steps < 1:
            raise ValidationError("steps must be positive", reason="steps")
        if self.snapshot_every is None:
            object.__setattr__(self, "snapshot_every", self.steps)
        if not 1 <= self.snapshot_every <= self.steps:
            raise ValidationError(
                "snapshot_every must lie in [1, steps]", reason="snapshot_every"
            )
        if not 0 <= self.seed < 2**64:
            raise ValidationError(
                "seed must be a 64-bit unsigned integer", reason="seed"
            )
        if self.perturb_amplitude < 0.0:
            raise ValidationError(
                "perturb_amplitude must be >= 0", reason="perturb_amplitude"
            )
        if self.scheme not in SCHEMES:
            raise ValidationError(
                f"scheme must be one of {', '.join(SCHEMES)}", reason="scheme"
            )
        if not self.picard_tol > 0.0:
            raise ValidationError("picard_tol must be > 0", reason="picard_tol")
        if self.picard_max_iters < 1:
            raise ValidationError(
                "picard_max_iters must be positive", reason="picard_max_iters"
            )
        if self.progress_every < 0:
            raise ValidationError(
                "progress_every must be >= 0", reason="progress_every"
            )

    def to_dict(self):
        return {
            "dt": self.dt,
            "steps": self.steps,
            "snapshot_every": self.snapshot_every,
            "seed": self.seed,
            "perturb_amplitude": self.perturb_amplitude,
            "scheme": self.scheme,
            "picard_tol": self.picard_tol,
            "picard_max_iters": self.picard_max_iters,
            "progress_every": self.progress_every,
        }


def laplacian_values(values: np.ndarray, dx: float) -> np.ndarray:
    """
    Nine-point Laplacian over the last two axes of `values`.

    Out-of-domain neighbours are mirrored across the boundary site, so the left
    ghost u(-1, j) reads u(1, j) and corners reflect along both axes.
    """
    values = np.asarray(values, dtype=float)
    kernel = NINE_POINT_KERNEL.reshape((1,) * (values.ndim - 2) + (3, 3))
    return ndimage.correlate(values, kernel, mode="mirror") / (6.0 * dx * dx)


def nine_point_laplacian(f: Field) -> Field:
    return Field(laplacian_values(f.values, f.grid.dx), f.grid)


def cell_weights(grid: Grid) -> np.ndarray:
    """Trapezoidal site areas: half cells on edges, quarter cells in corners"""
    wx = np.ones(grid.nx)
    wx[[0, -1]] = 0.5
    wy = np.ones(grid.ny)
    wy[[0, -1]] = 0.5
    return np.outer(wx, wy) * grid.dx * grid.dy


def discrete_mass(f: Field) -> float:
    """Integral of the field that the mirrored stencil leaves unchanged"""
    return float(np.sum(cell_weights(f.grid) * f.values))
