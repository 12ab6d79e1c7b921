__all__ = [
    "Trajectory",
    "DescentReport",
    "CubicCoeffs",
    "DetCubic",
    "UnstableInterval",
    "DispersionCurve",
    "Snapshot",
    "SimulationDiagnostics",
    "SimulationResult",
    "PatternMetrics",
    "SweepRecord",
]

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from py_turing_lab.grid import Field, Grid
from py_turing_lab.model import ModelParams, SpeciesState


@dataclass
class Trajectory:
    """Samples of a kinetic solution; `states` has one row (u1, u2, u3) per time."""

    times: np.ndarray
    states: np.ndarray
    params: ModelParams
    clip_count: int = 0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float).reshape(-1, 3)
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have the same length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0.0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def __add__(self, other: "Trajectory") -> "Trajectory":
        """
        Append a continuation. A first sample of `other` repeating the last
        sample of `self` is dropped.
        """
        times, states = other.times, other.states
        if len(self) and len(other) and times[0] <= self.times[-1]:
            times, states = times[1:], states[1:]
        return Trajectory(
            times=np.concatenate([self.times, times]),
            states=np.concatenate([self.states, states]),
            params=self.params,
            clip_count=self.clip_count + other.clip_count,
        )

    @property
    def final(self) -> SpeciesState:
        return SpeciesState.from_array(self.states[-1])

    def reversed(self) -> "Trajectory":
        """Same samples in reverse order, relabelled on the original time axis."""
        return Trajectory(
            times=self.times,
            states=self.states[::-1].copy(),
            params=self.params,
            clip_count=self.clip_count,
        )

    def to_rows(self) -> list[list[float]]:
        return [[t, *state] for t, state in zip(self.times, self.states)]

    def to_dict(self):
        return {
            "times": self.times.tolist(),
            "states": self.states.tolist(),
            "params": self.params.to_dict(),
            "clip_count": self.clip_count,
        }


@dataclass
class DescentReport:
    monotone: bool
    max_increase: float

    def to_dict(self):
        return {"monotone": self.monotone, "max_increase": self.max_increase}


@dataclass(frozen=True)
class CubicCoeffs:
    """rho(lambda) = lambda^3 + a2 lambda^2 + a1 lambda + a0 at one wavenumber"""

    a2: float
    a1: float
    a0: float

    def __call__(self, lam):
        return ((lam + self.a2) * lam + self.a1) * lam + self.a0

    def derivative(self, lam):
        return (3.0 * lam + 2.0 * self.a2) * lam + self.a1

    def to_dict(self):
        return {"a2": self.a2, "a1": self.a1, "a0": self.a0}


@dataclass(frozen=True)
class DetCubic:
    """a0(mu) = c3 mu^3 + c2 mu^2 + c1 mu + c0 = det(mu K_u - G_u)"""

    c3: float
    c2: float
    c1: float
    c0: float

    @property
    def coefficients(self) -> np.ndarray:
        """Highest power first, as `np.roots` expects"""
        return np.array([self.c3, self.c2, self.c1, self.c0])

    def __call__(self, mu):
        return ((self.c3 * mu + self.c2) * mu + self.c1) * mu + self.c0

    def derivative(self, mu):
        return (3.0 * self.c3 * mu + 2.0 * self.c2) * mu + self.c1

    def to_dict(self):
        return {"c3": self.c3, "c2": self.c2, "c1": self.c1, "c0": self.c0}

    def to_table(self) -> str:
        return "\n".join(
            f"{name} = {value:.12g}" for name, value in self.to_dict().items()
        )


@dataclass(frozen=True)
class UnstableInterval:
    mu_lo: float
    mu_hi: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.mu_lo + self.mu_hi)

    def __contains__(self, mu: float) -> bool:
        return self.mu_lo < mu < self.mu_hi

    def to_dict(self):
        return {"mu_lo": self.mu_lo, "mu_hi": self.mu_hi}


@dataclass
class DispersionCurve:
    """
    Growth rate against a wavenumber (kind "mu") or a swept cross-diffusion
    coefficient (kind "k31" / "k32").
    """

    kind: str
    x: np.ndarray
    re_lambda_max: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.re_lambda_max = np.asarray(self.re_lambda_max, dtype=float)
        if len(self.x) > 1 and not np.all(np.diff(self.x) > 0.0):
            raise ValueError("dispersion abscissae must be strictly increasing")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.re_lambda_max.tolist()))

    def zero_crossings(self) -> list[float]:
        """Linear interpolation of every sign change from < 0 to >= 0"""
        crossings = []
        for i in range(len(self.x) - 1):
            y0, y1 = self.re_lambda_max[i], self.re_lambda_max[i + 1]
            if y0 < 0.0 <= y1:
                step = self.x[i + 1] - self.x[i]
                crossings.append(self.x[i] + step * -y0 / (y1 - y0))
        return crossings

    def to_rows(self) -> list[list[float]]:
        return [[x, y] for x, y in self.points]

    def to_dict(self):
        return {"kind": self.kind, "points": self.points}


@dataclass
class Snapshot:
    step: int
    time: float
    fields: tuple[Field, Field, Field]

    @classmethod
    def from_array(cls, step: int, time: float, values: np.ndarray, grid: Grid):
        return cls(
            step=step,
            time=time,
            fields=tuple(Field(values[i].copy(), grid) for i in range(3)),
        )

    def as_array(self) -> np.ndarray:
        return np.stack([f.values for f in self.fields])


@dataclass
class SimulationDiagnostics:
    clamps: int = 0
    picard_failures: int = 0
    lyapunov: list[float] = field(default_factory=list)

    def to_dict(self):
        return {
            "clamps": self.clamps,
            "picard_failures": self.picard_failures,
            "lyapunov": list(self.lyapunov),
        }


@dataclass
class SimulationResult:
    snapshots: list[Snapshot]
    final: tuple[Field, Field, Field]
    diagnostics: SimulationDiagnostics

    @property
    def final_array(self) -> np.ndarray:
        return np.stack([f.values for f in self.final])


@dataclass(frozen=True)
class PatternMetrics:
    amplitude: float
    mean: float
    spot_count: int
    classification: str

    @property
    def patterned(self) -> bool:
        return self.classification == "patterned"

    def to_dict(self):
        return {
            "amplitude": self.amplitude,
            "mean": self.mean,
            "spot_count": self.spot_count,
            "classification": self.classification,
        }


@dataclass(frozen=True)
class SweepRecord:
    param_value: float
    u1_min: float
    u1_max: float
    metrics: PatternMetrics
    predicted: Optional[str] = None

    def __post_init__(self):
        if self.u1_min > self.u1_max:
            raise ValueError("u1_min must not exceed u1_max")

    def to_row(self) -> list:
        return [
            self.param_value,
            self.u1_min,
            self.u1_max,
            self.metrics.amplitude,
            self.metrics.spot_count,
            self.metrics.classification,
        ]

    def to_dict(self):
        return {
            "param_value": self.param_value,
            "u1_min": self.u1_min,
            "u1_max": self.u1_max,
            "metrics": self.metrics.to_dict(),
            "predicted": self.predicted,
        }
