"""
Core cross-diffusion model

This module contains the parameter set, the species state and the model class that
every solver is constructed from.

Example usage:
    >>> from py_turing_lab.model import CrossDiffusionModel, ModelParams
    >>> model = CrossDiffusionModel(ModelParams.standard(k32=2.0))
    >>> model.positive_equilibrium()
    SpeciesState(u1=0.333..., u2=0.333..., u3=0.666...)
"""

__all__ = ["ModelParams", "SpeciesState", "CrossDiffusionModel", "COEFFICIENTS"]

import dataclasses
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from py_turing_lab.exceptions import ConditionViolated, DomainError, ValidationError

py_turing_lab_logger = logging.getLogger("py_turing_lab")

KINETIC_RATES = ("a", "b", "c", "d", "e")
SELF_DIFFUSION = ("k11", "k22", "k33")
CROSS_DIFFUSION = ("k13", "k23", "k31", "k32")
COEFFICIENTS = KINETIC_RATES + ("k11", "k13", "k22", "k23", "k31", "k32", "k33")


@dataclass(frozen=True)
class ModelParams:
    """
    Kinetic rates and diffusion table of the two-prey one-predator system.

    k12 and k21 do not exist in the model; `k` fills them with zeros.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    k11: float
    k13: float
    k22: float
    k23: float
    k31: float
    k32: float
    k33: float

    @classmethod
    def standard(cls, k32: float, **overrides) -> "ModelParams":
        """a = b = 1, c = d = e = 0.1 and every diffusion coefficient but k32 at 0.1."""
        values = dict(
            a=1.0,
            b=1.0,
            c=0.1,
            d=0.1,
            e=0.1,
            k11=0.1,
            k13=0.1,
            k22=0.1,
            k23=0.1,
            k31=0.1,
            k32=k32,
            k33=0.1,
        )
        values.update(overrides)
        return cls(**values)

    @classmethod
    def from_dict(cls, values: dict) -> "ModelParams":
        missing = [name for name in COEFFICIENTS if name not in values]
        if missing:
            raise ValidationError(
                f"model parameters missing: {', '.join(missing)}",
                reason="missing-coefficient",
            )
        return cls(**{name: float(values[name]) for name in COEFFICIENTS})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    @property
    def k(self) -> np.ndarray:
        """3x3 diffusion-coefficient table k_ij"""
        return np.array(
            [
                [self.k11, 0.0, self.k13],
                [0.0, self.k22, self.k23],
                [self.k31, self.k32, self.k33],
            ]
        )

    @property
    def has_cross_diffusion(self) -> bool:
        return any(getattr(self, name) != 0.0 for name in CROSS_DIFFUSION)

    def validate(self) -> "ModelParams":
        """
        Check the sign invariants of the parameter set.

        Raises:
            ValidationError: naming the first violated invariant
        """
        for name in COEFFICIENTS:
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite", reason=name)
        for name in KINETIC_RATES:
            if getattr(self, name) <= 0.0:
                raise ValidationError(f"{name} must be > 0", reason=name)
        for name in SELF_DIFFUSION:
            if getattr(self, name) <= 0.0:
                raise ValidationError(f"{name} must be > 0", reason=name)
        for name in CROSS_DIFFUSION:
            if getattr(self, name) < 0.0:
                raise ValidationError(f"{name} must be >= 0", reason=name)
        return self


class SpeciesState(NamedTuple):
    """Densities of the two prey and the predator"""

    u1: float
    u2: float
    u3: float

    @classmethod
    def from_array(cls, values) -> "SpeciesState":
        u1, u2, u3 = (float(v) for v in values)
        return cls(u1, u2, u3)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


def _as_components(u) -> np.ndarray:
    values = np.asarray(u, dtype=float)
    if values.shape[0] != 3:
        raise ValueError("state must have three species along the first axis")
    return values


class CrossDiffusionModel:
    """
    Reaction terms, diffusion flux, their Jacobians and Lyapunov diagnostics.

    Every state argument may be a `SpeciesState`, a length-3 sequence or an array
    whose first axis indexes the species, so the same methods act on a point, a
    batch of points or whole fields.
    """

    def __init__(self, params: ModelParams, validate: bool = True):
        """
        Args:
            params: kinetic rates and diffusion coefficients
            validate: check the parameter invariants. Disabled only for
                degenerate test models such as a reaction-free system.
        """
        if validate:
            params.validate()
        self.params = params

    def __repr__(self) -> str:
        return f"CrossDiffusionModel({self.params!r})"

    def with_coefficient(self, which: str, value: float) -> "CrossDiffusionModel":
        """Copy of the model with one coefficient replaced"""
        if which not in COEFFICIENTS:
            raise ValidationError(f"unknown coefficient {which!r}", reason=which)
        return CrossDiffusionModel(self.params.replace(**{which: float(value)}))

    def check_existence(self) -> bool:
        """abc > max{e(b - a), d(a - b)}"""
        p = self.params
        return p.a * p.b * p.c > max(p.e * (p.b - p.a), p.d * (p.a - p.b))

    def positive_equilibrium(self) -> SpeciesState:
        """
        Closed-form positive equilibrium.

        Raises:
            ConditionViolated: when the existence condition fails
        """
        if not self.check_existence():
            py_turing_lab_logger.error(
                "No positive equilibrium for parameters %s", self.params
            )
            raise ConditionViolated(
                "abc > max{e(b-a), d(a-b)} does not hold", reason="existence"
            )
        p = self.params
        abc = p.a * p.b * p.c
        denominator = abc + p.b * p.d + p.a * p.e
        return SpeciesState(
            (abc + p.a * p.e - p.b * p.e) / denominator,
            (abc + p.b * p.d - p.a * p.d) / denominator,
            p.a * p.b * (p.d + p.e) / denominator,
        )

    def reaction(self, u) -> np.ndarray:
        p = self.params
        u1, u2, u3 = _as_components(u)
        return np.array(
            [
                p.a * u1 * (1.0 - u1) - u1 * u3,
                p.b * u2 * (1.0 - u2) - u2 * u3,
                -p.c * u3**2 + (p.d * u1 + p.e * u2) * u3,
            ]
        )

    def reaction_jacobian(self, u) -> np.ndarray:
        p = self.params
        u1, u2, u3 = SpeciesState.from_array(u)
        return np.array(
            [
                [p.a - 2.0 * p.a * u1 - u3, 0.0, -u1],
                [0.0, p.b - 2.0 * p.b * u2 - u3, -u2],
                [p.d * u3, p.e * u3, -2.0 * p.c * u3 + p.d * u1 + p.e * u2],
            ]
        )

    def diffusion_flux(self, u) -> np.ndarray:
        p = self.params
        u1, u2, u3 = _as_components(u)
        return np.array(
            [
                (p.k11 + p.k13 * u3) * u1,
                (p.k22 + p.k23 * u3) * u2,
                (p.k31 * u1 + p.k32 * u2 + p.k33) * u3,
            ]
        )

    def diffusion_jacobian(self, u) -> np.ndarray:
        p = self.params
        u1, u2, u3 = SpeciesState.from_array(u)
        return np.array(
            [
                [p.k11 + p.k13 * u3, 0.0, p.k13 * u1],
                [0.0, p.k22 + p.k23 * u3, p.k23 * u2],
                [p.k31 * u3, p.k32 * u3, p.k33 + p.k31 * u1 + p.k32 * u2],
            ]
        )

    def _lyapunov_weights(self) -> np.ndarray:
        return np.array([self.params.d, self.params.e, 1.0])

    @staticmethod
    def _require_positive(ubar, u):
        for name, values in (("ubar", ubar), ("u", u)):
            if not np.all(np.asarray(values) > 0.0):
                py_turing_lab_logger.error("Non-positive density in %s", name)
                raise DomainError(
                    f"{name} must be strictly positive for the logarithm",
                    reason=name,
                )

    def lyapunov_value(self, ubar, u) -> np.ndarray | float:
        """
        V(u) = d(u1 - ub1 - ub1 ln(u1/ub1)) + e(...) + (u3 - ub3 - ub3 ln(u3/ub3))

        Raises:
            DomainError: if any component of `u` or `ubar` is <= 0
        """
        ubar = np.asarray(ubar, dtype=float)
        u = _as_components(u)
        self._require_positive(ubar, u)
        shape = (3,) + (1,) * (u.ndim - 1)
        ubar = ubar.reshape(shape)
        weights = self._lyapunov_weights().reshape(shape)
        terms = u - ubar - ubar * np.log(u / ubar)
        value = np.sum(weights * terms, axis=0)
        return float(value) if np.ndim(value) == 0 else value

    def lyapunov_derivative(self, ubar, u) -> np.ndarray | float:
        """
        Time derivative of V along the kinetic flow,
        -ad(u1 - ub1)^2 - be(u2 - ub2)^2 - c(u3 - ub3)^2.

        Raises:
            DomainError: if any component of `u` or `ubar` is <= 0
        """
        p = self.params
        ubar = np.asarray(ubar, dtype=float)
        u = _as_components(u)
        self._require_positive(ubar, u)
        shape = (3,) + (1,) * (u.ndim - 1)
        deviation = u - ubar.reshape(shape)
        value = (
            -p.a * p.d * deviation[0] ** 2
            - p.b * p.e * deviation[1] ** 2
            - p.c * deviation[2] ** 2
        )
        return float(value) if np.ndim(value) == 0 else value

    def lyapunov_gradient(self, ubar, u) -> np.ndarray:
        """grad V = (d(1 - ub1/u1), e(1 - ub2/u2), 1 - ub3/u3)"""
        ubar = np.asarray(ubar, dtype=float)
        u = _as_components(u)
        self._require_positive(ubar, u)
        shape = (3,) + (1,) * (u.ndim - 1)
        return self._lyapunov_weights().reshape(shape) * (
            1.0 - ubar.reshape(shape) / u
        )
