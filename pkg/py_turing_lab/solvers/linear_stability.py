"""
Linear stability module

Linearisation of the cross-diffusion system at the positive equilibrium, the
cubic characteristic polynomial per wavenumber, the determinant cubic in the
wavenumber, unstable wavenumber intervals and Turing thresholds.

Example usage:
    >>> model = CrossDiffusionModel(ModelParams.standard(k32=2.0))
    >>> stability = LinearStability(model)
    >>> interval = stability.unstable_mu_interval()
    >>> stability.max_real_eigenvalue(interval.midpoint) > 0
    True
"""

__all__ = [
    "LinearStability",
    "admissible_wavenumbers",
    "cubic_roots",
    "max_real_root",
    "routh_hurwitz_stable",
]

import itertools
import logging
import math
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from py_turing_lab.constants import ROOT_TOLERANCE
from py_turing_lab.exceptions import BracketError
from py_turing_lab.model import CrossDiffusionModel, SpeciesState
from py_turing_lab.results import (
    CubicCoeffs,
    DetCubic,
    DispersionCurve,
    UnstableInterval,
)

py_turing_lab_logger = logging.getLogger("py_turing_lab")

SWEEPABLE = ("k31", "k32")


def _polish(poly, derivative, root: float) -> float:
    """One Newton step, kept only when it lowers the residual"""
    slope = derivative(root)
    if slope == 0.0 or not math.isfinite(slope):
        return root
    candidate = root - poly(root) / slope
    if abs(poly(candidate)) <= abs(poly(root)):
        return candidate
    return root


def cubic_roots(c: CubicCoeffs) -> np.ndarray:
    """
    Roots of lambda^3 + a2 lambda^2 + a1 lambda + a0 by Cardano's formulas.

    The depressed cubic t^3 + p t + q (lambda = t - a2/3) is solved with the
    trigonometric form when all roots are real and with the cancellation-free
    choice of cube root otherwise. Real roots get one Newton polish.
    """
    shift = -c.a2 / 3.0
    p = c.a1 - c.a2 * c.a2 / 3.0
    q = 2.0 * c.a2**3 / 27.0 - c.a2 * c.a1 / 3.0 + c.a0
    if p == 0.0 and q == 0.0:
        return np.full(3, complex(shift))

    discriminant = (q / 2.0) ** 2 + (p / 3.0) ** 3
    # (p / 3)^3 underflows for tiny p, so the sign of p picks the branch too
    if p > 0.0 or discriminant > 0.0:
        if q == 0.0:
            im = math.sqrt(p)
            return np.array([complex(shift), complex(shift, im), complex(shift, -im)])
        root_disc = math.sqrt(discriminant)
        w = -q / 2.0 - root_disc if q >= 0.0 else -q / 2.0 + root_disc
        big = float(np.cbrt(w))
        small = -p / (3.0 * big)
        real_root = _polish(c, c.derivative, big + small + shift)
        re = -(big + small) / 2.0 + shift
        im = math.sqrt(3.0) / 2.0 * (big - small)
        return np.array([complex(real_root), complex(re, im), complex(re, -im)])

    radius = 2.0 * math.sqrt(-p / 3.0)
    if p * radius == 0.0:
        # p underflowed; the roots coincide to working precision
        return np.full(3, complex(shift))
    cos_arg = 3.0 * q / (p * radius)
    theta = math.acos(min(1.0, max(-1.0, cos_arg))) / 3.0
    angles = [theta - 2.0 * math.pi * k / 3.0 for k in range(3)]
    roots = [_polish(c, c.derivative, radius * math.cos(a) + shift) for a in angles]
    return np.array(sorted(roots), dtype=complex)


def max_real_root(c: CubicCoeffs) -> float:
    return float(np.max(cubic_roots(c).real))


def routh_hurwitz_stable(c: CubicCoeffs) -> bool:
    """All roots in the open left half plane iff a2 > 0, a0 > 0 and a2 a1 > a0"""
    return c.a2 > 0.0 and c.a0 > 0.0 and c.a2 * c.a1 - c.a0 > 0.0


def admissible_wavenumbers(
    Lx: float, Ly: float, m_max: int, n_max: int
) -> np.ndarray:
    """
    Sorted distinct no-flux eigenvalues pi^2 ((m/Lx)^2 + (n/Ly)^2) of the
    rectangle, 0 <= m <= m_max and 0 <= n <= n_max.
    """
    if Lx <= 0.0 or Ly <= 0.0:
        raise ValueError("domain lengths must be > 0")
    m = np.arange(m_max + 1)[:, None]
    n = np.arange(n_max + 1)[None, :]
    mu = np.unique((math.pi**2 * ((m / Lx) ** 2 + (n / Ly) ** 2)).ravel())
    keep = np.ones(len(mu), dtype=bool)
    keep[1:] = np.diff(mu) > 1e-12 * (1.0 + mu[1:])
    return mu[keep]


class LinearStability:
    model: CrossDiffusionModel

    def __init__(self, model: CrossDiffusionModel):
        self.model = model

    @cached_property
    def equilibrium(self) -> SpeciesState:
        return self.model.positive_equilibrium()

    @cached_property
    def reaction_jacobian(self) -> np.ndarray:
        """G_u at the equilibrium"""
        return self.model.reaction_jacobian(self.equilibrium)

    @cached_property
    def diffusion_jacobian(self) -> np.ndarray:
        """K_u at the equilibrium"""
        return self.model.diffusion_jacobian(self.equilibrium)

    def _with(self, which: str, value: float) -> "LinearStability":
        if which not in SWEEPABLE:
            raise ValueError(f"sweep parameter must be one of {SWEEPABLE}")
        return LinearStability(self.model.with_coefficient(which, value))

    def stability_matrix(self, mu: float) -> np.ndarray:
        """-mu K_u + G_u; the mode exp(lambda t) phi_mu grows with its eigenvalues"""
        if mu < 0.0:
            raise ValueError("wavenumber mu must be >= 0")
        return -mu * self.diffusion_jacobian + self.reaction_jacobian

    def char_coeffs(self, mu: float) -> CubicCoeffs:
        """Coefficients from the trace, principal minors and determinant"""
        m = self.stability_matrix(mu)
        minors = (
            m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
            + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
        )
        return CubicCoeffs(
            a2=float(-np.trace(m)), a1=float(minors), a0=float(-np.linalg.det(m))
        )

    def routh_hurwitz_stable(self, mu: float) -> bool:
        return routh_hurwitz_stable(self.char_coeffs(mu))

    def max_real_eigenvalue(self, mu: float) -> float:
        return max_real_root(self.char_coeffs(mu))

    def det_cubic(self) -> DetCubic:
        """
        det(mu K_u - G_u) expanded exactly: the determinant is linear in each
        row, so the coefficient of mu^j sums the determinants taking j rows
        from K_u and the remaining rows from -G_u.
        """
        k, g = self.diffusion_jacobian, -self.reaction_jacobian
        coefficients = [0.0, 0.0, 0.0, 0.0]
        for choice in itertools.product((False, True), repeat=3):
            rows = np.array([k[i] if pick else g[i] for i, pick in enumerate(choice)])
            coefficients[sum(choice)] += float(np.linalg.det(rows))
        c0, c1, c2, c3 = coefficients
        return DetCubic(c3=c3, c2=c2, c1=c1, c0=c0)

    def det_roots(self) -> np.ndarray:
        """Real roots of the determinant cubic, ascending, each Newton-polished"""
        cubic = self.det_cubic()
        roots = []
        for root in np.roots(cubic.coefficients):
            if abs(root.imag) <= ROOT_TOLERANCE * (1.0 + abs(root)):
                roots.append(_polish(cubic, cubic.derivative, float(root.real)))
        return np.array(sorted(roots))

    def unstable_mu_interval(self) -> Optional[UnstableInterval]:
        """
        The open wavenumber interval where a0(mu) < 0, when the determinant
        cubic has two distinct positive roots.
        """
        cubic = self.det_cubic()
        positive = [mu for mu in self.det_roots() if mu > 0.0]
        if len(positive) != 2:
            return None
        mu_lo, mu_hi = positive
        if mu_hi - mu_lo <= ROOT_TOLERANCE * (1.0 + abs(mu_hi)):
            return None
        if cubic(0.5 * (mu_lo + mu_hi)) >= 0.0:
            return None
        return UnstableInterval(mu_lo=mu_lo, mu_hi=mu_hi)

    def turing_hypothesis(self, which: str) -> bool:
        """
        Sign condition under which growing `which` eventually destabilises:
        a ub1 - ub3 < 0 for k31, b ub2 - ub3 < 0 for k32.
        """
        p, ubar = self.model.params, self.equilibrium
        if which == "k31":
            return p.a * ubar.u1 - ubar.u3 < 0.0
        if which == "k32":
            return p.b * ubar.u2 - ubar.u3 < 0.0
        raise ValueError(f"sweep parameter must be one of {SWEEPABLE}")

    def is_unstable(self, lattice: Optional[Sequence[float]] = None) -> bool:
        """
        Turing-unstable on the continuum (lattice None) or for at least one
        admissible wavenumber of a domain.
        """
        interval = self.unstable_mu_interval()
        if interval is None:
            return False
        if lattice is None:
            return True
        return any(mu in interval for mu in lattice)

    def turing_threshold(
        self,
        which: str,
        lo: float,
        hi: float,
        tol: float,
        lattice: Optional[Sequence[float]] = None,
    ) -> float:
        """
        Bisection on k31 or k32 for the onset of instability.

        Monotonicity in the coefficient is checked only at the bisection points.

        Args:
            which: "k31" or "k32"
            lo: value expected to be stable
            hi: value expected to be unstable
            tol: width of the final bracket
            lattice: admissible wavenumbers for a domain-restricted threshold

        Raises:
            BracketError: if lo is unstable or hi is stable
        """
        if not lo < hi:
            raise ValueError("threshold bracket needs lo < hi")
        if not tol > 0.0:
            raise ValueError("tol must be > 0")
        if self._with(which, lo).is_unstable(lattice):
            py_turing_lab_logger.error("%s = %g is already unstable", which, lo)
            raise BracketError(
                f"{which} = {lo} is unstable; the bracket misses the onset",
                reason="lo-unstable",
            )
        if not self._with(which, hi).is_unstable(lattice):
            py_turing_lab_logger.error("%s = %g is still stable", which, hi)
            raise BracketError(
                f"{which} = {hi} is stable; the bracket misses the onset",
                reason="hi-stable",
            )
        while hi - lo > tol:
            middle = 0.5 * (lo + hi)
            if self._with(which, middle).is_unstable(lattice):
                hi = middle
            else:
                lo = middle
        threshold = 0.5 * (lo + hi)
        py_turing_lab_logger.info("Turing threshold %s ~ %.6g", which, threshold)
        return threshold

    def dispersion_vs_wavenumber(self, mu_values: Sequence[float]) -> DispersionCurve:
        mu_values = np.asarray(mu_values, dtype=float)
        return DispersionCurve(
            kind="mu",
            x=mu_values,
            re_lambda_max=[self.max_real_eigenvalue(mu) for mu in mu_values],
        )

    def dispersion_vs_parameter(
        self, which: str, values: Sequence[float], mu_set: Sequence[float]
    ) -> DispersionCurve:
        """Largest growth rate over `mu_set` for each value of the coefficient"""
        if len(mu_set) == 0:
            raise ValueError("mu_set must not be empty")
        rates = []
        for value in values:
            stability = self._with(which, value)
            rates.append(max(stability.max_real_eigenvalue(mu) for mu in mu_set))
        return DispersionCurve(kind=which, x=values, re_lambda_max=rates)
