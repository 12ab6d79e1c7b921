"""
Kinetic dynamics module

Fixed-step integration of the spatially uniform system and the Lyapunov descent
check along its trajectories.

Example usage:
    >>> model = CrossDiffusionModel(ModelParams.standard(k32=2.0))
    >>> ode_solver = OdeSolver(model)
    >>> trajectory = ode_solver.integrate_ode((0.5, 0.5, 0.5), t_end=200.0, dt=0.01)
    >>> ode_solver.verify_lyapunov_descent(trajectory).monotone
    True
"""

import logging

import numpy as np

from py_turing_lab.constants import (
    LYAPUNOV_DESCENT_TOLERANCE,
    ODE_CLIP_TOLERANCE,
)
from py_turing_lab.exceptions import DomainError, StepSizeError
from py_turing_lab.model import CrossDiffusionModel
from py_turing_lab.results import DescentReport, Trajectory

py_turing_lab_logger = logging.getLogger("py_turing_lab")


class OdeSolver:
    model: CrossDiffusionModel

    def __init__(self, model: CrossDiffusionModel):
        self.model = model

    def _rk4_step(self, u: np.ndarray, dt: float) -> np.ndarray:
        f = self.model.reaction
        k1 = f(u)
        k2 = f(u + 0.5 * dt * k1)
        k3 = f(u + 0.5 * dt * k2)
        k4 = f(u + dt * k3)
        return u + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)

    def _integrate(self, u0: np.ndarray, t_end: float, dt: float, sample_every: int):
        """RK4 on states shaped (3, m); returns times, samples and clips per column"""
        if not dt > 0.0:
            raise ValueError("dt must be > 0")
        if t_end < dt:
            raise ValueError("t_end must be >= dt")
        if sample_every < 1:
            raise ValueError("sample_every must be positive")
        if not np.all(u0 >= 0.0):
            raise ValueError("initial state must be nonnegative")

        n_steps = int(round(t_end / dt))
        sample_steps = list(range(0, n_steps + 1, sample_every))
        if sample_steps[-1] != n_steps:
            sample_steps.append(n_steps)

        samples = np.empty((len(sample_steps),) + u0.shape)
        samples[0] = u0
        u = u0.copy()
        clip_counts = np.zeros(u0.shape[1:], dtype=int)
        next_sample = 1
        for step in range(1, n_steps + 1):
            u = self._rk4_step(u, dt)
            if not np.all(np.isfinite(u)):
                py_turing_lab_logger.error(
                    "Non-finite kinetic state at t=%g with dt=%g", step * dt, dt
                )
                raise StepSizeError(
                    f"state became non-finite at step {step}; reduce dt={dt}",
                    reason="non-finite",
                )
            undershoot = u < -ODE_CLIP_TOLERANCE
            if np.any(undershoot):
                clipped = int(np.count_nonzero(undershoot))
                clip_counts += np.count_nonzero(undershoot, axis=0)
                py_turing_lab_logger.warning(
                    "Clipped %d negative component(s) at t=%g", clipped, step * dt
                )
                u = np.where(undershoot, 0.0, u)
            if next_sample < len(sample_steps) and step == sample_steps[next_sample]:
                samples[next_sample] = u
                next_sample += 1

        return np.array(sample_steps) * dt, samples, clip_counts

    def integrate_ode(
        self, u0, t_end: float, dt: float, sample_every: int = 1
    ) -> Trajectory:
        """
        Classical fixed-step fourth-order Runge-Kutta.

        Args:
            u0: nonnegative initial densities; a zero species stays extinct
            t_end: final time, at least one step
            dt: step size
            sample_every: keep every n-th step in the trajectory (the last step
                is always kept)

        Raises:
            StepSizeError: when a component becomes non-finite
        """
        u0 = np.asarray(u0, dtype=float).reshape(3)
        times, samples, clip_counts = self._integrate(u0, t_end, dt, sample_every)
        return Trajectory(
            times=times,
            states=samples,
            params=self.model.params,
            clip_count=int(clip_counts),
        )

    def integrate_ode_batch(
        self, u0s, t_end: float, dt: float, sample_every: int = 1
    ) -> list[Trajectory]:
        """
        Integrate many initial states in one vectorised sweep.

        Args:
            u0s: array of shape (m, 3)
        """
        u0s = np.asarray(u0s, dtype=float).reshape(-1, 3)
        times, samples, clip_counts = self._integrate(
            u0s.T, t_end, dt, sample_every
        )
        if clip_counts.any():
            py_turing_lab_logger.warning(
                "Batch integration clipped %d component(s) in total",
                int(clip_counts.sum()),
            )
        return [
            Trajectory(
                times=times,
                states=samples[:, :, j],
                params=self.model.params,
                clip_count=int(clip_counts[j]),
            )
            for j in range(u0s.shape[0])
        ]

    def verify_lyapunov_descent(self, traj: Trajectory) -> DescentReport:
        """
        Evaluate V along the samples and check it never grows by more than the
        descent tolerance between consecutive samples.

        Raises:
            DomainError: if a sampled state has a non-positive component
        """
        if not np.all(traj.states > 0.0):
            py_turing_lab_logger.error("Trajectory leaves the positive orthant")
            raise DomainError(
                "Lyapunov descent needs strictly positive states", reason="state"
            )
        model = CrossDiffusionModel(traj.params)
        ubar = model.positive_equilibrium()
        values = np.atleast_1d(model.lyapunov_value(ubar, traj.states.T))
        increases = np.diff(values)
        max_increase = float(max(increases.max(initial=0.0), 0.0))
        monotone = bool(np.all(increases <= LYAPUNOV_DESCENT_TOLERANCE))
        if not monotone:
            py_turing_lab_logger.warning(
                "Lyapunov function increased by up to %g along trajectory", max_increase
            )
        return DescentReport(monotone=monotone, max_increase=max_increase)
