"""
Pattern simulation module

Time stepping of u_t = Lap[K(u)] + F(u) on a rectangle with no-flux boundaries,
using the nine-point Laplacian on the flux of every species.

Example usage:
    >>> model = CrossDiffusionModel(ModelParams.standard(k32=2.0))
    >>> pde_solver = PdeSolver(model)
    >>> result = pde_solver.simulate(Grid(100, 100), SimConfig(steps=40000))
    >>> result.final[0].max - result.final[0].min
"""

import logging
from typing import Optional

import numpy as np

from py_turing_lab.constants import BLOW_UP_LIMIT, POSITIVITY_FLOOR
from py_turing_lab.exceptions import BlowUpError
from py_turing_lab.grid import Field, Grid, SimConfig, cell_weights, laplacian_values
from py_turing_lab.model import CrossDiffusionModel
from py_turing_lab.results import SimulationDiagnostics, SimulationResult, Snapshot

py_turing_lab_logger = logging.getLogger("py_turing_lab")


def fields_to_array(fields) -> np.ndarray:
    """Stack three fields into an array of shape (3, nx, ny)"""
    return np.stack([f.values for f in fields])


def array_to_fields(values: np.ndarray, grid: Grid) -> tuple[Field, Field, Field]:
    return tuple(Field(values[i].copy(), grid) for i in range(3))


class PdeSolver:
    model: CrossDiffusionModel

    def __init__(self, model: CrossDiffusionModel):
        self.model = model

    def initial_condition(
        self, g: Grid, seed: int, amplitude: float
    ) -> tuple[Field, Field, Field]:
        """
        Equilibrium plus independent uniform noise on [-amplitude, amplitude].

        Draws come from `numpy.random.default_rng(seed)` as one array of shape
        (3, nx, ny): species-major, then row-major over (i, j). Sites below the
        positivity floor are lifted to it.
        """
        if amplitude < 0.0:
            raise ValueError("amplitude must be >= 0")
        ubar = np.asarray(self.model.positive_equilibrium()).reshape(3, 1, 1)
        rng = np.random.default_rng(seed)
        noise = rng.uniform(-amplitude, amplitude, size=(3,) + g.shape)
        values = ubar + noise
        lifted = int(np.count_nonzero(values < POSITIVITY_FLOOR))
        if lifted:
            py_turing_lab_logger.warning(
                "Initial perturbation lifted %d site(s) to the floor %g",
                lifted,
                POSITIVITY_FLOOR,
            )
        return array_to_fields(np.maximum(values, POSITIVITY_FLOOR), g)

    def rhs(self, values: np.ndarray, dx: float) -> np.ndarray:
        """Lap[K(u)] + F(u) for stacked fields"""
        return laplacian_values(self.model.diffusion_flux(values), dx) + (
            self.model.reaction(values)
        )

    def _advance(
        self, values: np.ndarray, dx: float, cfg: SimConfig
    ) -> tuple[np.ndarray, bool]:
        """One unclamped step; the flag is False when Picard hit its cap"""
        if cfg.scheme == "explicit":
            return values + cfg.dt * self.rhs(values, dx), True

        iterate = values + cfg.dt * self.rhs(values, dx)
        for _ in range(cfg.picard_max_iters):
            # keep the flux polynomial inside the positive orthant between sweeps
            update = values + cfg.dt * self.rhs(
                np.maximum(iterate, POSITIVITY_FLOOR), dx
            )
            change = float(np.max(np.abs(update - iterate)))
            iterate = update
            if not np.isfinite(change):
                return iterate, True
            if change < cfg.picard_tol:
                return iterate, True
        return iterate, False

    def _check_bounded(self, values: np.ndarray, step: Optional[int]):
        if not np.all(np.isfinite(values)) or np.max(np.abs(values)) > BLOW_UP_LIMIT:
            py_turing_lab_logger.error("Field blew up at step %s", step)
            raise BlowUpError(
                f"field left the bounded range at step {step}",
                step=step,
                reason="blow-up",
            )

    def step_values(
        self,
        values: np.ndarray,
        dx: float,
        cfg: SimConfig,
        diagnostics: Optional[SimulationDiagnostics] = None,
        step_index: Optional[int] = None,
    ) -> np.ndarray:
        """Array form of `step` used by the run loop"""
        advanced, converged = self._advance(values, dx, cfg)
        self._check_bounded(advanced, step_index)
        below = advanced < POSITIVITY_FLOOR
        clamps = int(np.count_nonzero(below))
        if diagnostics is not None:
            diagnostics.clamps += clamps
            if not converged:
                diagnostics.picard_failures += 1
        if not converged:
            py_turing_lab_logger.warning(
                "Picard iteration hit %d iterations at step %s",
                cfg.picard_max_iters,
                step_index,
            )
        if clamps:
            py_turing_lab_logger.debug(
                "Clamped %d site(s) to the floor at step %s", clamps, step_index
            )
            advanced = np.where(below, POSITIVITY_FLOOR, advanced)
        return advanced

    def step(self, fields, cfg: SimConfig) -> tuple[Field, Field, Field]:
        """
        Advance three fields by one time step.

        Raises:
            BlowUpError: if a value is non-finite or exceeds the blow-up limit
        """
        grid = fields[0].grid
        values = self.step_values(fields_to_array(fields), grid.dx, cfg)
        return array_to_fields(values, grid)

    def lyapunov_functional(self, fields) -> float:
        """Trapezoidal sum of V(u) over the sites; zero only at the equilibrium"""
        grid = fields[0].grid
        values = fields_to_array(fields)
        density = self.model.lyapunov_value(self.model.positive_equilibrium(), values)
        return float(np.sum(cell_weights(grid) * density))

    def simulate(
        self,
        g: Grid,
        cfg: SimConfig,
        initial: Optional[tuple[Field, Field, Field]] = None,
    ) -> SimulationResult:
        """
        Seeded initial condition followed by `cfg.steps` steps.

        Args:
            g: lattice
            cfg: time stepping, noise and snapshot settings
            initial: explicit starting fields instead of seeded noise

        Raises:
            BlowUpError: carrying the failing step index
        """
        if initial is None:
            initial = self.initial_condition(g, cfg.seed, cfg.perturb_amplitude)
        values = fields_to_array(initial)
        diagnostics = SimulationDiagnostics()
        track_lyapunov = bool(np.all(values > 0.0)) and self.model.check_existence()

        snapshots = [Snapshot.from_array(0, 0.0, values, g)]
        if track_lyapunov:
            diagnostics.lyapunov.append(self.lyapunov_functional(snapshots[0].fields))

        for step in range(1, cfg.steps + 1):
            values = self.step_values(values, g.dx, cfg, diagnostics, step)
            if step % cfg.snapshot_every == 0 or step == cfg.steps:
                snapshot = Snapshot.from_array(step, step * cfg.dt, values, g)
                snapshots.append(snapshot)
                if track_lyapunov:
                    diagnostics.lyapunov.append(
                        self.lyapunov_functional(snapshot.fields)
                    )
            if cfg.progress_every and step % cfg.progress_every == 0:
                py_turing_lab_logger.info("step %d / %d", step, cfg.steps)

        if diagnostics.clamps:
            py_turing_lab_logger.warning(
                "Positivity floor applied %d time(s)", diagnostics.clamps
            )
        return SimulationResult(
            snapshots=snapshots,
            final=snapshots[-1].fields,
            diagnostics=diagnostics,
        )
