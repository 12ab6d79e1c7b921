"""
Pattern analysis module

Summary metrics of simulated fields and bifurcation sweeps over a
cross-diffusion coefficient.

Example usage:
    >>> model = CrossDiffusionModel(ModelParams.standard(k32=2.0))
    >>> analysis = PatternAnalysis(model)
    >>> records = analysis.bifurcation_sweep(grid, cfg, "k32", [1.7, 1.8, 1.9, 2.0])
    >>> [record.metrics.classification for record in records]
"""

import logging
from typing import Optional, Sequence

import anyio
import numpy as np
from scipy import ndimage

from py_turing_lab.constants import (
    DEFAULT_CLASSIFICATION_THRESHOLD,
    DEFAULT_SWEEP_WORKERS,
    DEFAULT_THRESHOLD_HI,
    DEFAULT_THRESHOLD_LO,
    DEFAULT_THRESHOLD_TOL,
    SPOT_PROMINENCE,
)
from py_turing_lab.exceptions import BlowUpError
from py_turing_lab.grid import Field, Grid, SimConfig
from py_turing_lab.helpers import map_in_threads
from py_turing_lab.model import CrossDiffusionModel
from py_turing_lab.results import PatternMetrics, SweepRecord
from py_turing_lab.solvers.linear_stability import (
    SWEEPABLE,
    LinearStability,
    admissible_wavenumbers,
)
from py_turing_lab.solvers.pde_solver import PdeSolver

py_turing_lab_logger = logging.getLogger("py_turing_lab")

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


def grid_lattice(g: Grid) -> np.ndarray:
    """No-flux wavenumbers resolved by the grid"""
    return admissible_wavenumbers(g.lx, g.ly, g.nx - 1, g.ny - 1)


def pattern_metrics(
    f: Field, rel_threshold: float = DEFAULT_CLASSIFICATION_THRESHOLD
) -> PatternMetrics:
    """
    Amplitude, mean and spot count of one field.

    A field is patterned when its amplitude exceeds `rel_threshold` times its
    mean. Spots are the 8-connected components of the sites above
    mean + 0.5 (max - mean).
    """
    if not rel_threshold > 0.0:
        raise ValueError("rel_threshold must be > 0")
    values = f.values
    high, low = float(values.max()), float(values.min())
    mean = float(values.mean())
    amplitude = high - low
    patterned = amplitude > rel_threshold * mean
    spot_count = 0
    if patterned:
        superlevel = values > mean + SPOT_PROMINENCE * (high - mean)
        _, spot_count = ndimage.label(superlevel, structure=EIGHT_CONNECTED)
    return PatternMetrics(
        amplitude=amplitude,
        mean=mean,
        spot_count=int(spot_count),
        classification="patterned" if patterned else "homogeneous",
    )


class PatternAnalysis:
    model: CrossDiffusionModel

    def __init__(
        self,
        model: CrossDiffusionModel,
        rel_threshold: float = DEFAULT_CLASSIFICATION_THRESHOLD,
    ):
        self.model = model
        self.rel_threshold = rel_threshold

    def pattern_metrics(self, f: Field) -> PatternMetrics:
        return pattern_metrics(f, self.rel_threshold)

    def predicted_classification(
        self, which: str, value: float, lattice: Optional[Sequence[float]]
    ) -> str:
        """Linear prediction: patterned iff an admissible wavenumber grows"""
        stability = LinearStability(self.model.with_coefficient(which, value))
        return "patterned" if stability.is_unstable(lattice) else "homogeneous"

    def _sweep_entry(
        self, g: Grid, cfg: SimConfig, which: str, value: float, lattice
    ) -> SweepRecord:
        model = self.model.with_coefficient(which, value)
        try:
            result = PdeSolver(model).simulate(g, cfg)
        except BlowUpError as err:
            err.param_value = value
            py_turing_lab_logger.error("Sweep entry %s = %g blew up", which, value)
            raise
        u1 = result.final[0]
        return SweepRecord(
            param_value=float(value),
            u1_min=u1.min,
            u1_max=u1.max,
            metrics=self.pattern_metrics(u1),
            predicted=self.predicted_classification(which, value, lattice),
        )

    def domain_threshold(
        self,
        g: Grid,
        which: str,
        lo: float = DEFAULT_THRESHOLD_LO,
        hi: float = DEFAULT_THRESHOLD_HI,
        tol: float = DEFAULT_THRESHOLD_TOL,
    ) -> float:
        """Onset of `which` over the wavenumbers the grid admits"""
        stability = LinearStability(self.model)
        return stability.turing_threshold(which, lo, hi, tol, grid_lattice(g))

    async def abifurcation_sweep(
        self,
        g: Grid,
        cfg: SimConfig,
        which: str,
        values: Sequence[float],
        workers: int = DEFAULT_SWEEP_WORKERS,
        threshold: Optional[float] = None,
    ) -> list[SweepRecord]:
        """
        Run one seeded simulation per value, `workers` at a time.

        Every run uses the same seed. Records follow the order of `values`.
        Values that break the up-set order are logged, and so are values
        outside threshold +- 0.1 whose classification disagrees with the
        linear prediction when `threshold` is given.

        Raises:
            BlowUpError: with `param_value` set to the offending value
        """
        if which not in SWEEPABLE:
            raise ValueError(f"sweep parameter must be one of {SWEEPABLE}")
        if len(values) > 1 and not np.all(np.diff(values) > 0.0):
            raise ValueError("sweep values must be increasing")
        lattice = grid_lattice(g)

        def run(value):
            return self._sweep_entry(g, cfg, which, value, lattice)

        records = await map_in_threads(run, list(values), workers)
        violations = self.check_monotone_sweep(records)
        if violations:
            py_turing_lab_logger.warning(
                "Patterned sweep values are not an up-set; homogeneous at %s",
                violations,
            )
        if threshold is not None:
            disagreements = self.check_against_prediction(records, threshold)
            if disagreements:
                py_turing_lab_logger.warning(
                    "Simulated classification disagrees with the linear prediction "
                    "at %s (threshold %.6g)",
                    disagreements,
                    threshold,
                )
        return records

    def bifurcation_sweep(
        self,
        g: Grid,
        cfg: SimConfig,
        which: str,
        values: Sequence[float],
        workers: int = DEFAULT_SWEEP_WORKERS,
        threshold: Optional[float] = None,
    ) -> list[SweepRecord]:
        return anyio.run(
            self.abifurcation_sweep, g, cfg, which, values, workers, threshold
        )

    @staticmethod
    def check_monotone_sweep(records: Sequence[SweepRecord]) -> list[float]:
        """Values classified homogeneous after a smaller value was patterned"""
        violations = []
        seen_pattern = False
        for record in records:
            if record.metrics.patterned:
                seen_pattern = True
            elif seen_pattern:
                violations.append(record.param_value)
        return violations

    @staticmethod
    def check_against_prediction(
        records: Sequence[SweepRecord], threshold: float, band: float = 0.1
    ) -> list[float]:
        """Values outside threshold +- band whose classification disagrees"""
        return [
            record.param_value
            for record in records
            if record.predicted is not None
            and abs(record.param_value - threshold) > band
            and record.predicted != record.metrics.classification
        ]
