import numpy as np
import pytest

from py_turing_lab.grid import Grid, SimConfig
from py_turing_lab.model import CrossDiffusionModel, ModelParams
from py_turing_lab.results import PatternMetrics, SweepRecord, Trajectory


class DiffusionOnlyModel(CrossDiffusionModel):
    """Standard model with the kinetics switched off"""

    def reaction(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))


@pytest.fixture(scope="session")
def standard_params():
    return ModelParams.standard(k32=2.0)


@pytest.fixture(scope="session")
def standard_equilibrium():
    return (1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0)


@pytest.fixture(scope="session")
def standard_model(standard_params):
    return CrossDiffusionModel(standard_params)


@pytest.fixture(scope="session")
def stable_model():
    return CrossDiffusionModel(ModelParams.standard(k32=1.0))


@pytest.fixture(scope="session")
def self_diffusion_model():
    return CrossDiffusionModel(
        ModelParams.standard(k32=0.0, k13=0.0, k23=0.0, k31=0.0)
    )


@pytest.fixture(scope="session")
def diffusion_only_model():
    return DiffusionOnlyModel(ModelParams.standard(k32=0.1))


@pytest.fixture(scope="session")
def small_grid():
    return Grid(nx=16, ny=16)


@pytest.fixture(scope="session")
def quick_config():
    return SimConfig(dt=0.05, steps=20, snapshot_every=10, progress_every=0)


@pytest.fixture(scope="session")
def example_trajectory(standard_params):
    times = np.array([0.0, 0.5, 1.0])
    states = np.array([[0.5, 0.5, 0.5], [0.45, 0.45, 0.55], [0.41, 0.41, 0.58]])
    return Trajectory(times=times, states=states, params=standard_params)


@pytest.fixture(scope="session")
def make_record():
    def record(value, classification, amplitude=0.2):
        return SweepRecord(
            param_value=value,
            u1_min=0.3,
            u1_max=0.3 + amplitude,
            metrics=PatternMetrics(
                amplitude=amplitude,
                mean=0.33,
                spot_count=3 if classification == "patterned" else 0,
                classification=classification,
            ),
        )

    return record
