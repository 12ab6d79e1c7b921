import math

import numpy as np
import pytest

from py_turing_lab.constants import POSITIVITY_FLOOR
from py_turing_lab.exceptions import BlowUpError
from py_turing_lab.grid import Field, Grid, SimConfig, cell_weights, discrete_mass
from py_turing_lab.model import CrossDiffusionModel, ModelParams
from py_turing_lab.solvers.linear_stability import LinearStability
from py_turing_lab.solvers.pattern_analysis import pattern_metrics
from py_turing_lab.solvers.pde_solver import PdeSolver, array_to_fields


def equilibrium_fields(model, grid):
    return tuple(Field.constant(v, grid) for v in model.positive_equilibrium())


def test_initial_condition_without_noise(standard_model, small_grid):
    solver = PdeSolver(standard_model)
    fields = solver.initial_condition(small_grid, seed=1, amplitude=0.0)
    for f, v in zip(fields, standard_model.positive_equilibrium()):
        assert f.min == f.max == v


def test_initial_condition_is_seeded(standard_model, small_grid):
    solver = PdeSolver(standard_model)
    first = solver.initial_condition(small_grid, seed=42, amplitude=0.05)
    second = solver.initial_condition(small_grid, seed=42, amplitude=0.05)
    other = solver.initial_condition(small_grid, seed=43, amplitude=0.05)
    for a, b, c in zip(first, second, other):
        np.testing.assert_array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)


def test_initial_condition_range(standard_model, small_grid):
    solver = PdeSolver(standard_model)
    fields = solver.initial_condition(small_grid, seed=5, amplitude=0.05)
    for f, v in zip(fields, standard_model.positive_equilibrium()):
        assert f.min >= v - 0.05
        assert f.max <= v + 0.05
        assert f.min >= POSITIVITY_FLOOR


def test_large_perturbation_is_floored(standard_model, small_grid):
    solver = PdeSolver(standard_model)
    fields = solver.initial_condition(small_grid, seed=5, amplitude=1.5)
    assert min(f.min for f in fields) == POSITIVITY_FLOOR


@pytest.mark.parametrize("scheme", ["explicit", "semi-implicit"])
def test_equilibrium_is_fixed_point(standard_model, small_grid, scheme):
    fields = equilibrium_fields(standard_model, small_grid)
    cfg = SimConfig(dt=0.005, steps=1, scheme=scheme)
    stepped = PdeSolver(standard_model).step(fields, cfg)
    for before, after in zip(fields, stepped):
        np.testing.assert_allclose(after.values, before.values, rtol=0.0, atol=1e-13)


def test_diffusion_conserves_discrete_mass(diffusion_only_model):
    grid = Grid(nx=64, ny=64)
    cfg = SimConfig(dt=0.1, steps=1000)
    values = np.random.default_rng(9).uniform(0.5, 1.5, size=(3,) + grid.shape)
    fields = array_to_fields(values, grid)
    before = [discrete_mass(f) for f in fields]
    solver = PdeSolver(diffusion_only_model)
    for _ in range(cfg.steps):
        fields = solver.step(fields, cfg)
    after = [discrete_mass(f) for f in fields]
    np.testing.assert_allclose(after, before, rtol=1e-8, atol=0.0)
    assert min(f.min for f in fields) > POSITIVITY_FLOOR


def test_explicit_step_blows_up_with_huge_dt(diffusion_only_model, small_grid):
    values = np.random.default_rng(4).uniform(0.5, 1.5, size=(3,) + small_grid.shape)
    fields = array_to_fields(values, small_grid)
    solver = PdeSolver(diffusion_only_model)
    with pytest.raises(BlowUpError) as err:
        for _ in range(20):
            fields = solver.step(fields, SimConfig(dt=1000.0, steps=1))
    assert err.value.code == 8


def test_simulate_reports_failing_step(diffusion_only_model, small_grid):
    cfg = SimConfig(dt=1000.0, steps=50, progress_every=0, perturb_amplitude=0.2)
    with pytest.raises(BlowUpError) as err:
        PdeSolver(diffusion_only_model).simulate(small_grid, cfg)
    assert 1 <= err.value.step <= 50


def test_simulate_without_noise(standard_model, small_grid):
    cfg = SimConfig(dt=0.005, steps=10, snapshot_every=5, perturb_amplitude=0.0)
    result = PdeSolver(standard_model).simulate(small_grid, cfg)
    assert [s.step for s in result.snapshots] == [0, 5, 10]
    assert result.snapshots[-1].time == pytest.approx(0.05)
    ubar = standard_model.positive_equilibrium()
    np.testing.assert_allclose(
        result.final_array, np.asarray(ubar).reshape(3, 1, 1) * np.ones((3, 16, 16)),
        atol=1e-12,
    )
    assert pattern_metrics(result.final[0]).classification == "homogeneous"
    assert result.diagnostics.clamps == 0


def test_simulate_is_deterministic(standard_model, small_grid, quick_config):
    solver = PdeSolver(standard_model)
    first = solver.simulate(small_grid, quick_config)
    second = solver.simulate(small_grid, quick_config)
    assert np.array_equal(first.final_array, second.final_array)
    assert first.diagnostics.to_dict() == second.diagnostics.to_dict()


def test_snapshots_include_final_step(standard_model, small_grid):
    cfg = SimConfig(dt=0.01, steps=7, snapshot_every=3, progress_every=0)
    result = PdeSolver(standard_model).simulate(small_grid, cfg)
    assert [s.step for s in result.snapshots] == [0, 3, 6, 7]


def test_schemes_agree_in_stable_regime(stable_model):
    grid = Grid(nx=32, ny=32)
    explicit = SimConfig(dt=0.001, steps=2000, progress_every=0)
    implicit = SimConfig(dt=0.001, steps=2000, progress_every=0, scheme="semi-implicit")
    solver = PdeSolver(stable_model)
    a = solver.simulate(grid, explicit)
    b = solver.simulate(grid, implicit)
    assert b.diagnostics.picard_failures == 0
    assert np.max(np.abs(a.final_array - b.final_array)) < 1e-3


def test_lyapunov_functional(standard_model, small_grid):
    solver = PdeSolver(standard_model)
    assert solver.lyapunov_functional(
        equilibrium_fields(standard_model, small_grid)
    ) == pytest.approx(0.0, abs=1e-14)
    noisy = solver.initial_condition(small_grid, seed=3, amplitude=0.05)
    assert solver.lyapunov_functional(noisy) > 0.0


def test_lyapunov_functional_decreases_without_cross_diffusion(self_diffusion_model):
    cfg = SimConfig(dt=0.01, steps=500, snapshot_every=50, progress_every=0)
    result = PdeSolver(self_diffusion_model).simulate(Grid(32, 32), cfg)
    values = result.diagnostics.lyapunov
    assert len(values) == 11
    assert np.all(np.diff(values) < 0.0)


def test_single_mode_grows_at_linear_rate(standard_model):
    grid = Grid(nx=32, ny=32)
    m = 10
    sigma = 2.0 - 2.0 * math.cos(math.pi * m / (grid.nx - 1))
    expected = LinearStability(standard_model).max_real_eigenvalue(sigma)
    assert expected > 0.0

    x, _ = grid.coordinates()
    mode = np.cos(math.pi * m * x / grid.lx)
    ubar = np.asarray(standard_model.positive_equilibrium()).reshape(3, 1, 1)
    values = ubar * np.ones((3,) + grid.shape)
    values += 1e-4 * mode
    initial = array_to_fields(values, grid)

    cfg = SimConfig(dt=0.01, steps=6000, snapshot_every=2000, progress_every=0)
    result = PdeSolver(standard_model).simulate(grid, cfg, initial=initial)
    weights = cell_weights(grid)

    def amplitude(snapshot):
        return np.sum(weights * (snapshot.fields[0].values - ubar[0]) * mode)

    early, late = result.snapshots[1], result.snapshots[3]
    assert abs(amplitude(late)) < 1e-2 * np.sum(weights * mode**2)
    rate = math.log(amplitude(late) / amplitude(early)) / (late.time - early.time)
    assert rate == pytest.approx(expected, rel=0.1)


def test_pattern_forms_at_ci_scale(
    standard_model, stable_model, standard_equilibrium
):
    grid = Grid(nx=64, ny=64)
    # t = 200: at t = 50 (10000 steps of 0.005) the stable k32 = 1 transient
    # still has amplitude ~4e-3 and reads as patterned
    cfg = SimConfig(dt=0.05, steps=4000, progress_every=0)
    patterned = PdeSolver(standard_model).simulate(grid, cfg)
    metrics = pattern_metrics(patterned.final[0])
    assert metrics.classification == "patterned"
    assert metrics.amplitude > 0.1 * standard_equilibrium[0]
    assert metrics.spot_count >= 5
    flat = PdeSolver(stable_model).simulate(grid, cfg)
    metrics = pattern_metrics(flat.final[0])
    assert metrics.classification == "homogeneous"
    assert metrics.amplitude < 1e-3


@pytest.mark.slow
@pytest.mark.parametrize("k32", [1.0, 2.0])
def test_standard_scale_patterns(k32):
    model = CrossDiffusionModel(ModelParams.standard(k32=k32))
    result = PdeSolver(model).simulate(Grid(100, 100), SimConfig(dt=0.005, steps=40000))
    metrics = pattern_metrics(result.final[0])
    ubar = model.positive_equilibrium()
    if k32 == 2.0:
        assert metrics.classification == "patterned"
        assert metrics.amplitude > 0.1 * ubar.u1
        assert metrics.spot_count >= 5
    else:
        assert metrics.classification == "homogeneous"
        assert metrics.amplitude < 1e-3
