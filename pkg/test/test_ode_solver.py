import math

import numpy as np
import pytest

from py_turing_lab.exceptions import DomainError, StepSizeError
from py_turing_lab.solvers.ode_solver import OdeSolver


def logistic(u0, t):
    return 1.0 / (1.0 + (1.0 / u0 - 1.0) * np.exp(-t))


def test_equilibrium_start_stays_put(standard_model):
    ubar = standard_model.positive_equilibrium()
    trajectory = OdeSolver(standard_model).integrate_ode(ubar, t_end=10.0, dt=0.01)
    assert len(trajectory) == 1001
    np.testing.assert_allclose(
        trajectory.states, np.tile(ubar, (1001, 1)), rtol=0.0, atol=1e-10
    )
    assert trajectory.clip_count == 0


def test_converges_to_equilibrium(standard_model, standard_equilibrium):
    trajectory = OdeSolver(standard_model).integrate_ode(
        (0.5, 0.5, 0.5), t_end=200.0, dt=0.01
    )
    assert trajectory.times[-1] == pytest.approx(200.0)
    np.testing.assert_allclose(trajectory.final, standard_equilibrium, atol=1e-6)


def test_extinct_predator_gives_logistic_prey(standard_model):
    u0 = (0.2, 0.4, 0.0)
    trajectory = OdeSolver(standard_model).integrate_ode(u0, t_end=10.0, dt=0.01)
    assert np.all(trajectory.states[:, 2] == 0.0)
    np.testing.assert_allclose(
        trajectory.states[:, 0], logistic(0.2, trajectory.times), atol=1e-8
    )
    np.testing.assert_allclose(
        trajectory.states[:, 1], logistic(0.4, trajectory.times), atol=1e-8
    )


def test_fourth_order_on_logistic_prey(standard_model):
    solver = OdeSolver(standard_model)
    errors = []
    for dt in (0.1, 0.05, 0.025):
        final = solver.integrate_ode((0.1, 0.1, 0.0), t_end=5.0, dt=dt).final
        errors.append(abs(final.u1 - logistic(0.1, 5.0)))
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    assert min(orders) > 3.5


def test_sampling_keeps_last_step(standard_model):
    trajectory = OdeSolver(standard_model).integrate_ode(
        (0.5, 0.5, 0.5), t_end=1.05, dt=0.01, sample_every=10
    )
    assert trajectory.times[-1] == pytest.approx(1.05)
    assert trajectory.times[1] == pytest.approx(0.1)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(u0=(0.5, 0.5, 0.5), t_end=1.0, dt=0.0),
        dict(u0=(0.5, 0.5, 0.5), t_end=0.001, dt=0.01),
        dict(u0=(0.5, -0.1, 0.5), t_end=1.0, dt=0.01),
    ],
)
def test_integrate_ode_rejects_bad_arguments(standard_model, kwargs):
    with pytest.raises(ValueError):
        OdeSolver(standard_model).integrate_ode(**kwargs)


def test_step_size_error(standard_model):
    with pytest.raises(StepSizeError) as err:
        OdeSolver(standard_model).integrate_ode((0.0, 0.0, 5.0), t_end=1e30, dt=1e30)
    assert err.value.code == 6


def test_descent_on_constant_trajectory(standard_model):
    solver = OdeSolver(standard_model)
    trajectory = solver.integrate_ode(
        standard_model.positive_equilibrium(), t_end=1.0, dt=0.1
    )
    report = solver.verify_lyapunov_descent(trajectory)
    assert report.monotone
    assert report.max_increase == pytest.approx(0.0, abs=1e-15)


def test_descent_and_its_reversal(standard_model):
    solver = OdeSolver(standard_model)
    trajectory = solver.integrate_ode((0.5, 0.5, 0.5), t_end=20.0, dt=0.01)
    assert solver.verify_lyapunov_descent(trajectory).monotone
    report = solver.verify_lyapunov_descent(trajectory.reversed())
    assert not report.monotone
    assert report.max_increase > 0.0


def test_descent_needs_positive_states(standard_model):
    solver = OdeSolver(standard_model)
    trajectory = solver.integrate_ode((0.2, 0.4, 0.0), t_end=1.0, dt=0.1)
    with pytest.raises(DomainError):
        solver.verify_lyapunov_descent(trajectory)


def test_global_stability_from_random_starts(standard_model, standard_equilibrium):
    solver = OdeSolver(standard_model)
    rng = np.random.default_rng(7)
    starts = rng.uniform(0.05, 2.0, size=(100, 3))
    trajectories = solver.integrate_ode_batch(
        starts, t_end=500.0, dt=0.01, sample_every=100
    )
    assert len(trajectories) == 100
    for start, trajectory in zip(starts, trajectories):
        np.testing.assert_array_equal(trajectory.states[0], start)
        assert solver.verify_lyapunov_descent(trajectory).monotone
        assert np.max(np.abs(trajectory.states[-1] - standard_equilibrium)) < 1e-4


def test_batch_clip_counts_are_per_trajectory(standard_model):
    solver = OdeSolver(standard_model)
    crowded, calm = (0.5, 0.5, 100.0), (0.5, 0.5, 0.5)
    wild, tame = solver.integrate_ode_batch([crowded, calm], t_end=1.0, dt=1.0)
    assert wild.clip_count > 0
    assert tame.clip_count == 0
    single = solver.integrate_ode(crowded, t_end=1.0, dt=1.0)
    assert wild.clip_count == single.clip_count
    np.testing.assert_array_equal(wild.states, single.states)
