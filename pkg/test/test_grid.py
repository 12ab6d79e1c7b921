import math

import numpy as np
import pytest

from py_turing_lab.exceptions import ValidationError
from py_turing_lab.grid import (
    Field,
    Grid,
    SimConfig,
    cell_weights,
    discrete_mass,
    laplacian_values,
    nine_point_laplacian,
)


@pytest.mark.parametrize(
    "kwargs, reason",
    [
        (dict(nx=2, ny=10), "grid-size"),
        (dict(nx=10, ny=10, dx=0.0, dy=0.0), "grid-spacing"),
        (dict(nx=10, ny=10, dx=1.0, dy=0.5), "square-cells"),
    ],
)
def test_grid_invariants(kwargs, reason):
    with pytest.raises(ValidationError) as err:
        Grid(**kwargs)
    assert err.value.reason == reason
    assert err.value.code == 3


def test_grid_geometry():
    grid = Grid(nx=101, ny=51, dx=0.5, dy=0.5)
    assert grid.shape == (101, 51)
    assert grid.lx == 50.0
    assert grid.ly == 25.0
    x, y = grid.coordinates()
    assert x.shape == grid.shape
    assert x[100, 0] == 50.0
    assert y[0, 50] == 25.0


def test_field_shape_must_match_grid(small_grid):
    with pytest.raises(ValueError):
        Field(np.zeros((3, 3)), small_grid)
    f = Field.constant(0.25, small_grid)
    assert f.min == f.max == f.mean == 0.25


def test_laplacian_of_constant_is_zero(small_grid):
    lap = nine_point_laplacian(Field.constant(1.0 / 3.0, small_grid))
    np.testing.assert_allclose(lap.values, 0.0, atol=1e-14)


def test_laplacian_exact_on_quadratics():
    grid = Grid(nx=11, ny=11, dx=0.5, dy=0.5)
    x, y = grid.coordinates()
    lap = nine_point_laplacian(Field(x**2 + y**2, grid))
    np.testing.assert_allclose(lap.values[1:-1, 1:-1], 4.0, rtol=0.0, atol=1e-10)


def test_laplacian_reflects_at_walls():
    grid = Grid(nx=5, ny=5)
    values = np.zeros(grid.shape)
    values[1, 2] = 6.0
    lap = laplacian_values(values, grid.dx)
    # the mirrored ghost at i = -1 doubles the weight of site (1, 2) on the wall
    assert lap[0, 2] == pytest.approx(2.0 * 4.0)
    assert lap[0, 1] == pytest.approx(2.0 * 1.0)
    assert lap[1, 2] == pytest.approx(-20.0)


def test_laplacian_acts_on_stacked_fields(small_grid):
    rng = np.random.default_rng(1)
    values = rng.uniform(size=(3,) + small_grid.shape)
    stacked = laplacian_values(values, small_grid.dx)
    for species in range(3):
        np.testing.assert_allclose(
            stacked[species], laplacian_values(values[species], small_grid.dx)
        )


def test_laplacian_convergence_order():
    errors = []
    for n in (11, 21, 41):
        grid = Grid(nx=n, ny=n, dx=1.0 / (n - 1), dy=1.0 / (n - 1))
        x, y = grid.coordinates()
        f = np.cos(math.pi * x / grid.lx) * np.cos(math.pi * y / grid.ly)
        exact = -(math.pi**2) * (1.0 / grid.lx**2 + 1.0 / grid.ly**2) * f
        lap = nine_point_laplacian(Field(f, grid))
        errors.append(np.max(np.abs(lap.values - exact)))
    orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
    assert min(orders) >= 1.9


def test_cell_weights(small_grid):
    weights = cell_weights(small_grid)
    assert weights[0, 0] == 0.25
    assert weights[0, 5] == 0.5
    assert weights[5, 5] == 1.0
    assert weights.sum() == pytest.approx(small_grid.lx * small_grid.ly)
    assert discrete_mass(Field.constant(2.0, small_grid)) == pytest.approx(
        2.0 * small_grid.lx * small_grid.ly
    )


def test_laplacian_leaves_discrete_mass_unchanged():
    grid = Grid(nx=24, ny=17, dx=0.5, dy=0.5)
    values = np.random.default_rng(2).uniform(0.5, 1.5, size=grid.shape)
    lap = nine_point_laplacian(Field(values, grid))
    assert abs(discrete_mass(lap)) < 1e-12 * np.sum(np.abs(lap.values))


@pytest.mark.parametrize(
    "kwargs, reason",
    [
        (dict(dt=0.0), "dt"),
        (dict(steps=10, snapshot_every=20), "snapshot_every"),
        (dict(scheme="crank-nicolson"), "scheme"),
        (dict(perturb_amplitude=-0.1), "perturb_amplitude"),
        (dict(seed=-1), "seed"),
    ],
)
def test_sim_config_invariants(kwargs, reason):
    with pytest.raises(ValidationError) as err:
        SimConfig(**kwargs)
    assert err.value.reason == reason
