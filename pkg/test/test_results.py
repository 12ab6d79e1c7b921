import numpy as np
import pytest

from py_turing_lab.results import (
    CubicCoeffs,
    DetCubic,
    DispersionCurve,
    PatternMetrics,
    Snapshot,
    SweepRecord,
    Trajectory,
    UnstableInterval,
)


def test_trajectory(example_trajectory):
    assert len(example_trajectory) == 3
    assert example_trajectory.final.u3 == 0.58
    assert example_trajectory.to_rows()[1] == [0.5, 0.45, 0.45, 0.55]


def test_trajectory_to_dict(example_trajectory):
    data = example_trajectory.to_dict()
    assert data["times"] == [0.0, 0.5, 1.0]
    assert data["params"]["k32"] == 2.0


def test_trajectory_combination(example_trajectory, standard_params):
    continuation = Trajectory(
        times=[1.0, 1.5, 2.0],
        states=[[0.41, 0.41, 0.58], [0.38, 0.38, 0.61], [0.36, 0.36, 0.63]],
        params=standard_params,
        clip_count=2,
    )
    combined = example_trajectory + continuation
    assert len(combined) == 5
    assert combined.times.tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert combined.states[0, 0] == 0.5
    assert combined.states[-1, 2] == 0.63
    assert combined.clip_count == 2


def test_trajectory_reversed(example_trajectory):
    backwards = example_trajectory.reversed()
    assert backwards.times.tolist() == example_trajectory.times.tolist()
    assert backwards.states[0].tolist() == [0.41, 0.41, 0.58]


@pytest.mark.parametrize(
    "times, states",
    [
        ([0.0, 1.0], [[0.5, 0.5, 0.5]]),
        ([0.0, 0.0], [[0.5, 0.5, 0.5], [0.5, 0.5, 0.5]]),
    ],
)
def test_trajectory_rejects_bad_samples(standard_params, times, states):
    with pytest.raises(ValueError):
        Trajectory(times=times, states=states, params=standard_params)


def test_cubic_coeffs():
    cubic = CubicCoeffs(a2=3.0, a1=3.0, a0=1.0)
    assert cubic(-1.0) == 0.0
    assert cubic.derivative(-1.0) == 0.0
    assert cubic(0.0) == 1.0


def test_det_cubic():
    cubic = DetCubic(c3=1.0, c2=-3.0, c1=2.0, c0=0.0)
    assert cubic(1.0) == 0.0
    assert cubic(2.0) == 0.0
    assert cubic.coefficients.tolist() == [1.0, -3.0, 2.0, 0.0]
    assert "c3 = 1" in cubic.to_table()


def test_unstable_interval():
    interval = UnstableInterval(mu_lo=0.5, mu_hi=1.5)
    assert interval.midpoint == 1.0
    assert 1.0 in interval
    assert 0.5 not in interval
    assert 2.0 not in interval


def test_dispersion_curve_zero_crossings():
    curve = DispersionCurve(
        kind="k32", x=[1.0, 2.0, 3.0], re_lambda_max=[-0.2, 0.2, 0.4]
    )
    assert curve.zero_crossings() == [pytest.approx(1.5)]
    assert curve.points[0] == (1.0, -0.2)
    assert curve.to_rows()[2] == [3.0, 0.4]


def test_dispersion_curve_requires_increasing_x():
    with pytest.raises(ValueError):
        DispersionCurve(kind="mu", x=[0.0, 0.0], re_lambda_max=[-1.0, -1.0])


def test_sweep_record():
    metrics = PatternMetrics(
        amplitude=0.2, mean=0.33, spot_count=4, classification="patterned"
    )
    record = SweepRecord(param_value=2.0, u1_min=0.2, u1_max=0.4, metrics=metrics)
    assert metrics.patterned
    assert record.to_row() == [2.0, 0.2, 0.4, 0.2, 4, "patterned"]
    assert record.to_dict()["metrics"]["spot_count"] == 4
    with pytest.raises(ValueError):
        SweepRecord(param_value=2.0, u1_min=0.5, u1_max=0.4, metrics=metrics)


def test_snapshot_round_trip(small_grid):
    values = np.random.default_rng(3).uniform(0.1, 1.0, size=(3,) + small_grid.shape)
    snapshot = Snapshot.from_array(10, 0.5, values, small_grid)
    assert snapshot.fields[1].grid is small_grid
    np.testing.assert_array_equal(snapshot.as_array(), values)
