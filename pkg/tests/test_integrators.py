"""Runge-Kutta tableaus, convergence orders, streaming observation."""

import math

import numpy as np
import pytest

from syncpersist.dynamics import BlowUpError
from syncpersist.integrators import (
    RK4_A,
    RK4_B,
    RK4_C,
    RK6_A,
    RK6_B,
    RK6_C,
    IntegratorConfig,
    Trajectory,
    dump_trajectory_csv,
    integrate,
    integrate_streaming,
    rk_step,
)


def test_tableau_consistency():
    # row sums of A equal c; b sums to 1 (first-order conditions)
    for A, B, C in ((RK4_A, RK4_B, RK4_C), (RK6_A, RK6_B, RK6_C)):
        assert np.allclose(A.sum(axis=1), C, atol=1e-15)
        assert abs(B.sum() - 1.0) < 1e-15


def _solve_exponential(h, method):
    f = lambda t, x: -x
    x = np.array([1.0])
    cfg = IntegratorConfig(h=h, method=method)
    return float(integrate_streaming(f, x, 0.0, 1.0, cfg)[0])


def test_exponential_rk6_accuracy():
    assert abs(_solve_exponential(0.1, "rk6") - math.exp(-1.0)) < 1e-9


def test_harmonic_energy_conservation():
    f = lambda t, x: np.array([x[1], -x[0]])
    cfg = IntegratorConfig(h=0.01, method="rk6")
    x = integrate_streaming(f, np.array([1.0, 0.0]), 0.0, 2.0 * math.pi, cfg)
    energy = x[0] ** 2 + x[1] ** 2
    assert abs(energy - 1.0) < 1e-8


@pytest.mark.parametrize(
    "method,lo,hi", [("rk6", 5.5, 6.5), ("rk4", 3.5, 4.5)]
)
def test_convergence_order(method, lo, hi):
    hs = np.array([0.2, 0.1, 0.05, 0.025])
    errs = np.array(
        [abs(_solve_exponential(h, method) - math.exp(-1.0)) for h in hs]
    )
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert lo <= slope <= hi


def test_streaming_matches_stored():
    f = lambda t, x: np.array([x[1], -x[0]])
    x0 = np.array([0.3, -0.7])
    cfg = IntegratorConfig(h=0.01)
    seen = []
    final = integrate_streaming(f, x0, 0.0, 3.0, cfg, lambda t, x: seen.append((t, x.copy())))
    traj = integrate(f, x0, 0.0, 3.0, cfg)
    assert len(seen) == len(traj.times)
    assert np.array_equal(traj.states[-1], final)
    for (t, x), tt, xx in zip(seen, traj.times, traj.states):
        assert t == tt
        assert np.array_equal(x, xx)


def test_observer_count_with_stride():
    f = lambda t, x: -x
    calls = []
    cfg = IntegratorConfig(h=0.1, sample_stride=3)
    integrate_streaming(f, np.array([1.0]), 0.0, 1.0, cfg, lambda t, x: calls.append(t))
    # t0, then every 3rd of 10 full steps (k = 3, 6, 9), plus the endpoint
    assert calls[0] == 0.0
    assert calls[-1] == pytest.approx(1.0)
    assert len(calls) == 1 + 3 + 1


def test_zero_length_interval():
    f = lambda t, x: -x
    calls = []
    integrate_streaming(f, np.array([2.0]), 1.5, 1.5, IntegratorConfig(),
                        lambda t, x: calls.append(t))
    assert calls == [1.5]


def test_partial_final_step_lands_on_t1():
    f = lambda t, x: -x
    times = []
    cfg = IntegratorConfig(h=0.3)
    integrate_streaming(f, np.array([1.0]), 0.0, 1.0, cfg, lambda t, x: times.append(t))
    assert times[-1] == 1.0


def test_reverse_interval_rejected():
    with pytest.raises(ValueError):
        integrate_streaming(lambda t, x: -x, np.array([1.0]), 1.0, 0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(h=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(sample_stride=0)
    with pytest.raises(ValueError):
        IntegratorConfig(method="rk99")


def test_blowup_truncates_trajectory():
    def f(t, x):
        if t > 0.5:
            raise BlowUpError(t)
        return x

    traj = integrate(f, np.array([1.0]), 0.0, 1.0, IntegratorConfig(h=0.1))
    assert traj.terminated_early
    assert traj.blowup_time is not None
    assert traj.times[-1] <= 0.6


def test_rk_step_linear_exactness():
    # both tableaus integrate dx/dt = const exactly
    f = lambda t, x: np.array([2.0])
    for method in ("rk4", "rk6"):
        out = rk_step(f, 0.0, np.array([1.0]), 0.25, method)
        assert out[0] == pytest.approx(1.5, abs=1e-15)


def test_dump_trajectory_csv(tmp_path):
    traj = Trajectory(times=np.array([0.0, 0.1]),
                      states=np.array([[1.0, 2.0], [3.0, 4.0]]))
    path = tmp_path / "traj.csv"
    dump_trajectory_csv(traj, n=1, q=2, path=path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x_1_1,x_1_2"
    assert lines[1] == "0.0,1.0,2.0"
    assert len(lines) == 3
