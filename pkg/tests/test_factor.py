import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reinsim import FactorModel, TimeGrid, euler_step, simulate_factor, simulate_factor_paths
from reinsim.errors import NumericalBlowUp
from reinsim.factor import constant, euler_path, path_stream, baseline_factor


def test_zero_coefficients_are_identity():
    model = FactorModel(constant(0.0), constant(0.0), 1.0)
    assert euler_step(model, 0.0, 1.0, 0.37, 2.5) == 1.0


@pytest.mark.parametrize("noise, expected", [(1.0, 1.033), (-1.0, 0.973)])
def test_euler_step_hand_values(noise, expected):
    assert euler_step(baseline_factor(), 0.0, 1.0, 0.01, noise) == pytest.approx(expected, abs=1e-15)


def test_euler_step_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        euler_step(baseline_factor(), 0.0, 1.0, 0.0, 1.0)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blow_up_reports_location():
    model = FactorModel(lambda t, y: y**8, constant(0.0), 10.0)
    with pytest.raises(NumericalBlowUp) as info:
        simulate_factor(model, TimeGrid(0.0, 1.0, 50), np.random.default_rng(0))
    assert np.isfinite(info.value.y)


def test_deterministic_drift():
    model = baseline_factor(diffusion=0.0)
    path = simulate_factor(model, TimeGrid(0.0, 5.0, 500), np.random.default_rng(1))
    assert path.values[0] == 1.0
    assert path.values[-1] == pytest.approx(2.5, abs=1e-12)


def test_same_seed_same_path():
    grid = TimeGrid(0.0, 5.0, 100)
    a = simulate_factor(baseline_factor(), grid, path_stream(3, 7))
    b = simulate_factor(baseline_factor(), grid, path_stream(3, 7))
    np.testing.assert_array_equal(a.values, b.values)


def test_ensemble_paths_do_not_depend_on_batch_layout():
    grid = TimeGrid(0.0, 1.0, 20)
    full = simulate_factor_paths(baseline_factor(), grid, 11, 10)
    tail = simulate_factor_paths(baseline_factor(), grid, 11, 4, first_path=6)
    np.testing.assert_array_equal(full.values[6:], tail.values)
    single = simulate_factor(baseline_factor(), grid, path_stream(11, 8))
    np.testing.assert_array_equal(full.values[8], single.values)


def test_terminal_law_of_arithmetic_brownian_motion():
    m = 5000
    paths = simulate_factor_paths(baseline_factor(), TimeGrid(0.0, 5.0, 500), 2024, m)
    y_T = paths.values[:, -1]
    sd = 0.3 * np.sqrt(5.0)
    assert abs(y_T.mean() - 2.5) <= 3 * sd / np.sqrt(m)
    # variance standard error for Gaussian data: sigma^2 sqrt(2/(m-1))
    assert abs(y_T.var(ddof=1) - 0.45) <= 3 * 0.45 * np.sqrt(2.0 / (m - 1))


def test_grid_refinement_is_first_order():
    # smooth nonlinear coefficients; coarse noise built from the fine increments
    model = FactorModel(lambda t, y: np.sin(y), lambda t, y: 0.3 + 0.1 * np.cos(y), 0.5)
    rng = np.random.default_rng(5)
    errs = []
    ref_grid = TimeGrid(0.0, 1.0, 2048)
    fine_noise = rng.standard_normal((200, ref_grid.n_steps))
    reference = euler_path(model, ref_grid, fine_noise).values[:, -1]
    for n in (64, 128, 256):
        block = ref_grid.n_steps // n
        noise = fine_noise.reshape(200, n, block).sum(axis=2) / np.sqrt(block)
        errs.append(np.mean(np.abs(euler_path(model, TimeGrid(0.0, 1.0, n), noise).values[:, -1] - reference)))
    ratios = np.array(errs[1:]) / np.array(errs[:-1])
    assert np.all(ratios < 0.75)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 40))
def test_path_shape_and_start(seed, n):
    grid = TimeGrid(0.0, 2.0, n)
    path = simulate_factor(baseline_factor(y0=-0.4), grid, np.random.default_rng(seed))
    assert path.values.shape == (n + 1,)
    assert path.values[0] == -0.4
    assert np.all(np.isfinite(path.values))


def test_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 1.0, 5)
    g = TimeGrid(0.0, 1.0, 4)
    assert g.dt == 0.25
    np.testing.assert_array_equal(g.cell_of([0.1, 0.25, 0.26, 1.0]), [0, 0, 1, 3])
