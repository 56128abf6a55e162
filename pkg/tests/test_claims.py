import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats
from scipy.integrate import quad

from reinsim import (
    ClaimsModel,
    ExponentialFamily,
    ExponentialWeight,
    ParetoFamily,
    TimeGrid,
    conditional_cdf,
    baseline_claims,
    simulate_claims,
    simulate_claims_paths,
    simulate_factor_paths,
    survival_integral,
)
from reinsim.claims import ConditionalSizeFamily, exponential_moment_warnings, exponential_preset, integrated_intensity
from reinsim.errors import ModelError
from reinsim.factor import FactorPath, constant, baseline_factor

from conftest import ZETA1

PRESET = exponential_preset()


class GenericExponential(ConditionalSizeFamily):
    """Exponential law exposing only the required primitives (quadrature fallbacks)."""

    def __init__(self, zeta):
        self.zeta = zeta

    def survival(self, z, y):
        return math.exp(-self.zeta * z)

    def density(self, z, y):
        return self.zeta * math.exp(-self.zeta * z)

    def sample(self, y, u):
        return -np.log1p(-u) / self.zeta


def constant_claims(lam, zeta):
    return ClaimsModel(lambda t, y: lam + 0.0 * np.asarray(y), ExponentialFamily(lambda y: zeta + 0.0 * np.asarray(y)))


def test_cdf_values():
    assert conditional_cdf(PRESET, 0.0, 0.3) == 0.0
    assert conditional_cdf(PRESET, math.log(2) / 2, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert conditional_cdf(PRESET, np.inf, 1.0) == 1.0
    with pytest.raises(ValueError):
        conditional_cdf(PRESET, -0.1, 0.0)


def test_exponential_rate_preset():
    assert PRESET.zeta(1.0) == pytest.approx(ZETA1)


@settings(max_examples=40, deadline=None)
@given(z=st.floats(0, 20), dz=st.floats(0, 5), y=st.floats(-3, 3))
def test_cdf_is_a_distribution(z, dz, y):
    for fam in (PRESET, ParetoFamily(3.0, lambda y: 1.0 + 0.0 * y)):
        assert 0.0 <= fam.cdf(z, y) <= fam.cdf(z + dz, y) <= 1.0
        assert fam.survival(z, y) == pytest.approx(1.0 - fam.cdf(z, y), abs=1e-15)


def test_survival_integral_examples():
    fam = ExponentialFamily(lambda y: 2.0)
    assert survival_integral(fam, ExponentialWeight(1.0, 0.0), 0.0, 0.0) == 0.0
    # values from scipy.integrate.quad
    assert survival_integral(fam, ExponentialWeight(1.0, 0.0), 1.0, 0.0) == pytest.approx(0.4323323583816936, rel=1e-12)
    assert survival_integral(fam, ExponentialWeight(0.5, 0.5), 1.0, 0.0) == pytest.approx(0.2589566132838567, rel=1e-12)
    # same integrals through the quadrature path
    assert survival_integral(fam, lambda z: 1.0, 1.0, 0.0) == pytest.approx(0.4323323583816936, rel=1e-9)
    assert survival_integral(fam, lambda z: 0.5 * math.exp(0.5 * z), 1.0, 0.0) == pytest.approx(0.2589566132838567, rel=1e-9)


def test_survival_integral_rate_equals_zeta():
    fam = ExponentialFamily(lambda y: 2.0)
    assert survival_integral(fam, ExponentialWeight(1.0, 2.0), 0.7, 0.0) == pytest.approx(0.7, rel=1e-14)


WEIGHTS = {
    # (g, g') with g(0) = 0
    "linear": (lambda z: z, lambda z: 1.0),
    "square": (lambda z: z * z, lambda z: 2.0 * z),
    "cubic": (lambda z: z**3 + z, lambda z: 3.0 * z * z + 1.0),
    "exp": (lambda z: math.expm1(0.7 * z), lambda z: 0.7 * math.exp(0.7 * z)),
}


@pytest.mark.parametrize("name", sorted(WEIGHTS))
@pytest.mark.parametrize("alpha", [0.05, 0.3, 1.0, 2.5])
@pytest.mark.parametrize("y", [-1.0, 0.0, 1.5])
def test_integration_by_parts_identity(name, alpha, y):
    g, dg = WEIGHTS[name]
    for fam in (PRESET, ParetoFamily(3.5, lambda y: 1.0 + 0.5 * np.exp(y))):
        body = quad(lambda z: g(z) * fam.density(z, y), 0.0, alpha, epsabs=1e-14, epsrel=1e-13)[0]
        lhs = body + g(alpha) * fam.survival(alpha, y)
        assert survival_integral(fam, dg, alpha, y) == pytest.approx(lhs, rel=1e-8)


@pytest.mark.parametrize("alpha", [0.0, 0.2, 1.3])
@pytest.mark.parametrize("y", [-0.5, 1.0])
def test_closed_form_moments_match_quadrature(alpha, y):
    for fam in (PRESET, ParetoFamily(3.5, lambda y: 1.0 + 0.5 * np.exp(y))):
        for power in (1, 2):
            expected = quad(
                lambda z: (z - min(z, alpha)) ** power * fam.density(z, y), 0, np.inf, epsabs=1e-13, epsrel=1e-12
            )[0]
            assert fam.excess_moment(alpha, y, power) == pytest.approx(expected, rel=1e-8)
            assert ConditionalSizeFamily.excess_moment(fam, alpha, y, power) == pytest.approx(expected, rel=1e-7)
        tail = quad(lambda z: z * fam.density(z, y), alpha, np.inf, epsabs=1e-13)[0]
        assert fam.tail_mean(alpha, y) == pytest.approx(tail, rel=1e-8)


def test_generic_family_fallbacks():
    fam = GenericExponential(2.0)
    assert fam.excess_moment(0.3, 0.0, 1) == pytest.approx(math.exp(-0.6) / 2, rel=1e-8)
    assert fam.excess_moment(0.3, 0.0, 2) == pytest.approx(2 * math.exp(-0.6) / 4, rel=1e-8)
    assert fam.tail_mean(0.3, 0.0) == pytest.approx(math.exp(-0.6) * (0.3 + 0.5), rel=1e-8)
    assert fam.exp_weighted_survival_integral(ExponentialWeight(1, 1), 1.0, 0.0) is None


def test_samplers_follow_their_law():
    rng = np.random.default_rng(9)
    u = rng.random(20000)
    for fam, y in ((PRESET, 0.4), (ParetoFamily(2.5, lambda y: 2.0), 0.0)):
        z = fam.sample(y, u)
        assert stats.kstest(fam.cdf(z, y), "uniform").pvalue > 0.01


def test_empty_horizon_gives_no_claims():
    # degenerate one-cell grid of zero length is rejected; a cell of vanishing length yields nothing
    path = FactorPath(TimeGrid(0.0, 1e-300, 1), np.array([1.0, 1.0]))
    assert len(simulate_claims(baseline_claims(), path, np.random.default_rng(0))) == 0


def test_claims_sorted_and_inside_horizon():
    grid = TimeGrid(0.0, 5.0, 500)
    paths = simulate_factor_paths(baseline_factor(), grid, 1, 1)
    claims = simulate_claims(constant_claims(3.0, 2.0), paths.path(0), np.random.default_rng(4))
    times = [c.arrival_time for c in claims]
    assert len(times) > 5
    assert np.all(np.diff(times) > 0)
    assert 0 < times[0] and times[-1] <= 5.0
    assert all(c.size > 0 for c in claims)
    # the left grid value of the arrival cell is recorded
    np.testing.assert_array_equal(claims.factor_values, paths.values[0][claims.cells])


def test_homogeneous_poisson_count():
    m = 5000
    grid = TimeGrid(0.0, 5.0, 500)
    paths = simulate_factor_paths(baseline_factor(), grid, 77, m)
    counts = simulate_claims_paths(constant_claims(0.1, 2.0), paths, 77).counts(m)
    assert abs(counts.mean() - 0.5) <= 3 * math.sqrt(0.5 / m)


def test_compound_poisson_oracle():
    # constant lambda, zeta: C_T is compound Poisson with E = lam T / zeta, Var = 2 lam T / zeta^2
    m, lam, zeta, T = 5000, 0.8, 2.0, 5.0
    paths = simulate_factor_paths(baseline_factor(), TimeGrid(0.0, T, 100), 5, m)
    totals = simulate_claims_paths(constant_claims(lam, zeta), paths, 5).totals(m)
    mean, var = lam * T / zeta, 2 * lam * T / zeta**2
    fourth = lam * T * 24 / zeta**4 + 3 * var**2  # E[(C - EC)^4] of compound Poisson
    assert abs(totals.mean() - mean) <= 3 * math.sqrt(var / m)
    assert abs(totals.var(ddof=1) - var) <= 3 * math.sqrt((fourth - var**2) / m)


def test_thinning_with_majorant():
    # time-varying intensity lam(t) = 0.2 + 0.1 t, majorant 2: E N_T = int_0^T lam = 0.2 T + 0.05 T^2
    model = ClaimsModel(lambda t, y: 0.2 + 0.1 * np.asarray(t) + 0.0 * np.asarray(y), PRESET, majorant=2.0)
    m, T = 4000, 4.0
    paths = simulate_factor_paths(baseline_factor(), TimeGrid(0.0, T, 40), 8, m)
    counts = simulate_claims_paths(model, paths, 8).counts(m)
    expected = 0.2 * T + 0.05 * T**2
    assert abs(counts.mean() - expected) <= 3 * math.sqrt(expected / m)


def test_compensator_identity_baseline():
    m = 5000
    paths = simulate_factor_paths(baseline_factor(), TimeGrid(0.0, 5.0, 500), 31, m)
    model = baseline_claims()
    diff = simulate_claims_paths(model, paths, 31).counts(m) - integrated_intensity(model, paths)
    assert abs(diff.mean()) <= 3 * diff.std(ddof=1) / math.sqrt(m)


def test_bad_intensity_is_reported():
    model = ClaimsModel(lambda t, y: np.where(np.asarray(y) > 1.2, np.nan, 0.1), PRESET)
    path = FactorPath(TimeGrid(0.0, 1.0, 3), np.array([1.0, 1.1, 1.3, 1.4]))
    with pytest.raises(ModelError, match="y=1.3"):
        simulate_claims(model, path, np.random.default_rng(0))


def test_exponential_moment_warning():
    assert exponential_moment_warnings(PRESET, [-3, 0, 3]) == []
    low = ExponentialFamily(lambda y: 0.5 + 0.0 * np.asarray(y))
    assert len(exponential_moment_warnings(low, [0.0])) == 1
