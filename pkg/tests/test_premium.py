import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reinsim import CustomPrinciple, MarketParams, ParetoFamily, PremiumPrinciple, evp, premium_derivative, premium_rate, vp
from reinsim.claims import ClaimsModel
from reinsim.factor import constant
from reinsim.premium import premium_second_derivative, premium_warnings

from conftest import LAMBDA1, ZETA1


def pareto_claims():
    return ClaimsModel(lambda t, y: 0.1 * np.exp(0.5 * np.asarray(y)) + 0.0 * np.asarray(t), ParetoFamily(3.5, lambda y: 1.0 + 0.5 * np.exp(y)))


def test_reference_values(claims):
    assert premium_rate(evp(0.1), claims, 0.0, 1.0, 0.0) == pytest.approx(0.048775038618354076, rel=1e-12)
    assert premium_rate(vp(0.1), claims, 0.0, 1.0, 0.0) == pytest.approx(0.046725967510030345, rel=1e-12)
    assert premium_derivative(evp(0.1), claims, 0.0, 1.0, 0.0) == pytest.approx(-0.18135933977701413, rel=1e-12)
    assert premium_derivative(vp(0.1), claims, 0.0, 1.0, 0.0) == pytest.approx(-0.17374031590971356, rel=1e-12)


@pytest.mark.parametrize("y", [-1.0, 0.0, 2.0])
def test_evp_derivative_at_zero_is_minus_loaded_intensity(claims, y):
    lam = claims.intensity(0.0, y)
    assert premium_derivative(evp(0.3), claims, 0.0, y, 0.0) == pytest.approx(-1.3 * lam, rel=1e-14)


def test_no_cover_no_premium(claims):
    for p in (evp(0.1), vp(0.1)):
        assert premium_rate(p, claims, 0.0, 1.0, np.inf) == 0.0
        assert premium_rate(p, claims, 0.0, 1.0, 50 / ZETA1) == pytest.approx(0.0, abs=1e-8)


def test_theta_validation():
    with pytest.raises(ValueError):
        PremiumPrinciple("EVP", -0.1)
    assert PremiumPrinciple("VP", 0.0).kind.value == "VP"


@settings(max_examples=60, deadline=None)
@given(
    t=st.floats(0, 5),
    y=st.floats(-2, 3),
    alpha=st.floats(0, 5),
    theta=st.floats(0.01, 1),
    kind=st.sampled_from(["EVP", "VP"]),
    pareto=st.booleans(),
)
def test_derivative_sign_and_monotonicity(claims, t, y, alpha, theta, kind, pareto):
    model = pareto_claims() if pareto else claims
    p = PremiumPrinciple(kind, theta)
    assert premium_derivative(p, model, t, y, alpha) <= 0
    assert premium_rate(p, model, t, y, alpha + 0.1) <= premium_rate(p, model, t, y, alpha)


@pytest.mark.parametrize("kind", ["EVP", "VP"])
@pytest.mark.parametrize("alpha", [0.05, 0.3, 1.0, 2.0])
@pytest.mark.parametrize("y", [-1.0, 1.0])
def test_central_differences(claims, kind, alpha, y):
    p = PremiumPrinciple(kind, 0.1)
    for model in (claims, pareto_claims()):
        h = 1e-5
        fd = (premium_rate(p, model, 0.0, y, alpha + h) - premium_rate(p, model, 0.0, y, alpha - h)) / (2 * h)
        assert premium_derivative(p, model, 0.0, y, alpha) == pytest.approx(fd, rel=1e-6)
        fd2 = (premium_derivative(p, model, 0.0, y, alpha + h) - premium_derivative(p, model, 0.0, y, alpha - h)) / (2 * h)
        assert premium_second_derivative(p, model, 0.0, y, alpha) == pytest.approx(fd2, rel=1e-6)


def test_custom_principle_difference_fallback(claims):
    base = evp(0.2)
    custom = CustomPrinciple(lambda t, y, a: premium_rate(base, claims, t, y, a))
    for a in (0.0, 0.4):
        assert premium_derivative(custom, claims, 0.0, 1.0, a) == pytest.approx(
            premium_derivative(base, claims, 0.0, 1.0, a), rel=1e-5
        )
        assert premium_second_derivative(custom, claims, 0.0, 1.0, a) == pytest.approx(
            premium_second_derivative(base, claims, 0.0, 1.0, a), rel=1e-3
        )


def test_riskless_profit_is_a_warning(claims, market):
    messages = premium_warnings(evp(0.1), claims, market, [0.0, 5.0], [0.0, 1.0])
    assert len(messages) == 1 and "riskless" in messages[0]
    cheap = MarketParams(0.05, 0.5, 5.0, constant(0.0), 1.0)
    assert premium_warnings(evp(0.1), claims, cheap, [0.0, 5.0], [0.0, 1.0]) == []


def test_market_validation():
    with pytest.raises(ValueError):
        MarketParams(0.05, 0.0, 5.0, constant(1.0), 1.0)
    with pytest.raises(ValueError):
        MarketParams(0.05, 0.5, 5.0, constant(1.0), 0.0)
    assert MarketParams(-0.01, 0.5, 5.0, constant(1.0), 1.0).growth(5.0) == 1.0
