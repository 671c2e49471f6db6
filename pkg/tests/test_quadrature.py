import math

import numpy as np
import pytest

from fracspec.quadrature import IntegrationError, composite, gauss_legendre, integrate


def test_one_and_two_point_rules():
    r1 = gauss_legendre(1)
    assert r1.nodes.tolist() == [0.5] and r1.weights.tolist() == [1.0]
    r2 = gauss_legendre(2)
    d = 0.5 / math.sqrt(3.0)
    np.testing.assert_allclose(r2.nodes, [0.5 - d, 0.5 + d], rtol=1e-15)
    np.testing.assert_allclose(r2.weights, [0.5, 0.5], rtol=1e-15)


def test_monomial_exactness_200_nodes():
    rule = gauss_legendre(200)
    m = np.arange(400)
    q = (rule.nodes[None, :] ** m[:, None]) @ rule.weights
    rel = np.abs(q - 1.0 / (m + 1)) * (m + 1)
    assert rel.max() < 1e-12


@pytest.mark.parametrize("n", [7, 8, 200, 1000])
def test_symmetry_and_weight_sum(n):
    rule = gauss_legendre(n)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    np.testing.assert_allclose(rule.nodes, 1.0 - rule.nodes[::-1], rtol=0, atol=2e-16)
    np.testing.assert_array_equal(rule.weights, rule.weights[::-1])
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)


def test_rule_is_immutable():
    rule = gauss_legendre(5)
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.3


def test_invalid_size():
    with pytest.raises(ValueError):
        gauss_legendre(0)


def test_composite_split():
    rule = gauss_legendre(10)
    c = composite(rule, [0.5])
    assert len(c) == 20
    assert c.weights.sum() == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        composite(rule, [1.0])


def test_step_function_split_is_exact():
    rule = gauss_legendre(20)
    step = lambda x: np.where(x > 0.3, 1.0, 0.0)
    assert integrate(rule, step, breakpoints=[0.3]) == pytest.approx(0.7, abs=1e-15)
    # without the split the jump costs accuracy
    assert abs(integrate(rule, step) - 0.7) > 1e-4


def test_singular_weight_converges():
    exact = math.gamma(1.6) * math.gamma(1.93) / math.gamma(3.53)
    err = [abs(integrate(gauss_legendre(n), lambda x: (1 - x) ** 0.6 * x**0.93) - exact) for n in (50, 200)]
    assert err[1] < err[0] and err[1] < 1e-8


def test_non_finite_integrand_names_node():
    with pytest.raises(IntegrationError, match="x="):
        integrate(gauss_legendre(4), lambda x: np.where(x > 0.5, np.inf, 0.0))
