import math

import numpy as np
import pytest

from bfbin.numerics import (
    ConvergenceError,
    QuadratureSettings,
    integrate_01,
    log_beta,
    log_binom_coeff,
    reg_inc_beta,
)


def test_quadrature_settings_reject_bad_values():
    with pytest.raises(ValueError):
        QuadratureSettings(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSettings(rel_tol=-1e-8)
    with pytest.raises(ValueError):
        QuadratureSettings(max_subdivisions=0)


def test_log_beta_exact_small_integers():
    assert log_beta(1.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_beta(2.0, 3.0) == pytest.approx(math.log(1.0 / 12.0), rel=1e-14)
    # symmetric
    assert log_beta(2.5, 7.0) == pytest.approx(log_beta(7.0, 2.5), rel=1e-15)


def test_log_beta_vectorizes():
    a = np.array([1.0, 2.0, 3.0])
    out = log_beta(a, 1.0)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(math.log(0.5), rel=1e-14)


def test_log_beta_rejects_nonpositive_shapes():
    with pytest.raises(ValueError):
        log_beta(0.0, 1.0)
    with pytest.raises(ValueError):
        log_beta(1.0, -2.0)


def test_reg_inc_beta_known_values():
    x = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(reg_inc_beta(x, 1.0, 1.0), x, atol=1e-15)
    assert reg_inc_beta(0.5, 2.0, 2.0) == pytest.approx(0.5, rel=1e-14)
    assert reg_inc_beta(0.0, 3.0, 4.0) == 0.0
    assert reg_inc_beta(1.0, 3.0, 4.0) == 1.0


def test_reg_inc_beta_rejects_bad_domain():
    with pytest.raises(ValueError):
        reg_inc_beta(-0.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        reg_inc_beta(1.1, 1.0, 1.0)
    with pytest.raises(ValueError):
        reg_inc_beta(0.5, 0.0, 1.0)


def test_log_binom_coeff_exact():
    assert log_binom_coeff(10, 3) == pytest.approx(math.log(120.0), rel=1e-14)
    assert log_binom_coeff(5, 0) == pytest.approx(0.0, abs=1e-14)
    assert log_binom_coeff(5, 5) == pytest.approx(0.0, abs=1e-14)


def test_log_binom_coeff_rejects_out_of_range():
    with pytest.raises(ValueError):
        log_binom_coeff(5, 6)
    with pytest.raises(ValueError):
        log_binom_coeff(5, -1)


def test_integrate_01_polynomial():
    assert integrate_01(lambda x: x * x) == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert integrate_01(lambda x: 1.0) == pytest.approx(1.0, rel=1e-14)


def test_integrate_01_beta_density():
    # Beta(2.5, 3.5) density integrates to 1
    from scipy.stats import beta

    assert integrate_01(lambda x: beta.pdf(x, 2.5, 3.5)) == pytest.approx(1.0, rel=1e-10)


def test_integrate_01_failure_carries_estimate():
    settings = QuadratureSettings(max_subdivisions=1)
    with pytest.raises(ConvergenceError) as err:
        integrate_01(lambda x: math.sin(1000.0 * x), settings)
    assert math.isfinite(err.value.estimate)
