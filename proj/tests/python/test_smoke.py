import math

import pytest

import orliczmm as om


def test_power_function():
    U = om.power(1.0, 2.0)
    assert U(3.0) == 9.0
    assert U.inverse(4.0) == pytest.approx(2.0, rel=1e-14)
    assert U.conjugate(3.0) == pytest.approx(2.25, rel=1e-10)


def test_bad_parameter_raises():
    with pytest.raises(om.InvalidParameter):
        om.power(0.0, 2.0)
    with pytest.raises(om.OrliczError):
        om.power_over_p(0.5)


def test_norm_of_constant():
    assert om.luxembourg_norm(om.power(), [3.0] * 10) == pytest.approx(3.0, rel=1e-12)


def test_gamma2():
    m = om.OUModel(tau=1.0, T=1.0)
    assert om.gamma2_closed(m) == pytest.approx(2.0 / math.e, rel=1e-15)


def test_inadmissible_betas():
    assert not om.betas_admissible(0.9, 0.9)
    with pytest.raises(om.InvalidParameter, match="inadmissible"):
        om.fit_ou_bound(om.OUModel(beta1=0.9, beta2=0.9), p_grid=3, alpha_steps=5, t_grid_points=9)


def test_fit_scales_as_inverse_square():
    fit = om.fit_ou_bound(om.OUModel(), p_grid=3, alpha_steps=10, t_grid_points=9)
    assert fit.constant > 0
    assert fit(2.0) == fit(1.0) / 4.0
    lo, hi = om.alpha_interval(0.5, 0.95)
    assert lo < fit.alpha_star < hi


def test_paths_are_reproducible():
    m = om.OUModel()
    pts = [i / 16 for i in range(17)]
    assert om.ou_path(m, pts, 5, 3) == om.ou_path(m, pts, 5, 3)
    assert om.ou_path(m, pts, 5, 3) != om.ou_path(m, pts, 5, 4)


def test_sup_tail_shape():
    emp, ci = om.ou_sup_tail(om.OUModel(), 33, 500, 1, [0.0, 1.0, 10.0])
    assert emp[0] == 1.0
    assert emp[2] == 0.0
    assert len(ci) == 3
