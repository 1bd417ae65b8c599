import math

import numpy as np
import pytest
from scipy.integrate import quad

from oddkg.grid import Field, State, make_fullline_grid, make_grid
from oddkg.models import ModelError, energy, eval_F, eval_f, make_model
from oddkg.exact import BreatherParams, breather_state

CATALOG = ("sine-gordon", "phi4", "phi6", "cubic-nlkg", "linear-kg")

# coefficient in the small-amplitude bound |f'(u)| <= C |u|^(p-1), |u| < 1
FPRIME_BOUND = {
    "sine-gordon": 0.5,   # f' = 1 - cos(u) <= u^2/2
    "phi4": 3.0,
    "phi6": 12.0,         # |12u^2 - 15u^4| <= 12u^2 on |u| < 1
    "cubic-nlkg": 3.0,
    "linear-kg": 1.0,
}


def test_catalog_coefficients():
    sg = make_model("sine-gordon")
    assert sg.m == -1.0
    assert sg.m * (math.pi / 2) + eval_f(sg, math.pi / 2) == pytest.approx(-1.0, abs=1e-15)
    p4 = make_model("phi4")
    assert p4.m == 1.0
    assert eval_f(p4, 0.5) == -0.125
    p6 = make_model("phi6")
    assert p6.m == -1.0
    assert eval_f(p6, 1.0) == pytest.approx(1.0)  # 4 - 3
    cn = make_model("cubic-nlkg")
    assert cn.m == -1.0
    assert eval_f(cn, 2.0) == 8.0
    lk = make_model("linear-kg")
    assert lk.m == -1.0
    assert eval_f(lk, 1.7) == 0.0


def test_unknown_model_rejected():
    with pytest.raises(ModelError):
        make_model("phi8")


@pytest.mark.parametrize("name", CATALOG)
def test_f_vanishes_at_origin(name):
    assert eval_f(make_model(name), 0.0) == 0.0


@pytest.mark.parametrize("name", CATALOG)
def test_oddness_exact(name):
    model = make_model(name)
    u = np.linspace(-2.0, 2.0, 1001)
    assert np.all(model.f(-u) + model.f(u) == 0.0)


@pytest.mark.parametrize("name", CATALOG)
def test_small_amplitude_bound(name):
    # |f'(u)| <= C |u|^(p-1) for |u| < 1, f' by central differences
    model = make_model(name)
    u = np.linspace(-0.99, 0.99, 397)
    h = 1e-6
    fprime = (model.f(u + h) - model.f(u - h)) / (2 * h)
    bound = FPRIME_BOUND[name] * np.abs(u) ** (model.p - 1.0) + 1e-9
    assert np.all(np.abs(fprime) <= bound)


@pytest.mark.parametrize("name", CATALOG)
def test_F_is_antiderivative_of_f(name):
    model = make_model(name)
    h = 1e-5
    for u in np.linspace(-2.0, 2.0, 41):
        fd = (eval_F(model, u + h) - eval_F(model, u - h)) / (2 * h)
        assert fd == pytest.approx(eval_f(model, u), abs=1e-8)
    assert eval_F(model, 0.0) == 0.0


def test_sine_gordon_F_closed_form():
    sg = make_model("sine-gordon")
    for u in (0.3, 1.0, 2.5):
        assert eval_F(sg, u) == pytest.approx(0.5 * u * u + math.cos(u) - 1.0, rel=1e-15)


@pytest.mark.parametrize("name", ("sine-gordon", "phi6", "cubic-nlkg"))
@pytest.mark.parametrize("u_top", (0.3, 1.0, 2.5))
def test_F_matches_quadrature_of_f(name, u_top):
    model = make_model(name)
    val, err = quad(lambda s: eval_f(model, s), 0.0, u_top, epsabs=1e-12)
    assert eval_F(model, u_top) == pytest.approx(val, abs=10 * err + 1e-12)


def test_custom_poly():
    m = make_model("custom-poly", {"m": -1.0, "coeffs": (0.0, 0.0, 0.0, 2.0)})
    assert eval_f(m, 2.0) == 16.0
    assert eval_F(m, 2.0) == pytest.approx(8.0)  # 2 u^4 / 4
    assert m.p == 3.0


def test_custom_poly_rejects_even_degrees():
    with pytest.raises(ModelError):
        make_model("custom-poly", {"m": -1.0, "coeffs": (0.0, 0.0, 1.0, 2.0)})
    with pytest.raises(ModelError):
        make_model("custom-poly", {"m": -1.0, "coeffs": (1.0,)})


def test_custom_poly_rejects_linear_term():
    # a linear term belongs in m, not in f (it would force p = 1)
    with pytest.raises(ModelError):
        make_model("custom-poly", {"m": -1.0, "coeffs": (0.0, 0.5, 0.0, 1.0)})


def test_custom_poly_requires_params():
    with pytest.raises(ModelError):
        make_model("custom-poly")


def test_energy_zero_state():
    g = make_grid(40.0, 1999)
    st = State(Field(g, np.zeros(g.N)), Field(g, np.zeros(g.N)))
    assert energy(st, make_model("linear-kg"), g) == 0.0


def test_energy_pure_velocity_gaussian():
    # u1 = 0, u2 = x exp(-x^2): E = 1/2 int u2^2 = sqrt(pi/2)/8
    g = make_grid(40.0, 3999)
    st = State(Field(g, np.zeros(g.N)), Field(g, g.x * np.exp(-g.x ** 2)))
    exact = math.sqrt(math.pi / 2.0) / 8.0
    assert energy(st, make_model("linear-kg"), g) == pytest.approx(exact, rel=1e-7)


def test_energy_grid_mismatch_rejected():
    g1 = make_grid(40.0, 1999)
    g2 = make_grid(40.0, 3999)
    st = State(Field(g1, np.zeros(g1.N)), Field(g1, np.zeros(g1.N)))
    with pytest.raises(ValueError):
        energy(st, make_model("linear-kg"), g2)


def test_breather_energy_against_quadrature_oracle():
    # at t=0: u2 = 0, E = int u1x^2/2 + (1 - cos u1); oracle via scipy.quad
    sg = make_model("sine-gordon")
    beta = 0.6
    p = BreatherParams(beta)

    def u1(x):
        return 4.0 * math.atan((beta / p.alpha) / math.cosh(beta * x))

    def u1x(x):
        g = (beta / p.alpha) / math.cosh(beta * x)
        return 4.0 * (-beta * math.tanh(beta * x)) * g / (1.0 + g * g)

    dens = lambda x: 0.5 * u1x(x) ** 2 + (1.0 - math.cos(u1(x)))
    oracle, _ = quad(dens, -60.0, 60.0, epsabs=1e-12, limit=200)

    grid = make_fullline_grid(60.0, 23999)
    st = breather_state(p, 0.0, grid)
    assert energy(st, sg, grid) == pytest.approx(oracle, rel=1e-6)


def test_breather_energy_scales_linearly_in_beta():
    sg = make_model("sine-gordon")
    grid = make_fullline_grid(60.0, 11999)
    E = {}
    for beta in (0.1, 0.2, 0.4):
        E[beta] = energy(breather_state(BreatherParams(beta), 0.0, grid), sg, grid)
    assert E[0.2] / E[0.1] == pytest.approx(2.0, rel=0.05)
    assert E[0.4] / E[0.2] == pytest.approx(2.0, rel=0.05)
