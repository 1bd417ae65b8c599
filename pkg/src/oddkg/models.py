"""Catalog of 1D nonlinear Klein-Gordon models d^2u/dt^2 = d^2u/dx^2 + m*u + f(u).

Each entry fixes the linear coefficient m and an odd C^1 nonlinearity f
with f(0) = 0 and |f'(u)| <= C |u|^(p-1) near 0 for some p > 1, together
with the exact antiderivative F(u) = integral_0^u f.  Closed forms for F
are stored (never quadrature) so the energy and the virial right-hand
side carry no spurious quadrature-of-f error.

Catalog:

    name         m    f(u)                 F(u)
    ----------   ---  ------------------   --------------------
    sine-gordon  -1   u - sin(u)           u^2/2 + cos(u) - 1
    phi4         +1   -u^3                 -u^4/4
    phi6         -1   4u^3 - 3u^5          u^4 - u^6/2
    cubic-nlkg   -1   u^3                  u^4/4
    linear-kg    -1   0                    0
    custom-poly  user odd polynomial       exact antiderivative

For sine-gordon, m*u + f(u) = -sin(u); for phi4, m*u + f(u) = u - u^3.
Note that phi4 has m = +1: the zero state sits on the local maximum of
the field potential, so it is linearly unstable and small data does not
stay small (long decay experiments are meaningful only for the m = -1
entries; see README).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from numpy.polynomial import polynomial as npoly

from .grid import Grid, State, gradient_sq_integral, integrate_fullline

CATALOG_NAMES = ("sine-gordon", "phi4", "phi6", "cubic-nlkg", "linear-kg", "custom-poly")


class ModelError(ValueError):
    """Unknown model name or invalid model parameters."""


@dataclass(frozen=True)
class Model:
    """Immutable model definition: equation coefficients plus closed forms."""

    name: str
    m: float
    p: float
    f: Callable = field(repr=False)
    F: Callable = field(repr=False)
    params: tuple = ()


def _poly_callable(coeffs: np.ndarray) -> Callable:
    def f(u):
        return npoly.polyval(u, coeffs)

    return f


def _zero(u):
    return np.multiply(u, 0.0)


def make_model(name: str, params: Mapping | None = None) -> Model:
    """Build a catalog model by name.

    `params` is used by custom-poly only and must provide `m` and
    `coeffs` (ascending-degree coefficients of f).  Coefficients of even
    degree must vanish (f must be odd) and the linear coefficient must
    vanish as well: a linear term belongs in m, and keeping it out of f
    preserves |f'(u)| <= C|u|^(p-1) with p > 1.
    """
    # cubes etc. are spelled with multiplications: np.power is an order of
    # magnitude slower and these sit in the integrator's inner loop
    if name == "sine-gordon":
        return Model(
            name, m=-1.0, p=3.0,
            f=lambda u: u - np.sin(u),
            F=lambda u: 0.5 * u * u + np.cos(u) - 1.0,
        )
    if name == "phi4":
        return Model(
            name, m=1.0, p=3.0,
            f=lambda u: -(u * u * u),
            F=lambda u: -0.25 * (u * u) * (u * u),
        )
    if name == "phi6":
        return Model(
            name, m=-1.0, p=3.0,
            f=lambda u: u * (u * u) * (4.0 - 3.0 * (u * u)),
            F=lambda u: (u * u) * (u * u) * (1.0 - 0.5 * (u * u)),
        )
    if name == "cubic-nlkg":
        return Model(
            name, m=-1.0, p=3.0,
            f=lambda u: u * u * u,
            F=lambda u: 0.25 * (u * u) * (u * u),
        )
    if name == "linear-kg":
        return Model(name, m=-1.0, p=3.0, f=_zero, F=_zero)
    if name == "custom-poly":
        if params is None or "m" not in params or "coeffs" not in params:
            raise ModelError("custom-poly requires params with 'm' and 'coeffs'")
        coeffs = np.asarray(list(params["coeffs"]), dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ModelError("custom-poly coeffs must be a nonempty 1D sequence")
        for deg in range(0, coeffs.size, 2):
            if coeffs[deg] != 0.0:
                raise ModelError(
                    f"custom-poly coefficient of even degree {deg} must be zero (f must be odd)"
                )
        if coeffs.size > 1 and coeffs[1] != 0.0:
            raise ModelError(
                "custom-poly linear coefficient must be zero; fold linear terms into m"
            )
        nonzero = np.nonzero(coeffs)[0]
        if "p" in params:
            p = float(params["p"])
        elif nonzero.size:
            p = float(nonzero[0])
        else:
            p = 3.0
        if not p > 1:
            raise ModelError(f"small-amplitude degree must satisfy p > 1, got p={p}")
        Fcoeffs = np.zeros(coeffs.size + 1)
        Fcoeffs[1:] = coeffs / np.arange(1, coeffs.size + 1)
        return Model(
            "custom-poly", m=float(params["m"]), p=p,
            f=_poly_callable(coeffs), F=_poly_callable(Fcoeffs),
            params=tuple(coeffs),
        )
    raise ModelError(f"unknown model {name!r}; choose one of {CATALOG_NAMES}")


def eval_f(model: Model, u):
    """Nonlinearity f(u); accepts scalars or arrays."""
    return model.f(u)


def eval_F(model: Model, u):
    """Exact antiderivative F(u) with F(0) = 0."""
    return model.F(u)


def energy(state: State, model: Model, grid: Grid) -> float:
    """Conserved energy: integral of u2^2/2 + u1x^2/2 - m*u1^2/2 - F(u1).

    Evaluated over the full line (for half-line grids every integrand
    term is even, so this is twice the half-line integral).  The gradient
    term uses the staggered forward-difference form, which is the exact
    stiffness of the semidiscrete Hamiltonian: with it, the only energy
    wobble along a symplectic trajectory is the O(dt^2) one, so drift
    shrinks 4x under dt-halving instead of saturating at the O(dx^2)
    level of a central-difference energy.
    """
    if state.grid is not grid:
        raise ValueError("state does not live on the supplied grid")
    u1 = state.u1.values
    u2 = state.u2.values
    integrand = 0.5 * u2 * u2 - 0.5 * model.m * u1 * u1 - model.F(u1)
    return 0.5 * gradient_sq_integral(state.u1) + integrate_fullline(integrand, grid)
