"""Bogoliubov coefficients of the invariant ladder operators and the squeeze
decomposition of the evolution operator.

``a_L(t) = U a U^dag = alpha a + beta a^dag`` with ``|alpha|^2 - |beta|^2 = 1``.
Writing ``U = exp(-i theta a^dag a) S(z)`` with ``z = r e^{i phi}`` gives

    alpha = e^{i theta} cosh r,    beta = e^{-i theta} e^{-i phi} sinh r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mode_solver import HARD_LIMIT, ModeState
from .profiles import ReferenceParams

__all__ = [
    "BogoliubovPair",
    "SqueezeTriple",
    "UnitarityError",
    "bogoliubov_coeffs",
    "unitarity_residual",
    "squeeze_params",
    "reconstruct",
    "wrap_angle",
]


class UnitarityError(ValueError):
    """``|alpha|^2 - |beta|^2`` departs from 1; the mode is not normalized."""


@dataclass(frozen=True)
class BogoliubovPair:
    alpha: complex
    beta: complex
    t: float = math.nan


@dataclass(frozen=True)
class SqueezeTriple:
    theta: float
    r: float
    phi: float


def wrap_angle(x: float) -> float:
    """Map an angle to (-pi, pi]."""
    y = math.pi - math.fmod(math.pi - x, 2.0 * math.pi)
    if y <= -math.pi:
        y += 2.0 * math.pi
    elif y > math.pi:
        y -= 2.0 * math.pi
    return y


def unitarity_residual(pair: BogoliubovPair) -> float:
    return abs(abs(pair.alpha) ** 2 - abs(pair.beta) ** 2 - 1.0)


def bogoliubov_coeffs(
    state: ModeState,
    X: float,
    Y: float,
    ref: ReferenceParams,
    *,
    hard_limit: float | None = HARD_LIMIT,
) -> BogoliubovPair:
    """Coefficients of ``a_L(t)`` on the reference pair ``(a, a^dag)`` of ``ref``."""
    w0, X0, Y0 = ref.omega0, ref.X0, ref.Y0
    u_c = state.u.conjugate()
    tail = (state.udot.conjugate() - Y * u_c) / X
    pre = -1j * math.sqrt(X0 / (2.0 * w0))
    alpha = pre * ((1j * w0 + Y0) * u_c / X0 + tail)
    beta = pre * ((-1j * w0 + Y0) * u_c / X0 + tail)
    pair = BogoliubovPair(complex(alpha), complex(beta), state.t)
    if hard_limit is not None:
        res = unitarity_residual(pair)
        if res > hard_limit:
            raise UnitarityError(f"|alpha|^2 - |beta|^2 - 1 = {res:.3e} at t = {state.t}")
    return pair


def squeeze_params(pair: BogoliubovPair, tol: float = 1e-6) -> SqueezeTriple:
    """Phase and squeeze parameters ``(theta, r, phi)`` of a Bogoliubov pair.

    ``r`` comes from ``arcsinh|beta|``, which stays accurate near ``r = 0``
    where ``arccosh|alpha|`` does not.  ``phi`` is set to 0 when ``beta = 0``.
    The unitarity check is relative to ``|alpha|^2 + |beta|^2``.
    """
    scale = abs(pair.alpha) ** 2 + abs(pair.beta) ** 2
    if unitarity_residual(pair) > tol * scale:
        raise UnitarityError(f"pair violates |alpha|^2 - |beta|^2 = 1 (residual {unitarity_residual(pair):.3e})")
    theta = wrap_angle(float(np.angle(pair.alpha)))
    mag = abs(pair.beta)
    r = math.asinh(mag)
    phi = 0.0 if mag == 0.0 else wrap_angle(-(float(np.angle(pair.beta)) + theta))
    return SqueezeTriple(theta, r, phi)


def reconstruct(triple: SqueezeTriple) -> BogoliubovPair:
    if triple.r < 0:
        raise ValueError("squeeze magnitude r must be non-negative")
    alpha = np.exp(1j * triple.theta) * math.cosh(triple.r)
    beta = np.exp(-1j * (triple.theta + triple.phi)) * math.sinh(triple.r)
    return BogoliubovPair(complex(alpha), complex(beta))
