"""Complex classical mode function of the generalized oscillator.

The mode ``u(t)`` solves

    d/dt (udot / X) + Omega^2(t) u / X = 0,
    Omega^2 = X Z - Y^2 + (Xdot Y - X Ydot) / X,

normalized by the Wronskian condition ``(u udot* - u* udot)/X = i``.  The
integrator advances the first-order pair ``(u, pi)`` with ``pi = udot/X``:

    udot = X pi,    pidot = -Omega^2 u / X

using classical fixed-step RK4.  In these variables the Wronskian is
``u pi* - u* pi``, which is monitored at every step but never renormalized.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .profiles import CoefficientProfile, InvertedRegime, ReferenceParams

__all__ = [
    "ModeState",
    "ModeTrajectory",
    "InitializationError",
    "DivergenceError",
    "WronskianWarning",
    "vacuum_init",
    "wronskian",
    "integrate",
    "evolve",
    "analytic_mode",
    "DEFAULT_STEP",
    "WARN_LIMIT",
    "HARD_LIMIT",
]

DEFAULT_STEP = 1e-3
WARN_LIMIT = 1e-9
HARD_LIMIT = 1e-6


class InitializationError(ValueError):
    """The instantaneous vacuum is undefined at the reference time."""


class DivergenceError(RuntimeError):
    """Wronskian drift exceeded the hard limit during integration."""

    def __init__(self, t: float, residual: float, limit: float):
        super().__init__(f"Wronskian drift {residual:.3e} exceeds {limit:.1e} at t = {t!r}")
        self.t = t
        self.residual = residual
        self.limit = limit


class WronskianWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ModeState:
    t: float
    u: complex
    udot: complex

    def scaled(self, c: complex) -> "ModeState":
        return ModeState(self.t, c * self.u, c * self.udot)

    def conjugate(self) -> "ModeState":
        return ModeState(self.t, self.u.conjugate(), self.udot.conjugate())


@dataclass(frozen=True)
class ModeTrajectory:
    """Sampled mode function.

    ``wronskian_residual`` holds ``|Wr - i|`` at every sample; ``max_drift``
    is the largest ``|Wr(t) - Wr(t_start)|`` seen at any integrator step.
    """

    profile: CoefficientProfile
    t: np.ndarray
    u: np.ndarray
    udot: np.ndarray
    step: float
    wronskian_residual: np.ndarray
    max_drift: float
    hard_limit: float

    def __len__(self):
        return self.t.size

    def __getitem__(self, k) -> ModeState:
        return ModeState(float(self.t[k]), complex(self.u[k]), complex(self.udot[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def max_wronskian_residual(self) -> float:
        return float(self.wronskian_residual.max())

    @property
    def worst_time(self) -> float:
        return float(self.t[int(np.argmax(self.wronskian_residual))])

    @property
    def final(self) -> ModeState:
        return self[-1]


def vacuum_init(profile: CoefficientProfile, ref: ReferenceParams | float) -> ModeState:
    """Mode matching the instantaneous vacuum at the reference time.

    ``u = sqrt(X/(2 omega))``, ``udot = -i omega u`` with the coefficients
    frozen at ``t0``.  The invariant ladder operators then coincide with the
    reference ones, so the Bogoliubov pair starts at ``(1, 0)``.
    """
    t0 = ref.t0 if isinstance(ref, ReferenceParams) else float(ref)
    omega = profile.instantaneous_frequency(t0)
    if isinstance(omega, InvertedRegime):
        raise InitializationError(
            f"X Z - Y^2 = {omega.radicand} at t0 = {t0}; reference vacuum undefined"
        )
    X = profile.eval(t0).X
    u = math.sqrt(X / (2.0 * omega))
    return ModeState(t0, complex(u), complex(0.0, -omega * u))


def wronskian(state: ModeState, X: float) -> complex:
    """``(u udot* - u* udot) / X``; equals ``i`` for a normalized mode."""
    u, ud = state.u, state.udot
    return (u * ud.conjugate() - u.conjugate() * ud) / X


def analytic_mode(ref: ReferenceParams, t: float) -> ModeState:
    """Closed-form mode of the frozen oscillator, ``sqrt(X0/2w0) exp(-i w0 (t - t0))``."""
    w0 = ref.omega0
    u = math.sqrt(ref.X0 / (2.0 * w0)) * np.exp(-1j * w0 * (t - ref.t0))
    return ModeState(float(t), complex(u), complex(-1j * w0 * u))


def _march(profile, start, t_target, step, sample_every, hard_limit):
    span = t_target - start.t
    n = 0 if span == 0 else max(1, math.ceil(abs(span) / step - 1e-9))
    t_s, u_s, ud_s = [start.t], [start.u], [start.udot]
    c0 = profile.eval(start.t)
    u = complex(start.u)
    p = complex(start.udot) / c0.X
    w_start = u * p.conjugate() - u.conjugate() * p
    max_drift = 0.0
    if n == 0:
        return t_s, u_s, ud_s, max_drift

    h = span / n
    # coefficients on the half-step grid t0 + j h/2, j = 0..2n
    grid = start.t + 0.5 * h * np.arange(2 * n + 1)
    grid[-1] = t_target
    c = profile.eval(grid)
    om2 = c.X * c.Z - c.Y ** 2 + (c.Xdot * c.Y - c.X * c.Ydot) / c.X
    Xg = c.X.tolist()
    Gg = (om2 / c.X).tolist()
    h2 = 0.5 * h
    h6 = h / 6.0

    for k in range(n):
        j = 2 * k
        X0, Xm, X1 = Xg[j], Xg[j + 1], Xg[j + 2]
        g0, gm, g1 = Gg[j], Gg[j + 1], Gg[j + 2]
        k1u = X0 * p
        k1p = -g0 * u
        k2u = Xm * (p + h2 * k1p)
        k2p = -gm * (u + h2 * k1u)
        k3u = Xm * (p + h2 * k2p)
        k3p = -gm * (u + h2 * k2u)
        k4u = X1 * (p + h * k3p)
        k4p = -g1 * (u + h * k3u)
        u = u + h6 * (k1u + 2.0 * (k2u + k3u) + k4u)
        p = p + h6 * (k1p + 2.0 * (k2p + k3p) + k4p)

        drift = abs(u * p.conjugate() - u.conjugate() * p - w_start)
        if drift > max_drift:
            max_drift = drift
            if hard_limit is not None and drift > hard_limit:
                raise DivergenceError(float(grid[j + 2]), drift, hard_limit)
        if (k + 1) % sample_every == 0 or k + 1 == n:
            t_s.append(float(grid[j + 2]))
            u_s.append(u)
            ud_s.append(X1 * p)
    return t_s, u_s, ud_s, max_drift


def integrate(
    profile: CoefficientProfile,
    start: ModeState,
    t_end: float,
    step: float = DEFAULT_STEP,
    sample_every: int = 1,
    *,
    warn_limit: float = WARN_LIMIT,
    hard_limit: float | None = HARD_LIMIT,
) -> ModeTrajectory:
    """Integrate the mode equation from ``start`` to ``t_end``.

    The step is shrunk slightly, if needed, so that an integer number of
    steps lands exactly on ``t_end``.  Samples are recorded every
    ``sample_every`` steps and always at ``t_end``.

    Raises
    ------
    ValueError
        Non-positive step or ``t_end`` before the start time.
    DivergenceError
        Wronskian drift above ``hard_limit`` (pass ``None`` to only monitor).
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if t_end < start.t:
        raise ValueError(f"t_end = {t_end} precedes start time {start.t}")
    if int(sample_every) < 1:
        raise ValueError("sample_every must be >= 1")
    t_s, u_s, ud_s, drift = _march(profile, start, float(t_end), float(step), int(sample_every), hard_limit)

    t_arr = np.array(t_s)
    u_arr = np.array(u_s, dtype=complex)
    ud_arr = np.array(ud_s, dtype=complex)
    X = profile.eval(t_arr).X
    wr = (u_arr * ud_arr.conj() - u_arr.conj() * ud_arr) / X
    residual = np.abs(wr - 1j)
    if residual.max() > warn_limit:
        warnings.warn(
            f"Wronskian residual {residual.max():.3e} above {warn_limit:.1e}",
            WronskianWarning,
            stacklevel=2,
        )
    return ModeTrajectory(profile, t_arr, u_arr, ud_arr, float(step), residual, drift, hard_limit)


def evolve(
    profile: CoefficientProfile,
    state: ModeState,
    t_target: float,
    step: float = DEFAULT_STEP,
) -> ModeState:
    """Advance a single state to ``t_target``, forwards or backwards in time."""
    if not step > 0:
        raise ValueError("step must be positive")
    t_s, u_s, ud_s, _ = _march(profile, state, float(t_target), float(step), 1 << 62, None)
    return ModeState(t_s[-1], u_s[-1], ud_s[-1])
