"""Time-dependent coefficients of the generalized oscillator.

The Hamiltonian is ``H = X p^2/2 + Y (pq + qp)/2 + Z q^2/2`` with real
coefficient functions X(t), Y(t), Z(t).  A :class:`CoefficientProfile`
evaluates them together with the first derivatives of X and Y, which the
classical mode equation needs.

Built-in families
-----------------
constant    X, Y, Z fixed.
modulated   X, Y fixed, ``Z(t) = Z0 (1 + eps cos(nu t))``.
quench      smooth tanh switch between two coefficient triples, optionally
            switching back at a later center.
tabulated   sampled rows ``(t, X, Y, Z)`` with monotone cubic (PCHIP)
            interpolation; derivatives come from the interpolant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "DomainError",
    "ProfileError",
    "Coefficients",
    "InvertedRegime",
    "CoefficientProfile",
    "ReferenceParams",
    "constant",
    "modulated",
    "quench",
    "tabulated",
    "from_dict",
]

FAMILIES = ("constant", "modulated", "quench", "tabulated")


class ProfileError(ValueError):
    """Invalid profile or reference parameters."""


class DomainError(ProfileError):
    """Evaluation time lies outside the profile domain."""


class Coefficients(NamedTuple):
    X: float | np.ndarray
    Y: float | np.ndarray
    Z: float | np.ndarray
    Xdot: float | np.ndarray
    Ydot: float | np.ndarray


class InvertedRegime(NamedTuple):
    """Returned instead of a frequency when ``X Z - Y^2 <= 0``."""

    radicand: float


@dataclass(frozen=True)
class CoefficientProfile:
    """Immutable coefficient schedule.

    Use the family constructors (:func:`constant`, :func:`modulated`,
    :func:`quench`, :func:`tabulated`) rather than instantiating directly.
    ``params`` holds the family parameters in the same form accepted by
    :func:`from_dict`.
    """

    family: str
    params: dict
    t_start: float = -math.inf
    t_end: float = math.inf
    _fn: Callable = field(default=None, repr=False, compare=False)

    def _check_domain(self, t):
        lo, hi = np.min(t), np.max(t)
        # half-ulp slack so grids built by t0 + k*h still land inside
        slack = 1e-12 * max(1.0, abs(self.t_start), abs(self.t_end))
        if lo < self.t_start - slack or hi > self.t_end + slack:
            raise DomainError(
                f"t outside profile domain [{self.t_start}, {self.t_end}]: got [{lo}, {hi}]"
            )

    def eval(self, t) -> Coefficients:
        """Return ``(X, Y, Z, Xdot, Ydot)`` at time(s) ``t``."""
        scalar = np.ndim(t) == 0
        t_arr = np.asarray(t, dtype=float)
        self._check_domain(t_arr)
        out = self._fn(t_arr)
        if scalar:
            return Coefficients(*(float(v) for v in out))
        return Coefficients(*(np.broadcast_to(v, t_arr.shape).astype(float) for v in out))

    def instantaneous_frequency(self, t) -> float | InvertedRegime:
        """``sqrt(X Z - Y^2)`` at a single time, or :class:`InvertedRegime`."""
        c = self.eval(float(t))
        rad = c.X * c.Z - c.Y ** 2
        if rad > 0:
            return math.sqrt(rad)
        return InvertedRegime(rad)

    def effective_frequency_squared(self, t):
        """The bracket ``X Z - Y^2 + (Xdot Y - X Ydot)/X`` of the mode equation."""
        c = self.eval(t)
        return c.X * c.Z - c.Y ** 2 + (c.Xdot * c.Y - c.X * c.Ydot) / c.X

    def with_params(self, **changes) -> "CoefficientProfile":
        """Copy of this profile with some family parameters replaced."""
        doc = self.to_dict()
        for key, value in changes.items():
            if key not in doc or key == "family":
                raise ProfileError(f"unknown parameter {key!r} for family {self.family!r}")
            doc[key] = value
        return from_dict(doc)

    def to_dict(self) -> dict:
        return {"family": self.family, **{k: _plain(v) for k, v in self.params.items()}}


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, tuple):
        return list(v)
    return v


def _require_positive_x(X, where):
    if not np.all(np.asarray(X) > 0):
        raise ProfileError(f"X must be positive ({where})")


def constant(X0: float, Y0: float, Z0: float) -> CoefficientProfile:
    X0, Y0, Z0 = float(X0), float(Y0), float(Z0)
    _require_positive_x(X0, "constant")

    def fn(t):
        return X0, Y0, Z0, 0.0, 0.0

    return CoefficientProfile("constant", {"X0": X0, "Y0": Y0, "Z0": Z0}, _fn=fn)


def modulated(X0: float, Y0: float, Z0: float, epsilon: float, nu: float) -> CoefficientProfile:
    """Parametric drive ``Z(t) = Z0 (1 + epsilon cos(nu t))``."""
    X0, Y0, Z0, epsilon, nu = map(float, (X0, Y0, Z0, epsilon, nu))
    _require_positive_x(X0, "modulated")

    def fn(t):
        return X0, Y0, Z0 * (1.0 + epsilon * np.cos(nu * t)), 0.0, 0.0

    params = {"X0": X0, "Y0": Y0, "Z0": Z0, "epsilon": epsilon, "nu": nu}
    return CoefficientProfile("modulated", params, _fn=fn)


def quench(
    before: tuple[float, float, float],
    after: tuple[float, float, float],
    t_c: float,
    tau: float,
    t_back: float | None = None,
) -> CoefficientProfile:
    """Smooth switch ``before -> after`` centered at ``t_c`` with width ``tau``.

    The switching function is ``s(t) = (1 + tanh((t - t_c)/tau))/2``.  When
    ``t_back`` is given the coefficients return to ``before`` through a
    second switch of the same width centered at ``t_back``.
    """
    a = np.asarray(before, dtype=float)
    b = np.asarray(after, dtype=float)
    if a.shape != (3,) or b.shape != (3,):
        raise ProfileError("quench endpoints must be (X, Y, Z) triples")
    tau = float(tau)
    t_c = float(t_c)
    if tau <= 0:
        raise ProfileError("quench width tau must be positive")
    if t_back is not None:
        t_back = float(t_back)
        if t_back <= t_c:
            raise ProfileError("t_back must come after t_c")
    _require_positive_x([a[0], b[0]], "quench")
    d = b - a

    def fn(t):
        x = (t - t_c) / tau
        s = 0.5 * (1.0 + np.tanh(x))
        ds = 0.5 / (tau * np.cosh(x) ** 2)
        if t_back is not None:
            xb = (t - t_back) / tau
            s = s - 0.5 * (1.0 + np.tanh(xb))
            ds = ds - 0.5 / (tau * np.cosh(xb) ** 2)
        X = a[0] + d[0] * s
        Y = a[1] + d[1] * s
        Z = a[2] + d[2] * s
        return X, Y, Z, d[0] * ds, d[1] * ds

    params = {"before": tuple(a.tolist()), "after": tuple(b.tolist()), "t_c": t_c, "tau": tau}
    if t_back is not None:
        params["t_back"] = t_back
    return CoefficientProfile("quench", params, _fn=fn)


def tabulated(t, X, Y, Z) -> CoefficientProfile:
    """Profile interpolated from samples with PCHIP (C1, no overshoot)."""
    t = np.asarray(t, dtype=float)
    cols = [np.asarray(c, dtype=float) for c in (X, Y, Z)]
    if t.ndim != 1 or t.size < 2:
        raise ProfileError("tabulated profile needs at least two rows")
    if any(c.shape != t.shape for c in cols):
        raise ProfileError("tabulated columns must have equal length")
    if not np.all(np.diff(t) > 0):
        raise ProfileError("tabulated times must be strictly increasing")
    _require_positive_x(cols[0], "tabulated")
    ix, iy, iz = (PchipInterpolator(t, c, extrapolate=False) for c in cols)
    dx, dy = ix.derivative(), iy.derivative()

    def fn(tt):
        # clip guards the slack admitted by the domain check
        tt = np.clip(tt, t[0], t[-1])
        return ix(tt), iy(tt), iz(tt), dx(tt), dy(tt)

    params = {"t": t, "X": cols[0], "Y": cols[1], "Z": cols[2]}
    return CoefficientProfile("tabulated", params, float(t[0]), float(t[-1]), _fn=fn)


def from_dict(doc: dict) -> CoefficientProfile:
    """Build a profile from its JSON-style description.

    Examples of accepted blocks::

        {"family": "constant", "X0": 1, "Y0": 0, "Z0": 1}
        {"family": "modulated", "X0": 1, "Y0": 0, "Z0": 1, "epsilon": 0.1, "nu": 2}
        {"family": "quench", "before": [1, 0, 1], "after": [1, 0, 4], "t_c": 5, "tau": 1}
        {"family": "tabulated", "t": [...], "X": [...], "Y": [...], "Z": [...]}
    """
    if not isinstance(doc, dict):
        raise ProfileError("profile block must be an object")
    family = doc.get("family")
    if family not in FAMILIES:
        raise ProfileError(f"profile.family must be one of {FAMILIES}, got {family!r}")
    args = {k: v for k, v in doc.items() if k != "family"}
    required = {
        "constant": ("X0", "Y0", "Z0"),
        "modulated": ("X0", "Y0", "Z0", "epsilon", "nu"),
        "quench": ("before", "after", "t_c", "tau"),
        "tabulated": ("t", "X", "Y", "Z"),
    }[family]
    optional = ("t_back",) if family == "quench" else ()
    missing = [k for k in required if k not in args]
    if missing:
        raise ProfileError(f"profile.{missing[0]} is required for family {family!r}")
    unknown = [k for k in args if k not in required + optional]
    if unknown:
        raise ProfileError(f"profile.{unknown[0]} is not a parameter of family {family!r}")
    try:
        if family == "constant":
            return constant(**args)
        if family == "modulated":
            return modulated(**args)
        if family == "quench":
            return quench(**args)
        return tabulated(**args)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ProfileError):
            raise
        raise ProfileError(f"profile: {exc}") from exc


@dataclass(frozen=True)
class ReferenceParams:
    """Coefficients frozen at the reference time ``t0``.

    They define the reference ladder operators ``a, a^dagger`` and thus the
    number basis shared by the closed-form results and the Fock oracle.
    """

    t0: float
    X0: float
    Y0: float
    Z0: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ProfileError("hbar must be positive")
        if not self.X0 > 0:
            raise ProfileError("X0 must be positive")
        if not self.X0 * self.Z0 - self.Y0 ** 2 > 0:
            raise ProfileError(
                f"reference frequency squared X0*Z0 - Y0^2 = {self.X0 * self.Z0 - self.Y0 ** 2} must be positive"
            )

    @property
    def omega0(self) -> float:
        return math.sqrt(self.X0 * self.Z0 - self.Y0 ** 2)

    @classmethod
    def from_profile(cls, profile: CoefficientProfile, t0: float, hbar: float = 1.0) -> "ReferenceParams":
        c = profile.eval(float(t0))
        return cls(float(t0), c.X, c.Y, c.Z, float(hbar))
