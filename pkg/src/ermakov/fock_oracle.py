"""Brute-force reference: the oscillator in a truncated number basis.

Operators are dense matrices over ``|0>, ..., |N-1>`` of the reference
ladder operator ``a`` (coefficients frozen at ``t0``).  The Schroedinger
equation is stepped with the exact exponential of the midpoint Hamiltonian,

    psi(t + h) = exp(-i h H(t + h/2) / hbar) psi(t),

which is second order in ``h`` and unitary to rounding.  A quadratic
Hamiltonian never mixes even and odd number states, so each step
diagonalizes the two parity blocks separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .operator_algebra import CorrelatorSet
from .profiles import CoefficientProfile, ReferenceParams

__all__ = [
    "DEFAULT_DIMENSION",
    "FockStateVector",
    "HermiticityError",
    "ladder_matrices",
    "quadrature_matrices",
    "hamiltonian",
    "number_state",
    "propagate",
    "propagate_samples",
    "evolution_operator",
    "expect_correlators",
    "mean_occupation",
]

DEFAULT_DIMENSION = 64
NORM_TOL = 1e-10
IMAG_TOL = 1e-10


class HermiticityError(RuntimeError):
    """An expectation of a Hermitian operator came out complex."""


@dataclass(frozen=True)
class FockStateVector:
    amplitudes: np.ndarray
    t: float

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def ladder_matrices(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated ``a`` and ``a^dag``; ``a[n-1, n] = sqrt(n)``."""
    if N < 2:
        raise ValueError("Fock dimension must be at least 2")
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)
    return a, a.conj().T


def quadrature_matrices(ref: ReferenceParams, N: int) -> tuple[np.ndarray, np.ndarray]:
    a, ad = ladder_matrices(N)
    w0, X0, Y0, hbar = ref.omega0, ref.X0, ref.Y0, ref.hbar
    q = math.sqrt(hbar * X0 / (2.0 * w0)) * (a + ad)
    p = math.sqrt(hbar / (2.0 * w0 * X0)) * (-(1j * w0 + Y0) * a + (1j * w0 - Y0) * ad)
    return q, p


def _quadratic_parts(ref, N):
    q, p = quadrature_matrices(ref, N)
    P2 = 0.5 * (p @ p)
    S = 0.5 * (p @ q + q @ p)
    Q2 = 0.5 * (q @ q)
    # symmetrize away rounding so eigh sees exactly Hermitian input
    return [0.5 * (M + M.conj().T) for M in (P2, S, Q2)]


def hamiltonian(profile: CoefficientProfile, t: float, ref: ReferenceParams, N: int) -> np.ndarray:
    """``H = (X/2) p^2 + (Y/2)(pq + qp) + (Z/2) q^2`` at time ``t``."""
    P2, S, Q2 = _quadratic_parts(ref, N)
    c = profile.eval(float(t))
    return c.X * P2 + c.Y * S + c.Z * Q2


def number_state(n: int, N: int, t: float = 0.0) -> FockStateVector:
    if not 0 <= n < N:
        raise ValueError(f"number state {n} outside truncated basis of size {N}")
    amp = np.zeros(N, dtype=complex)
    amp[n] = 1.0
    return FockStateVector(amp, float(t))


class _Stepper:
    """Midpoint-exponential propagator on a block of column vectors."""

    def __init__(self, profile, ref, N, step):
        if not step > 0:
            raise ValueError("oracle step must be positive")
        self.profile = profile
        self.hbar = ref.hbar
        self.step = float(step)
        parts = _quadratic_parts(ref, N)
        self.blocks = []
        for parity in (0, 1):
            idx = np.arange(parity, N, 2)
            self.blocks.append((idx, [M[np.ix_(idx, idx)] for M in parts]))

    def advance(self, psi: np.ndarray, t_from: float, t_to: float) -> np.ndarray:
        span = t_to - t_from
        if span == 0:
            return psi
        n = max(1, math.ceil(abs(span) / self.step - 1e-9))
        h = span / n
        mids = t_from + h * (np.arange(n) + 0.5)
        c = self.profile.eval(mids)
        X, Y, Z = (np.broadcast_to(v, mids.shape) for v in (c.X, c.Y, c.Z))
        out = psi.copy()
        for idx, (P2, S, Q2) in self.blocks:
            sub = out[idx]
            if not np.any(sub):
                # parity is conserved; an empty block stays empty
                continue
            for k in range(n):
                H = X[k] * P2 + Y[k] * S + Z[k] * Q2
                lam, V = sla.eigh(H, overwrite_a=True, check_finite=False)
                phase = np.exp(-1j * h / self.hbar * lam)
                sub = V @ (phase[:, None] * (V.conj().T @ sub))
            out[idx] = sub
        return out


def _check_norm(psi: FockStateVector):
    if abs(psi.norm - 1.0) > NORM_TOL:
        raise ValueError(f"state not normalized (norm {psi.norm!r})")


def propagate(
    profile: CoefficientProfile,
    psi0: FockStateVector,
    t_end: float,
    step: float,
    ref: ReferenceParams,
) -> FockStateVector:
    """Evolve ``psi0`` from ``psi0.t`` to ``t_end``."""
    _check_norm(psi0)
    stepper = _Stepper(profile, ref, psi0.dimension, step)
    amp = stepper.advance(psi0.amplitudes[:, None], psi0.t, float(t_end))[:, 0]
    return FockStateVector(amp, float(t_end))


def propagate_samples(
    profile: CoefficientProfile,
    psi0: FockStateVector,
    times,
    step: float,
    ref: ReferenceParams,
) -> list[FockStateVector]:
    """States at each of the increasing ``times`` (the first may equal ``psi0.t``)."""
    _check_norm(psi0)
    stepper = _Stepper(profile, ref, psi0.dimension, step)
    out = []
    amp, t = psi0.amplitudes[:, None], psi0.t
    for t_next in times:
        t_next = float(t_next)
        if t_next < t:
            raise ValueError("sample times must be non-decreasing")
        amp = stepper.advance(amp, t, t_next)
        t = t_next
        out.append(FockStateVector(amp[:, 0].copy(), t))
    return out


def evolution_operator(
    profile: CoefficientProfile, ref: ReferenceParams, N: int, t_end: float, step: float
) -> np.ndarray:
    """Truncated ``U(t_end)`` with ``U(ref.t0) = 1``."""
    stepper = _Stepper(profile, ref, N, step)
    return stepper.advance(np.eye(N, dtype=complex), ref.t0, float(t_end))


def _expect(psi, M):
    val = np.vdot(psi, M @ psi)
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
        raise HermiticityError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def expect_correlators(psi: FockStateVector, ref: ReferenceParams, N: int | None = None, n: int = 0) -> CorrelatorSet:
    """Schroedinger-picture ``<q^2>``, ``<p^2>``, ``<(pq + qp)/2>`` in ``psi``.

    ``n`` only labels the result.
    """
    _check_norm(psi)
    N = psi.dimension if N is None else N
    if N != psi.dimension:
        raise ValueError(f"dimension mismatch: state {psi.dimension}, operators {N}")
    q, p = quadrature_matrices(ref, N)
    amp = psi.amplitudes
    return CorrelatorSet(
        psi.t,
        int(n),
        _expect(amp, q @ q),
        _expect(amp, p @ p),
        _expect(amp, 0.5 * (p @ q + q @ p)),
    )


def mean_occupation(psi: FockStateVector) -> float:
    """``<psi| a^dag a |psi>``."""
    prob = np.abs(psi.amplitudes) ** 2
    return float(np.dot(np.arange(psi.dimension), prob))
