"""Linear operator expansions and number-state correlators.

All position/momentum operators here are linear in a ladder pair, so each is
stored as two complex coefficients.  With ``w = (udot - Y u)/X``:

    invariant picture    q = sqrt(hbar) (u a_L + u* a_L^dag)
                         p = sqrt(hbar) (w a_L + w* a_L^dag)
    Heisenberg picture   q_H = U^dag q U = sqrt(hbar) (u a + u* a^dag)
                         p_H = sqrt(hbar) (w a + w* a^dag)

where ``a_L(t) = U a U^dag`` and ``a`` is the reference annihilation operator.
Conjugating by U maps a_L to a, so both pictures carry the same coefficients;
the pictures differ in the time dependence of the ladder operators
(``a_L = e^{+i w0 t} a`` versus ``a_H = e^{-i w0 t} a`` in the frozen case).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .mode_solver import HARD_LIMIT, ModeState, wronskian
from .profiles import ReferenceParams

__all__ = [
    "PICTURES",
    "QuadratureExpansion",
    "PhaseSpaceExpansion",
    "CorrelatorSet",
    "WronskianError",
    "PictureMismatch",
    "invariant_ladder",
    "lvn_quadratures",
    "heisenberg_quadratures",
    "reference_quadratures",
    "correlators",
    "expansion_correlators",
    "commutator",
    "commutator_residual",
    "uncertainty_product",
]

PICTURES = ("invariant", "heisenberg", "schroedinger-reference")


class WronskianError(ValueError):
    pass


class PictureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureExpansion:
    """Operator ``c_a b + c_adag b^dag`` over the ladder pair named by ``picture``.

    ``invariant`` expands over ``(a_L, a_L^dag)``; ``heisenberg`` and
    ``schroedinger-reference`` over the reference pair ``(a, a^dag)``.
    """

    c_a: complex
    c_adag: complex
    picture: str

    def __post_init__(self):
        if self.picture not in PICTURES:
            raise ValueError(f"unknown picture {self.picture!r}")

    def is_hermitian(self, tol: float = 1e-14) -> bool:
        return abs(self.c_adag - self.c_a.conjugate()) <= tol * max(1.0, abs(self.c_a))


@dataclass(frozen=True)
class PhaseSpaceExpansion:
    """Operator ``c_p p + c_q q`` in terms of the Schroedinger position and momentum."""

    c_p: complex
    c_q: complex

    def to_reference(self, ref: ReferenceParams) -> QuadratureExpansion:
        """Re-expand over the reference ladder pair of ``ref``."""
        q, p = reference_quadratures(ref)
        c_a = self.c_p * p.c_a + self.c_q * q.c_a
        c_adag = self.c_p * p.c_adag + self.c_q * q.c_adag
        return QuadratureExpansion(c_a, c_adag, "schroedinger-reference")


@dataclass(frozen=True)
class CorrelatorSet:
    t: float
    n: int
    q2: float
    p2: float
    cross: float


def _w(state: ModeState, X: float, Y: float) -> complex:
    return (state.udot - Y * state.u) / X


def _check(state, X, strict):
    if strict:
        res = abs(wronskian(state, X) - 1j)
        if res > HARD_LIMIT:
            raise WronskianError(f"Wronskian residual {res:.3e} at t = {state.t}")


def invariant_ladder(
    state: ModeState, X: float, Y: float, hbar: float = 1.0, *, strict: bool = True
) -> tuple[PhaseSpaceExpansion, PhaseSpaceExpansion]:
    """The linear invariants ``a_L`` and ``a_L^dag`` as combinations of p and q.

    ``a_L = (i/sqrt(hbar)) [u* p - w* q]``.
    """
    _check(state, X, strict)
    s = 1.0 / math.sqrt(hbar)
    u, w = state.u, _w(state, X, Y)
    a_l = PhaseSpaceExpansion(1j * s * u.conjugate(), -1j * s * w.conjugate())
    a_l_dag = PhaseSpaceExpansion(-1j * s * u, 1j * s * w)
    return a_l, a_l_dag


def lvn_quadratures(
    state: ModeState, X: float, Y: float, hbar: float = 1.0, *, strict: bool = True
) -> tuple[QuadratureExpansion, QuadratureExpansion]:
    _check(state, X, strict)
    s = math.sqrt(hbar)
    u, w = state.u, _w(state, X, Y)
    q = QuadratureExpansion(s * u, s * u.conjugate(), "invariant")
    p = QuadratureExpansion(s * w, s * w.conjugate(), "invariant")
    return q, p


def heisenberg_quadratures(
    state: ModeState, X: float, Y: float, hbar: float = 1.0, *, strict: bool = True
) -> tuple[QuadratureExpansion, QuadratureExpansion]:
    """``q_H = U^dag q U`` and its conjugate momentum ``(qdot_H - Y q_H)/X``."""
    _check(state, X, strict)
    s = math.sqrt(hbar)
    u, w = state.u, _w(state, X, Y)
    q = QuadratureExpansion(s * u, s * u.conjugate(), "heisenberg")
    p = QuadratureExpansion(s * w, s * w.conjugate(), "heisenberg")
    return q, p


def reference_quadratures(ref: ReferenceParams) -> tuple[QuadratureExpansion, QuadratureExpansion]:
    """Schroedinger q and p over the reference ladder pair of the frozen oscillator."""
    w0, X0, Y0, hbar = ref.omega0, ref.X0, ref.Y0, ref.hbar
    sq = math.sqrt(hbar * X0 / (2.0 * w0))
    sp = math.sqrt(hbar / (2.0 * w0 * X0))
    q = QuadratureExpansion(complex(sq), complex(sq), "schroedinger-reference")
    p = QuadratureExpansion(-sp * (1j * w0 + Y0), sp * (1j * w0 - Y0), "schroedinger-reference")
    return q, p


def correlators(state: ModeState, X: float, Y: float, n: int = 0, hbar: float = 1.0) -> CorrelatorSet:
    """Number-state second moments ``<q^2>``, ``<p^2>``, ``<(pq + qp)/2>``.

    The same expressions hold in the invariant picture (state ``|n, t>``)
    and in the Heisenberg picture (state ``|n>``).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    u, w = state.u, _w(state, X, Y)
    f = hbar * (2 * n + 1)
    return CorrelatorSet(
        state.t,
        int(n),
        f * abs(u) ** 2,
        f * abs(w) ** 2,
        f * (u.conjugate() * w).real,
    )


def expansion_correlators(
    q: QuadratureExpansion, p: QuadratureExpansion, n: int, t: float = math.nan
) -> CorrelatorSet:
    """Correlators from expansion coefficients in the number state ``|n>`` of their ladder pair.

    For ``A = A1 b + A2 b^dag`` and ``B = B1 b + B2 b^dag``:
    ``<n|A B|n> = A1 B2 (n + 1) + A2 B1 n``.
    """
    if q.picture != p.picture:
        raise PictureMismatch(f"{q.picture} vs {p.picture}")

    def mean(A, B):
        return A.c_a * B.c_adag * (n + 1) + A.c_adag * B.c_a * n

    q2 = mean(q, q).real
    p2 = mean(p, p).real
    cross = (0.5 * (mean(p, q) + mean(q, p))).real
    return CorrelatorSet(t, int(n), q2, p2, cross)


def commutator(A: QuadratureExpansion, B: QuadratureExpansion) -> complex:
    """``[A, B]`` as a c-number, using ``[b, b^dag] = 1``."""
    if A.picture != B.picture:
        raise PictureMismatch(f"{A.picture} vs {B.picture}")
    return A.c_a * B.c_adag - A.c_adag * B.c_a


def commutator_residual(A: QuadratureExpansion, B: QuadratureExpansion, hbar: float = 1.0) -> complex:
    """``[A, B] - i hbar``; zero for a canonical (position, momentum) pair."""
    return commutator(A, B) - 1j * hbar


def uncertainty_product(c: CorrelatorSet) -> float:
    """``q2 p2 - cross^2``; equals ``hbar^2 (2n+1)^2 / 4`` for a normalized mode."""
    return c.q2 * c.p2 - c.cross ** 2
