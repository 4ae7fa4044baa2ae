import math

import numpy as np
import pytest

from ermakov import fock_oracle as fock
from ermakov.profiles import ReferenceParams, constant, modulated, quench


def test_ladder_matrices():
    a, ad = fock.ladder_matrices(2)
    assert a[0, 1] == 1 and np.count_nonzero(a) == 1
    a, ad = fock.ladder_matrices(4)
    assert np.allclose(np.diag(ad @ a), [0, 1, 2, 3])
    assert np.allclose(a @ ad - ad @ a, np.diag([1, 1, 1, -3]))
    with pytest.raises(ValueError):
        fock.ladder_matrices(1)


def test_quadrature_matrices():
    q, p = fock.quadrature_matrices(ReferenceParams(0, 1, 0, 1), 2)
    assert q[0, 1] == pytest.approx(0.7071067811865476)
    q, p = fock.quadrature_matrices(ReferenceParams(0, 2, 1, 1), 6)
    assert q[0, 1] == pytest.approx(1.0)
    assert np.allclose(q, q.conj().T) and np.allclose(p, p.conj().T)
    comm = (q @ p - p @ q)[:5, :5]
    assert np.allclose(comm, 1j * np.eye(5), atol=1e-14)
    q, p = fock.quadrature_matrices(ReferenceParams(0, 2, 1, 1, hbar=0.3), 6)
    assert np.allclose((q @ p - p @ q)[:5, :5], 0.3j * np.eye(5), atol=1e-14)


@pytest.mark.parametrize("xyz", [(1, 0, 1), (2, 1, 1)])
def test_hamiltonian_structure(xyz):
    prof = constant(*xyz)
    ref = ReferenceParams.from_profile(prof, 0)
    H = fock.hamiltonian(prof, 0.0, ref, 10)
    assert np.max(np.abs(H - H.conj().T)) == 0
    assert np.allclose(np.diag(H)[:-1].real, np.arange(9) + 0.5)
    # the frozen Hamiltonian is diagonal in its own number basis up to the truncation corner
    off = H - np.diag(np.diag(H))
    assert np.max(np.abs(off)) < 1e-14
    # parity: only |n> <-> |n +- 2> couplings are ever allowed
    Ht = fock.hamiltonian(quench(xyz, (1, 0.3, 2), 0.0, 1.0), 0.0, ref, 10)
    i, j = np.nonzero(np.abs(Ht) > 0)
    assert set(np.abs(i - j)) <= {0, 2}


def test_energy_eigenstate_phase():
    prof = constant(1, 0, 1)
    ref = ReferenceParams.from_profile(prof, 0)
    psi = fock.propagate(prof, fock.number_state(1, 16), 3.7, 0.05, ref)
    assert psi.amplitudes[1] == pytest.approx(np.exp(-1.5j * 3.7), abs=1e-12)
    assert abs(abs(psi.amplitudes[1]) - 1) <= 1e-9
    assert psi.norm == pytest.approx(1, abs=1e-10)


def test_zero_length_propagation():
    prof = modulated(1, 0, 1, 0.1, 2)
    ref = ReferenceParams.from_profile(prof, 0)
    psi0 = fock.number_state(3, 8)
    psi = fock.propagate(prof, psi0, 0.0, 1e-3, ref)
    assert np.array_equal(psi.amplitudes, psi0.amplitudes)


def test_rejects_unnormalized():
    prof = constant(1, 0, 1)
    ref = ReferenceParams.from_profile(prof, 0)
    bad = fock.FockStateVector(np.ones(4, dtype=complex), 0.0)
    with pytest.raises(ValueError):
        fock.propagate(prof, bad, 1.0, 0.1, ref)


def test_expect_correlators_number_states():
    ref = ReferenceParams(0, 1, 0, 1)
    c = fock.expect_correlators(fock.number_state(0, 8), ref, 8)
    assert (c.q2, c.p2, c.cross) == pytest.approx((0.5, 0.5, 0.0), abs=1e-15)
    c = fock.expect_correlators(fock.number_state(1, 8), ref, 8)
    assert (c.q2, c.p2, c.cross) == pytest.approx((1.5, 1.5, 0.0), abs=1e-15)
    with pytest.raises(ValueError):
        fock.expect_correlators(fock.number_state(1, 8), ref, 9)


def test_mean_occupation():
    assert fock.mean_occupation(fock.number_state(5, 8)) == 5
    prof = constant(2, 1, 1)
    ref = ReferenceParams.from_profile(prof, 0)
    psi = fock.propagate(prof, fock.number_state(0, 32), 10.0, 1e-2, ref)
    assert fock.mean_occupation(psi) <= 1e-10


def test_norm_and_parity_under_driving():
    prof = quench((1, 0.2, 1), (1.5, -0.3, 3), 2.0, 0.5)
    ref = ReferenceParams.from_profile(prof, 0)
    states = fock.propagate_samples(prof, fock.number_state(0, 48), np.linspace(0, 4, 9), 1e-2, ref)
    for psi in states:
        assert abs(psi.norm - 1) <= 1e-10
        assert np.max(np.abs(psi.amplitudes[1::2])) <= 1e-10
    assert fock.mean_occupation(states[-1]) > 1e-3


def test_evolution_operator_is_unitary_on_low_block():
    prof = quench((1, 0, 1), (1, 0, 2), 1.0, 0.5)
    ref = ReferenceParams.from_profile(prof, 0)
    U = fock.evolution_operator(prof, ref, 40, 2.0, 1e-2)
    assert np.allclose(U.conj().T @ U, np.eye(40), atol=1e-12)


def test_truncation_convergence():
    prof = modulated(1, 0, 1, 0.1, 2)
    ref = ReferenceParams.from_profile(prof, 0)
    vals = []
    for N in (16, 32, 64):
        psi = fock.propagate(prof, fock.number_state(0, N), 20.0, 1e-2, ref)
        vals.append(fock.expect_correlators(psi, ref).q2)
    assert abs(vals[2] - vals[1]) * 4 <= abs(vals[1] - vals[0])


def test_second_order_in_step():
    prof = quench((1, 0, 1), (1, 0, 4), 2.0, 0.5)
    ref = ReferenceParams.from_profile(prof, 0)
    occ = [
        fock.mean_occupation(fock.propagate(prof, fock.number_state(0, 32), 4.0, h, ref))
        for h in (0.04, 0.02, 0.01)
    ]
    ratio = (occ[0] - occ[1]) / (occ[1] - occ[2])
    assert 3.5 < ratio < 4.5
