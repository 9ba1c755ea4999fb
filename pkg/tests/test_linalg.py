import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rqcfid.linalg import (apply_pair_layer, apply_qubit_permutation,
                           apply_two_qubit_gate, basis_state, fidelity,
                           gue_batch, haar_batch, perturbed_unitary,
                           sample_gue, sample_haar_unitary, zero_state)
from rqcfid.seeding import Seed

from oracles import apply_gate_by_index, apply_perm_by_index

SWAP = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=complex)


def unitarity_defect(u):
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()


class TestHaar:
    def test_dim_one_is_a_phase(self):
        u = sample_haar_unitary(1, Seed(3))
        assert abs(abs(u[0, 0]) - 1.0) < 1e-12

    @pytest.mark.parametrize("dim", [2, 3, 4, 7, 16])
    def test_unitary(self, dim):
        for k in range(5):
            u = sample_haar_unitary(dim, Seed(11, path=(k,)))
            assert unitarity_defect(u) < 1e-10

    def test_first_entry_moment(self):
        # Haar column symmetry forces E|U_00|^2 = 1/4 for dim 4
        us = haar_batch(Seed(5).rng(), 10_000, 4)
        m = (np.abs(us[:, 0, 0]) ** 2)
        se = m.std(ddof=1) / 100.0
        assert abs(m.mean() - 0.25) < 4 * se

    def test_determinism(self):
        a = sample_haar_unitary(4, Seed(9, stream=2))
        b = sample_haar_unitary(4, Seed(9, stream=2))
        assert np.array_equal(a, b)
        c = sample_haar_unitary(4, Seed(9, stream=3))
        assert not np.array_equal(a, c)

    def test_left_invariance_ks(self):
        # |first entry|^2 of W @ U must be distributed as for U itself
        n = 10_000
        u = haar_batch(Seed(21).rng(), n, 4)
        w = sample_haar_unitary(4, Seed(22))
        x = np.sort(np.abs(u[:, 0, 0]) ** 2)
        y = np.sort(np.abs((w @ u)[:, 0, 0]) ** 2)
        grid = np.concatenate([x, y])
        cdf_x = np.searchsorted(x, grid, side="right") / n
        cdf_y = np.searchsorted(y, grid, side="right") / n
        d = np.abs(cdf_x - cdf_y).max()
        crit = 1.628 * np.sqrt(2.0 / n)     # two-sample KS at the 1% level
        assert d < crit

    def test_zero_dim_rejected(self):
        with pytest.raises(ValueError):
            sample_haar_unitary(0, Seed(0))


class TestGue:
    def test_hermitian_exact(self):
        h = sample_gue(5, Seed(1))
        assert np.array_equal(h, h.conj().T)

    def test_entry_variances(self):
        n = 100_000
        hs = gue_batch(Seed(2).rng(), n, 4)
        se = np.sqrt(2.0 / n)           # variance-of-variance SE = var * sqrt(2/n)
        assert abs(hs[:, 0, 0].real.var(ddof=1) - 1.0) < 3 * se
        assert abs(hs[:, 0, 1].real.var(ddof=1) - 0.5) < 3 * 0.5 * se
        assert abs(hs[:, 0, 1].imag.var(ddof=1) - 0.5) < 3 * 0.5 * se

    def test_mean_eigenvalue_zero(self):
        hs = gue_batch(Seed(4).rng(), 100_000, 2)
        ev = np.linalg.eigvalsh(hs)
        m = ev.mean(axis=1)
        assert abs(m.mean()) < 3 * m.std(ddof=1) / np.sqrt(len(m))

    def test_trace_square_moment(self):
        for dim in (2, 4):
            hs = gue_batch(Seed(6, path=(dim,)).rng(), 100_000, dim)
            tr2 = np.einsum("nij,nji->n", hs, hs).real
            se = tr2.std(ddof=1) / np.sqrt(len(tr2))
            assert abs(tr2.mean() - dim**2) < 3 * se

    def test_zero_dim_rejected(self):
        with pytest.raises(ValueError):
            sample_gue(0, Seed(0))


class TestPerturbedUnitary:
    def test_alpha_zero_identity(self):
        u = sample_haar_unitary(4, Seed(7))
        h = sample_gue(4, Seed(8))
        assert np.abs(perturbed_unitary(u, h, 0.0) - u).max() < 1e-12

    def test_unitary_output(self):
        rng = Seed(9).rng()
        us = haar_batch(rng, 20, 4)
        hs = gue_batch(rng, 20, 4)
        for u, h in zip(us, hs):
            assert unitarity_defect(perturbed_unitary(u, h, 0.37)) < 1e-10

    def test_identity_generator_gives_global_phase(self):
        u = sample_haar_unitary(4, Seed(10))
        out = perturbed_unitary(u, np.eye(4, dtype=complex), np.pi)
        assert np.abs(out + u).max() < 1e-10

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            perturbed_unitary(np.eye(4, dtype=complex), np.eye(3, dtype=complex), 0.1)


class TestGateApplication:
    def test_identity_gate(self):
        state = haar_batch(Seed(12).rng(), 1, 16)[0][:, 0]
        out = apply_two_qubit_gate(state, np.eye(4, dtype=complex), 3, 1)
        assert np.abs(out - state).max() < 1e-12

    def test_swap_on_basis_state(self):
        state = basis_state(2, 0b01)          # qubit 0 set
        out = apply_two_qubit_gate(state, SWAP, 0, 1)
        assert abs(out[0b10] - 1.0) < 1e-12   # moved to qubit 1

    def test_norm_preserved(self):
        rng = Seed(13).rng()
        state = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        state /= np.linalg.norm(state)
        for k in range(50):
            gate = haar_batch(rng, 1, 4)[0]
            q1, q2 = rng.choice(5, size=2, replace=False)
            state = apply_two_qubit_gate(state, gate, int(q1), int(q2))
            assert abs(np.vdot(state, state).real - 1.0) < 1e-10

    def test_against_index_oracle(self):
        rng = Seed(14).rng()
        for k in range(8):
            L = int(rng.integers(2, 6))
            state = rng.standard_normal(2**L) + 1j * rng.standard_normal(2**L)
            state /= np.linalg.norm(state)
            gate = haar_batch(rng, 1, 4)[0]
            q1, q2 = rng.choice(L, size=2, replace=False)
            got = apply_two_qubit_gate(state, gate, int(q1), int(q2))
            ref = apply_gate_by_index(state, gate, int(q1), int(q2))
            assert np.abs(got - ref).max() < 1e-12

    def test_pair_layer_matches_single_gates(self):
        rng = Seed(15).rng()
        L = 6
        state = rng.standard_normal(2**L) + 1j * rng.standard_normal(2**L)
        state /= np.linalg.norm(state)
        gates = haar_batch(rng, L // 2, 4)
        got = apply_pair_layer(state, gates)
        ref = state
        for r in range(L // 2):
            ref = apply_two_qubit_gate(ref, gates[r], 2 * r + 1, 2 * r)
        assert np.abs(got - ref).max() < 1e-12

    def test_bad_qubits(self):
        state = zero_state(3)
        with pytest.raises(IndexError):
            apply_two_qubit_gate(state, SWAP, 1, 1)
        with pytest.raises(IndexError):
            apply_two_qubit_gate(state, SWAP, 0, 3)


class TestQubitPermutation:
    def test_identity(self):
        state = haar_batch(Seed(16).rng(), 1, 8)[0][:, 0]
        out = apply_qubit_permutation(state, [0, 1, 2])
        assert np.abs(out - state).max() < 1e-12

    def test_single_transposition(self):
        state = basis_state(2, 0b01)
        out = apply_qubit_permutation(state, [1, 0])
        assert abs(out[0b10] - 1.0) < 1e-12

    def test_round_trip_exact(self):
        rng = Seed(17).rng()
        L = 6
        state = rng.standard_normal(2**L) + 1j * rng.standard_normal(2**L)
        image = rng.permutation(L)
        inverse = np.argsort(image)
        back = apply_qubit_permutation(apply_qubit_permutation(state, image), inverse)
        assert np.array_equal(back, state)

    def test_against_index_oracle(self):
        rng = Seed(18).rng()
        for k in range(10):
            L = int(rng.integers(1, 7))
            state = rng.standard_normal(2**L) + 1j * rng.standard_normal(2**L)
            image = rng.permutation(L)
            got = apply_qubit_permutation(state, image)
            ref = apply_perm_by_index(state, image)
            assert np.abs(got - ref).max() < 1e-12

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            apply_qubit_permutation(zero_state(3), [0, 1])


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_norm_conservation_property(L, seed_value):
    rng = Seed(seed_value).rng()
    state = zero_state(L)
    gates = haar_batch(rng, 3, 4)
    for gate in gates:
        q1, q2 = rng.choice(L, size=2, replace=False)
        state = apply_two_qubit_gate(state, gate, int(q1), int(q2))
        state = apply_qubit_permutation(state, rng.permutation(L))
    assert abs(np.vdot(state, state).real - 1.0) < 1e-10


def test_fidelity_of_identical_states():
    state = haar_batch(Seed(19).rng(), 1, 16)[0][:, 0]
    assert abs(fidelity(state, state) - 1.0) < 1e-12


def test_norm_survives_ten_thousand_invocations():
    rng = Seed(20).rng()
    L = 3
    state = zero_state(L)
    gates = haar_batch(rng, 100, 4)
    for k in range(10_000):
        if k % 2:
            q1, q2 = rng.choice(L, size=2, replace=False)
            state = apply_two_qubit_gate(state, gates[k % 100], int(q1), int(q2))
        else:
            state = apply_qubit_permutation(state, rng.permutation(L))
    assert abs(np.vdot(state, state).real - 1.0) < 1e-10
