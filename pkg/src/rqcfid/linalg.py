"""Random-matrix sampling and statevector kernels.

States are dense complex128 arrays of length 2**L.  Bit convention (fixed once,
enforced by tests): qubit k indexes bit k of the basis-state integer, i.e.
little-endian, so basis index b = sum_k bit_k(b) * 2**k.
"""
from __future__ import annotations

import numpy as np

from .seeding import Seed

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


# ---------------------------------------------------------------- sampling

def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian entries (unit total variance per entry)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * _INV_SQRT2


def haar_batch(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """n Haar unitaries of size dim, via QR of Ginibre with phase correction.

    Multiplying Q's columns by the phases of R's diagonal removes the sign
    ambiguity of QR and makes the distribution exactly Haar.
    """
    z = _ginibre(rng, (n, dim, dim))
    q, r = np.linalg.qr(z)
    d = np.einsum("nii->ni", r)
    return q * (d / np.abs(d))[:, None, :]


def gue_batch(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """n GUE matrices: density ~ exp(-tr H^2 / 2).

    Diagonal entries are real N(0,1); off-diagonal real and imaginary parts
    are N(0,1/2), so E[tr H^2] = dim^2.
    """
    g = _ginibre(rng, (n, dim, dim))
    return (g + g.conj().transpose(0, 2, 1)) * _INV_SQRT2


def sample_haar_unitary(dim: int, seed: Seed) -> np.ndarray:
    """One Haar-distributed dim x dim unitary."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    return haar_batch(seed.rng(), 1, dim)[0]


def sample_gue(dim: int, seed: Seed) -> np.ndarray:
    """One GUE(dim) Hermitian matrix."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    return gue_batch(seed.rng(), 1, dim)[0]


def perturb_batch(u: np.ndarray, h: np.ndarray, alpha: float) -> np.ndarray:
    """exp(i*alpha*h) @ u for stacked matrices, via eigendecomposition of h.

    The eigendecomposition keeps the result exactly unitary (up to rounding),
    unlike Pade-style expm.
    """
    if alpha == 0.0:
        return u
    w, v = np.linalg.eigh(h)
    phases = np.exp(1j * alpha * w)
    e = np.einsum("...ij,...j,...kj->...ik", v, phases, v.conj())
    return e @ u


def perturbed_unitary(u: np.ndarray, h: np.ndarray, alpha: float) -> np.ndarray:
    """Noisy gate exp(i*alpha*h) @ u; u unitary, h Hermitian, alpha >= 0."""
    if u.shape != h.shape or u.shape[-1] != u.shape[-2]:
        raise ValueError(f"shape mismatch: u {u.shape} vs h {h.shape}")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return perturb_batch(u, h, alpha)


# ---------------------------------------------------------------- states

def zero_state(num_qubits: int) -> np.ndarray:
    return basis_state(num_qubits, 0)


def basis_state(num_qubits: int, index: int) -> np.ndarray:
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    state = np.zeros(2**num_qubits, dtype=np.complex128)
    state[index] = 1.0
    return state


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2."""
    ov = np.vdot(a, b)
    return float((ov * ov.conjugate()).real)


def num_qubits_of(state: np.ndarray) -> int:
    L = int(np.log2(len(state)) + 0.5)
    if 2**L != len(state):
        raise ValueError(f"state length {len(state)} is not a power of two")
    return L


# ---------------------------------------------------------------- kernels

def apply_two_qubit_gate(state: np.ndarray, gate: np.ndarray, q1: int, q2: int) -> np.ndarray:
    """Apply a 4x4 gate to qubits (q1, q2); q1 is the more-significant slot.

    The gate's 4-dim index is 2*bit(q1) + bit(q2).  Returns a new state.
    """
    L = num_qubits_of(state)
    if q1 == q2 or not (0 <= q1 < L) or not (0 <= q2 < L):
        raise IndexError(f"bad qubit pair ({q1}, {q2}) for {L} qubits")
    if gate.shape != (4, 4):
        raise ValueError(f"gate must be 4x4, got {gate.shape}")
    t = state.reshape([2] * L)
    a1, a2 = L - 1 - q1, L - 1 - q2          # tensor axis of each qubit
    t = np.moveaxis(t, (a1, a2), (0, 1)).reshape(4, -1)
    t = gate @ t
    t = np.moveaxis(t.reshape([2, 2] + [2] * (L - 2)), (0, 1), (a1, a2))
    return np.ascontiguousarray(t).reshape(-1)


def apply_pair_layer(state: np.ndarray, gates: np.ndarray) -> np.ndarray:
    """Apply gates[r] to qubit pair (2r, 2r+1) for r = 0..L/2-1.

    Equivalent to repeated apply_two_qubit_gate(..., q1=2r+1, q2=2r) but
    grouping bits pairwise up front; gates has shape (L/2, 4, 4).
    """
    npair = len(gates)
    t = state.reshape([4] * npair)           # axis j <-> pair npair-1-j
    for r in range(npair):
        ax = npair - 1 - r
        t = np.moveaxis(np.tensordot(gates[r], t, axes=([1], [ax])), 0, ax)
    return t.reshape(-1)


def apply_qubit_permutation(state: np.ndarray, image) -> np.ndarray:
    """Move qubit k to position image[k]: bit image[k] of the new basis index
    equals bit k of the old one."""
    L = num_qubits_of(state)
    image = np.asarray(image, dtype=np.int64)
    if len(image) != L:
        raise ValueError(f"permutation acts on {len(image)} qubits, state has {L}")
    inv = np.empty(L, dtype=np.int64)
    inv[image] = np.arange(L)
    # new tensor axis a holds new bit L-1-a, which comes from old bit inv[L-1-a]
    order = [L - 1 - inv[L - 1 - a] for a in range(L)]
    t = state.reshape([2] * L).transpose(order)
    return np.ascontiguousarray(t).reshape(-1)
