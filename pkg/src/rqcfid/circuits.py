"""Paired ideal/faulty simulation of the three circuit families.

Each trial evolves two statevectors from the same initial basis state.  Both
consume identical ideal draws (permutations, Haar gates, global R layers);
only the faulty state sees the noise: omitted/pulsed swaps and GUE-perturbed
gates.  Setting alpha = 0 and p = 0 makes the two states bit-identical.

Per-trial draw order (fixed so results are reproducible):
  circuit stream:    T permutations (layer order), then the T*L/2 Haar gates
                     (layer-major), then, for the solvable model, the two
                     global Haar unitaries of each layer in layer order;
  gate-noise stream: all T*L/2 GUE generators at once (skipped when alpha=0);
  perm-noise stream: per layer, one coin (omission) or one beta (pulse) per
                     scheduled swap, in schedule order;
  init stream:       a single basis-state index (random-basis policy only).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .routing import (Architecture, NoiseParams, Permutation,
                      apply_faulty_schedule_beta, decompose, realize_faulty)
from .seeding import (Seed, STREAM_CIRCUIT, STREAM_GATE_NOISE, STREAM_INIT,
                      STREAM_PERM_NOISE)

ORIGINAL = "original"
SOLVABLE = "solvable"
BRICKWALL = "brickwall"

ZERO_STATE = "zero"
RANDOM_BASIS_STATE = "random_basis"

_SOLVABLE_MAX_QUBITS = 12   # dense 2^L x 2^L Haar unitaries


@dataclass(frozen=True)
class CircuitConfig:
    num_qubits: int
    depth: int
    arch: Architecture
    noise: NoiseParams
    model: str = ORIGINAL
    initial_state: str = ZERO_STATE

    def __post_init__(self):
        if self.num_qubits < 2 or self.num_qubits % 2:
            raise ValueError("need an even number of qubits >= 2")
        if self.depth < 1:
            raise ValueError("need at least one layer")
        if self.model not in (ORIGINAL, SOLVABLE, BRICKWALL):
            raise ValueError(f"unknown model {self.model!r}")
        if self.initial_state not in (ZERO_STATE, RANDOM_BASIS_STATE):
            raise ValueError(f"unknown initial-state policy {self.initial_state!r}")
        if self.model == SOLVABLE and self.num_qubits > _SOLVABLE_MAX_QUBITS:
            raise ValueError(
                f"solvable model is limited to {_SOLVABLE_MAX_QUBITS} qubits "
                "(dense global unitaries)")
        if self.arch.kind == "grid" and self.arch.num_qubits != self.num_qubits:
            raise ValueError("grid size does not match the qubit count")


@dataclass(frozen=True)
class TrialResult:
    fidelity: float
    seed: Seed
    h_ideal: Optional[float] = None
    h_faulty: Optional[float] = None


def _trial_rngs(seed: Seed):
    return (seed.with_stream(STREAM_CIRCUIT).rng(),
            seed.with_stream(STREAM_GATE_NOISE).rng(),
            seed.with_stream(STREAM_PERM_NOISE).rng(),
            seed.with_stream(STREAM_INIT).rng())


def _initial_state(config: CircuitConfig, init_rng) -> np.ndarray:
    if config.initial_state == RANDOM_BASIS_STATE:
        index = int(init_rng.integers(0, 2**config.num_qubits))
        return linalg.basis_state(config.num_qubits, index)
    return linalg.zero_state(config.num_qubits)


def _evolve_pair(config: CircuitConfig, seed: Seed):
    """Run one trial of the original or solvable model; returns the ideal and
    faulty output statevectors."""
    L, T = config.num_qubits, config.depth
    noise = config.noise
    circ, gate_noise, perm_noise, init = _trial_rngs(seed)

    perms = [Permutation(tuple(int(k) for k in circ.permutation(L))) for _ in range(T)]
    gates = linalg.haar_batch(circ, T * (L // 2), 4).reshape(T, L // 2, 4, 4)
    if noise.alpha > 0.0:
        gens = linalg.gue_batch(gate_noise, T * (L // 2), 4).reshape(T, L // 2, 4, 4)
        noisy_gates = linalg.perturb_batch(gates, gens, noise.alpha)
    else:
        noisy_gates = gates

    psi = _initial_state(config, init)
    phi = psi.copy()
    for tau in range(T):
        if config.model == SOLVABLE:
            r1 = linalg.haar_batch(circ, 1, 2**L)[0]
            psi = r1 @ psi
            phi = r1 @ phi
        perm = perms[tau]
        image = np.asarray(perm.image)
        psi = linalg.apply_qubit_permutation(psi, image)
        schedule = decompose(perm, config.arch)
        if noise.pulse_mode:
            phi = apply_faulty_schedule_beta(phi, schedule, noise.sigma, perm_noise)
        else:
            faulty = realize_faulty(schedule, noise.p, perm_noise)
            phi = linalg.apply_qubit_permutation(phi, np.asarray(faulty.image))
        if config.model == SOLVABLE:
            r2 = linalg.haar_batch(circ, 1, 2**L)[0]
            psi = r2 @ psi
            phi = r2 @ phi
        psi = linalg.apply_pair_layer(psi, gates[tau])
        phi = linalg.apply_pair_layer(phi, noisy_gates[tau])
    return psi, phi


def run_fidelity_trial(config: CircuitConfig, seed: Seed) -> TrialResult:
    """One paired trial of the original model; fidelity = |<ideal|faulty>|^2."""
    if config.model != ORIGINAL:
        raise ValueError("run_fidelity_trial expects the original model")
    psi, phi = _evolve_pair(config, seed)
    return TrialResult(fidelity=linalg.fidelity(psi, phi), seed=seed)


def run_solvable_trial(config: CircuitConfig, seed: Seed) -> TrialResult:
    """Original circuit with faultless global Haar unitaries wrapping each
    permutation (shared by the ideal and faulty branches)."""
    if config.model != SOLVABLE:
        raise ValueError("run_solvable_trial expects the solvable model")
    psi, phi = _evolve_pair(config, seed)
    return TrialResult(fidelity=linalg.fidelity(psi, phi), seed=seed)


def _shift_image(L: int) -> np.ndarray:
    # qubit k -> k-1 (mod L): staggers the fixed gate slots by one position
    return np.array([(k - 1) % L for k in range(L)])


def run_brickwall_trial(num_qubits: int, depth: int, alpha: float,
                        seed: Seed) -> TrialResult:
    """Brick-wall circuit: alternating even/odd nearest-neighbour gate layers
    with cyclic boundary; permutations are faultless shifts, so only the gate
    noise alpha acts."""
    L, T = num_qubits, depth
    if L < 2 or L % 2:
        raise ValueError("need an even number of qubits >= 2")
    if T < 1:
        raise ValueError("need at least one layer")
    circ, gate_noise, _, _ = _trial_rngs(seed)
    gates = linalg.haar_batch(circ, T * (L // 2), 4).reshape(T, L // 2, 4, 4)
    if alpha > 0.0:
        gens = linalg.gue_batch(gate_noise, T * (L // 2), 4).reshape(T, L // 2, 4, 4)
        noisy_gates = linalg.perturb_batch(gates, gens, alpha)
    else:
        noisy_gates = gates

    shift = _shift_image(L)
    unshift = np.argsort(shift)
    psi = linalg.zero_state(L)
    phi = psi.copy()
    for tau in range(T):
        odd = tau % 2
        if odd:  # act on pairs (1,2), (3,4), ..., (L-1, 0)
            psi = linalg.apply_qubit_permutation(psi, shift)
            phi = linalg.apply_qubit_permutation(phi, shift)
        psi = linalg.apply_pair_layer(psi, gates[tau])
        phi = linalg.apply_pair_layer(phi, noisy_gates[tau])
        if odd:
            psi = linalg.apply_qubit_permutation(psi, unshift)
            phi = linalg.apply_qubit_permutation(phi, unshift)
    return TrialResult(fidelity=linalg.fidelity(psi, phi), seed=seed)


# ---------------------------------------------------------------- heavy output

def heavy_output_stats(ideal_probs: np.ndarray, faulty_probs: np.ndarray):
    """Heavy-output frequencies of both distributions.

    The heavy set is the basis states whose ideal probability strictly
    exceeds the median of all 2^L ideal probabilities (median = average of
    the two central order statistics).
    """
    n = len(ideal_probs)
    mid = n // 2
    part = np.partition(ideal_probs, [mid - 1, mid])
    median = 0.5 * (part[mid - 1] + part[mid])
    heavy = ideal_probs > median
    return float(ideal_probs[heavy].sum()), float(faulty_probs[heavy].sum())


def run_heavy_output_trial(config: CircuitConfig, seed: Seed) -> TrialResult:
    """Fidelity plus the (h_ideal, h_faulty) heavy-output pair for one trial."""
    if config.model != ORIGINAL:
        raise ValueError("run_heavy_output_trial expects the original model")
    psi, phi = _evolve_pair(config, seed)
    h_ideal, h_faulty = heavy_output_stats(np.abs(psi) ** 2, np.abs(phi) ** 2)
    return TrialResult(fidelity=linalg.fidelity(psi, phi), seed=seed,
                       h_ideal=h_ideal, h_faulty=h_faulty)
