"""Fidelity decay of random quantum circuits with faulty two-qubit gates and
faulty swap-network permutations: paired Monte Carlo simulation, closed-form
predictions, routing statistics and the quantum-volume threshold map."""

from .analytics import (asymptotic_fidelity, brickwall_fidelity_perturbative,
                        delta_formula, f_approx, f_exact,
                        fidelity_from_heavy_output, qv_contour,
                        solvable_fidelity, swap_omission_prob)
from .circuits import (BRICKWALL, ORIGINAL, SOLVABLE, CircuitConfig,
                       TrialResult, run_brickwall_trial, run_fidelity_trial,
                       run_heavy_output_trial, run_solvable_trial)
from .experiments import (Estimate, FitResult, SweepSpec, estimate,
                          fidelity_estimate, hu_vs_f_scatter, run_sweep,
                          write_results)
from .linalg import (apply_qubit_permutation, apply_two_qubit_gate,
                     perturbed_unitary, sample_gue, sample_haar_unitary)
from .routing import (Architecture, NoiseParams, Permutation, SwapSchedule,
                      build_marking, cycle_structure, decompose,
                      decompose_fully_connected, decompose_grid,
                      decompose_line, error_factor_exact_fc, error_factor_mc,
                      realize_faulty, routing_stats, sample_permutation)
from .seeding import Seed

__version__ = "0.1.0"
