"""Centralized numerical tolerances and capacity guards.

Every module pulls its thresholds from here so a run can be reproduced from
the single record embedded in CLI outputs.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # matrix symmetry/validation
    hermiticity: float = 1e-12
    unit_trace: float = 1e-8
    trace_match: float = 1e-10
    marginal_match: float = 1e-8
    # Jacobi eigensolver
    jacobi_offdiag: float = 1e-14    # relative to ||A||_F
    jacobi_max_sweeps: int = 100
    eig_residual: float = 1e-9       # relative max |A u - lambda u|
    # spectral functions
    support_cutoff: float = 1e-12    # eigenvalues below this are treated as 0
    psd_clamp: float = 1e-10         # negatives this small are clamped to 0
    psd_fail: float = 1e-6           # negatives beyond this raise NotPSDError
    sqrt_square: float = 1e-8
    # bound evaluation
    bound_slack: float = 1e-9        # holds <=> slack >= -bound_slack
    recon_frobenius: float = 1e-8    # ensemble reconstruction check
    ef_sweep_tol: float = 1e-10      # optimizer sweep improvement threshold


@dataclass(frozen=True)
class Capacities:
    state_dim: int = 200_000         # max antisymmetric basis dimension
    tensor_dim: int = 4096           # max dense tensor-product dimension
    brute_force: int = 100_000       # max M**N for the dense oracle
    elem_terms: int = 1_000_000      # max subset-sum terms in elem_sym_direct
    dense_eig: int = 512             # max dimension fed to the dense eigensolver
    max_modes: int = 64              # bitmask width
    ef_rank: int = 64                # max support rank accepted by ef_optimize


TOL = Tolerances()
CAP = Capacities()


def tolerances_dict(tol: Tolerances = TOL) -> dict:
    """Serializable copy of the tolerance record (for report metadata)."""
    return dataclasses.asdict(tol)


def capacities_dict(cap: Capacities = CAP) -> dict:
    return dataclasses.asdict(cap)
