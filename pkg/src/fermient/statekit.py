"""Construction and serialization of N-fermion states on the ranked basis.

States are amplitude vectors over the colex-ranked antisymmetric basis.
Random states draw from a Philox counter-based generator so every seed is
bit-reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import CAP, TOL, Capacities, Tolerances
from .errors import (CapacityError, InvalidModeSetError, NormalizationError,
                     ShapeError)
from .fockbasis import RankedBasis, binom, modeset, rank

_FMT = "{:.17g}"  # exact decimal round trip for doubles


@dataclass
class PureStateN:
    """Unit amplitude vector over RankedBasis(M, N)."""

    basis: RankedBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dim,):
            raise ShapeError(
                f"amplitude vector has shape {self.amplitudes.shape}, basis dim {self.basis.dim}")
        nrm = float(np.linalg.norm(self.amplitudes))
        if abs(nrm - 1.0) > 1e-12:
            raise NormalizationError(f"state norm {nrm!r} is not 1 within 1e-12")


@dataclass
class MixedStateN:
    """Convex mixture of pure N-fermion states on a common basis."""

    basis: RankedBasis
    terms: list[tuple[float, PureStateN]]


@dataclass(frozen=True)
class YangParams:
    """Paired-state parameters: n occupied pairs out of m available (M=2m, N=2n)."""

    m: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= self.m <= 32:
            raise InvalidModeSetError(f"need 1 <= n <= m <= 32, got m={self.m} n={self.n}")


def _guard_dim(basis: RankedBasis, cap: Capacities) -> None:
    if basis.dim > cap.state_dim:
        raise CapacityError(
            f"basis dimension {basis.dim} exceeds capacity {cap.state_dim}")


def slater_state(basis: RankedBasis, occupied: Iterable[int] | int) -> PureStateN:
    """Single determinant with the given occupied modes."""
    bits = occupied if isinstance(occupied, int) else modeset(occupied)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[rank(basis, bits)] = 1.0
    return PureStateN(basis, amps)


def pair_modes(j: int) -> int:
    """Bitmask of pair j (1-based): modes 2j-2 and 2j-1."""
    return 0b11 << (2 * (j - 1))


def yang_state(params: YangParams, cap: Capacities = CAP) -> PureStateN:
    """Equal-amplitude superposition of all n-pair determinants on m pairs."""
    m, n = params.m, params.n
    basis = RankedBasis(2 * m, 2 * n)
    _guard_dim(basis, cap)
    pairs = RankedBasis(m, n)
    amp = 1.0 / math.sqrt(binom(m, n))
    amps = np.zeros(basis.dim, dtype=complex)
    for choice in pairs:  # bit j-1 of `choice` selects pair j
        bits = 0
        while choice:
            low = choice & -choice
            bits |= pair_modes(low.bit_length())
            choice ^= low
        amps[rank(basis, bits)] = amp
    return PureStateN(basis, amps)


def chi_pair_vector(m: int) -> PureStateN:
    """Unit-normalized uniform superposition of the m single-pair determinants."""
    return yang_state(YangParams(m, 1))


def random_pure_state(basis: RankedBasis, seed: int, cap: Capacities = CAP) -> PureStateN:
    """Haar-like random state: complex standard normals from Philox, normalized."""
    _guard_dim(basis, cap)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    z = rng.standard_normal((2, basis.dim))
    amps = z[0] + 1j * z[1]
    amps /= np.linalg.norm(amps)
    return PureStateN(basis, amps)


def convex_mixture(weights: Sequence[float], states: Sequence[PureStateN],
                   tol: Tolerances = TOL) -> MixedStateN:
    """Mixture of pure states; weights must be positive and sum to 1 within 1e-9."""
    if len(weights) != len(states) or not states:
        raise ShapeError("need equally many (>=1) weights and states")
    basis = states[0].basis
    for st in states[1:]:
        if st.basis != basis:
            raise ShapeError("all states in a mixture must share one basis")
    w = [float(x) for x in weights]
    if any(x <= 0.0 for x in w):
        raise NormalizationError("mixture weights must be strictly positive")
    total = sum(w)
    if abs(total - 1.0) > 1e-9:
        raise NormalizationError(f"weights sum to {total!r}, not 1 within 1e-9")
    w = [x / total for x in w]
    return MixedStateN(basis, list(zip(w, list(states))))


def as_mixture(state: PureStateN | MixedStateN) -> MixedStateN:
    if isinstance(state, MixedStateN):
        return state
    return MixedStateN(state.basis, [(1.0, state)])


def wedge_density(state: PureStateN | MixedStateN) -> np.ndarray:
    """Dense density matrix on the ranked antisymmetric basis."""
    mix = as_mixture(state)
    rho = np.zeros((mix.basis.dim, mix.basis.dim), dtype=complex)
    for w, st in mix.terms:
        rho += w * np.outer(st.amplitudes, st.amplitudes.conj())
    return rho


def dumps_state(state: PureStateN) -> str:
    """fermistate text format: header `fermistate M N`, then `index re im` rows."""
    lines = [f"fermistate {state.basis.n_modes} {state.basis.n_particles}"]
    for idx in np.flatnonzero(state.amplitudes):
        a = state.amplitudes[idx]
        lines.append(f"{int(idx)} {_FMT.format(a.real)} {_FMT.format(a.imag)}")
    return "\n".join(lines) + "\n"


def loads_state(text: str) -> PureStateN:
    # `#` lines are comments (carriers of tool metadata), skipped on load
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("fermistate"):
        raise ShapeError("not a fermistate file (missing header)")
    try:
        _, m_s, n_s = lines[0].split()
        basis = RankedBasis(int(m_s), int(n_s))
    except ValueError as exc:
        raise ShapeError(f"malformed fermistate header: {lines[0]!r}") from exc
    amps = np.zeros(basis.dim, dtype=complex)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ShapeError(f"malformed fermistate row: {ln!r}")
        idx = int(parts[0])
        if not 0 <= idx < basis.dim:
            raise ShapeError(f"amplitude index {idx} outside basis of dim {basis.dim}")
        amps[idx] = float(parts[1]) + 1j * float(parts[2])
    return PureStateN(basis, amps)


def save_state(state: PureStateN, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_state(state))


def load_state(path) -> PureStateN:
    with open(path, "r", encoding="ascii") as fh:
        return loads_state(fh.read())
