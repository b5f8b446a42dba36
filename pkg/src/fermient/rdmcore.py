"""Reduced density matrices of N-fermion states.

The k-particle RDM of |psi> on the wedge basis is

    rho_k(I, J) = c * sum_K  sgn(I,K) sgn(J,K) psi_{I u K} conj(psi_{J u K})

with K running over the (N-k)-subsets disjoint from both I and J, and
c = 1/C(N,k) for unit trace ("physics" normalization scales the trace to
C(N,k) instead). The inner loop accumulates one rank-1 contribution per K,
with index/sign tables cached per (M, N, k).

A dense oracle (`brute_force_reduce`) embeds the state into the full M**N
tensor power with explicit antisymmetrization signs, partial-traces there,
and compresses back through the wedge isometry; it exists to cross-check the
fast path and is capacity-guarded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import CAP, TOL, Capacities, Tolerances
from .errors import (CapacityError, NormalizationError, RangeError,
                     ShapeError)
from .fockbasis import (RankedBasis, binom, enumerate_supersets, merge_sign,
                        modes_of, rank, unrank)
from .statekit import MixedStateN, PureStateN, as_mixture

_FMT = "{:.17g}"

UNIT = "unit"
PHYSICS = "physics"


@dataclass
class ReducedDM:
    """k-particle RDM on the colex wedge basis RankedBasis(M, k)."""

    k: int
    basis: RankedBasis
    matrix: np.ndarray
    normalization: str = UNIT
    n_particles: int | None = None  # N of the source state, if known
    source: str = ""


@dataclass
class TensorDM:
    """Density matrix on (C^local_dim)^(x parties), row-major party ordering.

    `factors`, when present, holds (weights, vectors) with
    matrix == sum_i w_i |v_i><v_i| exactly; low-rank paths use it to avoid
    dense eigensolves at large dimension. `matrix` may be None for factored
    states too large to materialize densely.
    """

    parties: int
    local_dim: int
    matrix: np.ndarray | None
    factors: tuple[np.ndarray, np.ndarray] | None = None
    source: str = ""

    @property
    def dim(self) -> int:
        return self.local_dim ** self.parties

    def dense(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        w, vecs = self.factors
        return (vecs * w) @ vecs.conj().T


@lru_cache(maxsize=None)
def _reduction_table(M: int, N: int, k: int):
    """Per-complement gather tables: (wedge rows, state indices, merge signs)."""
    full = RankedBasis(M, N)
    sub = RankedBasis(M, k)
    comp = enumerate_supersets(sub, 0, N - k)
    out = []
    for K in comp:
        rows = []
        sidx = []
        sgns = []
        for I in enumerate_supersets(sub, K, k):
            rows.append(rank(sub, I))
            sidx.append(rank(full, I | K))
            sgns.append(merge_sign(I, K))
        out.append((np.asarray(rows), np.asarray(sidx), np.asarray(sgns, dtype=float)))
    return out


def reduce_pure(state: PureStateN, k: int) -> ReducedDM:
    """Unit-trace k-particle RDM of a pure state."""
    N = state.basis.n_particles
    M = state.basis.n_modes
    if not 1 <= k <= N:
        raise RangeError(f"need 1 <= k <= N={N}, got k={k}")
    sub = RankedBasis(M, k)
    rho = np.zeros((sub.dim, sub.dim), dtype=complex)
    amps = state.amplitudes
    for rows, sidx, sgns in _reduction_table(M, N, k):
        v = sgns * amps[sidx]
        rho[np.ix_(rows, rows)] += np.outer(v, v.conj())
    rho /= binom(N, k)
    return ReducedDM(k=k, basis=sub, matrix=rho, normalization=UNIT,
                     n_particles=N, source=f"reduce_pure(M={M},N={N},k={k})")


def reduce_mixed(state: MixedStateN | PureStateN, k: int) -> ReducedDM:
    """Weight-linear extension of reduce_pure to mixtures."""
    mix = as_mixture(state)
    N = mix.basis.n_particles
    M = mix.basis.n_modes
    rho = None
    for w, st in mix.terms:
        part = reduce_pure(st, k).matrix
        rho = w * part if rho is None else rho + w * part
    sub = RankedBasis(M, k)
    return ReducedDM(k=k, basis=sub, matrix=rho, normalization=UNIT,
                     n_particles=N, source=f"reduce_mixed(M={M},N={N},k={k})")


def ptrace_rdm(r: ReducedDM, k_out: int) -> ReducedDM:
    """Trace a unit-trace k-RDM down to k_out < k particles."""
    if r.normalization != UNIT:
        raise NormalizationError("ptrace_rdm expects a unit-trace RDM")
    if not 1 <= k_out < r.k:
        raise RangeError(f"need 1 <= k_out < k={r.k}, got {k_out}")
    M = r.basis.n_modes
    sub = RankedBasis(M, k_out)
    out = np.zeros((sub.dim, sub.dim), dtype=complex)
    for X in enumerate_supersets(sub, 0, r.k - k_out):
        rows = []
        fulls = []
        sgns = []
        for A in enumerate_supersets(sub, X, k_out):
            rows.append(rank(sub, A))
            fulls.append(rank(r.basis, A | X))
            sgns.append(merge_sign(A, X))
        rows = np.asarray(rows)
        fulls = np.asarray(fulls)
        s = np.asarray(sgns, dtype=float)
        out[np.ix_(rows, rows)] += np.outer(s, s) * r.matrix[np.ix_(fulls, fulls)]
    out /= binom(r.k, k_out)
    return ReducedDM(k=k_out, basis=sub, matrix=out, normalization=UNIT,
                     n_particles=r.n_particles, source=f"ptrace_rdm<-{r.source}")


def rescale(r: ReducedDM, target: str, tol: Tolerances = TOL) -> ReducedDM:
    """Switch between unit-trace and physics (trace C(N,k)) normalization."""
    if target not in (UNIT, PHYSICS):
        raise NormalizationError(f"unknown normalization tag {target!r}")
    if target == r.normalization:
        return ReducedDM(r.k, r.basis, r.matrix.copy(), r.normalization,
                         r.n_particles, r.source)
    if r.n_particles is None:
        raise NormalizationError(
            "particle count unknown; cannot rescale (load a physics-tagged file "
            "or construct the RDM from a state)")
    phys = float(binom(r.n_particles, r.k))
    cur = float(np.trace(r.matrix).real)
    want = phys if target == PHYSICS else 1.0
    have = phys if r.normalization == PHYSICS else 1.0
    if abs(cur - have) > tol.trace_match * max(have, 1.0):
        raise NormalizationError(f"trace {cur!r} inconsistent with tag {r.normalization!r}")
    return ReducedDM(r.k, r.basis, r.matrix * (want / have), target,
                     r.n_particles, r.source)


# ---------------------------------------------------------------------------
# tensor-space embeddings

@lru_cache(maxsize=None)
def _perm_signs(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    out = []
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        out.append((perm, -1 if inv & 1 else 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _wedge_isometry(M: int, k: int) -> np.ndarray:
    """Isometry W: wedge basis -> (C^M)^(x k); columns are antisymmetrized kets."""
    sub = RankedBasis(M, k)
    W = np.zeros((M ** k, sub.dim), dtype=complex)
    nrm = 1.0 / math.sqrt(math.factorial(k))
    for col in range(sub.dim):
        ms = modes_of(unrank(sub, col))
        for perm, sgn in _perm_signs(k):
            pos = 0
            for t in range(k):
                pos = pos * M + ms[perm[t]]
            W[pos, col] = sgn * nrm
    return W


def embed_wedge_to_tensor(r: ReducedDM, cap: Capacities = CAP) -> TensorDM:
    """Embed a 2-particle wedge RDM into C^M x C^M via {i<j} -> (|ij>-|ji>)/sqrt(2)."""
    if r.k != 2:
        raise ShapeError(f"embedding is defined for k=2, got k={r.k}")
    M = r.basis.n_modes
    if M * M > cap.tensor_dim:
        raise CapacityError(f"tensor dimension {M * M} exceeds capacity {cap.tensor_dim}")
    W = _wedge_isometry(M, 2)
    T = W @ r.matrix @ W.conj().T
    return TensorDM(parties=2, local_dim=M, matrix=T, source=f"embed<-{r.source}")


@lru_cache(maxsize=None)
def _swap_matrix(M: int) -> np.ndarray:
    S = np.zeros((M * M, M * M))
    for a in range(M):
        for b in range(M):
            S[a * M + b, b * M + a] = 1.0
    return S


def project_antisymmetric(t: TensorDM) -> TensorDM:
    """Compress a two-party matrix with P = (1 - SWAP)/2 on both sides.

    Output trace is the antisymmetric weight of the input (not unit in
    general).
    """
    if t.parties != 2:
        raise ShapeError("antisymmetric projection is defined for two parties")
    P = 0.5 * (np.eye(t.local_dim ** 2) - _swap_matrix(t.local_dim))
    return TensorDM(parties=2, local_dim=t.local_dim,
                    matrix=P @ t.dense() @ P, source=f"antisym<-{t.source}")


def random_two_party_dm(local_dim: int, rank: int, seed: int) -> TensorDM:
    """Seeded random two-party density matrix: normalized Ginibre of given rank."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    d = local_dim * local_dim
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return TensorDM(parties=2, local_dim=local_dim, matrix=rho,
                    source=f"random(d={local_dim},rank={rank},seed={seed})")


def tensor_ptrace(t: TensorDM, keep: tuple[int, ...]) -> np.ndarray:
    """Partial trace keeping the given parties (ascending order preserved)."""
    keep = tuple(sorted(keep))
    if any(i < 0 or i >= t.parties for i in keep) or len(set(keep)) != len(keep):
        raise RangeError(f"bad party selection {keep} for {t.parties} parties")
    p = t.parties
    d = t.local_dim
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:p])
    col = [letters[p + i] if i in keep else letters[i] for i in range(p)]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    arr = t.dense().reshape((d,) * (2 * p))
    return np.einsum("".join(row) + "".join(col) + "->" + out,
                     arr).reshape(d ** len(keep), d ** len(keep))


def full_tensor_vector(state: PureStateN, cap: Capacities = CAP) -> np.ndarray:
    """Antisymmetrized embedding of |psi> into (C^M)^(x N), unit norm."""
    M = state.basis.n_modes
    N = state.basis.n_particles
    dim = M ** N
    if dim > cap.brute_force:
        raise CapacityError(f"M**N = {dim} exceeds brute-force capacity {cap.brute_force}")
    psi = np.zeros(dim, dtype=complex)
    nrm = 1.0 / math.sqrt(math.factorial(N))
    for idx in np.flatnonzero(state.amplitudes):
        ms = modes_of(unrank(state.basis, int(idx)))
        a = state.amplitudes[idx] * nrm
        for perm, sgn in _perm_signs(N):
            pos = 0
            for t in range(N):
                pos = pos * M + ms[perm[t]]
            psi[pos] += sgn * a
    return psi


def embed_state_full(state: PureStateN | MixedStateN, cap: Capacities = CAP) -> TensorDM:
    """Embed a (possibly mixed) N-fermion state as a factored TensorDM on (C^M)^N."""
    mix = as_mixture(state)
    M = mix.basis.n_modes
    N = mix.basis.n_particles
    weights = np.asarray([w for w, _ in mix.terms], dtype=float)
    vecs = np.stack([full_tensor_vector(st, cap) for _, st in mix.terms], axis=1)
    dim = M ** N
    dense = (vecs * weights) @ vecs.conj().T if dim <= cap.tensor_dim else None
    return TensorDM(parties=N, local_dim=M, matrix=dense,
                    factors=(weights, vecs), source=f"embed_full(M={M},N={N})")


def brute_force_reduce(state: PureStateN, k: int, cap: Capacities = CAP) -> ReducedDM:
    """Dense-oracle k-RDM: full tensor embedding, dense partial trace, compress."""
    M = state.basis.n_modes
    N = state.basis.n_particles
    if not 1 <= k <= N:
        raise RangeError(f"need 1 <= k <= N={N}, got k={k}")
    psi = full_tensor_vector(state, cap)
    block = psi.reshape(M ** k, M ** (N - k))
    W = _wedge_isometry(M, k)
    # contract the isometry first: W^+ (B B^+) W = (W^+ B)(W^+ B)^+, which
    # avoids the M^k x M^k intermediate entirely
    Y = W.conj().T @ block
    rho = Y @ Y.conj().T
    return ReducedDM(k=k, basis=RankedBasis(M, k), matrix=rho, normalization=UNIT,
                     n_particles=N, source=f"brute_force(M={M},N={N},k={k})")


# ---------------------------------------------------------------------------
# fermirdm text format

MAX_N_SEARCH = 64


def dumps_rdm(r: ReducedDM) -> str:
    """`fermirdm M k normtag` header, then one matrix row per line as re im pairs."""
    lines = [f"fermirdm {r.basis.n_modes} {r.k} {r.normalization}"]
    for row in r.matrix:
        parts = []
        for z in row:
            parts.append(_FMT.format(z.real))
            parts.append(_FMT.format(z.imag))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def loads_rdm(text: str) -> ReducedDM:
    # `#` lines are comments (carriers of tool metadata), skipped on load
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("fermirdm"):
        raise ShapeError("not a fermirdm file (missing header)")
    try:
        _, m_s, k_s, tag = lines[0].split()
        M, k = int(m_s), int(k_s)
    except ValueError as exc:
        raise ShapeError(f"malformed fermirdm header: {lines[0]!r}") from exc
    if tag not in (UNIT, PHYSICS):
        raise NormalizationError(f"unknown normalization tag {tag!r}")
    basis = RankedBasis(M, k)
    D = basis.dim
    if len(lines) - 1 != D:
        raise ShapeError(f"expected {D} matrix rows, found {len(lines) - 1}")
    mat = np.zeros((D, D), dtype=complex)
    for i, ln in enumerate(lines[1:]):
        vals = [float(x) for x in ln.split()]
        if len(vals) != 2 * D:
            raise ShapeError(f"row {i} has {len(vals)} numbers, expected {2 * D}")
        mat[i] = np.asarray(vals[0::2]) + 1j * np.asarray(vals[1::2])
    n_particles = None
    if tag == PHYSICS:
        # physics trace is C(N, k); recover N by exact search
        tr = float(np.trace(mat).real)
        for n_try in range(k, MAX_N_SEARCH + 1):
            if abs(tr - binom(n_try, k)) < 1e-6:
                n_particles = n_try
                break
    return ReducedDM(k=k, basis=basis, matrix=mat, normalization=tag,
                     n_particles=n_particles, source="loads_rdm")


def save_rdm(r: ReducedDM, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_rdm(r))


def load_rdm(path) -> ReducedDM:
    with open(path, "r", encoding="ascii") as fh:
        return loads_rdm(fh.read())
