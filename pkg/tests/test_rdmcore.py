import dataclasses
import math

import numpy as np
import pytest

from fermient import (
    CAP,
    PHYSICS,
    UNIT,
    CapacityError,
    NormalizationError,
    RangeError,
    RankedBasis,
    ShapeError,
    YangParams,
    brute_force_reduce,
    convex_mixture,
    dumps_rdm,
    embed_state_full,
    embed_wedge_to_tensor,
    load_rdm,
    loads_rdm,
    modeset,
    pair_modes,
    project_antisymmetric,
    ptrace_rdm,
    random_pure_state,
    random_two_party_dm,
    rank,
    reduce_mixed,
    reduce_pure,
    rescale,
    save_rdm,
    slater_state,
    tensor_ptrace,
    yang_state,
)


def _spectrum(mat):
    return np.sort(np.linalg.eigvalsh(mat))[::-1]


def test_slater_rdm_flat_spectra():
    st = slater_state(RankedBasis(6, 4), (0, 1, 2, 3))
    for k in (1, 2, 3):
        rho = reduce_pure(st, k)
        occ = math.comb(4, k)
        lam = _spectrum(rho.matrix)
        np.testing.assert_allclose(lam[:occ], 1.0 / occ, atol=1e-14)
        np.testing.assert_allclose(lam[occ:], 0.0, atol=1e-14)
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-13)


def test_slater_two_rdm_support():
    st = slater_state(RankedBasis(5, 3), (0, 2, 4))
    rho = reduce_pure(st, 2).matrix
    basis2 = RankedBasis(5, 2)
    inside = [rank(basis2, modeset(p)) for p in ((0, 2), (0, 4), (2, 4))]
    for i in range(basis2.dim):
        want = 1.0 / 3.0 if i in inside else 0.0
        assert rho[i, i].real == pytest.approx(want, abs=1e-14)
    off = rho.copy()
    off[np.diag_indices_from(off)] = 0.0
    assert np.abs(off).max() == 0.0  # determinants have diagonal RDMs


def test_yang_pair_rdm_spectrum():
    # m=3 pairs, n=2 occupied: one large eigenvalue, 14 equal small ones
    rho = reduce_pure(yang_state(YangParams(3, 2)), 2).matrix
    lam = _spectrum(rho)
    np.testing.assert_allclose(lam[0], 2.0 / 9.0, atol=1e-13)
    np.testing.assert_allclose(lam[1:], 1.0 / 18.0, atol=1e-13)


@pytest.mark.parametrize("m,n,diag_pair,offdiag,diag_mixed", [
    (3, 2, 2 / 3, 1 / 3, 1 / 3),
    (4, 2, 1 / 2, 1 / 3, 1 / 6),
])
def test_yang_physics_entries(m, n, diag_pair, offdiag, diag_mixed):
    rho = rescale(reduce_pure(yang_state(YangParams(m, n)), 2), PHYSICS)
    assert np.trace(rho.matrix).real == pytest.approx(math.comb(2 * n, 2), abs=1e-12)
    basis2 = rho.basis
    r1 = rank(basis2, pair_modes(1))
    r2 = rank(basis2, pair_modes(2))
    mixed = rank(basis2, modeset((0, 2)))
    assert rho.matrix[r1, r1].real == pytest.approx(diag_pair, abs=1e-13)
    assert rho.matrix[r1, r2].real == pytest.approx(offdiag, abs=1e-13)
    assert rho.matrix[mixed, mixed].real == pytest.approx(diag_mixed, abs=1e-13)


def test_reduce_mixed_is_linear():
    basis = RankedBasis(5, 2)
    s1 = random_pure_state(basis, seed=1)
    s2 = random_pure_state(basis, seed=2)
    mix = convex_mixture([0.3, 0.7], [s1, s2])
    got = reduce_mixed(mix, 1).matrix
    want = 0.3 * reduce_pure(s1, 1).matrix + 0.7 * reduce_pure(s2, 1).matrix
    np.testing.assert_allclose(got, want, atol=1e-15)


def test_reduce_k_bounds():
    st = slater_state(RankedBasis(4, 2), (0, 1))
    with pytest.raises(RangeError):
        reduce_pure(st, 0)
    with pytest.raises(RangeError):
        reduce_pure(st, 3)


def test_ptrace_matches_direct_reduction():
    st = random_pure_state(RankedBasis(6, 3), seed=5)
    via_two = ptrace_rdm(reduce_pure(st, 2), 1)
    direct = reduce_pure(st, 1)
    np.testing.assert_allclose(via_two.matrix, direct.matrix, atol=1e-13)
    assert via_two.normalization == UNIT
    assert via_two.n_particles == 3


def test_ptrace_validation():
    st = slater_state(RankedBasis(5, 3), (0, 1, 2))
    r2 = reduce_pure(st, 2)
    with pytest.raises(RangeError):
        ptrace_rdm(r2, 2)
    with pytest.raises(NormalizationError):
        ptrace_rdm(rescale(r2, PHYSICS), 1)


def test_rescale_roundtrip_and_errors():
    st = yang_state(YangParams(3, 2))
    r = reduce_pure(st, 2)
    phys = rescale(r, PHYSICS)
    assert np.trace(phys.matrix).real == pytest.approx(6.0, abs=1e-12)
    back = rescale(phys, UNIT)
    np.testing.assert_allclose(back.matrix, r.matrix, atol=1e-15)
    with pytest.raises(NormalizationError):
        rescale(r, "bogus")
    orphan = dataclasses.replace(r, n_particles=None)
    with pytest.raises(NormalizationError):
        rescale(orphan, PHYSICS)
    lying = dataclasses.replace(r, matrix=2.0 * r.matrix)
    with pytest.raises(NormalizationError):
        rescale(lying, PHYSICS)


def test_embed_preserves_spectrum_and_marginals():
    st = yang_state(YangParams(3, 2))
    r2 = reduce_pure(st, 2)
    t = embed_wedge_to_tensor(r2)
    assert t.parties == 2 and t.local_dim == 6
    assert np.trace(t.dense()).real == pytest.approx(1.0, abs=1e-12)
    lam_w = _spectrum(r2.matrix)
    lam_t = _spectrum(t.dense())
    np.testing.assert_allclose(lam_t[:len(lam_w)], lam_w, atol=1e-12)
    np.testing.assert_allclose(lam_t[len(lam_w):], 0.0, atol=1e-12)
    # both one-party marginals coincide with the 1-RDM matrix
    r1 = reduce_pure(st, 1).matrix
    np.testing.assert_allclose(tensor_ptrace(t, (0,)), r1, atol=1e-12)
    np.testing.assert_allclose(tensor_ptrace(t, (1,)), r1, atol=1e-12)


def test_embed_requires_pairs_and_capacity():
    st = slater_state(RankedBasis(4, 3), (0, 1, 2))
    with pytest.raises(ShapeError):
        embed_wedge_to_tensor(reduce_pure(st, 1))
    small = dataclasses.replace(CAP, tensor_dim=8)
    with pytest.raises(CapacityError):
        embed_wedge_to_tensor(reduce_pure(st, 2), cap=small)


def test_antisymmetric_projection_weight():
    t = random_two_party_dm(local_dim=4, rank=3, seed=8)
    proj = project_antisymmetric(t)
    pur = np.trace(tensor_ptrace(t, (0,)) @ tensor_ptrace(t, (0,))).real
    # product input rho x rho: antisymmetric weight (1 - Tr rho^2) / 2
    rho = tensor_ptrace(t, (0,))
    prod = dataclasses.replace(t, matrix=np.kron(rho, rho))
    w = np.trace(project_antisymmetric(prod).dense()).real
    assert w == pytest.approx(0.5 * (1.0 - pur), abs=1e-12)
    # projection is idempotent
    np.testing.assert_allclose(project_antisymmetric(proj).dense(),
                               proj.dense(), atol=1e-12)


def test_embedded_fermion_state_is_fully_antisymmetric():
    st = random_pure_state(RankedBasis(4, 2), seed=3)
    t = embed_wedge_to_tensor(reduce_pure(st, 2))
    np.testing.assert_allclose(project_antisymmetric(t).dense(), t.dense(),
                               atol=1e-12)


@pytest.mark.parametrize("M,N,k", [(4, 2, 1), (5, 3, 2), (6, 3, 3), (4, 4, 2)])
def test_brute_force_agrees(M, N, k):
    st = random_pure_state(RankedBasis(M, N), seed=M * 10 + N)
    fast = reduce_pure(st, k).matrix
    slow = brute_force_reduce(st, k).matrix
    np.testing.assert_allclose(fast, slow, atol=1e-12)


def test_brute_force_capacity():
    st = slater_state(RankedBasis(10, 6), (0, 1, 2, 3, 4, 5))
    with pytest.raises(CapacityError):
        brute_force_reduce(st, 2)


def test_embed_state_full_matches_dense():
    st = random_pure_state(RankedBasis(4, 2), seed=6)
    t = embed_state_full(st)
    assert t.matrix is not None
    np.testing.assert_allclose(t.dense(),
                               t.factors[1] @ np.diag(t.factors[0]) @ t.factors[1].conj().T,
                               atol=1e-14)
    np.testing.assert_allclose(tensor_ptrace(t, (0,)),
                               reduce_pure(st, 1).matrix, atol=1e-12)


def test_random_two_party_dm_properties():
    t = random_two_party_dm(local_dim=3, rank=2, seed=11)
    rho = t.dense()
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-13)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-15)
    lam = np.linalg.eigvalsh(rho)
    assert lam.min() >= -1e-13
    assert (lam > 1e-10).sum() == 2
    same = random_two_party_dm(local_dim=3, rank=2, seed=11)
    assert same.dense().tobytes() == rho.tobytes()


def test_tensor_ptrace_validation():
    t = random_two_party_dm(local_dim=2, rank=1, seed=0)
    with pytest.raises(RangeError):
        tensor_ptrace(t, (0, 2))
    with pytest.raises(RangeError):
        tensor_ptrace(t, (1, 1))


def test_fermirdm_roundtrip(tmp_path):
    st = random_pure_state(RankedBasis(5, 2), seed=14)
    r = reduce_pure(st, 2)
    text = dumps_rdm(r)
    back = loads_rdm(text)
    np.testing.assert_allclose(back.matrix, r.matrix, atol=1e-15)
    assert back.normalization == UNIT
    assert back.n_particles is None  # unit files carry no particle count
    assert dumps_rdm(back) == text
    p = tmp_path / "r.fermirdm"
    save_rdm(r, p)
    np.testing.assert_allclose(load_rdm(p).matrix, r.matrix, atol=1e-15)


def test_fermirdm_physics_recovers_particle_count():
    r = rescale(reduce_pure(yang_state(YangParams(3, 2)), 2), PHYSICS)
    back = loads_rdm(dumps_rdm(r))
    assert back.n_particles == 4
    unit = rescale(back, UNIT)
    assert np.trace(unit.matrix).real == pytest.approx(1.0, abs=1e-12)


def test_fermirdm_malformed():
    r = reduce_pure(slater_state(RankedBasis(4, 2), (0, 1)), 1)
    good = dumps_rdm(r)
    with pytest.raises(ShapeError):
        loads_rdm("fermistate 4 2\n")
    with pytest.raises(ShapeError):
        loads_rdm("\n".join(good.splitlines()[:-1]) + "\n")  # row missing
    with pytest.raises(NormalizationError):
        loads_rdm(good.replace(UNIT, "half"))
    clipped = good.splitlines()
    clipped[1] = " ".join(clipped[1].split()[:-1])
    with pytest.raises(ShapeError):
        loads_rdm("\n".join(clipped) + "\n")
    # comment lines are transparent
    assert np.array_equal(loads_rdm("# note\n" + good).matrix, r.matrix)
