import itertools
import math

import numpy as np
import pytest

from stabtest import commutant as cm
from stabtest.clifford import random_clifford
from stabtest.dense import stabilizer_vectors
from stabtest.f2 import Subspace, enumerate_subspace, iter_subspaces


def sigma_oracle(t):
    """Brute force over every t-dimensional subspace of F_2^{2t}."""
    return sorted((h for h in iter_subspaces(2 * t, t) if cm.is_stochastic(h, t)), key=lambda h: h.basis)


@pytest.mark.parametrize("t", [1, 2, 3])
def test_sigma_matches_brute_force(t):
    assert list(cm.enumerate_sigma(t)) == sigma_oracle(t)


def test_sigma_counts():
    got = [len(cm.enumerate_sigma(t)) for t in range(1, 7)]
    assert got == [1, 2, 6, 30, 270, 4590]
    assert got == [cm.sigma_count_formula(t) for t in range(1, 7)]


def test_orthogonal_is_symmetric_group_small_t():
    for t in range(1, 6):
        group = {cm.graph_of(o) for o in cm.enumerate_orthogonal(t)}
        perms = {cm.graph_of(cm.permutation_matrix(p)) for p in itertools.permutations(range(t))}
        assert group == perms
    assert len(cm.enumerate_orthogonal(6)) == 1440
    assert all(cm.is_stochastic_orthogonal(o) for o in cm.enumerate_orthogonal(6))


def test_anti_identity_at_t6():
    ones = cm.BitMatrix(tuple([(1 << 6) - 1] * 6), 6)
    anti = cm.BitMatrix(tuple(r ^ o for r, o in zip(cm.permutation_matrix(range(6)).rows, ones.rows)), 6)
    assert cm.is_stochastic_orthogonal(anti)
    assert cm.graph_of(anti) in set(cm.enumerate_sigma(6))


def test_r_matrix_examples():
    assert np.array_equal(cm.r_matrix(cm.diagonal(2), 2), np.eye(4, dtype=int))
    swap = cm.graph_of(cm.permutation_matrix([1, 0]))
    expect = np.zeros((4, 4), dtype=int)
    for a, b in itertools.product(range(2), repeat=2):
        expect[b << 1 | a, a << 1 | b] = 1
    assert np.array_equal(cm.r_matrix(swap, 2), expect)


def test_diagonal_gives_identity_operator():
    for n, t in [(1, 3), (2, 2), (3, 2)]:
        r = cm.R_operator(cm.diagonal(t), t, n)
        assert np.array_equal(r.toarray(), np.eye(1 << n * t))


def test_copy_major_swap_is_copy_swap():
    # R of the transposition (1 2) at t = 2 swaps the two n-qubit registers
    n = 2
    r = cm.R_operator(cm.graph_of(cm.permutation_matrix([1, 0])), 2, n).toarray()
    d = 1 << n
    for a, b in itertools.product(range(d), repeat=2):
        assert r[b * d + a, a * d + b] == 1


def test_reorder_roundtrip():
    idx = np.arange(1 << 6)
    assert np.array_equal(cm.copy_to_qubit_major(cm.qubit_to_copy_major(idx, 2, 3), 2, 3), idx)


def test_traces():
    for n, t in [(1, 2), (1, 3), (2, 2), (1, 4), (2, 3)]:
        for h in cm.enumerate_sigma(t):
            assert cm.trace_R(h, t, n) == round(cm.R_operator(h, t, n).diagonal().sum())
        total = sum(cm.trace_R(h, t, n) for h in cm.enumerate_sigma(t))
        assert total == cm.trace_sum_formula(t, n)


def test_gram_matches_dense():
    for n, t in [(1, 3), (2, 2), (2, 3)]:
        hs = cm.enumerate_sigma(t)
        g = cm.gram(t, n)
        for i, j in itertools.product(range(len(hs)), repeat=2):
            assert g[i, j] == cm.gram_dense(hs[i], hs[j], t, n)


def test_gram_nonsingular_small_cases():
    for n, t in [(1, 2), (2, 2), (2, 3)]:
        g = np.array(cm.gram(t, n), dtype=float)
        assert np.linalg.matrix_rank(g) == len(g)


def test_partial_transpose_involution_and_sparse_dense_agree():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(16, 16))
    for s in [(0,), (1,), (0, 1)]:
        pt = cm.partial_transpose(m, s, 2, 2)
        assert np.allclose(cm.partial_transpose(pt, s, 2, 2), m)
        assert np.allclose(cm.partial_transpose(cm.sp.csr_matrix(m), s, 2, 2).toarray(), pt)
    assert np.allclose(cm.partial_transpose(m, (0, 1), 2, 2), m.T)


def test_swap_partial_transpose_is_unnormalised_bell_projector():
    n = 1
    swap = cm.R_operator(cm.graph_of(cm.permutation_matrix([1, 0])), 2, n)
    pt = cm.partial_transpose(swap, [1], 2, n).toarray()
    phi = np.array([1, 0, 0, 1.0])
    assert np.allclose(pt, np.outer(phi, phi))
    sv = cm.singular_values(cm.sp.csr_matrix(pt))
    assert np.allclose(sv, [2, 0, 0, 0])


def test_singular_values_sparse_matches_dense():
    for o in cm.enumerate_orthogonal(3):
        for s in [(0,), (0, 2)]:
            op = cm.partial_transpose(cm.R_operator(cm.graph_of(o), 3, 2), s, 3, 2)
            dense = np.linalg.svd(op.toarray(), compute_uv=False)
            assert np.allclose(cm.singular_values(op), dense)
    m = cm.sp.random(40, 40, density=0.05, random_state=2)
    assert np.allclose(cm.singular_values(m), np.linalg.svd(m.toarray(), compute_uv=False))


def test_pt_check_examples():
    ident = cm.permutation_matrix(range(3))
    r = cm.pt_singular_check(ident, (0,), 2)
    assert r.ok and r.k == 0 and r.expected_multiplicity == 64
    swap = cm.permutation_matrix([1, 0, 2])
    r = cm.pt_singular_check(swap, (0,), 1)
    assert r.ok and r.k == 1 and r.expected_value == 2 and r.expected_multiplicity == 2


def test_find_singular_examples():
    assert cm.find_singular_principal_submatrix(cm.permutation_matrix(range(4))) is None
    assert cm.find_singular_principal_submatrix(cm.permutation_matrix([1, 0, 2])) == (0,)
    assert cm.find_singular_principal_submatrix(cm.permutation_matrix([0, 2, 1])) == (1,)


def test_nonorthogonal_trace_norm():
    hs = cm.non_orthogonal(4)
    assert len(hs) == 6
    for h in hs:
        rep = cm.trace_norm_check_nonorthogonal(h, 4, 2)
        assert rep.ok
    with pytest.raises(ValueError):
        cm.trace_norm_check_nonorthogonal(cm.diagonal(4), 4, 1)


def test_pi_o_is_symmetric_projector():
    for n, t in [(1, 2), (1, 3), (2, 2), (1, 4), (2, 3)]:
        p = cm.pi_O(t, n).toarray()
        assert np.allclose(p @ p, p)
        assert np.allclose(p, p.T)
        assert np.allclose(p, cm.symmetric_projector(t, n))
        assert round(np.trace(p)) == math.comb(2**n + t - 1, t)


def test_pi_o_commutes_with_clifford_powers():
    rng = np.random.default_rng(3)
    n, t = 2, 2
    p = cm.pi_O(t, n).toarray()
    for _ in range(5):
        u = random_clifford(n, rng).to_unitary()
        ut = np.kron(u, u)
        assert np.allclose(ut @ p, p @ ut)


def test_counterexample_canonical_and_orbits():
    assert abs(cm.counterexample_check(cm.canonical_collection(1))) <= 1e-10
    rng = np.random.default_rng(4)
    u = random_clifford(1, rng).to_unitary()
    assert abs(cm.counterexample_check([u @ s for s in cm.canonical_collection(1)])) <= 1e-10
    # repeated states have positive weight
    zero = cm.canonical_collection(1)[0]
    assert cm.counterexample_check([zero] * 6) == pytest.approx(1)


def test_counterexample_matches_dense_projector():
    states = cm.canonical_collection(1)[:4]
    phi = cm.product_state(states)
    p = cm.symmetric_projector(4, 1)
    assert cm.counterexample_check(states) == pytest.approx(np.vdot(phi, p @ phi).real, abs=1e-12)


def test_moment_identity_t2():
    vecs = stabilizer_vectors(2)
    for h in cm.enumerate_sigma(2):
        r = cm.R_operator(h, 2, 2)
        vals = [np.vdot(np.kron(v, v), r @ np.kron(v, v)).real for v in vecs]
        assert np.mean(vals) == pytest.approx(1)


def test_catalog_lines():
    text = cm.catalog(3)
    lines = text.strip().splitlines()
    assert len(lines) == 6
    parsed = [Subspace(6, [int(w, 16) for w in line.split()]) for line in lines]
    assert parsed == list(cm.enumerate_sigma(3))


def test_guards():
    with pytest.raises(ValueError):
        cm.R_operator(cm.diagonal(5), 5, 3)
    with pytest.raises(ValueError):
        cm.r_matrix(cm.diagonal(7), 7)


def test_q_form_values_on_members():
    for t in range(1, 5):
        for h in cm.enumerate_sigma(t):
            assert all(cm.q_form(int(u), t) == 0 for u in enumerate_subspace(h))
