import itertools
import math

import numpy as np
import pytest
import sympy as sp

from curvident import invariant_theory as it
from curvident.curvature_identities import ExceptionalCaseError
from curvident.metric_geometry import jet_from_normal_tensor, riemann
from curvident.tensor_core import double_factorial


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_matching_count(m):
    ms = it.enumerate_matchings(m)
    assert len(ms) == len(set(ms)) == double_factorial(m - 1)
    for mt in ms:
        assert sorted(x for pair in mt for x in pair) == list(range(m))


def test_caps():
    with pytest.raises(it.CapExceeded):
        it.enumerate_matchings(14)
    with pytest.raises(ValueError):
        it.enumerate_matchings(3)


def test_gram_diagonal_and_cycles():
    g = it.gram_matrix(4, 5)
    assert all(g[i][i] == 25 for i in range(3))
    assert g[0][1] == 5


@pytest.mark.parametrize("m, n", [(m, n) for m in (2, 4, 6) for n in (1, 2, 3)])
def test_gram_equals_brute_force(m, n):
    assert it.gram_matrix(m, n) == it.brute_force_gram(m, n)


def test_gram_lorentzian_pairing():
    assert it.brute_force_gram(4, 2, eta=[1, -1]) == it.gram_matrix(4, 2)


@pytest.mark.parametrize("m, n", [(4, 2), (6, 2), (6, 3)])
def test_gram_positive_semidefinite(m, n):
    eig = sp.Matrix(it.gram_matrix(m, n)).eigenvals()
    assert all(sp.re(e) >= 0 for e in eig)


def test_dim_invariants_values():
    assert [it.dim_invariants(4, n) for n in range(1, 5)] == [1, 3, 3, 3]
    assert [it.dim_invariants(6, n) for n in range(1, 5)] == [1, 10, 15, 15]
    assert it.dim_invariants(8, 2) == 35 and it.dim_invariants(8, 3) == 91
    assert it.dim_invariants(5, 3) == 0


def test_reduction_check():
    rep = it.reduction_check(6, 7)
    assert rep.ok and rep.stable_from == 5
    assert rep.to_dict()["dims"]["7"] == 15


@pytest.mark.parametrize("n, r, expected", [(1, 2, 0), (2, 2, 1), (3, 2, 6), (4, 2, 20),
                                            (2, 3, 2), (3, 3, 15), (3, 4, 27)])
def test_normal_tensor_dimensions(n, r, expected):
    assert len(it.normal_tensor_basis(n, r)) == it.normal_tensor_dimension(n, r) == expected


def test_normal_samples_satisfy_invariants():
    for r in (2, 3, 4):
        s = it.random_normal_tensor(3, r, seed=r)
        assert s.check_invariants()
        assert not s.tensor.is_zero()


def test_order_two_normal_tensor_is_curvature_data():
    # for g = eta + 1/2 A x x, R_abcd = 1/2 (A_adbc + A_bcad - A_acbd - A_bdac)
    a = it.random_normal_tensor(3, 2, seed=4).tensor.components
    R = riemann(jet_from_normal_tensor(a)).components
    for i, j, k, l in itertools.product(range(3), repeat=4):
        hand = (a[i, l, j, k] + a[j, k, i, l] - a[i, k, j, l] - a[j, l, i, k]) / 2
        assert R[i, j, k, l] == hand


def test_admissible_multi_indices():
    assert it.admissible_multi_indices(0, 1) == [(1,)]
    assert it.admissible_multi_indices(1, 2) == [(2, 0, 0), (0, 0, 1)]
    for D in it.admissible_multi_indices(0, 3):
        assert sum(j * d for j, d in enumerate(D, start=2)) == 6


@pytest.mark.parametrize("pbar, k, before, after", [(0, 1, 3, 2), (1, 1, 15, 6), (2, 1, 105, 36),
                                                    (0, 2, 120, 15)])
def test_generator_counts(pbar, k, before, after):
    assert len(it.enumerate_generators(pbar, k, dedup=False)) == before
    assert len(it.enumerate_generators(pbar, k)) == after


@pytest.mark.parametrize("pbar, k", [(1, 1), (0, 2)])
def test_dedup_is_sound(pbar, k):
    full = it.enumerate_generators(pbar, k, dedup=False)
    reps = {s.key: s for s in it.enumerate_generators(pbar, k)}
    n = 2 * k + pbar
    inputs = it.sample_inputs(n, it._orders(full), 3, seed=5)
    for s in full:
        rep = reps[s.key]
        for x in inputs:
            assert np.array_equal(it.evaluate_scheme(s, x, n), it.evaluate_scheme(rep, x, n))


def test_flat_inputs_give_zero_matrix():
    schemes = it.enumerate_generators(1, 1)
    zero = [{2: np.zeros((3,) * 4, dtype=np.int64)}]
    assert not it.evaluate_generators(schemes, zero, 3).any()


def test_int64_evaluation_matches_exact():
    schemes = it.enumerate_generators(1, 2)
    sample = it.sample_inputs(5, it._orders(schemes), 1, seed=0)[0]
    exact = {r: a.astype(object) for r, a in sample.items()}
    for s in schemes:
        assert np.array_equal(it.evaluate_scheme(s, sample, 5), it.evaluate_scheme(s, exact, 5))


@pytest.mark.parametrize("pbar, k, ranks", [(0, 1, [0, 1, 1]), (1, 1, [0, 1, 2, 2]),
                                            (0, 2, [0, 2, 3, 4, 4])])
def test_certified_ranks(pbar, k, ranks):
    got = [it.certified_rank(pbar, k, n).rank for n in range(1, len(ranks) + 1)]
    assert got == ranks


def test_rank_not_stabilized_raised_for_undersampling():
    with pytest.raises(it.RankNotStabilized):
        it.certified_rank(0, 2, 4, samples=1)


def test_kernel_dimension_guards():
    with pytest.raises(ExceptionalCaseError):
        it.kernel_dimension(1, 0, 1)
    with pytest.raises(ValueError):
        it.kernel_dimension(0, 1, 3)


def test_identity_dimension_formula():
    assert [it.identity_dimension_formula(p) for p in range(5)] == [1, 1, 6, 60, 840]
    assert it.identity_dimension_formula(3) == math.factorial(5) // math.factorial(2)


@pytest.mark.parametrize("pbar, k", [(0, 1), (1, 1), (0, 2)])
def test_membership(pbar, k):
    rep = it.membership_check(pbar, k)
    assert rep.in_span and rep.in_kernel and rep.holds
    assert rep.kernel_dim == rep.span_dim == 1
    assert rep.witness_nonzero_at_stable
