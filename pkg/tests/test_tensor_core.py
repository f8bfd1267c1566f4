import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvident.tensor_core import (
    CONTRA,
    COV,
    Permutation,
    Tensor,
    TensorError,
    antisymmetrize,
    contract,
    double_factorial,
    generalized_kronecker,
    metric_inverse,
    permute_slots,
    symmetrize,
    tensor_product,
)


def rand_tensor(n, rank, seed, slots=None):
    rng = np.random.default_rng(seed)
    arr = rng.integers(-5, 6, size=(n,) * rank).astype(object)
    return Tensor(n, slots or (COV,) * rank, arr)


perms = st.integers(2, 5).flatmap(lambda m: st.permutations(list(range(m))))


def test_permutation_basics():
    s = Permutation((1, 2, 0))
    t = Permutation.transposition(3, 0, 1)
    assert (s * t)(0) == s(t(0)) == 2
    assert s * s.inverse() == Permutation.identity(3)
    assert t.sign == -1 and s.sign == 1
    with pytest.raises(TensorError):
        Permutation((0, 0, 1))


@given(perms, perms)
def test_sign_is_multiplicative(a, b):
    if len(a) != len(b):
        return
    s, t = Permutation(tuple(a)), Permutation(tuple(b))
    assert (s * t).sign == s.sign * t.sign


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)), st.integers(0, 1000))
def test_permute_slots_composition(a, b, seed):
    t = rand_tensor(2, 4, seed)
    s, u = Permutation(tuple(a)), Permutation(tuple(b))
    assert permute_slots(permute_slots(t, s), u) == permute_slots(t, u * s)


def test_permute_slots_reads_sigma_positions():
    t = rand_tensor(3, 3, 1)
    s = Permutation((2, 0, 1))
    p = permute_slots(t, s)
    for idx in itertools.product(range(3), repeat=3):
        assert p[idx] == t[tuple(idx[s(k)] for k in range(3))]


def test_transposition_swaps_and_is_involutive():
    t = rand_tensor(3, 2, 2)
    sw = permute_slots(t, (1, 0))
    assert np.array_equal(sw.components, t.components.T)
    assert permute_slots(sw, (1, 0)) == t


def test_contract_trace_and_metric():
    n = 3
    m = Tensor.from_matrix([[1, 2, 0], [0, 3, 1], [4, 0, 5]], (CONTRA, COV))
    assert contract(m, 0, 1).value() == 9
    g = Tensor.from_matrix([[2, 0, 0], [0, 1, 0], [0, 0, -1]])
    b = Tensor.from_matrix(np.ones((n, n), dtype=object))
    # g^ab b_ab with g^-1 = diag(1/2, 1, -1)
    assert contract(b, 0, 1, g).value() == Fraction(1, 2)
    with pytest.raises(TensorError):
        contract(b, 0, 1)


def test_contract_metric_with_inverse_gives_dimension():
    g = Tensor.from_matrix([[2, 1], [1, 3]])
    gi = metric_inverse(g)
    mixed = contract(tensor_product(gi, g), 1, 2)
    assert mixed == Tensor.identity(2)
    assert contract(mixed, 0, 1).value() == 2


def test_symmetrize_antisymmetrize():
    t = rand_tensor(3, 3, 5)
    s = symmetrize(t, [0, 1, 2])
    a = antisymmetrize(t, [0, 1, 2])
    for p in itertools.permutations(range(3)):
        sign = Permutation(p).sign
        assert permute_slots(s, p) == s
        assert permute_slots(a, p) == a.scale(sign)
    assert symmetrize(s, [0, 1, 2]) == s
    mixed = Tensor.zeros(2, (COV, CONTRA))
    with pytest.raises(TensorError):
        symmetrize(mixed, [0, 1])


def test_generalized_kronecker_conventions():
    d = generalized_kronecker(2, 3)
    assert d[0, 1, 0, 1] == 1 and d[0, 1, 1, 0] == -1 and d[0, 0, 0, 0] == 0
    assert generalized_kronecker(3, 2).is_zero()
    # full trace of delta^{(m)} in dim n is n!/(n-m)!
    t = generalized_kronecker(2, 4)
    tr = contract(contract(t, 1, 3), 0, 1)
    assert tr.value() == 12


def test_exact_default_rejects_floats():
    with pytest.raises(TensorError):
        Tensor(2, (COV,), [0.5, 1.0])
    f = Tensor(2, (COV,), [0.5, 1.0], exact=False)
    assert not f.exact


def test_double_factorial():
    assert [double_factorial(k) for k in (1, 3, 5, 7)] == [1, 3, 15, 105]
