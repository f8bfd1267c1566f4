from fractions import Fraction

import numpy as np
import pytest

from curvident.curvature_identities import (
    ExceptionalCaseError,
    IdentityJob,
    JobError,
    distinct_permuted_s,
    homogeneity_check,
    pfaffian_density,
    permuted_s,
    proportionality_constant,
    s_tensor,
    universality_check,
    verify_vanishing,
)
from curvident.metric_geometry import einstein, random_metric_jet, riemann, scalar_curvature
from curvident.tensor_core import Permutation, _matrix_inverse, generalized_kronecker, permute_slots


def dense_s(pbar, k, g):
    """S built literally from the dense generalized delta, one factor at a time."""
    n = g.dim
    g0 = g.base_matrix()
    gi = _matrix_inverse(g0)
    Rup = np.einsum("pqrs,pa,qb,rx,sy->abxy", riemann(g).components, gi, gi, gi, gi)
    Q = np.einsum("abxy,ac,bd->cdxy", Rup, g0, g0)  # R_{c1c2}^{b1b2}
    T = generalized_kronecker(2 * k + pbar, n).components
    ups = 2 * k + pbar
    for _ in range(k):
        T = np.tensordot(T, Q, axes=([0, 1, ups, ups + 1], [0, 1, 2, 3]))
        ups -= 2
    for _ in range(pbar):
        T = np.tensordot(T, g0, axes=([0], [0]))
    return T


@pytest.mark.parametrize("pbar, k, n", [(0, 1, 2), (0, 1, 3), (1, 1, 2), (1, 1, 3), (2, 1, 3), (0, 2, 4)])
def test_fast_path_matches_dense_delta(pbar, k, n):
    g = random_metric_jet(n, (n - 1, 1), 2, seed=n + pbar)
    S = s_tensor(pbar, k, g)
    ref = dense_s(pbar, k, g)
    assert np.array_equal(np.vectorize(Fraction)(S.components), np.vectorize(Fraction)(np.asarray(ref)))


def test_classical_constants():
    for seed in range(5):
        g = random_metric_jet(3, (2, 1), 2, seed=seed)
        R = riemann(g)
        assert s_tensor(0, 1, g, R).value() == 2 * scalar_curvature(g, R)
        assert s_tensor(1, 1, g, R) == einstein(g, R).scale(-4)


def test_pfaffian_ratio():
    for sig, expected in (((4, 0), 1), ((3, 1), -1)):
        g = random_metric_jet(4, sig, 2, seed=3)
        assert s_tensor(0, 2, g).value() == expected * pfaffian_density(g)


def test_s_vanishes_below_critical_dimension():
    for n, pbar, k in ((1, 0, 1), (2, 0, 2), (3, 0, 2), (2, 2, 1), (1, 1, 1)):
        g = random_metric_jet(n, None, 2, seed=n)
        assert s_tensor(pbar, k, g).is_zero()


def test_block_symmetries():
    g = random_metric_jet(4, None, 2, seed=9)
    S = s_tensor(2, 1, g)
    # antisymmetric inside each block, symmetric under block exchange
    assert permute_slots(S, (1, 0, 2, 3)) == -S
    assert permute_slots(S, (0, 1, 3, 2)) == -S
    assert permute_slots(S, (2, 3, 0, 1)) == S
    sigma = Permutation((0, 2, 1, 3))
    assert permuted_s(sigma, 2, 1, g) == permute_slots(S, sigma)


def test_distinct_permuted_s_count():
    g = random_metric_jet(4, None, 2, seed=1)
    assert len(distinct_permuted_s(2, 1, g)) == 3
    assert len(distinct_permuted_s(1, 1, g)) == 1


@pytest.mark.parametrize("factor", [4, 9, Fraction(1, 4)])
def test_homogeneity(factor):
    for pbar, k, n in ((0, 1, 2), (1, 1, 3), (2, 1, 4), (0, 2, 4)):
        g = random_metric_jet(n, (n - 1, 1), 2, seed=pbar + k)
        assert homogeneity_check(pbar, k, g, factor)


@pytest.mark.parametrize("extra", [1, 2])
def test_universality(extra):
    for pbar, k, n in ((0, 1, 2), (1, 1, 2), (1, 1, 3), (2, 1, 2)):
        g = random_metric_jet(n, None, 2, seed=n * 7 + pbar)
        assert universality_check(pbar, k, g, extra)


def test_job_validation():
    with pytest.raises(ExceptionalCaseError):
        IdentityJob(0, 0, 2)
    with pytest.raises(ExceptionalCaseError):
        IdentityJob(1, 0, 2)
    with pytest.raises(JobError):
        IdentityJob(0, 1, 7)
    with pytest.raises(JobError):
        IdentityJob(0, 1, 2, (2, 1))
    assert IdentityJob(0, 1, 3).signature == (3, 0)


def test_verify_report():
    rep = verify_vanishing(IdentityJob(0, 1, 1, trials=4))
    assert rep.identity_holds and rep.verdict == "identity_holds" and rep.max_abs_numerator == 0
    rep = verify_vanishing(IdentityJob(0, 1, 2, (1, 1), trials=4, seed=3))
    assert not rep.identity_holds
    assert rep.constants == {"pfaffian": "-1", "scalar_curvature": "2"}
    assert rep.witness_seeds[0] == [3, 0]
    d = rep.to_dict()
    assert d["verdict"] == "nonvanishing" and d["job"]["signature"] == [1, 1]
    assert d["results"][0]["witness_component"]["index"] == []


def test_proportionality_constant():
    g = random_metric_jet(3, None, 2, seed=0)
    E = einstein(g)
    assert proportionality_constant(E.scale(Fraction(3, 2)), E) == Fraction(3, 2)
    with pytest.raises(ValueError):
        proportionality_constant(riemann(g), riemann(random_metric_jet(3, None, 2, seed=1)))
