"""The universal tensors S_{2p,k} and exact vanishing trials.

``s_tensor(pbar, k, g)`` evaluates at the base point

    S_{i_1..i_2p} = R^{a_1a_2,b_1b_2} ... R^{a_{2k-1}a_{2k},b_{2k-1}b_{2k}}
                    delta^{c_1..c_2k j_1..j_p}_{b_1..b_2k i_1..i_p}
                    g_{a_1c_1} ... g_{a_2k c_2k} g_{j_1 i_{p+1}} ... g_{j_p i_2p}

with ``delta`` the determinant-normalized generalized Kronecker delta.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .metric_geometry import (
    MetricJet,
    cylinder_extend,
    einstein,
    random_metric_jet,
    rescale,
    restrict,
    riemann,
    scalar_curvature,
)
from .tensor_core import (
    COV,
    Permutation,
    Tensor,
    TensorError,
    _matrix_inverse,
    permute_slots,
    signed_permutations,
)

EXCEPTIONAL = {(0, 0), (1, 0)}
MAX_DIM = 6


class ExceptionalCaseError(ValueError):
    """(pbar, k) is one of the excluded low cases (0,0) and (1,0)."""


class JobError(ValueError):
    pass


def weight(pbar: int, k: int) -> int:
    return 2 * (pbar - k)


def critical_dimension(pbar: int, k: int) -> int:
    """Smallest dimension in which S_{2pbar,k} is not forced to vanish."""
    return 2 * k + pbar


# ---------------------------------------------------------------------------
# S tensors


def _mixed_curvature(g: MetricJet, R: Tensor) -> np.ndarray:
    # Q[c, d, a, b] = R_cd^ab, both back indices raised with g(0)^-1
    ginv = _matrix_inverse(g.base_matrix())
    return np.einsum("cdxy,xa,yb->cdab", R.components, ginv, ginv)


def s_tensor(pbar: int, k: int, g: MetricJet, R: Tensor | None = None) -> Tensor:
    """S_{2pbar,k}(g) at the base point, as a 2pbar-slot covariant tensor.

    The generalized delta is never materialized: its nonzero entries pair a
    tuple of distinct lower indices with a signed rearrangement of itself,
    so the sum runs over those pairs only.
    """
    if pbar < 0 or k < 0:
        raise JobError("pbar and k must be nonnegative")
    n = g.dim
    if k and g.degree < 2:
        raise JobError("curvature needs a jet of degree >= 2")
    m = 2 * k + pbar
    W = np.zeros((n,) * (2 * pbar), dtype=object)  # W[j_1..j_p, i_1..i_p]
    W[...] = 0
    if m <= n:
        Q = _mixed_curvature(g, riemann(g) if R is None else R) if k else None
        perms = list(signed_permutations(m))
        for lower in itertools.permutations(range(n), m):
            for perm, sign in perms:
                upper = [lower[p] for p in perm]
                term = sign
                for t in range(k):
                    term = term * Q[upper[2 * t], upper[2 * t + 1], lower[2 * t], lower[2 * t + 1]]
                    if not term:
                        break
                if term:
                    W[tuple(upper[2 * k:]) + tuple(lower[2 * k:])] += term
    if pbar == 0:
        out = np.array(W[()], dtype=object)
    else:
        # lower the j's into the trailing block: S[i, i'] = W[j, i] g_{j_1 i'_1} ...
        g0 = g.base_matrix()
        out = W
        for t in range(pbar):
            out = np.tensordot(out, g0, axes=([0], [0]))
        # axes now: i_1..i_p, i'_1..i'_p
    return Tensor(n, (COV,) * (2 * pbar), np.vectorize(_norm, otypes=[object])(out)
                  if out.ndim else np.array(_norm(out[()]), dtype=object))


def _norm(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def permuted_s(sigma: Permutation | Sequence[int], pbar: int, k: int, g: MetricJet,
               R: Tensor | None = None) -> Tensor:
    """``(sigma . S)(D_1..D_2p) = S(D_sigma(1)..D_sigma(2p))``."""
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    if len(sigma) != 2 * pbar:
        raise TensorError(f"permutation must act on {2 * pbar} slots")
    return permute_slots(s_tensor(pbar, k, g, R), sigma)


def pfaffian_density(g: MetricJet, R: Tensor | None = None) -> Fraction:
    """``eps^{a_1..a_n} eps^{b_1..b_n} R_{a_1a_2b_1b_2} ... R_{a_{n-1}a_n b_{n-1}b_n}``.

    The epsilons are permutation symbols, so for non-Euclidean base
    metrics the result differs from the invariant Pfaffian by the sign of
    det g(0).
    """
    n = g.dim
    if n % 2:
        raise JobError("the Pfaffian density needs an even dimension")
    R = riemann(g) if R is None else R
    comps = R.components
    perms = list(signed_permutations(n))
    total = Fraction(0)
    for a, sa in perms:
        for b, sb in perms:
            term = sa * sb
            for t in range(0, n, 2):
                term = term * comps[a[t], a[t + 1], b[t], b[t + 1]]
                if not term:
                    break
            total += term
    return total


def proportionality_constant(a: Tensor, b: Tensor):
    """``c`` with ``a == c * b`` exactly; None when both vanish.

    Raises ValueError when ``a`` is not a multiple of ``b``.
    """
    if a.dim != b.dim or a.slots != b.slots:
        raise ValueError("tensors differ in layout")
    av = a.components.ravel()
    bv = b.components.ravel()
    c = None
    for x, y in zip(av, bv):
        if y != 0:
            c = Fraction(x) / Fraction(y)
            break
    if c is None:
        if any(x != 0 for x in av):
            raise ValueError("not proportional: reference vanishes")
        return None
    if any(Fraction(x) != c * Fraction(y) for x, y in zip(av, bv)):
        raise ValueError("not proportional")
    return c


# ---------------------------------------------------------------------------
# jobs and reports


@dataclass(frozen=True)
class IdentityJob:
    pbar: int
    k: int
    dim: int
    signature: tuple[int, int] | None = None
    trials: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.pbar < 0 or self.k < 0:
            raise JobError("pbar and k must be nonnegative")
        if (self.pbar, self.k) in EXCEPTIONAL:
            raise ExceptionalCaseError(f"(pbar, k) = ({self.pbar}, {self.k}) is an exceptional case")
        if not 1 <= self.dim <= MAX_DIM:
            raise JobError(f"dim must lie in 1..{MAX_DIM}")
        if self.trials < 1:
            raise JobError("trials must be >= 1")
        sig = tuple(self.signature) if self.signature is not None else (self.dim, 0)
        if len(sig) != 2 or min(sig) < 0 or sum(sig) != self.dim:
            raise JobError(f"signature {self.signature} incompatible with dim {self.dim}")
        object.__setattr__(self, "signature", sig)

    @property
    def weight(self) -> int:
        return weight(self.pbar, self.k)

    @property
    def critical_dimension(self) -> int:
        return critical_dimension(self.pbar, self.k)

    def jet(self, trial: int) -> MetricJet:
        return trial_jet(self.dim, self.signature, self.seed, trial)


def trial_jet(dim: int, signature, seed: int, trial: int, degree: int = 2) -> MetricJet:
    return random_metric_jet(dim, signature, degree, seed=[seed, trial])


@dataclass
class TrialResult:
    trial: int
    exact_zero: bool
    witness_component: dict | None = None


@dataclass
class IdentityReport:
    job: IdentityJob
    results: list[TrialResult]
    max_abs_numerator: int
    constants: dict[str, str] = field(default_factory=dict)

    @property
    def identity_holds(self) -> bool:
        return all(r.exact_zero for r in self.results)

    @property
    def verdict(self) -> str:
        return "identity_holds" if self.identity_holds else "nonvanishing"

    @property
    def witness_seeds(self) -> list[list[int]]:
        return [[self.job.seed, r.trial] for r in self.results if not r.exact_zero]

    def to_dict(self) -> dict:
        job = asdict(self.job)
        job["signature"] = list(job["signature"])
        results = []
        for r in sorted(self.results, key=lambda r: r.trial):
            entry = {"trial": r.trial, "exact_zero": r.exact_zero}
            if r.witness_component is not None:
                entry["witness_component"] = r.witness_component
            results.append(entry)
        return {
            "job": job,
            "results": results,
            "max_abs_numerator": self.max_abs_numerator,
            "constants": dict(sorted(self.constants.items())),
            "verdict": self.verdict,
        }


def _first_nonzero(t: Tensor) -> dict | None:
    entries = t.nonzero_entries()
    if not entries:
        return None
    idx, v = entries[0]
    return {"index": list(idx), "value": str(Fraction(v))}


def _reference_constants(job: IdentityJob) -> dict[str, Fraction]:
    """Constants relating S to classical tensors, fixed on the seed-0 jet.

    Only defined where the classical comparison applies and S does not
    vanish for dimensional reasons.
    """
    n = job.dim
    if n < job.critical_dimension:
        return {}
    g = trial_jet(n, job.signature, 0, 0)
    R = riemann(g)
    S = s_tensor(job.pbar, job.k, g, R)
    out = {}
    if (job.pbar, job.k) == (0, 1):
        out["scalar_curvature"] = S.value() / scalar_curvature(g, R)
    if (job.pbar, job.k) == (1, 1):
        out["einstein"] = proportionality_constant(S, einstein(g, R))
    if job.pbar == 0 and 2 * job.k == n:
        out["pfaffian"] = S.value() / pfaffian_density(g, R)
    return out


def verify_vanishing(job: IdentityJob) -> IdentityReport:
    """Evaluate S_{2pbar,k} exactly on ``job.trials`` seeded random jets.

    Where a classical comparison exists, the proportionality constant is
    taken from the seed-0 jet and re-asserted on every trial; a mismatch
    raises AssertionError naming the trial.
    """
    consts = _reference_constants(job)
    results = []
    max_num = 0
    for t in range(job.trials):
        g = job.jet(t)
        R = riemann(g)
        S = s_tensor(job.pbar, job.k, g, R)
        zero = S.is_zero()
        for v in S.components.ravel():
            max_num = max(max_num, abs(Fraction(v).numerator))
        results.append(TrialResult(t, zero, None if zero else _first_nonzero(S)))
        for name, c in consts.items():
            if name == "scalar_curvature":
                ok = S.value() == c * scalar_curvature(g, R)
            elif name == "einstein":
                ok = S == einstein(g, R).scale(c)
            else:
                ok = S.value() == c * pfaffian_density(g, R)
            if not ok:
                raise AssertionError(
                    f"{name} constant {c} fails on trial {t} (seed {[job.seed, t]})")
    return IdentityReport(job, results, max_num, {k: str(v) for k, v in consts.items()})


def homogeneity_check(pbar: int, k: int, g: MetricJet, factor) -> bool:
    """S(factor * g) == factor^(pbar - k) * S(g), exactly."""
    factor = Fraction(factor)
    lhs = s_tensor(pbar, k, rescale(g, factor))
    rhs = s_tensor(pbar, k, g).scale(factor ** (pbar - k))
    return lhs == rhs


def universality_check(pbar: int, k: int, g: MetricJet, extra: int = 1) -> bool:
    """Restriction of S on the cylinder ``g + dt^2`` equals S(g)."""
    lifted = s_tensor(pbar, k, cylinder_extend(g, extra))
    return restrict(lifted, extra) == s_tensor(pbar, k, g)


def distinct_permuted_s(pbar: int, k: int, g: MetricJet) -> list[tuple[Permutation, Tensor]]:
    """One representative per distinct tensor ``sigma . S`` (up to sign)."""
    S = s_tensor(pbar, k, g)
    seen: list[Tensor] = []
    out = []
    for images in itertools.permutations(range(2 * pbar)):
        sigma = Permutation(images)
        T = permute_slots(S, sigma)
        if any(T == u or T == -u for u in seen):
            continue
        seen.append(T)
        out.append((sigma, T))
    return out
