"""Orthogonal-group invariants at a point.

Total contractions of ``m`` covariant slots are indexed by perfect
matchings. The dimension of the space they span in dimension ``n`` is the
exact rank of their Gram matrix. Natural tensors of a given weight are
spanned by total contractions of normal tensors ``N_r`` with the free
slots; evaluating those on random exact samples and ranking the result
gives the dimension of the natural-tensor space in each dimension, and
rank differences give the spaces of dimensional identities.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .curvature_identities import (
    EXCEPTIONAL,
    ExceptionalCaseError,
    critical_dimension,
    s_tensor,
)
from .metric_geometry import jet_from_normal_tensor
from .tensor_core import COV, Permutation, Tensor, permute_slots

MAX_SLOTS = 12

Matching = tuple[tuple[int, int], ...]


class CapExceeded(ValueError):
    pass


class RankNotStabilized(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# matchings and Gram matrices


def enumerate_matchings(m: int) -> list[Matching]:
    """All ``(m-1)!!`` perfect matchings of ``range(m)``, lexicographically."""
    if m % 2:
        raise ValueError("matchings need an even number of slots")
    if m > MAX_SLOTS:
        raise CapExceeded(f"m={m} exceeds the cap of {MAX_SLOTS} slots")
    return list(_matchings(tuple(range(m))))


def _matchings(items: tuple[int, ...]) -> Iterable[Matching]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for tail in _matchings(remaining):
            yield ((first, other),) + tail


def count_cycles(sigma: Matching, tau: Matching) -> int:
    """Connected components of the union of two perfect matchings."""
    partner_s = {}
    for a, b in sigma:
        partner_s[a], partner_s[b] = b, a
    partner_t = {}
    for a, b in tau:
        partner_t[a], partner_t[b] = b, a
    seen = set()
    cycles = 0
    for start in partner_s:
        if start in seen:
            continue
        cycles += 1
        v = start
        use_sigma = True
        while True:
            seen.add(v)
            v = partner_s[v] if use_sigma else partner_t[v]
            seen.add(v)
            use_sigma = not use_sigma
            if v == start and use_sigma:
                break
    return cycles


@lru_cache(maxsize=None)
def _gram(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    ms = enumerate_matchings(m)
    return tuple(tuple(n ** count_cycles(s, t) for t in ms) for s in ms)


def gram_matrix(m: int, n: int) -> list[list[int]]:
    """Pairing matrix ``<w_s, w_t> = n^(cycles of s u t)`` of total contractions."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return [list(row) for row in _gram(m, n)]


def contraction_tensor(matching: Matching, n: int, eta: Sequence[int] | None = None) -> np.ndarray:
    """Components of ``w_s(e_i1, ..., e_im) = prod g(e_ia, e_ib)`` in an orthonormal frame."""
    m = 2 * len(matching)
    eta = [1] * n if eta is None else list(eta)
    arr = np.zeros((n,) * m, dtype=object)
    arr[...] = 0
    for idx in itertools.product(range(n), repeat=m):
        v = 1
        for a, b in matching:
            if idx[a] != idx[b]:
                v = 0
                break
            v *= eta[idx[a]]
        arr[idx] = v
    return arr


def brute_force_gram(m: int, n: int, eta: Sequence[int] | None = None) -> list[list[int]]:
    """Gram matrix by explicit summation over all index tuples.

    Slots are paired with the inverse of ``diag(eta)``, which equals
    ``diag(eta)`` for a signature matrix.
    """
    eta = [1] * n if eta is None else list(eta)
    ms = enumerate_matchings(m)
    tensors = [contraction_tensor(s, n, eta) for s in ms]
    weights = np.ones((n,) * m, dtype=object)
    for idx in itertools.product(range(n), repeat=m):
        weights[idx] = math.prod(eta[i] for i in idx)
    return [[int((a * b * weights).sum()) for b in tensors] for a in tensors]


def dim_invariants(m: int, n: int) -> int:
    """Dimension of the O(n)-invariant m-linear forms, as an exact Gram rank."""
    if m % 2:
        return 0
    return linalg.rank(gram_matrix(m, n))


@dataclass
class ReductionReport:
    m: int
    dims: dict[int, int]
    nondecreasing: bool
    stable_from: int
    stable: bool
    violations: list[int]

    @property
    def ok(self) -> bool:
        return self.nondecreasing and self.stable

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "nondecreasing": self.nondecreasing,
            "stable_from": self.stable_from,
            "stable": self.stable,
            "violations": self.violations,
            "ok": self.ok,
        }


def reduction_check(m: int, n_max: int) -> ReductionReport:
    """Check that dims grow with n and are constant from n = m-1 on."""
    if m % 2:
        raise ValueError("m must be even")
    dims = {n: dim_invariants(m, n) for n in range(1, n_max + 1)}
    violations = [n for n in range(2, n_max + 1) if dims[n] < dims[n - 1]]
    start = max(1, m - 1)
    tail = [dims[n] for n in range(start, n_max + 1)]
    return ReductionReport(
        m=m,
        dims=dims,
        nondecreasing=not violations,
        stable_from=start,
        stable=len(set(tail)) <= 1,
        violations=violations,
    )


# ---------------------------------------------------------------------------
# normal tensors


def _multisets(n: int, size: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(n), size))


def _remove(ms: tuple[int, ...], x: int) -> tuple[int, ...]:
    out = list(ms)
    out.remove(x)
    return tuple(out)


def normal_tensor_dimension(n: int, r: int) -> int:
    """dim S^2 (x) S^r - dim V (x) S^(r+1), i.e. rank-nullity on the exact sequence."""
    return math.comb(n + 1, 2) * math.comb(n + r - 1, r) - n * math.comb(n + r, r + 1)


@lru_cache(maxsize=None)
def _normal_basis_arrays(n: int, r: int) -> tuple[np.ndarray, ...]:
    # The symmetrization preserves the multiset of all r+2 indices, so the
    # kernel splits into one small block per multiset.
    basis = []
    for mu in _multisets(n, r + 2):
        unknowns = []
        for a, b in sorted(set(itertools.combinations(mu, 2))):
            rest = _remove(_remove(mu, a), b)
            unknowns.append(((a, b), rest))
        index = {u: i for i, u in enumerate(unknowns)}
        rows = []
        for c in sorted(set(mu)):
            J = _remove(mu, c)
            row = [0] * len(unknowns)
            for x in sorted(set(J)):
                pair = tuple(sorted((c, x)))
                row[index[(pair, _remove(J, x))]] += J.count(x)
            rows.append(row)
        for vec in linalg.nullspace(rows, len(unknowns)):
            ints = linalg.primitive_integer_vector(vec)
            arr = np.zeros((n,) * (r + 2), dtype=np.int64)
            for ((a, b), rest), v in zip(unknowns, ints):
                if not v:
                    continue
                for tail in set(itertools.permutations(rest)):
                    arr[(a, b) + tail] = v
                    arr[(b, a) + tail] = v
            basis.append(arr)
    for arr in basis:
        arr.setflags(write=False)
    return tuple(basis)


def normal_tensor_basis(n: int, r: int) -> list[Tensor]:
    """Integer basis of N_r, the kernel of symmetrizing the last r+1 slots of S^2 (x) S^r."""
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    return [Tensor(n, (COV,) * (r + 2), arr.astype(object)) for arr in _normal_basis_arrays(n, r)]


@dataclass(frozen=True, eq=False)
class NormalTensorSample:
    order: int
    dim: int
    tensor: Tensor

    def __post_init__(self):
        t = self.tensor
        if t.rank != self.order + 2 or t.dim != self.dim:
            raise ValueError("tensor layout does not match order/dim")

    def check_invariants(self) -> bool:
        arr = self.tensor.components
        r = self.order
        if not np.array_equal(arr, np.swapaxes(arr, 0, 1)):
            return False
        for i in range(2, r + 1):
            if not np.array_equal(arr, np.swapaxes(arr, i, i + 1)):
                return False
        return symmetrized_tail(arr).is_zero() if r else True


def symmetrized_tail(arr: np.ndarray) -> Tensor:
    """s_{r+1}: symmetrization over all slots but the first (unnormalized sum)."""
    from .tensor_core import symmetrize

    t = Tensor(arr.shape[0], (COV,) * arr.ndim, np.asarray(arr, dtype=object))
    return symmetrize(t, range(1, arr.ndim))


def _random_normal_array(n: int, r: int, rng: np.random.Generator, amplitude: int = 9) -> np.ndarray:
    basis = _normal_basis_arrays(n, r)
    out = np.zeros((n,) * (r + 2), dtype=np.int64)
    if basis:
        coeffs = rng.integers(-amplitude, amplitude + 1, size=len(basis))
        for c, b in zip(coeffs, basis):
            if c:
                out += int(c) * b
    return out


def random_normal_tensor(n: int, r: int, seed=0, amplitude: int = 9) -> NormalTensorSample:
    """Random integer combination (coefficients in [-amplitude, amplitude]) of the N_r basis."""
    rng = np.random.default_rng(seed)
    arr = _random_normal_array(n, r, rng, amplitude)
    return NormalTensorSample(r, n, Tensor(n, (COV,) * (r + 2), arr.astype(object)))


# ---------------------------------------------------------------------------
# generators of natural tensors


@dataclass(frozen=True)
class SlotSignature:
    """Block layout for inputs in S^{d_2}N_2 (x) ... (x) S^{d_r}N_r and 2*pbar free slots.

    ``D = (d_2, ..., d_r)``. Factor slots come first, ordered by order and
    copy; each N_j factor occupies j+2 consecutive slots (the symmetric
    pair first). The free slots close the list in output order.
    """

    D: tuple[int, ...]
    pbar: int

    @property
    def factors(self) -> list[int]:
        return [j for j, d in enumerate(self.D, start=2) for _ in range(d)]

    @property
    def m(self) -> int:
        return sum(j + 2 for j in self.factors) + 2 * self.pbar

    @property
    def free_slots(self) -> list[int]:
        start = self.m - 2 * self.pbar
        return list(range(start, self.m))

    def factor_slots(self) -> list[list[int]]:
        out, pos = [], 0
        for j in self.factors:
            out.append(list(range(pos, pos + j + 2)))
            pos += j + 2
        return out

    def weight_total(self) -> int:
        return sum(j * d for j, d in enumerate(self.D, start=2))

    def symmetry_group(self) -> list[tuple[int, ...]]:
        """All slot permutations fixing the input's symmetries, as image tuples."""
        m = self.m
        blocks = self.factor_slots()
        per_factor = []
        for slots in blocks:
            head, tail = slots[:2], slots[2:]
            options = []
            for h in (head, head[::-1]):
                for t in itertools.permutations(tail):
                    options.append(dict(zip(slots, list(h) + list(t))))
            per_factor.append(options)
        # exchanges of identical factors
        by_order: dict[int, list[int]] = {}
        for f, j in enumerate(self.factors):
            by_order.setdefault(j, []).append(f)
        exchanges = [{}]
        for group in by_order.values():
            new = []
            for base in exchanges:
                for perm in itertools.permutations(group):
                    d = dict(base)
                    for src, dst in zip(group, perm):
                        d[src] = dst
                    new.append(d)
            exchanges = new
        elements = []
        for choice in itertools.product(*per_factor):
            inner = {}
            for d in choice:
                inner.update(d)
            for ex in exchanges:
                img = list(range(m))
                for f, slots in enumerate(blocks):
                    target = blocks[ex.get(f, f)]
                    for s in slots:
                        img[s] = target[slots.index(inner[s])]
                elements.append(tuple(img))
        return sorted(set(elements))


def admissible_multi_indices(pbar: int, k: int) -> list[tuple[int, ...]]:
    """All D = (d_2, ..., d_2k) with 2 d_2 + 3 d_3 + ... = 2k."""
    total = 2 * k
    if total == 0:
        return [()]
    orders = list(range(2, total + 1))
    out = []

    def rec(i, remaining, acc):
        if i == len(orders):
            if remaining == 0:
                out.append(tuple(acc))
            return
        j = orders[i]
        for d in range(remaining // j + 1):
            rec(i + 1, remaining - d * j, acc + [d])

    rec(0, total, [])
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class ContractionScheme:
    signature: SlotSignature
    matching: Matching
    key: Matching

    @property
    def m(self) -> int:
        return self.signature.m


def canonical_key(matching: Matching, group: Sequence[tuple[int, ...]]) -> Matching:
    best = None
    for g in group:
        cand = tuple(sorted(tuple(sorted((g[a], g[b]))) for a, b in matching))
        if best is None or cand < best:
            best = cand
    return best


def schemes_for(sig: SlotSignature, dedup: bool = True) -> list[ContractionScheme]:
    if sig.m > MAX_SLOTS:
        raise CapExceeded(f"scheme with {sig.m} slots exceeds the cap of {MAX_SLOTS}")
    group = sig.symmetry_group()
    out = []
    seen = set()
    for mt in enumerate_matchings(sig.m):
        key = canonical_key(mt, group)
        if dedup:
            if key in seen:
                continue
            seen.add(key)
        out.append(ContractionScheme(sig, mt, key))
    return out


def enumerate_generators(pbar: int, k: int, dedup: bool = True) -> list[ContractionScheme]:
    """Total contractions spanning natural 2pbar-tensors of weight 2(pbar - k)."""
    if pbar < 0 or k < 0:
        raise ValueError("pbar and k must be nonnegative")
    out = []
    for D in admissible_multi_indices(pbar, k):
        out.extend(schemes_for(SlotSignature(D, pbar), dedup))
    return out


# ---------------------------------------------------------------------------
# evaluation


def _subscripts(scheme: ContractionScheme, eta: Sequence[int] | None):
    """einsum plan: subscripts, operand tags and output letters for one scheme."""
    sig = scheme.signature
    free = set(sig.free_slots)
    letters = iter(string.ascii_letters)
    slot_letter: dict[int, str] = {}
    extra_ops: list[tuple[str, str]] = []  # ("eta", subscript)
    for a, b in scheme.matching:
        if a in free and b in free:
            la, lb = next(letters), next(letters)
            slot_letter[a], slot_letter[b] = la, lb
            extra_ops.append(("eta", la + lb))
        elif a in free or b in free or eta is None:
            slot_letter[a] = slot_letter[b] = next(letters)
        else:
            la, lb = next(letters), next(letters)
            slot_letter[a], slot_letter[b] = la, lb
            extra_ops.append(("eta", la + lb))
    factor_subs = ["".join(slot_letter[s] for s in slots) for slots in sig.factor_slots()]
    out = "".join(slot_letter[s] for s in sig.free_slots)
    return factor_subs, extra_ops, out


def evaluate_scheme(scheme: ContractionScheme, inputs: dict[int, np.ndarray], n: int,
                    eta: Sequence[int] | None = None) -> np.ndarray:
    """Value of one total contraction as a 2pbar-slot array (int64).

    ``inputs`` maps order j to an N_j component array; each factor of
    order j reads the same array (the input is the diagonal of S^d N_j).
    Contractions use ``diag(eta)`` (Euclidean when None).
    """
    factor_subs, extra_ops, out = _subscripts(scheme, eta)
    eta_mat = np.diag(np.array(eta if eta is not None else [1] * n, dtype=np.int64))
    operands = [inputs[j] for j in scheme.signature.factors] + [eta_mat for _ in extra_ops]
    subs = factor_subs + [s for _, s in extra_ops]
    if not operands:
        return np.ones((), dtype=np.int64)
    res = np.einsum(",".join(subs) + "->" + out, *operands)
    return np.asarray(res)


def sample_inputs(n: int, orders: Iterable[int], count: int, seed) -> list[dict[int, np.ndarray]]:
    """``count`` random input dictionaries {order: N_order sample}, deterministic in seed."""
    rng = np.random.default_rng(seed)
    orders = sorted(set(orders))
    return [{r: _random_normal_array(n, r, rng) for r in orders} for _ in range(count)]


def _orders(schemes: Sequence[ContractionScheme]) -> list[int]:
    return sorted({j for s in schemes for j in s.signature.factors})


def evaluate_generators(schemes: Sequence[ContractionScheme], inputs: Sequence[dict[int, np.ndarray]],
                        n: int, eta: Sequence[int] | None = None) -> np.ndarray:
    """Matrix with one column per scheme and one row per (input, output index tuple)."""
    blocks = []
    for sample in inputs:
        cols = [evaluate_scheme(s, sample, n, eta).reshape(-1) for s in schemes]
        blocks.append(np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64))
    return np.concatenate(blocks, axis=0)


def evaluation_matrix(pbar: int, k: int, n: int, samples: int | None = None, seed=0,
                      schemes: Sequence[ContractionScheme] | None = None) -> np.ndarray:
    schemes = enumerate_generators(pbar, k) if schemes is None else schemes
    count = 2 * len(schemes) if samples is None else samples
    inputs = sample_inputs(n, _orders(schemes), count, seed)
    return evaluate_generators(schemes, inputs, n)


@dataclass
class RankResult:
    n: int
    rank: int
    generators: int
    samples: int
    batch_ranks: tuple[int, int]


def certified_rank(pbar: int, k: int, n: int, seed=0,
                   schemes: Sequence[ContractionScheme] | None = None,
                   samples: int | None = None) -> RankResult:
    """Rank of the evaluation matrix, certified by batch doubling.

    Batch A has ``samples`` (default 2x generators) random inputs; batch B
    is an independent batch of the same size. The rank of A must equal the
    rank of A and B together, otherwise RankNotStabilized is raised.
    """
    schemes = enumerate_generators(pbar, k) if schemes is None else schemes
    count = max(2 * len(schemes), 1) if samples is None else samples
    orders = _orders(schemes)
    batch_a = evaluate_generators(schemes, sample_inputs(n, orders, count, [seed, n, 0]), n)
    batch_b = evaluate_generators(schemes, sample_inputs(n, orders, count, [seed, n, 1]), n)
    ga = np.array(linalg.gram_of_columns(batch_a), dtype=object)
    gb = np.array(linalg.gram_of_columns(batch_b), dtype=object)
    ra = linalg.rank(ga)
    rab = linalg.rank(ga + gb)
    if ra != rab:
        raise RankNotStabilized(
            f"rank {ra} with {count} samples but {rab} after doubling (pbar={pbar}, k={k}, n={n})")
    return RankResult(n, rab, len(schemes), count, (ra, rab))


def natural_dimension(pbar: int, k: int, n: int, seed=0) -> int:
    """dim of natural 2pbar-tensors of weight 2(pbar-k) in dimension n."""
    return certified_rank(pbar, k, n, seed).rank


def _check_pair(pbar: int, k: int):
    if (pbar, k) in EXCEPTIONAL:
        raise ExceptionalCaseError(f"(pbar, k) = ({pbar}, {k}) is an exceptional case")


def kernel_dimension(pbar: int, k: int, n: int, seed=0) -> int:
    """dim of universal tensors vanishing in dimension n.

    Computed as rank(evaluations in dim 2k+pbar) - rank(evaluations in dim n).
    """
    _check_pair(pbar, k)
    top = critical_dimension(pbar, k)
    if n > top:
        raise ValueError(f"n must be <= 2k+pbar = {top}")
    schemes = enumerate_generators(pbar, k)
    hi = certified_rank(pbar, k, top, seed, schemes).rank
    lo = certified_rank(pbar, k, n, seed, schemes).rank
    return hi - lo


def identity_dimension_formula(pbar: int) -> int:
    """pbar (pbar+1) ... (2pbar-1), with value 1 for pbar in {0, 1}."""
    if pbar <= 1:
        return 1
    return math.prod(range(pbar, 2 * pbar))


# ---------------------------------------------------------------------------
# membership of the S tensors


@dataclass
class MembershipReport:
    pbar: int
    k: int
    stable_dim: int
    identity_dim: int
    in_span: bool
    in_kernel: bool
    distinct_tensors: int
    span_dim: int
    kernel_dim: int
    formula_dim: int
    witness_nonzero_at_stable: bool
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """S tensors lie in the kernel and span all of it."""
        return self.in_span and self.in_kernel and self.span_dim == self.kernel_dim

    def to_dict(self) -> dict:
        return {
            "pbar": self.pbar,
            "k": self.k,
            "stable_dim": self.stable_dim,
            "identity_dim": self.identity_dim,
            "in_span": self.in_span,
            "in_kernel": self.in_kernel,
            "distinct_tensors": self.distinct_tensors,
            "span_dim": self.span_dim,
            "kernel_dim": self.kernel_dim,
            "formula_dim": self.formula_dim,
            "witness_nonzero_at_stable": self.witness_nonzero_at_stable,
            "holds": self.holds,
        }


def _distinct_permutations(pbar: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(2 * pbar))]


def s_evaluation_columns(pbar: int, k: int, inputs: Sequence[dict[int, np.ndarray]], n: int,
                         perms: Sequence[Permutation]) -> np.ndarray:
    """Values of sigma . S on the degree-2 jets built from the N_2 inputs."""
    cols = [[] for _ in perms]
    for sample in inputs:
        a2 = sample.get(2)
        if a2 is None:
            a2 = np.zeros((n,) * 4, dtype=np.int64)
        S = s_tensor(pbar, k, jet_from_normal_tensor(a2))
        for c, sigma in zip(cols, perms):
            c.extend(permute_slots(S, sigma).components.reshape(-1).tolist())
    return np.array(cols, dtype=object).T.reshape(-1, len(perms))


def membership_check(pbar: int, k: int, seed=0) -> MembershipReport:
    """Express each sigma . S through the generators and test it in dimension 2k+pbar-1.

    In the stable dimension N = 2k+pbar the value vector of sigma . S must
    lie in the column span of the evaluation matrix; the coefficient vector
    found there is then applied to the generators in dimension N-1, where
    it must vanish identically. The span of all sigma . S is compared with
    the kernel dimension.
    """
    _check_pair(pbar, k)
    N = critical_dimension(pbar, k)
    lo = N - 1
    schemes = enumerate_generators(pbar, k)
    orders = sorted(set(_orders(schemes)) | {2}) if k else _orders(schemes)
    count = 2 * len(schemes)
    perms = _distinct_permutations(pbar)

    inputs_hi = sample_inputs(N, orders, count, [seed, N, 7])
    M_hi = evaluate_generators(schemes, inputs_hi, N).astype(object)
    S_all = s_evaluation_columns(pbar, k, inputs_hi, N, perms)
    den = linalg.common_denominator(S_all.ravel())
    S_all = np.vectorize(lambda v: int(v * den), otypes=[object])(S_all)
    keep = _distinct_columns(S_all)
    S_hi = S_all[:, keep]

    gram = linalg.gram_of_columns(M_hi)
    rhs = M_hi.T.dot(S_hi)
    sols = linalg.solve_many(gram, [list(rhs[:, c]) for c in range(S_hi.shape[1])])
    in_span = all(x is not None for x in sols)
    coeffs = []
    if in_span:
        for c, x in enumerate(sols):
            scale = linalg.common_denominator(x)
            x_int = np.array([int(v * scale) for v in x], dtype=object)
            if not np.array_equal(M_hi.dot(x_int), S_hi[:, c] * scale):
                in_span = False
                break
            coeffs.append(x_int)

    in_kernel = in_span
    if in_span and lo >= 1:
        inputs_lo = sample_inputs(lo, orders, count, [seed, lo, 7])
        M_lo = evaluate_generators(schemes, inputs_lo, lo).astype(object)
        in_kernel = all(not np.any(M_lo.dot(x) != 0) for x in coeffs)

    span_dim = linalg.rank(linalg.gram_of_columns(S_hi)) if S_hi.shape[1] else 0
    distinct = S_hi.shape[1]
    kernel_dim = kernel_dimension(pbar, k, lo, seed) if lo >= 1 else certified_rank(pbar, k, N, seed).rank
    return MembershipReport(
        pbar=pbar,
        k=k,
        stable_dim=N,
        identity_dim=lo,
        in_span=in_span,
        in_kernel=in_kernel,
        distinct_tensors=distinct,
        span_dim=span_dim,
        kernel_dim=kernel_dim,
        formula_dim=identity_dimension_formula(pbar),
        witness_nonzero_at_stable=bool(np.any(S_all != 0)),
    )


def _distinct_columns(cols: np.ndarray) -> list[int]:
    """Indices of the nonzero columns that are pairwise distinct up to sign."""
    seen: list[tuple] = []
    keep = []
    for c in range(cols.shape[1]):
        v = tuple(cols[:, c].tolist())
        if not any(x != 0 for x in v):
            continue
        if any(v == u or v == tuple(-x for x in u) for u in seen):
            continue
        seen.append(v)
        keep.append(c)
    return keep
