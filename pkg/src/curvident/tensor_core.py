"""Dense tensors over exact rationals.

A :class:`Tensor` is an ``n x n x ... x n`` array together with one variance
flag per slot. Components are stored in a numpy object array holding
``int``/``Fraction`` values, so every operation below is exact. Passing
``exact=False`` to the constructors switches to float64 for quick
experiments; float tensors are never used to decide vanishing.

Slots and indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

COV = "cov"
CONTRA = "contra"


class TensorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Permutations


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., m-1}``, stored as its image tuple.

    Composition follows ``(s * t)(i) == s(t(i))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise TensorError(f"not a permutation: {self.images!r}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(m)))

    @classmethod
    def transposition(cls, m: int, i: int, j: int) -> "Permutation":
        images = list(range(m))
        images[i], images[j] = images[j], images[i]
        return cls(tuple(images))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self) != len(other):
            raise TensorError("cannot compose permutations of different sizes")
        return Permutation(tuple(self.images[other.images[i]] for i in range(len(self))))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, s in enumerate(self.images):
            inv[s] = i
        return Permutation(tuple(inv))

    @property
    def sign(self) -> int:
        return permutation_sign(self.images)


def permutation_sign(images: Sequence[int]) -> int:
    seen = [False] * len(images)
    sign = 1
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = images[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def signed_permutations(m: int) -> Iterable[tuple[tuple[int, ...], int]]:
    for p in itertools.permutations(range(m)):
        yield p, permutation_sign(p)


# ---------------------------------------------------------------------------
# Tensor


def _to_exact(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, bool):
        return int(x)
    raise TensorError(f"non-exact component {x!r}; use exact=False for floats")


class Tensor:
    """Immutable dense tensor with per-slot variance."""

    __slots__ = ("dim", "slots", "components")

    def __init__(self, dim: int, slots: Sequence[str], components, exact: bool = True):
        if dim < 1:
            raise TensorError("dimension must be >= 1")
        slots = tuple(slots)
        for s in slots:
            if s not in (COV, CONTRA):
                raise TensorError(f"unknown variance flag {s!r}")
        arr = np.asarray(components, dtype=object if exact else float)
        if exact and arr.size:
            arr = np.vectorize(_to_exact, otypes=[object])(arr)
        if arr.shape != (dim,) * len(slots):
            raise TensorError(
                f"component shape {arr.shape} does not match dim={dim}, rank={len(slots)}"
            )
        arr.setflags(write=False)
        self.dim = dim
        self.slots = slots
        self.components = arr

    # construction helpers ------------------------------------------------
    @classmethod
    def _wrap(cls, dim, slots, arr) -> "Tensor":
        # trusted internal constructor: arr already has the right dtype/shape
        t = object.__new__(cls)
        arr = np.asarray(arr)
        if arr.dtype != object and arr.dtype.kind in "iub":
            arr = arr.astype(object)
        arr.setflags(write=False)
        t.dim = dim
        t.slots = tuple(slots)
        t.components = arr
        return t

    @classmethod
    def zeros(cls, dim: int, slots: Sequence[str]) -> "Tensor":
        arr = np.zeros((dim,) * len(slots), dtype=object)
        arr[...] = 0
        return cls._wrap(dim, slots, arr)

    @classmethod
    def scalar(cls, dim: int, value) -> "Tensor":
        return cls(dim, (), np.array(value, dtype=object))

    @classmethod
    def from_matrix(cls, matrix, slots=(COV, COV)) -> "Tensor":
        arr = np.array(matrix, dtype=object)
        return cls(arr.shape[0], slots, arr)

    @classmethod
    def identity(cls, dim: int) -> "Tensor":
        """The mixed identity ``delta^i_j``."""
        return cls(dim, (CONTRA, COV), _eye(dim))

    # basic protocol ---------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.slots)

    @property
    def exact(self) -> bool:
        return self.components.dtype == object

    def __getitem__(self, index):
        return self.components[index]

    def value(self):
        """The single component of a rank-0 tensor."""
        if self.rank:
            raise TensorError("value() needs a rank-0 tensor")
        return self.components[()]

    def is_zero(self) -> bool:
        return not np.any(self.components != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.slots == other.slots
            and bool(np.all(self.components == other.components))
        )

    def __hash__(self):
        return hash((self.dim, self.slots))

    def __repr__(self) -> str:
        return f"Tensor(dim={self.dim}, slots={self.slots})"

    def _check_same(self, other: "Tensor"):
        if self.dim != other.dim or self.slots != other.slots:
            raise TensorError("tensors must share dimension and slot layout")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor._wrap(self.dim, self.slots, self.components + other.components)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor._wrap(self.dim, self.slots, self.components - other.components)

    def __neg__(self) -> "Tensor":
        return Tensor._wrap(self.dim, self.slots, -self.components)

    def scale(self, c) -> "Tensor":
        return Tensor._wrap(self.dim, self.slots, self.components * c)

    def to_float(self) -> "Tensor":
        return Tensor(self.dim, self.slots, self.components.astype(float), exact=False)

    def nonzero_entries(self) -> list[tuple[tuple[int, ...], object]]:
        if self.rank == 0:
            v = self.components[()]
            return [((), v)] if v != 0 else []
        return [(tuple(int(i) for i in idx), self.components[idx])
                for idx in zip(*np.nonzero(self.components != 0))]


def _eye(n: int) -> np.ndarray:
    arr = np.zeros((n, n), dtype=object)
    arr[...] = 0
    for i in range(n):
        arr[i, i] = 1
    return arr


def _matrix_inverse(m: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a small exact matrix."""
    n = m.shape[0]
    a = [[Fraction(m[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise TensorError("singular metric")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            x = a[i][j + n]
            out[i, j] = int(x) if x.denominator == 1 else x
    return out


def metric_inverse(g: Tensor) -> Tensor:
    if g.rank != 2:
        raise TensorError("metric must have two slots")
    if g.exact:
        inv = _matrix_inverse(g.components)
    else:
        inv = np.linalg.inv(g.components.astype(float))
    flip = tuple(CONTRA if s == COV else COV for s in g.slots)
    return Tensor._wrap(g.dim, flip, inv)


# ---------------------------------------------------------------------------
# Operations


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    if a.dim != b.dim:
        raise TensorError(f"dimension mismatch: {a.dim} vs {b.dim}")
    arr = np.multiply.outer(a.components, b.components)
    return Tensor._wrap(a.dim, a.slots + b.slots, arr)


def contract(t: Tensor, slot_a: int, slot_b: int, g: Tensor | None = None) -> Tensor:
    """Contract two slots of ``t``.

    Mixed-variance pairs are traced directly. Two covariant slots are paired
    through the inverse of ``g``; two contravariant slots through ``g`` itself.
    """
    m = t.rank
    if not (0 <= slot_a < m and 0 <= slot_b < m):
        raise TensorError(f"slot out of range for rank {m}")
    if slot_a == slot_b:
        raise TensorError("cannot contract a slot with itself")
    va, vb = t.slots[slot_a], t.slots[slot_b]
    arr = np.moveaxis(t.components, (slot_a, slot_b), (-2, -1))
    if va != vb:
        out = np.trace(arr, axis1=-2, axis2=-1)
    else:
        if g is None:
            raise TensorError("a metric is needed to contract slots of equal variance")
        if g.rank != 2 or g.dim != t.dim:
            raise TensorError("metric must be a 2-slot tensor of the same dimension")
        if g.slots[0] != g.slots[1]:
            raise TensorError("metric slots must share variance")
        if g.slots[0] == va:
            pairing = metric_inverse(g).components
        else:
            pairing = g.components
        out = (arr * pairing).sum(axis=(-2, -1))
    slots = tuple(s for i, s in enumerate(t.slots) if i not in (slot_a, slot_b))
    if not slots:
        out = np.array(out, dtype=object if t.exact else float)
    return Tensor._wrap(t.dim, slots, out)


def permute_slots(t: Tensor, sigma: Permutation | Sequence[int]) -> Tensor:
    """Reorder slots: the result at ``(i_0..i_{m-1})`` is ``t`` at ``(i_{s(0)}..i_{s(m-1)})``.

    Consequently ``permute_slots(permute_slots(t, s), u) == permute_slots(t, u * s)``.
    """
    if not isinstance(sigma, Permutation):
        sigma = Permutation(tuple(sigma))
    if len(sigma) != t.rank:
        raise TensorError(f"permutation of size {len(sigma)} on a rank-{t.rank} tensor")
    # new axis k reads old axis sigma(k) in index position k, so
    # result[..., i_k, ...] = t[i_{sigma(0)}, ...] means old axis j takes
    # the index of new axis sigma^{-1}(j)
    inv = sigma.inverse().images
    arr = np.transpose(t.components, inv)
    slots = tuple(t.slots[sigma.images.index(k)] for k in range(t.rank))
    return Tensor._wrap(t.dim, slots, arr)


def _check_block(t: Tensor, slots: Sequence[int]) -> tuple[int, ...]:
    slots = tuple(slots)
    if len(set(slots)) != len(slots):
        raise TensorError("repeated slot in subset")
    for s in slots:
        if not 0 <= s < t.rank:
            raise TensorError(f"slot {s} out of range")
    if len({t.slots[s] for s in slots}) > 1:
        raise TensorError("cannot (anti)symmetrize slots of mixed variance")
    return slots


def _average(t: Tensor, slots: Sequence[int], signed: bool) -> Tensor:
    slots = _check_block(t, slots)
    total = None
    count = 0
    for perm, sign in signed_permutations(len(slots)):
        axes = list(range(t.rank))
        for src, dst in zip(slots, perm):
            axes[src] = slots[dst]
        term = np.transpose(t.components, axes)
        if signed and sign < 0:
            term = -term
        total = term if total is None else total + term
        count += 1
    if t.exact:
        out = total * Fraction(1, count)
        out = np.vectorize(_normalize, otypes=[object])(out) if out.size else out
    else:
        out = total / count
    return Tensor._wrap(t.dim, t.slots, out)


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def symmetrize(t: Tensor, slots: Sequence[int]) -> Tensor:
    return _average(t, slots, signed=False)


def antisymmetrize(t: Tensor, slots: Sequence[int]) -> Tensor:
    return _average(t, slots, signed=True)


def generalized_kronecker(m: int, n: int) -> Tensor:
    """``delta^{j_1..j_m}_{i_1..i_m}`` as the determinant of single deltas.

    Slot order is the ``m`` upper indices followed by the ``m`` lower ones.
    No ``1/m!`` normalization: components lie in {-1, 0, 1}.
    """
    if m < 1:
        raise TensorError("order must be >= 1")
    arr = np.zeros((n,) * (2 * m), dtype=object)
    arr[...] = 0
    if m <= n:
        perms = list(signed_permutations(m))
        for lower in itertools.permutations(range(n), m):
            for perm, sign in perms:
                upper = tuple(lower[p] for p in perm)
                arr[upper + lower] = sign
    return Tensor._wrap(n, (CONTRA,) * m + (COV,) * m, arr)


def double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1
