"""Metric jets and their curvature at the base point.

A metric jet is the Taylor polynomial of the components ``g_ab(x)`` at
the origin, truncated at a fixed total degree. Everything is computed by
exact coefficient manipulation, so "the Einstein tensor vanishes" is a
decidable statement.

Conventions::

    Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk)
    R^i_jkl   = d_k Gamma^i_lj - d_l Gamma^i_kj
                + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj
    R_abcd    = g_ai(0) R^i_bcd
    Ric_bd    = g^ac R_abcd,   r = g^bd Ric_bd,   G = Ric - r/2 g

With these, the round sphere of curvature ``k`` has ``r = n(n-1)k``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .polynomial import Poly
from .tensor_core import COV, Tensor, TensorError, contract, _matrix_inverse


class JetError(ValueError):
    pass


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, eq=False)
class MetricJet:
    dim: int
    degree: int
    signature: tuple[int, int]
    components: Mapping[tuple[int, int], Poly]

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise JetError("dimension must be >= 1")
        if self.degree < 0:
            raise JetError("degree must be >= 0")
        sig = tuple(int(s) for s in self.signature)
        if len(sig) != 2 or min(sig) < 0 or sum(sig) != n:
            raise JetError(f"signature {self.signature} incompatible with dim {n}")
        object.__setattr__(self, "signature", sig)
        comps = {}
        for a in range(n):
            for b in range(a, n):
                p = self.components.get((a, b))
                if p is None:
                    p = self.components.get((b, a), Poly(n))
                if p.nvars != n:
                    raise JetError("component polynomial has wrong variable count")
                if p.degree > self.degree:
                    raise JetError("component exceeds the jet degree")
                comps[(a, b)] = p
        object.__setattr__(self, "components", comps)
        g0 = self.base_matrix()
        if _signature_of(g0) != sig:
            raise JetError(f"base metric does not have signature {sig}")

    def g(self, a: int, b: int) -> Poly:
        return self.components[_pair(a, b)]

    def base_matrix(self) -> np.ndarray:
        n = self.dim
        m = np.empty((n, n), dtype=object)
        for a in range(n):
            for b in range(n):
                c = self.g(a, b).constant_term()
                m[a, b] = int(c) if c.denominator == 1 else c
        return m

    def base_metric(self) -> Tensor:
        return Tensor(self.dim, (COV, COV), self.base_matrix())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricJet):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.degree == other.degree
            and self.signature == other.signature
            and self.components == other.components
        )

    __hash__ = None

    # serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        coeffs = []
        for (a, b), p in sorted(self.components.items()):
            for exp, c in p.monomials():
                coeffs.append({
                    "indices": [a, b],
                    "exponents": list(exp),
                    "numerator": c.numerator,
                    "denominator": c.denominator,
                })
        return {
            "dim": self.dim,
            "degree": self.degree,
            "signature": list(self.signature),
            "coefficients": coeffs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "MetricJet":
        n = int(data["dim"])
        terms: dict[tuple[int, int], dict] = {}
        for entry in data["coefficients"]:
            a, b = _pair(*entry["indices"])
            exp = tuple(entry["exponents"])
            c = Fraction(int(entry["numerator"]), int(entry["denominator"]))
            bucket = terms.setdefault((a, b), {})
            if exp in bucket:
                raise JetError(f"duplicate coefficient for g_{a}{b} at {exp}")
            bucket[exp] = c
        comps = {k: Poly(n, v) for k, v in terms.items()}
        return cls(n, int(data["degree"]), tuple(data["signature"]), comps)

    @classmethod
    def from_json(cls, text: str) -> "MetricJet":
        return cls.from_dict(json.loads(text))


def _signature_of(m: np.ndarray) -> tuple[int, int]:
    """(n_plus, n_minus) of a nonsingular symmetric rational matrix, via LDL^T."""
    n = m.shape[0]
    a = [[Fraction(m[i, j]) for j in range(n)] for i in range(n)]
    if any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise JetError("base metric is not symmetric")
    plus = minus = 0
    size = n
    while size:
        piv = next((i for i in range(size) if a[i][i] != 0), None)
        if piv is None:
            # all diagonal zero: combine rows/cols to create a nonzero pivot
            j = next((j for j in range(1, size) if a[0][j] != 0), None)
            if j is None:
                raise JetError("base metric is singular")
            for k in range(size):
                a[0][k] += a[j][k]
            for k in range(size):
                a[k][0] += a[k][j]
            piv = 0
        a[0], a[piv] = a[piv], a[0]
        for row in a:
            row[0], row[piv] = row[piv], row[0]
        d = a[0][0]
        if d > 0:
            plus += 1
        else:
            minus += 1
        rest = [[a[i][j] - a[i][0] * a[0][j] / d for j in range(1, size)] for i in range(1, size)]
        a = rest
        size -= 1
    return plus, minus


# ---------------------------------------------------------------------------
# constructors


def _monomials(nvars: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(lo, hi + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            exp = [0] * nvars
            for i in combo:
                exp[i] += 1
            out.append(tuple(exp))
    return out


def flat_jet(n: int, signature: tuple[int, int] | None = None, degree: int = 2) -> MetricJet:
    sig = signature if signature is not None else (n, 0)
    comps = {(a, a): Poly.constant(n, 1 if a < sig[0] else -1) for a in range(n)}
    return MetricJet(n, degree, sig, comps)


def random_metric_jet(
    n: int,
    signature: tuple[int, int] | None = None,
    degree: int = 2,
    seed: int | Sequence[int] = 0,
    amplitude: int = 9,
) -> MetricJet:
    """Random jet around ``diag(+1 x n_plus, -1 x n_minus)``.

    Every monomial of degree 1..``degree`` in every component ``g_ab`` gets a
    coefficient ``k/10`` with ``k`` uniform in ``[-amplitude, amplitude]``.
    ``amplitude=0`` gives the flat jet. Seeds may be ints or int sequences.
    """
    if n < 1:
        raise JetError("dimension must be >= 1")
    if degree < 2:
        raise JetError("random jets need degree >= 2")
    sig = tuple(signature) if signature is not None else (n, 0)
    if len(sig) != 2 or min(sig) < 0 or sum(sig) != n:
        raise JetError(f"invalid signature {signature} for dim {n}")
    rng = np.random.default_rng(seed)
    monos = _monomials(n, 1, degree)
    comps = {}
    for a in range(n):
        for b in range(a, n):
            nums = rng.integers(-amplitude, amplitude + 1, size=len(monos))
            terms = {e: Fraction(int(k), 10) for e, k in zip(monos, nums) if k}
            if a == b:
                terms[(0,) * n] = 1 if a < sig[0] else -1
            comps[(a, b)] = Poly(n, terms)
    return MetricJet(n, degree, sig, comps)


def jet_from_matrix_polys(n: int, degree: int, matrix: Sequence[Sequence[Poly]]) -> MetricJet:
    comps = {(a, b): matrix[a][b].truncate(degree) for a in range(n) for b in range(a, n)}
    for a in range(n):
        for b in range(n):
            if matrix[a][b].truncate(degree) != matrix[b][a].truncate(degree):
                raise JetError("matrix of polynomials is not symmetric")
    g0 = np.array([[matrix[a][b].constant_term() for b in range(n)] for a in range(n)], dtype=object)
    return MetricJet(n, degree, _signature_of(g0), comps)


def jet_from_normal_tensor(a2: np.ndarray, signature: tuple[int, int] | None = None) -> MetricJet:
    """Degree-2 jet ``g_ab = eta_ab + 1/2 A_abij x^i x^j`` for a second-order normal tensor."""
    n = a2.shape[0]
    sig = signature if signature is not None else (n, 0)
    comps = {}
    for a in range(n):
        for b in range(a, n):
            terms: dict[tuple[int, ...], Fraction] = {}
            if a == b:
                terms[(0,) * n] = Fraction(1 if a < sig[0] else -1)
            for i in range(n):
                for j in range(n):
                    c = a2[a, b, i, j]
                    if c:
                        exp = [0] * n
                        exp[i] += 1
                        exp[j] += 1
                        e = tuple(exp)
                        terms[e] = terms.get(e, Fraction(0)) + Fraction(c) / 2
            comps[(a, b)] = Poly(n, terms)
    return MetricJet(n, 2, sig, comps)


# ---------------------------------------------------------------------------
# derived quantities


def inverse_metric_jet(g: MetricJet, degree: int | None = None) -> list[list[Poly]]:
    """Matrix of polynomials ``h`` with ``g h = Id`` through the truncation degree.

    Uses the Neumann series ``(g0 + E)^-1 = sum_j (-g0^-1 E)^j g0^-1``.
    """
    d = g.degree if degree is None else degree
    n = g.dim
    try:
        g0inv = _matrix_inverse(g.base_matrix())
    except TensorError as exc:
        raise JetError("singular constant term") from exc
    E = [[g.g(a, b) - g.g(a, b).constant_term() for b in range(n)] for a in range(n)]
    # step = -g0^-1 E
    step = [[sum((E[k][b].scale(-g0inv[a, k]) for k in range(n)), Poly(n)) for b in range(n)]
            for a in range(n)]
    inv0 = [[Poly.constant(n, g0inv[a, b]) for b in range(n)] for a in range(n)]
    total = [row[:] for row in inv0]
    term = inv0
    for _ in range(d):
        term = _matmul(step, term, d)
        if all(p.is_zero() for row in term for p in row):
            break
        total = [[total[a][b] + term[a][b] for b in range(n)] for a in range(n)]
    return total


def _matmul(x: list[list[Poly]], y: list[list[Poly]], max_degree: int) -> list[list[Poly]]:
    n = len(x)
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = Poly(x[a][0].nvars)
            for k in range(n):
                if x[a][k].terms and y[k][b].terms:
                    acc = acc + x[a][k].mul(y[k][b], max_degree)
            row.append(acc)
        out.append(row)
    return out


@dataclass(frozen=True)
class ChristoffelJet:
    dim: int
    degree: int
    symbols: Mapping[tuple[int, int, int], Poly]  # (i, j, k) with j <= k

    def __call__(self, i: int, j: int, k: int) -> Poly:
        return self.symbols[(i,) + _pair(j, k)]


def christoffel(g: MetricJet, degree: int | None = None) -> ChristoffelJet:
    """Levi-Civita symbols ``Gamma^i_jk`` up to degree ``g.degree - 1``."""
    if g.degree < 1:
        raise JetError("Christoffel symbols need a jet of degree >= 1")
    d = g.degree - 1 if degree is None else min(degree, g.degree - 1)
    n = g.dim
    ginv = inverse_metric_jet(g, d)
    dg = {(l, a, b): g.g(a, b).diff(l).truncate(d) for l in range(n) for a in range(n) for b in range(a, n)}

    def dgc(l, a, b):
        return dg[(l,) + _pair(a, b)]

    first = {}
    for l in range(n):
        for j in range(n):
            for k in range(j, n):
                first[(l, j, k)] = (dgc(j, l, k) + dgc(k, l, j) - dgc(l, j, k)).scale(Fraction(1, 2))
    symbols = {}
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                acc = Poly(n)
                for l in range(n):
                    if ginv[i][l].terms and first[(l, j, k)].terms:
                        acc = acc + ginv[i][l].mul(first[(l, j, k)], d)
                symbols[(i, j, k)] = acc
    return ChristoffelJet(n, d, symbols)


def riemann(g: MetricJet) -> Tensor:
    """Fully covariant ``R_abcd`` at the base point."""
    if g.degree < 2:
        raise JetError("curvature needs a jet of degree >= 2")
    n = g.dim
    gam = christoffel(g, degree=1)
    G0 = np.empty((n, n, n), dtype=object)
    dG = np.empty((n, n, n, n), dtype=object)  # dG[m, i, j, k] = d_m Gamma^i_jk (0)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                p = gam(i, j, k)
                G0[i, j, k] = p.constant_term()
                for m in range(n):
                    dG[m, i, j, k] = p.diff(m).constant_term()
    up = np.empty((n, n, n, n), dtype=object)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        v = dG[k, i, l, j] - dG[l, i, k, j]
        for m in range(n):
            v += G0[i, k, m] * G0[m, l, j] - G0[i, l, m] * G0[m, k, j]
        up[i, j, k, l] = v
    g0 = g.base_matrix()
    low = np.einsum("ai,ibcd->abcd", g0, up)
    return Tensor(n, (COV,) * 4, np.vectorize(_norm, otypes=[object])(low))


def _norm(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def ricci(g: MetricJet, R: Tensor | None = None) -> Tensor:
    R = riemann(g) if R is None else R
    return contract(R, 0, 2, g.base_metric())


def scalar_curvature(g: MetricJet, R: Tensor | None = None) -> Fraction:
    ric = ricci(g, R)
    return Fraction(contract(ric, 0, 1, g.base_metric()).value())


def einstein(g: MetricJet, R: Tensor | None = None) -> Tensor:
    R = riemann(g) if R is None else R
    ric = ricci(g, R)
    r = scalar_curvature(g, R)
    return ric - g.base_metric().scale(r / 2)


# ---------------------------------------------------------------------------
# cylinders, restriction, scaling, coordinate changes


def cylinder_extend(g: MetricJet, extra: int = 1) -> MetricJet:
    """Jet of ``g + dt_1^2 + ... + dt_extra^2`` on ``X x R^extra``."""
    n = g.dim + extra
    comps = {k: p.extend(n) for k, p in g.components.items()}
    for a in range(g.dim, n):
        comps[(a, a)] = Poly.constant(n, 1)
    sig = (g.signature[0] + extra, g.signature[1])
    return MetricJet(n, g.degree, sig, comps)


def restrict(t: Tensor, extra: int = 1) -> Tensor:
    """Pull back along ``X -> X x R^extra``: keep components with every index < n - extra."""
    if any(s != COV for s in t.slots):
        raise TensorError("restriction needs an all-covariant tensor")
    m = t.dim - extra
    if m < 1:
        raise TensorError("cannot restrict below dimension 1")
    arr = t.components[(slice(0, m),) * t.rank]
    return Tensor(m, t.slots, np.array(arr, dtype=object))


def rescale(g: MetricJet, factor) -> MetricJet:
    """The jet of ``factor * g`` (``factor`` plays the role of lambda^2)."""
    factor = Fraction(factor)
    if factor <= 0:
        raise JetError("rescaling factor must be positive")
    comps = {k: p.scale(factor) for k, p in g.components.items()}
    return MetricJet(g.dim, g.degree, g.signature, comps)


def transform_jet(g: MetricJet, A: Sequence[Sequence]) -> MetricJet:
    """Pull back along the linear chart change ``x = A y``.

    The new components are ``g'_ab(y) = A_ia A_jb g_ij(A y)``.
    """
    n = g.dim
    A = [[Fraction(A[i][j]) for j in range(n)] for i in range(n)]
    sub = {k: p.substitute_linear(A, g.degree) for k, p in g.components.items()}
    comps = {}
    for a in range(n):
        for b in range(a, n):
            acc = Poly(n)
            for i in range(n):
                if not A[i][a]:
                    continue
                for j in range(n):
                    if A[j][b]:
                        acc = acc + sub[_pair(i, j)].scale(A[i][a] * A[j][b])
            comps[(a, b)] = acc
    return MetricJet(n, g.degree, g.signature, comps)


def transform_tensor(t: Tensor, A: Sequence[Sequence]) -> Tensor:
    """Components of a covariant tensor in the chart ``x = A y``."""
    if any(s != COV for s in t.slots):
        raise TensorError("only covariant tensors are supported")
    a = np.array([[Fraction(x) for x in row] for row in A], dtype=object)
    arr = t.components
    for axis in range(t.rank):
        arr = np.moveaxis(np.tensordot(arr, a, axes=([axis], [0])), -1, axis)
    return Tensor(t.dim, t.slots, np.vectorize(_norm, otypes=[object])(arr))
