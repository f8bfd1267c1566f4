"""Sparse multivariate polynomials with exact rational coefficients.

Only the handful of operations needed for metric jets are provided;
truncation to a total degree is explicit at every product.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    # inspection --------------------------------------------------------------
    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        parts = []
        for exp, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(exp) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    # arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(self.nvars, {})
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def mul(self, other, max_degree: int | None = None) -> "Poly":
        """Product, dropping every monomial above ``max_degree``."""
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if max_degree is not None and d1 + sum(e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.nvars, out)

    def __mul__(self, other) -> "Poly":
        return self.mul(other)

    __rmul__ = __mul__

    def truncate(self, max_degree: int) -> "Poly":
        return Poly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    def diff(self, i: int) -> "Poly":
        out = {}
        for exp, c in self.terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                out[tuple(e)] = c * exp[i]
        return Poly._raw(self.nvars, out)

    def extend(self, nvars: int) -> "Poly":
        """Same polynomial viewed in ``nvars >= self.nvars`` variables."""
        pad = (0,) * (nvars - self.nvars)
        return Poly._raw(nvars, {e + pad: c for e, c in self.terms.items()})

    def substitute_linear(self, matrix: Sequence[Sequence], max_degree: int) -> "Poly":
        """Compose with ``x_i = sum_j matrix[i][j] * y_j``, truncated."""
        nv = self.nvars
        images = [
            Poly(nv, {tuple(int(k == j) for k in range(nv)): matrix[i][j] for j in range(nv)})
            for i in range(nv)
        ]
        powers: list[list[Poly]] = []
        for i in range(nv):
            seq = [Poly.constant(nv, 1)]
            for _ in range(max_degree):
                seq.append(seq[-1].mul(images[i], max_degree))
            powers.append(seq)
        total = Poly(nv)
        for exp, c in self.terms.items():
            if sum(exp) > max_degree:
                continue
            term = Poly.constant(nv, c)
            for i, e in enumerate(exp):
                if e:
                    term = term.mul(powers[i][e], max_degree)
            total = total + term
        return total

    def monomials(self) -> Iterable[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items())
