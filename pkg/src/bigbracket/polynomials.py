"""Sparse multivariate polynomials over exact rationals.

Terms are a dict  (e_1, ..., e_m) exponent tuple -> Fraction, with no zero
coefficients stored.  This is the coefficient ring of the polynomial tensor
calculus; everything is immutable and exact.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from .errors import InputError

ScalarLike = Union[int, Fraction]
_ZERO = Fraction(0)


class Poly:
    __slots__ = ("m", "_terms", "_hash")

    def __init__(self, m: int, terms: Mapping | Iterable = ()):
        if m < 1:
            raise InputError("need at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != m or any(e < 0 for e in exps):
                raise InputError(f"bad exponent vector {exps} for {m} variables")
            c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if not c:
                continue
            acc = clean.get(exps, _ZERO) + c
            if acc:
                clean[exps] = acc
            else:
                clean.pop(exps, None)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, m: int) -> "Poly":
        return cls(m)

    @classmethod
    def const(cls, m: int, c: ScalarLike) -> "Poly":
        return cls(m, {(0,) * m: c})

    @classmethod
    def one(cls, m: int) -> "Poly":
        return cls.const(m, 1)

    @classmethod
    def variable(cls, m: int, i: int) -> "Poly":
        if not 1 <= i <= m:
            raise InputError(f"variable index {i} out of range 1..{m}")
        exps = tuple(1 if j == i else 0 for j in range(1, m + 1))
        return cls(m, {exps: 1})

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_part(self) -> Fraction:
        return self._terms.get((0,) * self.m, _ZERO)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def _check(self, other: "Poly"):
        if self.m != other.m:
            raise InputError("polynomials in different variable counts")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            acc = terms.get(e, _ZERO) + c
            if acc:
                terms[e] = acc
            else:
                terms.pop(e, None)
        return Poly(self.m, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.m, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(e, _ZERO) + c1 * c2
                if acc:
                    terms[e] = acc
                else:
                    terms.pop(e, None)
        return Poly(self.m, terms)

    def scale(self, c: ScalarLike) -> "Poly":
        c = Fraction(c)
        return Poly(self.m, {e: c * v for e, v in self._terms.items()})

    def __rmul__(self, c: ScalarLike) -> "Poly":
        return self.scale(c)

    def diff(self, i: int) -> "Poly":
        """Partial derivative with respect to the i-th variable (1-based)."""
        if not 1 <= i <= self.m:
            raise InputError(f"variable index {i} out of range")
        terms = {}
        for e, c in self._terms.items():
            if e[i - 1]:
                e2 = e[: i - 1] + (e[i - 1] - 1,) + e[i:]
                terms[e2] = terms.get(e2, _ZERO) + c * e[i - 1]
        return Poly(self.m, terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.m == other.m and self._terms == other._terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.m, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        from .serialize import render_poly

        return f"<{render_poly(self)}>"
