"""Sparse exact exterior algebra of V + V* with its canonical graded Poisson bracket.

A basis of size n gives 2n anticommuting generators: 1..n are the vector-side
generators (written e1..en by default), n+1..2n the dual-side generators
(written e1*..en*).  An element is a sparse map

    strictly increasing generator tuple  ->  Fraction coefficient

so every monomial is stored once, in canonical order (vector generators before
dual generators, each block ascending), and equality of elements is dict
equality.  The bidegree of a monomial counts (vector side, dual side).

The bracket implemented here is the even graded Poisson bracket of degree -2
fixed by

    {e_i, ej*} = {ej*, e_i} = delta_ij,      {e_i, e_j} = {ei*, ej*} = 0,

extended as a biderivation of the wedge product.  On monomials
a = g_1...g_p, b = h_1...h_q (positions 1-based) this closes to

    {a, b} = sum_{k,l} (-1)^((p-k)+(l-1)) <g_k, h_l> (a \ g_k) ^ (b \ h_l).

With this convention the bracket is graded antisymmetric
{a,b} = -(-1)^(|a||b|) {b,a}, satisfies the graded Jacobi identity, and each
{a,-} is a derivation of degree |a|-2; the property-test suite pins all three.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

from .errors import InputError

#: hard cap on dim V: operator-algebra matrices are 2^n x 2^n.
DEFAULT_DIM_CAP = 8

Monomial = tuple[int, ...]
ScalarLike = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class BasisSpec:
    """Labels for the 2n generators of V + V*.

    ``names[i-1]`` labels generator i (vector side), ``dual_names[i-1]``
    labels generator n+i (dual side).  Labels must be pairwise distinct.
    """

    n: int
    names: tuple[str, ...]
    dual_names: tuple[str, ...]

    def __post_init__(self):
        if not (1 <= self.n <= DEFAULT_DIM_CAP):
            raise InputError(f"dimension must be in 1..{DEFAULT_DIM_CAP}, got {self.n}")
        if len(self.names) != self.n or len(self.dual_names) != self.n:
            raise InputError("need exactly n names and n dual names")
        labels = self.names + self.dual_names
        if len(set(labels)) != 2 * self.n:
            raise InputError(f"generator labels must be unique: {labels}")

    @classmethod
    def standard(cls, n: int, names: Iterable[str] | None = None) -> "BasisSpec":
        base = tuple(names) if names is not None else tuple(f"e{i}" for i in range(1, n + 1))
        return cls(n, base, tuple(s + "*" for s in base))

    def label(self, g: int) -> str:
        return self.names[g - 1] if g <= self.n else self.dual_names[g - self.n - 1]

    def generator_index(self, label: str) -> int:
        if label in self.names:
            return self.names.index(label) + 1
        if label in self.dual_names:
            return self.dual_names.index(label) + self.n + 1
        raise InputError(f"unknown generator {label!r}")

    def partner(self, g: int) -> int:
        return g + self.n if g <= self.n else g - self.n


def _as_fraction(c: ScalarLike) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise InputError(f"coefficients must be exact rationals, got {type(c).__name__}")


def _merge_monomials(m1: Monomial, m2: Monomial) -> tuple[int, Monomial | None]:
    """Merge two ascending generator tuples; return (sign, merged) or (0, None)."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    out = []
    swaps = 0
    i = j = 0
    p = len(m1)
    while i < p and j < len(m2):
        a, b = m1[i], m2[j]
        if a == b:
            return 0, None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            swaps += p - i
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


class GradedElement:
    """Immutable sparse element of the exterior algebra of V + V*."""

    __slots__ = ("basis", "_terms", "_hash")

    def __init__(self, basis: BasisSpec, terms: Mapping[Monomial, ScalarLike] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, Fraction] = {}
        top = 2 * basis.n
        for mono, coeff in items:
            mono = tuple(mono)
            c = _as_fraction(coeff)
            if not c:
                continue
            if any(g < 1 or g > top for g in mono) or any(
                mono[i] >= mono[i + 1] for i in range(len(mono) - 1)
            ):
                raise InputError(f"bad monomial {mono} for dim {basis.n}")
            acc = clean.get(mono, _ZERO) + c
            if acc:
                clean[mono] = acc
            else:
                clean.pop(mono, None)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("GradedElement is immutable")

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), _ZERO)

    def scalar_part(self) -> Fraction:
        return self._terms.get((), _ZERO)

    # -- grading ---------------------------------------------------------

    def monomial_bidegree(self, mono: Monomial) -> tuple[int, int]:
        p = sum(1 for g in mono if g <= self.basis.n)
        return p, len(mono) - p

    def degrees(self) -> set[int]:
        return {len(m) for m in self._terms}

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.monomial_bidegree(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Total degree of a homogeneous element; None for 0 or mixed sums."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def bidegree(self) -> tuple[int, int] | None:
        bids = self.bidegrees()
        return bids.pop() if len(bids) == 1 else None

    def homogeneous_component(self, p: int, q: int) -> "GradedElement":
        return GradedElement(
            self.basis,
            {m: c for m, c in self._terms.items() if self.monomial_bidegree(m) == (p, q)},
        )

    def components(self) -> dict[tuple[int, int], "GradedElement"]:
        out: dict[tuple[int, int], dict] = {}
        for m, c in self._terms.items():
            out.setdefault(self.monomial_bidegree(m), {})[m] = c
        return {bid: GradedElement(self.basis, t) for bid, t in out.items()}

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "GradedElement"):
        if self.basis != other.basis:
            raise InputError("elements live on different bases")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            acc = terms.get(m, _ZERO) + c
            if acc:
                terms[m] = acc
            else:
                terms.pop(m, None)
        return GradedElement(self.basis, terms)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.basis, {m: -c for m, c in self._terms.items()})

    def scale(self, c: ScalarLike) -> "GradedElement":
        c = _as_fraction(c)
        if not c:
            return GradedElement(self.basis)
        return GradedElement(self.basis, {m: c * v for m, v in self._terms.items()})

    def __rmul__(self, c: ScalarLike) -> "GradedElement":
        return self.scale(c)

    def wedge(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                sign, merged = _merge_monomials(m1, m2)
                if not sign:
                    continue
                acc = terms.get(merged, _ZERO) + sign * c1 * c2
                if acc:
                    terms[merged] = acc
                else:
                    terms.pop(merged, None)
        return GradedElement(self.basis, terms)

    __xor__ = wedge

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedElement)
            and self.basis == other.basis
            and self._terms == other._terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.basis, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        from .serialize import render_element

        return f"<{render_element(self)}>"


# -- constructors ---------------------------------------------------------


def zero(basis: BasisSpec) -> GradedElement:
    return GradedElement(basis)


def one(basis: BasisSpec) -> GradedElement:
    return GradedElement(basis, {(): _ONE})


def scalar(basis: BasisSpec, c: ScalarLike) -> GradedElement:
    return GradedElement(basis, {(): c})


def monomial(basis: BasisSpec, gens: Iterable[int], coeff: ScalarLike = 1) -> GradedElement:
    """Element c * g_1 ^ ... ^ g_k for generator ids in any order (with sign)."""
    out: GradedElement = one(basis).scale(coeff)
    for g in gens:
        out = out.wedge(GradedElement(basis, {(g,): 1}))
    return out


def gen_vec(basis: BasisSpec, i: int) -> GradedElement:
    if not 1 <= i <= basis.n:
        raise InputError(f"vector generator index {i} out of range")
    return GradedElement(basis, {(i,): _ONE})


def gen_dual(basis: BasisSpec, i: int) -> GradedElement:
    if not 1 <= i <= basis.n:
        raise InputError(f"dual generator index {i} out of range")
    return GradedElement(basis, {(basis.n + i,): _ONE})


# -- the graded Poisson bracket ------------------------------------------


def wedge(a: GradedElement, b: GradedElement) -> GradedElement:
    return a.wedge(b)


def big_bracket(a: GradedElement, b: GradedElement) -> GradedElement:
    """Degree -2 graded Poisson bracket generated by the duality pairing."""
    if a.basis != b.basis:
        raise InputError("elements live on different bases")
    basis = a.basis
    terms: dict[Monomial, Fraction] = {}
    for m1, c1 in a.items():
        p = len(m1)
        for m2, c2 in b.items():
            c12 = c1 * c2
            for k, g in enumerate(m1):
                h = basis.partner(g)
                try:
                    l = m2.index(h)
                except ValueError:
                    continue
                sign = -1 if ((p - 1 - k) + l) & 1 else 1
                msign, merged = _merge_monomials(m1[:k] + m1[k + 1 :], m2[:l] + m2[l + 1 :])
                if not msign:
                    continue
                acc = terms.get(merged, _ZERO) + sign * msign * c12
                if acc:
                    terms[merged] = acc
                else:
                    terms.pop(merged, None)
    return GradedElement(basis, terms)


def derived_bracket(a: GradedElement, theta: GradedElement, b: GradedElement) -> GradedElement:
    """{{a, theta}, b} for a cubic hamiltonian theta."""
    if not theta.is_zero() and theta.degree() != 3:
        raise InputError("derived bracket needs a generating element of total degree 3")
    return big_bracket(big_bracket(a, theta), b)


def _contract_generator(g: int, omega: GradedElement) -> GradedElement:
    """Interior product by a single generator: the odd derivation {g, .}."""
    basis = omega.basis
    h = basis.partner(g)
    terms: dict[Monomial, Fraction] = {}
    for m, c in omega.items():
        try:
            l = m.index(h)
        except ValueError:
            continue
        rest = m[:l] + m[l + 1 :]
        acc = terms.get(rest, _ZERO) + (-c if l & 1 else c)
        if acc:
            terms[rest] = acc
        else:
            terms.pop(rest, None)
    return GradedElement(basis, terms)


def interior(u: GradedElement, omega: GradedElement, reverse: bool = False) -> GradedElement:
    """Iterated contraction of omega by u, composed as i_{x^y} = i_x o i_y.

    u must be homogeneous of pure bidegree (p,0) or (0,p).  ``reverse`` composes
    the generator contractions in the opposite factor order, which is what the
    generator (boundary) operators of the deriving-operator machinery need.
    """
    if u.basis != omega.basis:
        raise InputError("elements live on different bases")
    if u.is_zero() or omega.is_zero():
        return zero(omega.basis)
    bid = u.bidegree()
    if bid is None or (bid[0] and bid[1]):
        raise InputError(f"contractor must be of pure bidegree (p,0) or (0,p), got {u.bidegrees()}")
    total = zero(omega.basis)
    for mono, c in u.items():
        out = omega
        for g in (mono if reverse else reversed(mono)):
            out = _contract_generator(g, out)
            if out.is_zero():
                break
        total = total + out.scale(c)
    return total
