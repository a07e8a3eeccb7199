"""Sparse multivariate polynomial arithmetic over exact rationals in jet variables.

Everything here is immutable and pure; polynomials may be shared freely
between threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

_FAMILY_RANK = {"x": 0, "u": 1, "y": 2}

STATE = "x"
CONTROL = "u"
AUX = "y"


@functools.total_ordering
@dataclass(frozen=True)
class JetVar:
    """A jet variable: the der_order-th formal derivative of family/index.

    Ranking (used everywhere as the default variable order): higher
    der_order wins; at equal der_order, aux > control > state; within a
    family, higher index wins.
    """

    family: str
    index: int
    der_order: int = 0

    def __post_init__(self):
        if self.family not in _FAMILY_RANK:
            raise ValueError(f"unknown variable family {self.family!r}")
        if self.index < 1:
            raise ValueError("variable index must be >= 1")
        if self.der_order < 0:
            raise ValueError("derivative order must be >= 0")

    @property
    def sort_key(self) -> tuple:
        return (self.der_order, _FAMILY_RANK[self.family], self.index)

    def derivative(self) -> "JetVar":
        return JetVar(self.family, self.index, self.der_order + 1)

    def base(self) -> "JetVar":
        return JetVar(self.family, self.index, 0)

    def __lt__(self, other: "JetVar") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.der_order == 0:
            return f"{self.family}{self.index}"
        return f"{self.family}{self.index}^({self.der_order})"


def state(i: int, der: int = 0) -> JetVar:
    return JetVar(STATE, i, der)


def control(i: int, der: int = 0) -> JetVar:
    return JetVar(CONTROL, i, der)


def aux(i: int, der: int = 0) -> JetVar:
    return JetVar(AUX, i, der)


@dataclass(frozen=True)
class Monomial:
    """Power product of jet variables; exponents strictly positive, stored
    sorted descending by variable so equal monomials hash equally."""

    exps: tuple  # tuple[tuple[JetVar, int], ...]

    @staticmethod
    def make(mapping: Mapping[JetVar, int]) -> "Monomial":
        items = tuple(sorted(((v, e) for v, e in mapping.items() if e != 0),
                             key=lambda ve: ve[0].sort_key, reverse=True))
        for _, e in items:
            if e < 0:
                raise ValueError("monomial exponents must be positive")
        return Monomial(items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def variables(self) -> tuple:
        return tuple(v for v, _ in self.exps)

    def exponent(self, v: JetVar) -> int:
        for w, e in self.exps:
            if w == v:
                return e
        return 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self.exps)
        for v, e in other.exps:
            d[v] = d.get(v, 0) + e
        return Monomial.make(d)

    def divides(self, other: "Monomial") -> bool:
        d = dict(other.exps)
        return all(d.get(v, 0) >= e for v, e in self.exps)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        d = dict(self.exps)
        for v, e in other.exps:
            ne = d.get(v, 0) - e
            if ne < 0:
                raise ArithmeticError("monomial quotient has negative exponent")
            d[v] = ne
        return Monomial.make(d)

    def lcm(self, other: "Monomial") -> "Monomial":
        d = dict(self.exps)
        for v, e in other.exps:
            d[v] = max(d.get(v, 0), e)
        return Monomial.make(d)


MONOMIAL_ONE = Monomial(())

Coeff = Union[int, Fraction]


class DiffPoly:
    """Sparse polynomial over Q in jet variables.

    Term map keyed by Monomial with nonzero Fraction coefficients (Fraction
    keeps them in lowest terms with positive denominator). The zero
    polynomial has an empty term map.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] = ()):
        clean = {}
        for m, c in dict(terms).items():
            c = Fraction(c)
            if c != 0:
                clean[m] = c
        self._terms = clean
        self._hash = None

    @staticmethod
    def _raw(terms: dict) -> "DiffPoly":
        p = DiffPoly.__new__(DiffPoly)
        p._terms = terms
        p._hash = None
        return p

    @staticmethod
    def zero() -> "DiffPoly":
        return DiffPoly._raw({})

    @staticmethod
    def const(c: Coeff) -> "DiffPoly":
        c = Fraction(c)
        return DiffPoly._raw({MONOMIAL_ONE: c} if c != 0 else {})

    @staticmethod
    def var(v: JetVar) -> "DiffPoly":
        return DiffPoly._raw({Monomial(((v, 1),)): Fraction(1)})

    def terms(self) -> Iterator:
        """Deterministic iteration: descending in the default order."""
        return iter(sorted(self._terms.items(),
                           key=lambda mc: DEGREVLEX.sort_key(mc[0]),
                           reverse=True))

    def term_map(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(MONOMIAL_ONE, Fraction(0))

    def is_constant(self) -> bool:
        return all(m == MONOMIAL_ONE for m in self._terms)

    def variables(self) -> set:
        vs = set()
        for m in self._terms:
            vs.update(m.variables())
        return vs

    def degree(self) -> int:
        """Total degree; 0 for constants and for the zero polynomial."""
        if not self._terms:
            return 0
        return max(m.degree for m in self._terms)

    def _coerce(self, other) -> Optional["DiffPoly"]:
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        res = dict(self._terms)
        for m, c in other._terms.items():
            nc = res.get(m, Fraction(0)) + c
            if nc:
                res[m] = nc
            elif m in res:
                del res[m]
        return DiffPoly._raw(res)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return DiffPoly.zero()
            return DiffPoly._raw({m: cf * c for m, cf in self._terms.items()})
        if not isinstance(other, DiffPoly):
            return NotImplemented
        res: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                nc = res.get(m, Fraction(0)) + c1 * c2
                if nc:
                    res[m] = nc
                elif m in res:
                    del res[m]
        return DiffPoly._raw(res)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = DiffPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def partial(self, v: JetVar) -> "DiffPoly":
        """Formal partial derivative with respect to the single jet variable v."""
        res: dict = {}
        for m, c in self._terms.items():
            e = m.exponent(v)
            if e == 0:
                continue
            d = dict(m.exps)
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            nm = Monomial.make(d)
            nc = res.get(nm, Fraction(0)) + c * e
            if nc:
                res[nm] = nc
            elif nm in res:
                del res[nm]
        return DiffPoly._raw(res)

    def __str__(self) -> str:
        return poly_to_text(self)

    def __repr__(self) -> str:
        return f"DiffPoly({poly_to_text(self)})"


ZERO = DiffPoly.zero()
ONE = DiffPoly.const(1)


def poly_arith(a: DiffPoly, b: DiffPoly, op: str) -> DiffPoly:
    """Named arithmetic entry point: op in {'add', 'sub', 'mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(p: DiffPoly, v: JetVar) -> DiffPoly:
    return p.partial(v)


def degree(p: DiffPoly) -> int:
    return p.degree()


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------

class MonomialOrder:
    """A monomial order: total, multiplicative, with 1 minimal.

    Subclasses provide a sparse sort_key usable with max()/sorted(), a
    variable ranking, and a compiled dense key for the engine."""

    def sort_key(self, m: Monomial):
        raise NotImplementedError

    def sorted_vars(self, vs: Iterable[JetVar]) -> tuple:
        """Ambient variables, greatest first."""
        return tuple(sorted(set(vs), key=lambda v: v.sort_key, reverse=True))

    def dense_key(self, vars_desc: tuple) -> Callable[[tuple], tuple]:
        """Key on exponent tuples relative to vars_desc (greatest first)."""
        raise NotImplementedError


class DegRevLex(MonomialOrder):
    """Degree reverse lexicographic order on the default variable ranking."""

    def sort_key(self, m: Monomial):
        # Larger total degree wins; ties broken revlex: the monomial with the
        # smaller exponent on the least variable is the larger one.
        asc = sorted(m.exps, key=lambda ve: ve[0].sort_key)
        return (m.degree, tuple((v.sort_key, -e) for v, e in asc))

    def dense_key(self, vars_desc):
        def key(exps: tuple) -> tuple:
            return (sum(exps), tuple(-e for e in reversed(exps)))
        return key


class Lex(MonomialOrder):
    """Pure lexicographic order on the default variable ranking."""

    def sort_key(self, m: Monomial):
        # Pairs (variable, exponent) greatest-variable-first: tuple comparison
        # then matches the dense lex comparison over the support union.
        desc = sorted(m.exps, key=lambda ve: ve[0].sort_key, reverse=True)
        return tuple((v.sort_key, e) for v, e in desc)

    def dense_key(self, vars_desc):
        def key(exps: tuple) -> tuple:
            return exps
        return key


class Block(MonomialOrder):
    """Elimination order: the dropped block dominates, inner order on each."""

    def __init__(self, drop: Iterable[JetVar], inner: Optional[MonomialOrder] = None):
        self.drop = frozenset(drop)
        self.inner = inner if inner is not None else DegRevLex()

    def _split(self, m: Monomial):
        hi = {v: e for v, e in m.exps if v in self.drop}
        lo = {v: e for v, e in m.exps if v not in self.drop}
        return Monomial.make(hi), Monomial.make(lo)

    def sort_key(self, m: Monomial):
        hi, lo = self._split(m)
        return (self.inner.sort_key(hi), self.inner.sort_key(lo))

    def sorted_vars(self, vs):
        vs = set(vs)
        hi = sorted((v for v in vs if v in self.drop),
                    key=lambda v: v.sort_key, reverse=True)
        lo = sorted((v for v in vs if v not in self.drop),
                    key=lambda v: v.sort_key, reverse=True)
        return tuple(hi + lo)

    def dense_key(self, vars_desc):
        ndrop = sum(1 for v in vars_desc if v in self.drop)
        inner_hi = self.inner.dense_key(vars_desc[:ndrop])
        inner_lo = self.inner.dense_key(vars_desc[ndrop:])

        def key(exps: tuple) -> tuple:
            return (inner_hi(exps[:ndrop]), inner_lo(exps[ndrop:]))
        return key


DEGREVLEX = DegRevLex()
LEX = Lex()


def leading_term(p: DiffPoly, order: Optional[MonomialOrder] = None):
    """Greatest (monomial, coefficient) of a nonzero polynomial under order."""
    if p.is_zero:
        raise ValueError("leading term of the zero polynomial")
    order = order if order is not None else DEGREVLEX
    m = max(p.term_map(), key=order.sort_key)
    return m, p.coefficient(m)


def leading_monomial(p: DiffPoly, order: Optional[MonomialOrder] = None) -> Monomial:
    return leading_term(p, order)[0]


# ---------------------------------------------------------------------------
# Canonical text form (inverse of parser.parse_poly)
# ---------------------------------------------------------------------------

def _coeff_to_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono_to_text(m: Monomial) -> str:
    parts = []
    for v, e in m.exps:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def poly_to_text(p: DiffPoly) -> str:
    """Canonical rendering: terms descending in the default order, explicit
    '*', rationals as a/b, derivatives as ^(j)."""
    if p.is_zero:
        return "0"
    chunks = []
    for i, (m, c) in enumerate(p.terms()):
        neg = c < 0
        c = -c if neg else c
        if m == MONOMIAL_ONE:
            body = _coeff_to_text(c)
        elif c == 1:
            body = _mono_to_text(m)
        else:
            body = f"{_coeff_to_text(c)}*{_mono_to_text(m)}"
        if i == 0:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)
