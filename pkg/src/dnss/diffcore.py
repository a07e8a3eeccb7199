"""Differential structure on jet polynomials: total derivative, prolongation,
order, and substitution.

The ambient ring is never fixed; jet variables of any derivative order are
created on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .ring import DiffPoly, JetVar, Monomial


def total_derivative(p: DiffPoly) -> DiffPoly:
    """The derivation sending every jet variable v to its next derivative and
    every constant to 0, extended by the Leibniz rule."""
    res = DiffPoly.zero()
    for v in p.variables():
        res = res + p.partial(v) * DiffPoly.var(v.derivative())
    return res


def order_of(p: DiffPoly, base: Optional[JetVar] = None) -> int:
    """Max der_order appearing in p; restricted to the jets of base's
    (family, index) if given. Constants have order 0 by convention."""
    best = 0
    for v in p.variables():
        if base is not None and (v.family, v.index) != (base.family, base.index):
            continue
        best = max(best, v.der_order)
    return best


@dataclass(frozen=True)
class ProlongedFamily:
    """A family of generators together with all their total derivatives up to
    order k: position (i, j) holds the j-th derivative of generators[i]."""

    generators: tuple
    k: int
    polys: tuple  # flat, ordered (i, 0..k) for each i

    def index(self, i: int, j: int) -> int:
        if not (0 <= i < len(self.generators) and 0 <= j <= self.k):
            raise IndexError((i, j))
        return i * (self.k + 1) + j

    def position(self, flat: int) -> tuple:
        return divmod(flat, self.k + 1)

    def __len__(self) -> int:
        return len(self.polys)


def prolong(gens: Sequence[DiffPoly], k: int) -> ProlongedFamily:
    """gens plus their total derivatives of order 1..k, (k+1)*len(gens) in all."""
    if k < 0:
        raise ValueError("prolongation order must be >= 0")
    flat = []
    for g in gens:
        flat.append(g)
        cur = g
        for _ in range(k):
            cur = total_derivative(cur)
            flat.append(cur)
    return ProlongedFamily(tuple(gens), k, tuple(flat))


def substitute(p: DiffPoly, mapping: Mapping[JetVar, DiffPoly]) -> DiffPoly:
    """Simultaneous substitution of jet variables by polynomials; variables
    absent from the mapping are left alone."""
    if not mapping:
        return p
    pow_cache: dict = {}

    def power(v: JetVar, e: int) -> DiffPoly:
        key = (v, e)
        if key not in pow_cache:
            pow_cache[key] = mapping[v] ** e
        return pow_cache[key]

    res = DiffPoly.zero()
    for m, c in p.term_map().items():
        factor = DiffPoly.const(c)
        plain: dict = {}
        for v, e in m.exps:
            if v in mapping:
                factor = factor * power(v, e)
            else:
                plain[v] = e
        if plain:
            factor = factor * DiffPoly({Monomial.make(plain): Fraction(1)})
        res = res + factor
    return res


def substitute_with_quotient(p: DiffPoly, v: JetVar, s: DiffPoly):
    """Write p = q * (v - s) + r with r = p[v := s]; returns (r, q).

    Requires v not to occur in s. Exact synthetic division by the monic
    linear relation v - s."""
    if v in s.variables():
        raise ValueError("substitution value must not contain the variable")
    # Split p by the exponent of v: p = sum_a layer[a] * v^a.
    layers: dict = {}
    for m, c in p.term_map().items():
        e = m.exponent(v)
        rest = Monomial.make({w: k for w, k in m.exps if w != v})
        layer = layers.setdefault(e, {})
        layer[rest] = layer.get(rest, Fraction(0)) + c
    max_e = max(layers) if layers else 0
    s_pow = [DiffPoly.const(1)]
    for _ in range(max_e):
        s_pow.append(s_pow[-1] * s)
    vp = DiffPoly.var(v)
    v_pow = [DiffPoly.const(1)]
    for _ in range(max_e):
        v_pow.append(v_pow[-1] * vp)
    r = DiffPoly.zero()
    q = DiffPoly.zero()
    for e, layer in layers.items():
        part = DiffPoly(layer)
        r = r + part * s_pow[e]
        # v^e - s^e = (v - s) * sum_{b<e} v^b s^(e-1-b)
        for b in range(e):
            q = q + part * (v_pow[b] * s_pow[e - 1 - b])
    return r, q
