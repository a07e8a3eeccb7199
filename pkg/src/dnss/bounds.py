"""Exact evaluation of the closed-form prolongation-order and power bounds.

Values are exponent towers. They stay exact arbitrary-precision integers
while the bit length fits under a configurable cap and degrade to symbolic
power nodes (with float log2-of-log2 estimates) beyond it. The universal
constant appearing in the doubly exponential exponents is not pinned by the
theory; it is exposed as the profile parameter `c` (default 1) and results
involving it are indicative, not certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

DEFAULT_CAP_BITS = 1_000_000

_INF = float("inf")


def _log2_int(n: int) -> float:
    if n <= 0:
        return -_INF
    return math.log2(n)


class TowerInt:
    """A nonnegative integer that may only be representable as a power tower.

    value is the materialized integer when its bit length fits the cap;
    base/exponent record the structural power form when there is one; l2 and
    lll are float estimates of log2 and log2(log2) used for dominance
    comparisons between non-exact values.
    """

    __slots__ = ("value", "base", "exponent", "l2", "lll")

    def __init__(self, value, base, exponent, l2, lll):
        self.value = value
        self.base = base
        self.exponent = exponent
        self.l2 = l2
        self.lll = lll

    @staticmethod
    def exact(n: Union[int, "TowerInt"]) -> "TowerInt":
        if isinstance(n, TowerInt):
            return n
        n = int(n)
        if n < 0:
            raise ValueError("tower values are nonnegative")
        l2 = _log2_int(n)
        lll = math.log2(l2) if l2 > 0 else -_INF
        return TowerInt(n, None, None, l2, lll)

    @staticmethod
    def power(base, exponent, cap_bits: int = DEFAULT_CAP_BITS) -> "TowerInt":
        b = TowerInt.exact(base) if not isinstance(base, TowerInt) else base
        e = TowerInt.exact(exponent) if not isinstance(exponent, TowerInt) else exponent
        if e.value == 0:
            return TowerInt.exact(1)
        if b.value is not None and b.value in (0, 1):
            return TowerInt.exact(b.value)
        if e.value == 1:
            return b
        value = None
        if b.value is not None and e.value is not None:
            est_bits = e.value * b.value.bit_length()
            if est_bits <= cap_bits:
                value = b.value ** e.value
        try:
            e_float = float(e.value) if e.value is not None else (
                2.0 ** e.l2 if e.l2 < 1000 else _INF)
        except OverflowError:
            e_float = _INF
        l2 = e_float * b.l2 if b.l2 > 0 else (-_INF if b.value == 1 else b.l2)
        lll = e.l2 + math.log2(b.l2) if b.l2 > 0 and not math.isinf(e.l2) else _INF
        if value is not None:
            lll = math.log2(_log2_int(value)) if value > 2 else (
                0.0 if value == 2 else -_INF)
            l2 = _log2_int(value)
        return TowerInt(value, b, e, l2, lll)

    @staticmethod
    def approx(l2: float, lll: float) -> "TowerInt":
        return TowerInt(None, None, None, l2, lll)

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def add(self, other, cap_bits: int = DEFAULT_CAP_BITS) -> "TowerInt":
        other = TowerInt.exact(other) if not isinstance(other, TowerInt) else other
        if self.value is not None and other.value is not None:
            v = self.value + other.value
            if v.bit_length() <= cap_bits:
                return TowerInt.exact(v)
        hi, lo = max(self.l2, other.l2), min(self.l2, other.l2)
        if math.isinf(hi):
            l2 = _INF
            lll = max(self.lll, other.lll)
        else:
            l2 = hi + math.log2(1.0 + 2.0 ** (lo - hi)) if lo > -_INF else hi
            lll = math.log2(l2) if l2 > 0 else -_INF
        return TowerInt.approx(l2, lll)

    def mul(self, other, cap_bits: int = DEFAULT_CAP_BITS) -> "TowerInt":
        other = TowerInt.exact(other) if not isinstance(other, TowerInt) else other
        if self.value is not None and other.value is not None:
            v = self.value * other.value
            if v.bit_length() <= cap_bits:
                return TowerInt.exact(v)
        l2 = self.l2 + other.l2
        lll = math.log2(l2) if 0 < l2 < _INF else max(self.lll, other.lll)
        return TowerInt.approx(l2, lll)

    def _cmp(self, other) -> int:
        other = TowerInt.exact(other) if not isinstance(other, TowerInt) else other
        if self.value is not None and other.value is not None:
            return (self.value > other.value) - (self.value < other.value)
        # Symbolic dominance: compare log2 estimates, then log2-of-log2.
        for a, b in ((self.l2, other.l2), (self.lll, other.lll)):
            if not (math.isinf(a) and math.isinf(b)) and a != b:
                return 1 if a > b else -1
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value is not None and self.value == other
        if isinstance(other, TowerInt):
            if self.value is not None and other.value is not None:
                return self.value == other.value
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.value) if self.value is not None else hash((self.l2, self.lll))

    def render(self, max_digits: int = 64):
        """Decimal string when short enough, else a^b nesting with exact
        sub-parts, else a tagged log2 estimate. Stable across runs."""
        if self.value is not None:
            s = str(self.value)
            if len(s) <= max_digits:
                return s
        if self.base is not None:
            b = self.base.render(max_digits)
            e = self.exponent.render(max_digits)
            if isinstance(b, str) and isinstance(e, str):
                bs = f"({b})" if "^" in b else b
                es = f"({e})" if "^" in e else e
                return f"{bs}^{es}"
        if not math.isinf(self.l2):
            return {"approx": {"log2": round(self.l2, 6)}}
        return {"approx": {"log2_log2": round(self.lll, 6)}}

    def __repr__(self):
        r = self.render()
        return f"TowerInt({r})"


@dataclass(frozen=True)
class SystemProfile:
    """Size parameters of a system: n states, m controls, max order e, max
    degree d; r the constraint-variety dimension when known; D a degree
    surrogate (defaults to the Bezout bound d^(n+m)); c the unpinned
    universal-constant knob."""

    n: int
    m: int = 0
    e: int = 1
    d: int = 1
    r: Optional[int] = None
    D: Optional[int] = None
    c: int = 1

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("variable counts must be nonnegative")
        if self.d < 1:
            raise ValueError("degree must be >= 1")
        if self.e < 0:
            raise ValueError("order must be >= 0")
        if self.c < 1:
            raise ValueError("the constant parameter c must be a positive integer")
        if self.r is not None and self.r < -1:
            raise ValueError("dimension must be >= -1")

    @property
    def eps(self) -> int:
        return max(2, self.e)

    @property
    def nu(self) -> int:
        r = self.r if self.r is not None else self.n + self.m
        return max(1, r)

    def degree_surrogate(self, cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
        if self.D is not None:
            return TowerInt.exact(self.D)
        return TowerInt.power(self.d, self.n + self.m, cap_bits)

    @staticmethod
    def from_family(family, c: int = 1) -> "SystemProfile":
        """Syntactic profile of a plain generator family: distinct base
        variables, max derivative order, max total degree."""
        bases = set()
        e = 0
        d = 1
        for p in family:
            for v in p.variables():
                bases.add((v.family, v.index))
                e = max(e, v.der_order)
            d = max(d, p.degree())
        return SystemProfile(n=len(bases), m=0, e=e, d=d, c=c)


def _two_to(exp: int, cap_bits: int) -> TowerInt:
    return TowerInt.power(2, exp, cap_bits)


def bound_eps0(profile: SystemProfile,
               cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """D^(n+m): radical-to-ideal power bound for the constraint ideal."""
    return TowerInt.power(profile.degree_surrogate(cap_bits),
                          profile.n + profile.m, cap_bits)


def bound_eps_i(profile: SystemProfile, i: int,
                cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """((n+m)D)^(2^(c*i*r*(n+m))) for stage i >= 1 of the descent."""
    if i < 1:
        raise ValueError("stage index must be >= 1")
    nm = profile.n + profile.m
    base = profile.degree_surrogate(cap_bits).mul(nm, cap_bits)
    r = profile.r if profile.r is not None else profile.nu
    expo = _two_to(profile.c * i * r * nm, cap_bits)
    return TowerInt.power(base, expo, cap_bits)


def bound_L_semiexplicit(profile: SystemProfile, sharpen: bool = True,
                         cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """Prolongation-order bound for first-order semiexplicit systems:
    ((n+m)D)^(2^(c*nu^2*(n+m))); with a zero-dimensional constraint variety
    the sharper bound eps0 <= D^(n+m) applies."""
    if sharpen and profile.r == 0:
        return bound_eps0(profile, cap_bits)
    nm = profile.n + profile.m
    base = profile.degree_surrogate(cap_bits).mul(nm, cap_bits)
    expo = _two_to(profile.c * profile.nu ** 2 * nm, cap_bits)
    return TowerInt.power(base, expo, cap_bits)


def bound_L_syntactic(profile: SystemProfile,
                      cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """(n(e+1)d)^(2^(c(n(e+1))^3)): the order bound from counts alone."""
    ne1 = profile.n * (profile.e + 1)
    base = TowerInt.exact(ne1 * profile.d)
    expo = _two_to(profile.c * ne1 ** 3, cap_bits)
    return TowerInt.power(base, expo, cap_bits)


def bound_M(profile: SystemProfile, L,
            cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """d^(n(eps+L+1)): the power in the strong form at prolongation order L."""
    L = TowerInt.exact(L) if not isinstance(L, TowerInt) else L
    expo = L.add(profile.eps + 1, cap_bits).mul(profile.n, cap_bits)
    return TowerInt.power(profile.d, expo, cap_bits)


def bound_cert_degree(profile: SystemProfile, L=None,
                      cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """Degree bound for the certificate terms: the closed form
    d^((n*eps*d)^(2^(c(n*eps)^3))), or 2*d^(n(e+L+1)) when L is known."""
    if L is not None:
        L = TowerInt.exact(L) if not isinstance(L, TowerInt) else L
        expo = L.add(profile.e + 1, cap_bits).mul(profile.n, cap_bits)
        return TowerInt.power(profile.d, expo, cap_bits).mul(2, cap_bits)
    ne = profile.n * profile.eps
    inner = TowerInt.power(TowerInt.exact(ne * profile.d),
                           _two_to(profile.c * ne ** 3, cap_bits), cap_bits)
    return TowerInt.power(profile.d, inner, cap_bits)


def bound_k0(eps: Sequence[int], mu: int,
             cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """(mu+1) * product(eps_1..eps_mu) from the descent recursion."""
    if mu > len(eps):
        raise ValueError("mu exceeds the number of supplied eps values")
    acc = TowerInt.exact(mu + 1)
    for value in list(eps)[:mu]:
        if value < 1:
            raise ValueError("eps values are >= 1")
        acc = acc.mul(value, cap_bits)
    return acc


def bezout_degree(D: int, d: int, r: int,
                  cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """D*d^r: degree of an intersection with hypersurfaces of degree d."""
    return TowerInt.power(d, r, cap_bits).mul(D, cap_bits)


def radical_power_exponent(d: int, n: int,
                           cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """d^n: power that takes a radical inside the ideal (n-variable ring)."""
    return TowerInt.power(d, n, cap_bits)


def radical_generation_bound(s: int, d: int, n: int, r: int, c: int = 1,
                             cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """(sd)^(2^(c*nu*n)): generator count/degree bound for a radical,
    informational only (the hidden constant is the exposed c)."""
    nu = max(1, r)
    return TowerInt.power(TowerInt.exact(s * d), _two_to(c * nu * n, cap_bits),
                          cap_bits)


def stage_generator_bound(profile: SystemProfile, i: int,
                          cap_bits: int = DEFAULT_CAP_BITS) -> TowerInt:
    """((n+m)D)^(2^(c(i+1)nu(n+m))): generator count/degree bound for the
    i-th descent stage ideal."""
    if i < 0:
        raise ValueError("stage index must be >= 0")
    nm = profile.n + profile.m
    base = profile.degree_surrogate(cap_bits).mul(nm, cap_bits)
    expo = _two_to(profile.c * (i + 1) * profile.nu * nm, cap_bits)
    return TowerInt.power(base, expo, cap_bits)


def kronecker_equation_count(ambient_dim: int) -> int:
    """Any affine variety in ambient_dim variables is cut out by this many
    polynomials of degree at most its degree."""
    return ambient_dim + 1
