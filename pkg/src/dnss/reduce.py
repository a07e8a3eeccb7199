"""Structural transforms: arbitrary-order systems to first-order semiexplicit
form, and the auxiliary-variable trick reducing radical membership of a
polynomial to inconsistency of an augmented system."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .diffcore import order_of, substitute
from .ring import AUX, CONTROL, STATE, DiffPoly, JetVar, control, state


@dataclass(frozen=True)
class SemiexplicitSystem:
    """ODE part x_i' = f_i(x, u) plus algebraic constraints g_j(x, u) = 0;
    f and g are order-0 polynomials in the declared states and controls."""

    states: tuple
    controls: tuple
    ode_rhs: tuple
    constraints: tuple

    def __post_init__(self):
        if len(self.states) != len(self.ode_rhs):
            raise ValueError("one right-hand side per state is required")
        allowed = set(self.states) | set(self.controls)
        for p in tuple(self.ode_rhs) + tuple(self.constraints):
            if order_of(p) > 0:
                raise ValueError("semiexplicit data must have order 0")
            bad = {v for v in p.variables() if v not in allowed}
            if bad:
                raise ValueError(f"undeclared variables: {sorted(map(str, bad))}")

    @property
    def ambient(self) -> tuple:
        return tuple(self.states) + tuple(self.controls)

    def ode_family(self) -> tuple:
        return tuple(DiffPoly.var(s.derivative()) - f
                     for s, f in zip(self.states, self.ode_rhs))

    def family(self) -> tuple:
        return self.ode_family() + tuple(self.constraints)


@dataclass(frozen=True)
class GeneralSystem:
    """Equations of order up to e in the state variables x_1..x_n."""

    n: int
    equations: tuple
    e: int

    def __post_init__(self):
        for p in self.equations:
            for v in p.variables():
                if v.family != STATE:
                    raise ValueError("general-order systems range over states only")
                if v.index > self.n:
                    raise ValueError(f"state index {v.index} exceeds n={self.n}")
            if order_of(p) > self.e:
                raise ValueError("equation order exceeds the declared bound")

    @staticmethod
    def of(equations: Sequence[DiffPoly], n: Optional[int] = None) -> "GeneralSystem":
        eqs = tuple(equations)
        seen = max((v.index for p in eqs for v in p.variables()), default=1)
        e = max((order_of(p) for p in eqs), default=0)
        return GeneralSystem(n if n is not None else seen, eqs, e)


@dataclass(frozen=True)
class BackMap:
    """Sends the first-order variables back to the original jets: the state
    replacing x_i^(j) maps, at derivative order der, to x_i^(j+der)."""

    n: int
    e: int

    def map_var(self, v: JetVar) -> JetVar:
        if v.family == STATE:
            i = (v.index - 1) % self.n + 1
            j = (v.index - 1) // self.n
            if j >= self.e:
                raise ValueError(f"state index {v.index} out of range")
            return JetVar(STATE, i, j + v.der_order)
        if v.family == CONTROL:
            if v.index > self.n:
                raise ValueError(f"control index {v.index} out of range")
            return JetVar(STATE, v.index, self.e + v.der_order)
        raise ValueError("auxiliary variables have no preimage")

    def apply(self, p: DiffPoly) -> DiffPoly:
        mapping = {v: DiffPoly.var(self.map_var(v)) for v in p.variables()}
        return substitute(p, mapping)


def to_first_order(sys: GeneralSystem):
    """Rewrite an order-e system as a first-order semiexplicit one.

    Each jet x_i^(j), j = 0..e, becomes a fresh variable: j < e a new state
    (index j*n + i), j = e a new control (index i). The new ODEs say each new
    state's derivative is the variable one jet higher; the constraints are
    the original equations rewritten. Membership of 1 in the differential
    ideal is preserved in both directions."""
    if sys.e == 0:
        raise ValueError("order-0 systems are constraints only; nothing to reduce")
    n, e = sys.n, sys.e

    def stand_in(i: int, j: int) -> JetVar:
        return state(j * n + i) if j < e else control(i)

    states = tuple(state(k) for k in range(1, n * e + 1))
    controls = tuple(control(i) for i in range(1, n + 1))
    ode_rhs = []
    for k in range(1, n * e + 1):
        i = (k - 1) % n + 1
        j = (k - 1) // n
        ode_rhs.append(DiffPoly.var(stand_in(i, j + 1)))
    constraints = []
    for p in sys.equations:
        mapping = {v: DiffPoly.var(stand_in(v.index, v.der_order))
                   for v in p.variables()}
        constraints.append(substitute(p, mapping))
    semi = SemiexplicitSystem(states, controls, tuple(ode_rhs),
                              tuple(constraints))
    return semi, BackMap(n, e)


def rabinowitsch(F: Sequence[DiffPoly], f: DiffPoly):
    """F together with 1 - y*f for a fresh auxiliary differential variable y;
    the result is inconsistent exactly when f vanishes on all solutions of F."""
    if f.is_zero:
        raise ValueError("the claimed polynomial must be nonzero")
    used = 0
    for p in tuple(F) + (f,):
        for v in p.variables():
            if v.family == AUX:
                used = max(used, v.index)
    y = DiffPoly.var(JetVar(AUX, used + 1, 0))
    return tuple(F) + (DiffPoly.const(1) - y * f,)
