"""Dimension-descending analysis of semiexplicit systems.

Starting from the constraint ideal, each stage adjoins the flow derivatives
of its generators, eliminates the control derivatives, and re-radicalizes;
the constraint variety's dimension must drop strictly at every step. The
exact stage invariants (minimal power eps and minimal prolongation order k)
reconstruct a working prolongation order L = k0 * eps0 for the full system.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .diffcore import order_of, prolong, total_derivative
from .groebner import (IdealTester, buchberger, contains_one, dimension,
                       eliminate, min_power_in_ideal, squarefree_part,
                       zero_dim_radical)
from .reduce import SemiexplicitSystem
from .ring import DEGREVLEX, DiffPoly

CERTIFIED = "certified"
BEST_EFFORT = "best_effort"

DEFAULT_CAP = 64


class DimensionDropError(RuntimeError):
    """The constraint dimension failed to drop strictly between stages (this
    happens for consistent systems, whose descent has no guarantee)."""


class ChainCapError(RuntimeError):
    """Stage budget exhausted; carries the partial chain."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class ReconstructionError(RuntimeError):
    """A reconstructed invariant failed to verify; this would indicate an
    implementation defect, so it is raised loudly."""


@dataclass(frozen=True)
class ChainStage:
    generators: tuple
    dim: int
    radical_status: str
    eps: Optional[int] = None
    k: Optional[int] = None


@dataclass(frozen=True)
class DescentChain:
    system: SemiexplicitSystem
    stages: tuple

    @property
    def rho(self) -> int:
        for i, st in enumerate(self.stages):
            if st.dim <= 0:
                return i
        raise ValueError("chain has no stage of dimension <= 0")


@dataclass(frozen=True)
class ReconstructionReport:
    L: int
    mu: Optional[int]
    inequalities: tuple  # (i, k_prev, eps_i, k_i, holds)
    k_mu_is_one: bool
    membership_verified: bool


def tilde(h: DiffPoly, sys: SemiexplicitSystem) -> DiffPoly:
    """The total derivative of an order-0 polynomial reduced along the flow:
    sum dh/dx_i * f_i + sum dh/du_k * u_k'. Lies in (x' - f, dh/dt)."""
    if order_of(h) > 0:
        raise ValueError("the flow derivative applies to order-0 polynomials")
    res = DiffPoly.zero()
    for s, f in zip(sys.states, sys.ode_rhs):
        res = res + h.partial(s) * f
    for u in sys.controls:
        res = res + h.partial(u) * DiffPoly.var(u.derivative())
    return res


def _radicalize(gens, ambient):
    """Radical for dimension <= 0 (certified via squarefree eliminants in
    every variable); in positive dimension, the squarefree-eliminant closure,
    which need not be the full radical and is labeled accordingly."""
    gens = tuple(g for g in gens if not g.is_zero)
    dim = dimension(gens, ambient)
    if dim <= 0:
        return ChainStage(tuple(zero_dim_radical(gens, ambient)), dim, CERTIFIED)
    basis = buchberger(gens, DEGREVLEX, ambient=ambient).basis
    while True:
        extra = []
        for v in ambient:
            elim = eliminate(basis, set(ambient) - {v})
            nonzero = [h for h in elim if not h.is_zero]
            if nonzero:
                extra.append(squarefree_part(nonzero[0], v))
        new_basis = buchberger(tuple(basis) + tuple(extra), DEGREVLEX,
                               ambient=ambient).basis
        if new_basis == basis:
            return ChainStage(tuple(basis), dim, BEST_EFFORT)
        basis = new_basis


def build_chain(sys: SemiexplicitSystem, max_stages: int = 16) -> DescentChain:
    """Stage 0 is the (closed) constraint ideal; each following stage adjoins
    the flow derivatives, eliminates the control derivatives, and closes
    again, until the dimension reaches 0 or the ideal becomes the whole ring.
    A non-decreasing dimension raises DimensionDropError."""
    ambient = sys.ambient
    stages = [_radicalize(sys.constraints, ambient)]
    while stages[-1].dim > 0:
        if len(stages) > max_stages:
            raise ChainCapError(
                f"no stage of dimension <= 0 within {max_stages} stages",
                DescentChain(sys, tuple(stages)))
        gi = stages[-1].generators
        tilded = tuple(gi) + tuple(tilde(h, sys) for h in gi)
        udots = {u.derivative() for u in sys.controls}
        projected = eliminate(tilded, udots)
        nxt = _radicalize(projected, ambient)
        if nxt.dim >= stages[-1].dim:
            raise DimensionDropError(
                f"dimension stalled at {nxt.dim} after stage {len(stages) - 1}"
                " (is the system consistent?)")
        stages.append(nxt)
    return DescentChain(sys, tuple(stages))


def _eps_target(chain: DescentChain, i: int):
    if i == 0:
        return tuple(chain.system.constraints)
    prev = chain.stages[i - 1].generators
    return (chain.system.ode_family() + tuple(prev)
            + tuple(total_derivative(h) for h in prev))


def exact_eps(chain: DescentChain, i: int, cap: int = DEFAULT_CAP) -> Optional[int]:
    """Minimal eps <= cap with (stage i ideal)^eps inside the previous
    stage's once-derived ideal (the original constraints for i = 0).

    Products of exactly eps generators span the eps-th power, so testing all
    such products is an exact criterion; single-generator minimal powers give
    the starting point."""
    stage = chain.stages[i]
    gens = stage.generators
    target = _eps_target(chain, i)
    if not gens:
        return 1
    lower = 1
    for h in gens:
        mh = min_power_in_ideal(h, target, cap)
        if mh is None:
            return None
        lower = max(lower, mh)
    tester = IdealTester(target)
    for eps in range(lower, cap + 1):
        ok = True
        for combo in combinations_with_replacement(gens, eps):
            prod = DiffPoly.const(1)
            for h in combo:
                prod = prod * h
            if not tester.contains(prod):
                ok = False
                break
        if ok:
            return eps
    return None


def exact_k(sys: SemiexplicitSystem, chain: DescentChain, i: int,
            cap: int = DEFAULT_CAP) -> Optional[int]:
    """Minimal k <= cap with 1 in the order-k prolongation of the ODE part
    together with stage i's generators."""
    gens = chain.stages[i].generators
    odes = sys.ode_family()
    for k in range(cap + 1):
        fam = prolong(odes, k).polys + prolong(gens, k).polys
        if contains_one(fam) is not None:
            return k
    return None


def compute_invariants(chain: DescentChain, eps_cap: int = DEFAULT_CAP,
                       k_cap: int = DEFAULT_CAP) -> DescentChain:
    """Chain with eps and k filled in on every stage (None where the cap was
    exhausted, e.g. k for consistent systems)."""
    stages = []
    for i, st in enumerate(chain.stages):
        stages.append(replace(st,
                              eps=exact_eps(chain, i, eps_cap),
                              k=exact_k(chain.system, chain, i, k_cap)))
    return DescentChain(chain.system, tuple(stages))


def reconstruct_L(chain: DescentChain) -> ReconstructionReport:
    """L = k0 * eps0, checked three ways: the recursion k_{i-1} <= 1 + eps_i*k_i
    on every computed consecutive pair, k_mu = 1 at the last nonzero k, and
    membership of 1 in the order-L prolongation of the original system."""
    ks = [st.k for st in chain.stages]
    eps = [st.eps for st in chain.stages]
    if ks[0] is None or eps[0] is None:
        raise ValueError("stage 0 invariants are not populated")
    L = ks[0] * eps[0]
    mu: Optional[int] = None
    if any(k not in (0, None) for k in ks):
        mu = max(i for i, k in enumerate(ks) if k not in (0, None))
    inequalities = []
    for i in range(1, (mu or 0) + 1):
        if ks[i - 1] is None or ks[i] is None or eps[i] is None:
            continue
        holds = ks[i - 1] <= 1 + eps[i] * ks[i]
        inequalities.append((i, ks[i - 1], eps[i], ks[i], holds))
        if not holds:
            raise ReconstructionError(
                f"k_{i-1} <= 1 + eps_{i} * k_{i} fails: "
                f"{ks[i-1]} > 1 + {eps[i]} * {ks[i]}")
    k_mu_is_one = mu is None or ks[mu] == 1
    if not k_mu_is_one:
        raise ReconstructionError(f"k at the last nonzero stage is {ks[mu]}, not 1")
    sys = chain.system
    fam = (prolong(sys.ode_family(), L).polys
           + prolong(tuple(sys.constraints), L).polys)
    verified = contains_one(fam) is not None
    if not verified:
        raise ReconstructionError(
            f"1 is not in the order-{L} prolongation of the original system")
    return ReconstructionReport(L=L, mu=mu, inequalities=tuple(inequalities),
                                k_mu_is_one=k_mu_is_one,
                                membership_verified=verified)
