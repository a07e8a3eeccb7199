"""Ideal-theoretic engine: division with cofactor tracking, Buchberger's
algorithm, membership witnesses, elimination, dimension, zero-dimensional
radicals, and an independent Macaulay-matrix membership oracle.

Membership routines first run a triangular substitution pass (generators of
the shape c*v + rest with v occurring nowhere else define v exactly); this
rewrites the generating set without changing the ideal and keeps witness
extraction exact, with cofactors lifted back to the caller's generators.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .diffcore import substitute_with_quotient
from .ring import (DEGREVLEX, DiffPoly, JetVar, Monomial, MonomialOrder,
                   leading_term)

F0 = Fraction(0)
F1 = Fraction(1)


class PositiveDimensionError(ValueError):
    """Raised when a zero-dimensional-only routine sees positive dimension."""


@dataclass(frozen=True)
class MembershipWitness:
    """member = sum(cofactors[j] * generators[j]), exactly."""

    member: DiffPoly
    cofactors: tuple

    def verify(self, generators: Sequence[DiffPoly]) -> bool:
        acc = DiffPoly.zero()
        for c, g in zip(self.cofactors, generators):
            acc = acc + c * g
        return acc == self.member


@dataclass(frozen=True)
class GroebnerBasis:
    ambient: tuple
    order: MonomialOrder
    basis: tuple
    generators: tuple
    transform: Optional[tuple] = None  # transform[i][j]: basis[i] in generators


# ---------------------------------------------------------------------------
# Dense engine
# ---------------------------------------------------------------------------

class _Ctx:
    __slots__ = ("vars", "vidx", "n", "key")

    def __init__(self, order: MonomialOrder, variables: Iterable[JetVar]):
        self.vars = order.sorted_vars(variables)
        self.vidx = {v: i for i, v in enumerate(self.vars)}
        self.n = len(self.vars)
        self.key = order.dense_key(self.vars)

    def dense(self, p: DiffPoly) -> dict:
        d = {}
        for m, c in p.term_map().items():
            e = [0] * self.n
            for v, k in m.exps:
                e[self.vidx[v]] = k
            d[tuple(e)] = c
        return d

    def undense(self, d: dict) -> DiffPoly:
        terms = {}
        for e, c in d.items():
            terms[Monomial.make({self.vars[i]: k for i, k in enumerate(e) if k})] = c
        return DiffPoly(terms)

    def mono(self, e: tuple) -> DiffPoly:
        return self.undense({e: F1})


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _nf_dense(work: dict, basis: List[tuple], key, want_quotients: bool):
    """Divide work by basis entries (dense, lm, lc); returns (rem, quots)."""
    work = dict(work)
    rem: dict = {}
    quots: Optional[list] = [dict() for _ in basis] if want_quotients else None
    while work:
        lm = max(work, key=key)
        lc = work.pop(lm)
        for i, (bd, blm, blc) in enumerate(basis):
            if _divides(blm, lm):
                shift = tuple(a - b for a, b in zip(lm, blm))
                c = lc / blc
                if want_quotients:
                    q = quots[i]
                    q[shift] = q.get(shift, F0) + c
                for m, bc in bd.items():
                    if m == blm:
                        continue
                    t = tuple(a + b for a, b in zip(m, shift))
                    nv = work.get(t, F0) - c * bc
                    if nv:
                        work[t] = nv
                    else:
                        work.pop(t, None)
                break
        else:
            rem[lm] = lc
    return rem, quots


class _Engine:
    """Buchberger state: monic basis entries with optional tracking rows
    (each row expresses the entry in the caller's original generators)."""

    def __init__(self, ctx: _Ctx, n_orig: int, track: bool):
        self.ctx = ctx
        self.track = track
        self.n_orig = n_orig
        self.entries: list = []  # (dense, lm, lc=1)
        self.rows: list = []     # list[list[DiffPoly]] when tracking
        self.unit_row = None

    def _row_combine(self, row, quots):
        out = list(row)
        for q, brow in zip(quots, self.rows):
            if not q:
                continue
            qp = self.ctx.undense(q)
            for t in range(self.n_orig):
                if brow[t]:
                    out[t] = out[t] - qp * brow[t]
        return out

    def add(self, dense: dict, row) -> Optional[int]:
        """Reduce against the current basis; append if nonzero. Returns the
        new entry's index, or None when the reduction vanished."""
        rem, quots = _nf_dense(dense, self.entries, self.ctx.key,
                               want_quotients=self.track)
        if not rem:
            return None
        if self.track:
            row = self._row_combine(row, quots)
        lm = max(rem, key=self.ctx.key)
        lc = rem[lm]
        rem = {m: c / lc for m, c in rem.items()}
        if self.track:
            row = [r * (1 / lc) for r in row]
        self.entries.append((rem, lm, F1))
        self.rows.append(row if self.track else None)
        if lm == (0,) * self.ctx.n:
            self.unit_row = row
        return len(self.entries) - 1

    def run(self, dense_gens, rows, stop_at_unit=False) -> None:
        heap: list = []
        done: set = set()
        counter = itertools.count()

        def push_pairs(j):
            lmj = self.entries[j][1]
            for i in range(j):
                lcm = tuple(max(a, b) for a, b in zip(self.entries[i][1], lmj))
                heapq.heappush(heap, (self.ctx.key(lcm), next(counter), i, j, lcm))

        for i, d in enumerate(dense_gens):
            if not d:
                continue
            new = self.add(d, list(rows[i]) if self.track else None)
            if new is not None:
                if self.unit_row is not None and stop_at_unit:
                    return
                push_pairs(new)
        while heap:
            _, _, i, j, lcm = heapq.heappop(heap)
            done.add((i, j))
            lmi, lmj = self.entries[i][1], self.entries[j][1]
            if tuple(a + b for a, b in zip(lmi, lmj)) == lcm:
                continue  # coprime leading monomials: S-poly reduces to zero
            skip = False
            for k in range(len(self.entries)):
                if k in (i, j):
                    continue
                if _divides(self.entries[k][1], lcm) and \
                        (min(i, k), max(i, k)) in done and \
                        (min(j, k), max(j, k)) in done:
                    skip = True  # chain criterion
                    break
            if skip:
                continue
            di, dj = self.entries[i][0], self.entries[j][0]
            si = tuple(a - b for a, b in zip(lcm, lmi))
            sj = tuple(a - b for a, b in zip(lcm, lmj))
            s: dict = {}
            for m, c in di.items():
                t = tuple(a + b for a, b in zip(m, si))
                s[t] = s.get(t, F0) + c
            for m, c in dj.items():
                t = tuple(a + b for a, b in zip(m, sj))
                nv = s.get(t, F0) - c
                if nv:
                    s[t] = nv
                else:
                    s.pop(t, None)
            row = None
            if self.track:
                mi = self.ctx.mono(si)
                mj = self.ctx.mono(sj)
                row = [mi * a - mj * b for a, b in zip(self.rows[i], self.rows[j])]
            new = self.add(s, row)
            if new is not None:
                if self.unit_row is not None:
                    if stop_at_unit:
                        return
                else:
                    push_pairs(new)

    def interreduce(self) -> None:
        """Minimalize and tail-reduce to the unique reduced basis."""
        zero_lm = (0,) * self.ctx.n
        for idx, (d, lm, _) in enumerate(self.entries):
            if lm == zero_lm:
                row = self.rows[idx] if self.track else None
                self.entries = [({zero_lm: F1}, zero_lm, F1)]
                self.rows = [row]
                return
        order = sorted(range(len(self.entries)),
                       key=lambda i: self.ctx.key(self.entries[i][1]))
        kept: list = []
        for i in order:
            lm = self.entries[i][1]
            if any(_divides(self.entries[j][1], lm) for j in kept):
                continue
            kept.append(i)
        entries = [self.entries[i] for i in kept]
        rows = [self.rows[i] for i in kept] if self.track else [None] * len(kept)
        for i in range(len(entries)):
            others = entries[:i] + entries[i + 1:]
            rem, quots = _nf_dense(entries[i][0], others, self.ctx.key,
                                   want_quotients=self.track)
            if self.track and quots:
                row = list(rows[i])
                other_rows = rows[:i] + rows[i + 1:]
                for q, brow in zip(quots, other_rows):
                    if not q:
                        continue
                    qp = self.ctx.undense(q)
                    for t in range(self.n_orig):
                        if brow[t]:
                            row[t] = row[t] - qp * brow[t]
                rows[i] = row
            lm = max(rem, key=self.ctx.key)
            entries[i] = (rem, lm, F1)
        self.entries = entries
        self.rows = rows


def _run_engine(gens: Sequence[DiffPoly], order: MonomialOrder,
                ambient: Iterable[JetVar] = (), track: bool = False,
                rows: Optional[list] = None, stop_at_unit: bool = False,
                n_orig: Optional[int] = None):
    vs = set(ambient)
    for g in gens:
        vs.update(g.variables())
    ctx = _Ctx(order, vs)
    dense = [ctx.dense(g) for g in gens]
    if track and rows is None:
        rows = [[DiffPoly.const(1) if j == i else DiffPoly.zero()
                 for j in range(len(gens))] for i in range(len(gens))]
    eng = _Engine(ctx, n_orig if n_orig is not None else len(gens), track)
    eng.run(dense, rows if rows is not None else [None] * len(gens),
            stop_at_unit=stop_at_unit)
    if eng.unit_row is None or not stop_at_unit:
        eng.interreduce()
    return eng


def buchberger(gens: Sequence[DiffPoly], order: Optional[MonomialOrder] = None,
               track: bool = False, ambient: Iterable[JetVar] = ()) -> GroebnerBasis:
    """Reduced Groebner basis of (gens); transform rows populated iff track."""
    order = order if order is not None else DEGREVLEX
    gens = tuple(gens)
    eng = _run_engine(gens, order, ambient=ambient, track=track)
    basis = tuple(eng.ctx.undense(d) for d, _, _ in eng.entries)
    transform = None
    if track:
        transform = tuple(tuple(row) for row in eng.rows)
    return GroebnerBasis(ambient=eng.ctx.vars, order=order, basis=basis,
                         generators=gens, transform=transform)


def normal_form(p: DiffPoly, G: GroebnerBasis):
    """p = sum(quotients * basis) + remainder, remainder irreducible by G."""
    ctx = _Ctx(G.order, set(G.ambient) | p.variables())
    entries = []
    for b in G.basis:
        d = ctx.dense(b)
        lm = max(d, key=ctx.key)
        entries.append((d, lm, d[lm]))
    rem, quots = _nf_dense(ctx.dense(p), entries, ctx.key, want_quotients=True)
    return ctx.undense(rem), [ctx.undense(q) for q in quots]


# ---------------------------------------------------------------------------
# Triangular substitution preprocessing
# ---------------------------------------------------------------------------

def _find_pivot(polys, skip):
    best = None
    for i, p in enumerate(polys):
        if i in skip or p.is_zero:
            continue
        occurrences: dict = {}
        linear_alone = set()
        for m, _ in p.term_map().items():
            for v, e in m.exps:
                occurrences[v] = occurrences.get(v, 0) + 1
                if e == 1 and len(m.exps) == 1:
                    linear_alone.add(v)
        for v in linear_alone:
            if occurrences[v] == 1:
                if best is None or v.sort_key > best[0].sort_key:
                    best = (v, i)
    return best


def _presolve(gens: Sequence[DiffPoly], track: bool):
    """Rewrite the generating set by solving linear-in-one-variable generators
    and substituting; the ideal is unchanged. Returns (polys, rows, steps,
    pivot index set) where steps record (var, value, pivot row snapshot)."""
    polys = list(gens)
    n = len(polys)
    rows = None
    if track:
        rows = [[DiffPoly.const(1) if j == i else DiffPoly.zero() for j in range(n)]
                for i in range(n)]
    steps = []
    pivots: set = set()
    while True:
        found = _find_pivot(polys, pivots)
        if found is None:
            break
        v, i = found
        p = polys[i]
        c = p.coefficient(Monomial(((v, 1),)))
        monic = p * (1 / c)
        s = DiffPoly.var(v) - monic
        polys[i] = DiffPoly.var(v) - s
        if track:
            rows[i] = [r * (1 / c) for r in rows[i]]
        prow = tuple(rows[i]) if track else None
        pivots.add(i)
        steps.append((v, s, prow))
        for j in range(n):
            if j == i or polys[j].is_zero:
                continue
            if v in polys[j].variables():
                r, q = substitute_with_quotient(polys[j], v, s)
                polys[j] = r
                if track and not q.is_zero:
                    rows[j] = [a - q * b for a, b in zip(rows[j], rows[i])]
    return polys, rows, steps, pivots


def _reduce_through_steps(p: DiffPoly, steps, track: bool, n: int):
    """Apply the presolve substitutions to p; returns (reduced, correction row)
    with p = reduced + sum(correction * original generators)."""
    corr = [DiffPoly.zero()] * n if track else None
    for v, s, prow in steps:
        if v in p.variables():
            p, q = substitute_with_quotient(p, v, s)
            if track and not q.is_zero:
                corr = [a + q * b for a, b in zip(corr, prow)]
    return p, corr


def is_member(p: DiffPoly, gens: Sequence[DiffPoly]) -> Optional[MembershipWitness]:
    """Witness for p in (gens), or None. Cofactors verify exactly."""
    gens = tuple(gens)
    n = len(gens)
    if p.is_zero:
        return MembershipWitness(p, tuple(DiffPoly.zero() for _ in gens))
    if n == 0:
        return None
    polys, rows, steps, pivots = _presolve(gens, track=True)
    p_red, corr = _reduce_through_steps(p, steps, True, n)
    residual = [(polys[i], rows[i]) for i in range(n)
                if i not in pivots and not polys[i].is_zero]
    res_polys = [pr for pr, _ in residual]
    res_rows = [list(rw) for _, rw in residual]
    if p_red.is_zero:
        return MembershipWitness(p, tuple(corr))
    if not res_polys:
        return None
    eng = _run_engine(res_polys, DEGREVLEX, track=True, rows=res_rows,
                      ambient=p_red.variables(), n_orig=n)
    rem, quots = _nf_dense(eng.ctx.dense(p_red), eng.entries, eng.ctx.key,
                           want_quotients=True)
    if rem:
        return None
    cof = list(corr)
    for q, brow in zip(quots, eng.rows):
        if not q:
            continue
        qp = eng.ctx.undense(q)
        for t in range(n):
            if brow[t]:
                cof[t] = cof[t] + qp * brow[t]
    return MembershipWitness(p, tuple(cof))


def contains_one(gens: Sequence[DiffPoly]) -> Optional[MembershipWitness]:
    """Witness for 1 in (gens), or None; early exit as soon as a constant
    appears during basis completion."""
    gens = tuple(gens)
    n = len(gens)
    if n == 0:
        return None
    polys, rows, steps, pivots = _presolve(gens, track=True)
    one = DiffPoly.const(1)
    residual = [(polys[i], rows[i]) for i in range(n)
                if i not in pivots and not polys[i].is_zero]
    for pr, rw in residual:
        if pr.is_constant():
            c = pr.constant_term()
            return MembershipWitness(one, tuple(r * (1 / c) for r in rw))
    res_polys = [pr for pr, _ in residual]
    res_rows = [list(rw) for _, rw in residual]
    if not res_polys:
        return None
    eng = _run_engine(res_polys, DEGREVLEX, track=True, rows=res_rows,
                      stop_at_unit=True, n_orig=n)
    if eng.unit_row is not None:
        return MembershipWitness(one, tuple(eng.unit_row))
    return None


def eliminate(gens: Sequence[DiffPoly], drop: Iterable[JetVar]):
    """Generators of (gens) intersected with the ring without the dropped
    variables, via a block order."""
    drop = frozenset(drop)
    if not gens:
        return ()
    from .ring import Block
    gb = buchberger(tuple(gens), order=Block(drop), ambient=drop)
    return tuple(g for g in gb.basis if not (g.variables() & drop))


def dimension(gens: Sequence[DiffPoly], ambient: Iterable[JetVar]) -> int:
    """Krull dimension of the affine variety in the ambient variables; -1 for
    the unit ideal. Computed as the largest variable subset independent
    modulo the leading-term ideal."""
    ambient = tuple(sorted(set(ambient), key=lambda v: v.sort_key))
    gens = [g for g in gens if not g.is_zero]
    extra = set().union(*(g.variables() for g in gens)) - set(ambient) if gens else set()
    if extra:
        raise ValueError(f"generators use variables outside the ambient set: {extra}")
    if not gens:
        return len(ambient)
    gb = buchberger(tuple(gens), DEGREVLEX, ambient=ambient)
    if any(g.is_constant() and not g.is_zero for g in gb.basis):
        return -1
    supports = []
    for g in gb.basis:
        lm, _ = leading_term(g, DEGREVLEX)
        supports.append(frozenset(lm.variables()))
    for size in range(len(ambient), 0, -1):
        for sub in itertools.combinations(ambient, size):
            ss = set(sub)
            if not any(sup <= ss for sup in supports):
                return size
    return 0


# ---------------------------------------------------------------------------
# Univariate helpers and zero-dimensional radicals
# ---------------------------------------------------------------------------

def _univ_coeffs(h: DiffPoly, v: JetVar):
    coeffs: dict = {}
    for m, c in h.term_map().items():
        if any(w != v for w, _ in m.exps):
            raise ValueError("polynomial is not univariate in the given variable")
        coeffs[m.exponent(v)] = c
    deg = max(coeffs) if coeffs else 0
    return [coeffs.get(i, F0) for i in range(deg + 1)]


def _univ_trim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _univ_divmod(a, b):
    a = list(a)
    q = [F0] * (max(0, len(a) - len(b)) + 1)
    while len(a) >= len(b) and _univ_trim(a):
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        _univ_trim(a)
    return q, a


def _univ_gcd(a, b):
    a, b = _univ_trim(list(a)), _univ_trim(list(b))
    while b:
        _, r = _univ_divmod(a, b)
        a, b = b, _univ_trim(r)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_from_coeffs(cs, v: JetVar) -> DiffPoly:
    p = DiffPoly.zero()
    for i, c in enumerate(cs):
        if c:
            p = p + DiffPoly({Monomial.make({v: i}): c})
    return p


def squarefree_part(h: DiffPoly, v: JetVar) -> DiffPoly:
    """Monic h / gcd(h, dh/dv) for univariate h in v."""
    cs = _univ_coeffs(h, v)
    ds = [c * i for i, c in enumerate(cs)][1:]
    g = _univ_gcd(cs, ds)
    if len(g) <= 1:
        lead = cs[-1]
        return _poly_from_coeffs([c / lead for c in cs], v)
    q, r = _univ_divmod(cs, g)
    if _univ_trim(list(r)):
        raise AssertionError("gcd does not divide its argument")
    lead = q[-1]
    return _poly_from_coeffs([c / lead for c in q], v)


def zero_dim_radical(gens: Sequence[DiffPoly], ambient: Iterable[JetVar]):
    """Radical of a zero-dimensional ideal: adjoin the squarefree part of the
    univariate eliminant in each ambient variable (Seidenberg), then reduce.
    Raises PositiveDimensionError when the dimension is positive."""
    ambient = tuple(sorted(set(ambient), key=lambda v: v.sort_key))
    d = dimension(gens, ambient)
    if d > 0:
        raise PositiveDimensionError(f"ideal has dimension {d} > 0")
    if d == -1:
        return (DiffPoly.const(1),)
    out = list(gens)
    for v in ambient:
        elim = eliminate(gens, set(ambient) - {v})
        nonzero = [h for h in elim if not h.is_zero]
        if not nonzero:
            raise AssertionError("zero-dimensional ideal lacks a univariate eliminant")
        h = nonzero[0]
        out.append(squarefree_part(h, v))
    return buchberger(tuple(out), DEGREVLEX, ambient=ambient).basis


class IdealTester:
    """Reusable membership test against a fixed generating set: one presolve
    plus one basis computation, then cheap reductions per query."""

    def __init__(self, gens: Sequence[DiffPoly], ambient: Iterable[JetVar] = ()):
        gens = tuple(gens)
        polys, _, steps, pivots = _presolve(gens, track=False)
        self._steps = steps
        self._n = len(gens)
        residual = [polys[i] for i in range(len(gens))
                    if i not in pivots and not polys[i].is_zero]
        self._is_unit = any(pr.is_constant() for pr in residual)
        self._eng = None
        if residual and not self._is_unit:
            self._eng = _run_engine(residual, DEGREVLEX, ambient=ambient)
            if any(lm == (0,) * self._eng.ctx.n for _, lm, _ in self._eng.entries):
                self._is_unit = True

    def contains(self, p: DiffPoly) -> bool:
        if p.is_zero or self._is_unit:
            return True
        p_red, _ = _reduce_through_steps(p, self._steps, False, self._n)
        if p_red.is_zero:
            return True
        if self._eng is None:
            return False
        rem, _ = _nf_dense(self._eng.ctx.dense(p_red), self._eng.entries,
                           self._eng.ctx.key, want_quotients=False)
        return not rem


def min_power_in_ideal(p: DiffPoly, gens: Sequence[DiffPoly],
                       cap: int) -> Optional[int]:
    """Least M <= cap with p^M in (gens), searched upward from 1."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = tuple(gens)
    if p.is_zero:
        return 1
    if not gens:
        return None
    polys, _, steps, pivots = _presolve(gens, track=False)
    p_red, _ = _reduce_through_steps(p, steps, False, len(gens))
    residual = [polys[i] for i in range(len(gens))
                if i not in pivots and not polys[i].is_zero]
    if any(pr.is_constant() for pr in residual):
        return 1
    if p_red.is_zero:
        return 1
    if not residual:
        return None
    eng = _run_engine(residual, DEGREVLEX, ambient=p_red.variables())
    cur = DiffPoly.const(1)
    for m in range(1, cap + 1):
        cur = cur * p_red
        rem, _ = _nf_dense(eng.ctx.dense(cur), eng.entries, eng.ctx.key,
                           want_quotients=False)
        if not rem:
            return m
    return None


# ---------------------------------------------------------------------------
# Macaulay-matrix membership oracle
# ---------------------------------------------------------------------------

def _monomials_up_to(nvars: int, deg: int):
    """All exponent tuples with total degree <= deg, deterministic order."""
    def rec(i, remaining):
        if i == nvars - 1:
            for e in range(remaining + 1):
                yield (e,)
            return
        for e in range(remaining + 1):
            for tail in rec(i + 1, remaining - e):
                yield (e,) + tail
    if nvars == 0:
        yield ()
        return
    yield from rec(0, deg)


def _solve_sparse_exact(rows: list, rhs: list):
    """Solve A x = b exactly over Q; rows are {col: Fraction} dicts. Returns a
    solution vector dict (free variables 0) or None."""
    rows = [dict(r) for r in rows]
    rhs = list(rhs)
    col_owner: dict = {}
    order = sorted(range(len(rows)), key=lambda i: len(rows[i]))
    pivoted = []
    todo = list(order)
    while todo:
        i = todo.pop(0)
        r, b = rows[i], rhs[i]
        for col, piv_i in col_owner.items():
            if col in r:
                f = r.pop(col)
                pr, pb = rows[piv_i], rhs[piv_i]
                for c2, v2 in pr.items():
                    if c2 == col:
                        continue
                    nv = r.get(c2, F0) - f * v2
                    if nv:
                        r[c2] = nv
                    else:
                        r.pop(c2, None)
                b -= f * pb
        rhs[i] = b
        if not r:
            if b != 0:
                return None
            continue
        col = min(r)
        piv = r[col]
        for c2 in list(r):
            r[c2] /= piv
        rhs[i] = b / piv
        col_owner[col] = i
        pivoted.append(i)
    # Back-substitute: rows were reduced against earlier pivots only, so
    # eliminate pivot columns from later-discovered rows in reverse.
    sol: dict = {}
    for i in reversed(pivoted):
        r, b = rows[i], rhs[i]
        col = next(c for c in r if col_owner.get(c) == i)
        total = b
        for c2, v2 in r.items():
            if c2 == col:
                continue
            total -= v2 * sol.get(c2, F0)
        sol[col] = total
    return sol


def macaulay_membership(p: DiffPoly, gens: Sequence[DiffPoly],
                        deg_cap: int) -> Optional[MembershipWitness]:
    """Brute-force oracle: solve the exact linear system for cofactors of
    degree <= deg_cap - deg(gen). Independent of the Groebner path."""
    gens = tuple(gens)
    if deg_cap < p.degree():
        raise ValueError("degree cap below the degree of the candidate member")
    if p.is_zero:
        return MembershipWitness(p, tuple(DiffPoly.zero() for _ in gens))
    if not gens:
        return None
    vs = set(p.variables())
    for g in gens:
        vs.update(g.variables())
    ctx = _Ctx(DEGREVLEX, vs)
    nv = ctx.n
    dense_p = ctx.dense(p)
    dense_gens = [ctx.dense(g) for g in gens]
    cols = []  # (gen index, multiplier exponent tuple)
    col_support = []  # {row monomial: coeff}
    for gi, dg in enumerate(dense_gens):
        if not dg:
            continue
        gdeg = gens[gi].degree()
        if gdeg > deg_cap:
            continue
        for mult in _monomials_up_to(nv, deg_cap - gdeg):
            support = {}
            for m, c in dg.items():
                t = tuple(a + b for a, b in zip(m, mult))
                support[t] = support.get(t, F0) + c
            cols.append((gi, mult))
            col_support.append(support)
    row_index: dict = {}
    for support in col_support:
        for m in support:
            row_index.setdefault(m, len(row_index))
    for m in dense_p:
        row_index.setdefault(m, len(row_index))
    rows = [dict() for _ in row_index]
    rhs = [F0] * len(row_index)
    for ci, support in enumerate(col_support):
        for m, c in support.items():
            rows[row_index[m]][ci] = c
    for m, c in dense_p.items():
        rhs[row_index[m]] = c
    sol = _solve_sparse_exact(rows, rhs)
    if sol is None:
        return None
    cof = [DiffPoly.zero() for _ in gens]
    for ci, val in sol.items():
        if not val:
            continue
        gi, mult = cols[ci]
        cof[gi] = cof[gi] + ctx.mono(mult) * val
    witness = MembershipWitness(p, tuple(cof))
    if not witness.verify(gens):
        raise AssertionError("macaulay solver produced a non-verifying witness")
    return witness
