"""Buchberger engine returning basis, transformation and syzygies together.

The inputs f_1..f_k in A^m are tagged with fresh components: the engine runs
on g_i = f_i + e_{m+i} in A^(m+k) under an order that keeps every main-block
term above every tag term.  Throughout the run each element keeps the
invariant  main_part = F * tag_part,  so when the algorithm finishes

  * elements with a main-block leading term give a Groebner basis column H_j
    (the main part) together with the transformation column T_j (the tag
    part, H_j = F*T_j), and
  * elements whose main part vanished are syzygies of F (their tag parts form
    a Groebner basis of syz(F) under the induced order on the tags).

Every basis element is normalized to leading coefficient 1 on insertion; the
numerator of the discarded leading coefficient is recorded in the
denominator log, since dividing by it is what introduces new parameter
denominators into the transformation data.
"""

from __future__ import annotations

import heapq
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .modules import ModElement, ModMatrix, OpPoly, Ring
from .orders import LiftOrder, ModOrder
from .polynomials import ParamFraction, ParamPoly, pp_divexact, pp_gcd


@dataclass(frozen=True)
class LogEvent:
    factor: ParamPoly
    context: str


@dataclass
class DenominatorLog:
    """Parameter polynomials inverted while computing a basis."""

    events: list[LogEvent] = field(default_factory=list)

    def record(self, factor: ParamPoly, context: str) -> None:
        if factor.is_zero() or factor.is_constant():
            return
        self.events.append(LogEvent(factor, context))

    def polynomials(self) -> list[ParamPoly]:
        return [e.factor for e in self.events]


_FRACTION_FREE: ContextVar[bool] = ContextVar("fraction_free", default=False)


@contextmanager
def fraction_free() -> Iterator[None]:
    """Run nested basis computations with denominator-free pseudo-reduction.

    Basis elements keep polynomial coefficients (content-stripped) during the
    run and are normalized to leading coefficient 1 only at the end, so the
    reduced bases agree with the default strategy while avoiding one fraction
    reduction per coefficient operation.  Worth switching on when coefficient
    fractions grow faster than their common factors cancel, e.g. after
    substituting solved parameter values or adjoined square roots.
    """
    token = _FRACTION_FREE.set(True)
    try:
        yield
    finally:
        _FRACTION_FREE.reset(token)


def _scalar_fraction(nparams: int, value) -> ParamFraction:
    zero = tuple([0] * nparams)
    return ParamFraction.from_poly(ParamPoly(nparams, {zero: value}))


def _ff_strip(elem: ModElement, order) -> ModElement:
    """Divide out the numerator content (denominators are already 1) and make
    the leading coefficient's rational factor 1."""
    nums = [c.num for op in elem.comps.values() for c in op.terms.values()]
    g = nums[0]
    for n in nums[1:]:
        if g.is_constant():
            break
        g = pp_gcd(g, n)
    if not g.is_constant():
        elem = elem.scaled(ParamFraction.from_poly(g).inverse())
    _, _, lc = elem.leading(order)
    r = lc.num.leading_coefficient()
    if r != 1:
        elem = elem.scaled(_scalar_fraction(lc.num.nvars, 1 / r))
    return elem


def _ff_normalize(elem: ModElement, order) -> ModElement:
    """Clear coefficient denominators, then strip content."""
    dens = [c.den for op in elem.comps.values() for c in op.terms.values()]
    lcm = None
    for d in dens:
        if d.is_constant():
            continue
        if lcm is None:
            lcm = d
            continue
        g = pp_gcd(lcm, d)
        lcm = lcm * (d if g.is_constant() else pp_divexact(d, g))
    if lcm is not None:
        elem = elem.scaled(ParamFraction.from_poly(lcm))
    return _ff_strip(elem, order)


def _exp_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _exp_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _exp_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _shifted(elem: ModElement, shift: tuple) -> ModElement:
    if not any(shift):
        return elem
    return elem.map_entries(lambda p: p.shifted(shift))


def _term_element(rank: int, comp: int, nops: int, exp: tuple, coeff: ParamFraction) -> ModElement:
    return ModElement(rank, {comp: OpPoly(nops, {exp: coeff})})


class _Engine:
    """One Buchberger run over the tagged module A^(m+k)."""

    def __init__(self, ring: Ring, matrix: ModMatrix, want_syzygies: bool, log: DenominatorLog):
        self.ring = ring
        self.m = matrix.rank
        self.k = matrix.ncols
        self.want_syzygies = want_syzygies
        self.log = log
        self.ff = _FRACTION_FREE.get()
        self.order = LiftOrder(ring.order, self.m)
        self.basis: list[ModElement] = []
        self.leads: list[tuple[int, tuple]] = []
        self.heap: list[tuple] = []
        self.done: set[tuple[int, int]] = set()
        self._seed(matrix)

    # -- setup ---------------------------------------------------------------

    def _seed(self, matrix: ModMatrix) -> None:
        nops, npar = self.ring.nops, self.ring.nparams
        rank = self.m + self.k
        for idx, col in enumerate(matrix.columns):
            comps = dict(col.comps)
            comps[self.m + idx] = OpPoly.one(nops, npar)
            self._insert(ModElement(rank, comps))

    # -- core steps ----------------------------------------------------------

    def _insert(self, elem: ModElement) -> None:
        comp, exp, coeff = elem.leading(self.order)
        if comp >= self.m and not self.want_syzygies:
            return
        if self.ff:
            elem = _ff_normalize(elem, self.order)
        elif not (coeff.is_constant() and coeff.constant_value() == 1):
            if comp < self.m:
                self.log.record(coeff.num, "monic")
            elem = elem.scaled(coeff.inverse())
        t = len(self.basis)
        self.basis.append(elem)
        self.leads.append((comp, exp))
        for s in range(t):
            scomp, sexp = self.leads[s]
            if scomp != comp:
                continue
            lcm = _exp_lcm(sexp, exp)
            heapq.heappush(self.heap, (self.order.key(lcm, comp), s, t))

    def _chain_redundant(self, i: int, j: int, comp: int, lcm: tuple) -> bool:
        for t in range(len(self.basis)):
            if t == i or t == j:
                continue
            tcomp, texp = self.leads[t]
            if tcomp != comp or not _exp_divides(texp, lcm):
                continue
            a = (min(i, t), max(i, t))
            b = (min(j, t), max(j, t))
            if a in self.done and b in self.done:
                return True
        return False

    def _top_reduce(self, elem: ModElement) -> ModElement:
        while elem:
            comp, exp, coeff = elem.leading(self.order)
            for g, (gcomp, gexp) in zip(self.basis, self.leads):
                if gcomp == comp and _exp_divides(gexp, exp):
                    if self.ff:
                        lcg = g.leading(self.order)[2]
                        if not (lcg.is_constant() and lcg.constant_value() == 1):
                            elem = elem.scaled(lcg)
                        elem = elem.sub_scaled_shift(g, coeff, _exp_sub(exp, gexp))
                        if elem:
                            elem = _ff_strip(elem, self.order)
                    else:
                        elem = elem.sub_scaled_shift(g, coeff, _exp_sub(exp, gexp))
                    break
            else:
                return elem
        return elem

    def run(self) -> None:
        while self.heap:
            _, i, j = heapq.heappop(self.heap)
            key = (i, j)
            if key in self.done:
                continue
            icomp, iexp = self.leads[i]
            _, jexp = self.leads[j]
            lcm = _exp_lcm(iexp, jexp)
            if self._chain_redundant(i, j, icomp, lcm):
                self.done.add(key)
                continue
            self.done.add(key)
            si = _shifted(self.basis[i], _exp_sub(lcm, iexp))
            sj = _shifted(self.basis[j], _exp_sub(lcm, jexp))
            if self.ff:
                ci = self.basis[i].leading(self.order)[2]
                cj = self.basis[j].leading(self.order)[2]
                spair = si.scaled(cj) - sj.scaled(ci)
            else:
                spair = si - sj
            spair = self._top_reduce(spair)
            if spair:
                self._insert(spair)

    # -- final normalization ---------------------------------------------------

    def _minimal(self) -> list[int]:
        kept = []
        for i, (comp, exp) in enumerate(self.leads):
            redundant = False
            for j, (jcomp, jexp) in enumerate(self.leads):
                if i == j or jcomp != comp or not _exp_divides(jexp, exp):
                    continue
                # equal leads: the earliest insertion owns the lead
                if jexp == exp and j > i:
                    continue
                redundant = True
                break
            if not redundant:
                kept.append(i)
        return kept

    def _tail_reduce(self, elem: ModElement, reducers: Sequence[ModElement], skip: int) -> ModElement:
        rank = elem.rank
        nops = self.ring.nops
        comp, exp, coeff = elem.leading(self.order)
        result = _term_element(rank, comp, nops, exp, coeff)
        work = elem - result
        lead_info = [r.leading(self.order) for r in reducers]
        while work:
            comp, exp, coeff = work.leading(self.order)
            for idx, (g, (gcomp, gexp, _)) in enumerate(zip(reducers, lead_info)):
                if idx != skip and gcomp == comp and _exp_divides(gexp, exp):
                    work = work.sub_scaled_shift(g, coeff, _exp_sub(exp, gexp))
                    break
            else:
                term = _term_element(rank, comp, nops, exp, coeff)
                result = result + term
                work = work - term
        return result

    def _monicize(self, elem: ModElement) -> ModElement:
        comp, _, coeff = elem.leading(self.order)
        if coeff.is_constant() and coeff.constant_value() == 1:
            return elem
        if comp < self.m:
            self.log.record(coeff.num, "monic")
        return elem.scaled(coeff.inverse())

    def finish(self) -> tuple[list[ModElement], list[ModElement]]:
        kept = self._minimal()
        mains = [self.basis[i] for i in kept if self.leads[i][0] < self.m]
        tags = [self.basis[i] for i in kept if self.leads[i][0] >= self.m]
        if self.ff:
            mains = [self._monicize(e) for e in mains]
            tags = [self._monicize(e) for e in tags]
        for group in (mains, tags):
            changed = True
            while changed:
                changed = False
                for idx in range(len(group)):
                    new = self._tail_reduce(group[idx], group, idx)
                    if new != group[idx]:
                        group[idx] = new
                        changed = True
        def sort_key(e: ModElement):
            comp, exp, _ = e.leading(self.order)
            return self.order.key(exp, comp)
        mains.sort(key=sort_key, reverse=True)
        tags.sort(key=sort_key, reverse=True)
        return mains, tags


@dataclass
class Trinity:
    """Groebner basis of the column span with transformation and syzygies."""

    ring: Ring
    matrix: ModMatrix
    gb: ModMatrix
    transform: ModMatrix
    syzygies: Optional[ModMatrix]
    log: DenominatorLog
    _mains: list[ModElement] = field(repr=False, default_factory=list)
    _order: LiftOrder = field(repr=False, default=None)  # type: ignore[assignment]

    # -- division against the computed basis ------------------------------------

    def _divide(self, target: ModElement) -> tuple[ModElement, ModElement]:
        """Full reduction of (target | 0); returns (remainder, coefficients).

        remainder + F*coefficients == target, with no remainder term divisible
        by a basis lead.
        """
        m, k = self.matrix.rank, self.matrix.ncols
        if target.rank != m:
            raise ValueError("target rank does not match the module")
        rank = m + k
        nops = self.ring.nops
        lead_info = [g.leading(self._order) for g in self._mains]
        work = ModElement(rank, dict(target.comps))
        remainder = ModElement.zero(rank)
        while work:
            comp, exp, coeff = work.leading(self._order)
            if comp >= m:
                break
            for g, (gcomp, gexp, _) in zip(self._mains, lead_info):
                if gcomp == comp and _exp_divides(gexp, exp):
                    work = work.sub_scaled_shift(g, coeff, _exp_sub(exp, gexp))
                    break
            else:
                term = _term_element(rank, comp, nops, exp, coeff)
                remainder = remainder + term
                work = work - term
        coeffs = (-work).truncate(k, m)
        return remainder.truncate(m, 0), coeffs

    def normal_form(self, target: ModElement) -> ModElement:
        return self._divide(target)[0]

    def contains(self, target: ModElement) -> bool:
        return self._divide(target)[0].is_zero()

    def lift_column(self, target: ModElement) -> ModElement:
        remainder, coeffs = self._divide(target)
        if not remainder.is_zero():
            raise ValueError("element is not in the column span")
        return coeffs

    def lift_matrix(self, targets: ModMatrix) -> ModMatrix:
        cols = [self.lift_column(c) for c in targets.columns]
        return ModMatrix(self.matrix.ncols, cols)


def trinity(ring: Ring, matrix: ModMatrix, want_syzygies: bool = True,
            log: Optional[DenominatorLog] = None) -> Trinity:
    log = DenominatorLog() if log is None else log
    engine = _Engine(ring, matrix, want_syzygies, log)
    engine.run()
    mains, tags = engine.finish()
    m, k = matrix.rank, matrix.ncols
    gb = ModMatrix(m, [e.truncate(m, 0) for e in mains])
    transform = ModMatrix(k, [e.truncate(k, m) for e in mains])
    syz = ModMatrix(k, [e.truncate(k, m) for e in tags]) if want_syzygies else None
    return Trinity(
        ring=ring,
        matrix=matrix,
        gb=gb,
        transform=transform,
        syzygies=syz,
        log=log,
        _mains=mains,
        _order=engine.order,
    )


def groebner_basis(ring: Ring, matrix: ModMatrix) -> ModMatrix:
    return trinity(ring, matrix, want_syzygies=False).gb


def syzygy_matrix(ring: Ring, matrix: ModMatrix) -> ModMatrix:
    syz = trinity(ring, matrix, want_syzygies=True).syzygies
    assert syz is not None
    return syz


def lift_through(ring: Ring, matrix: ModMatrix, targets: ModMatrix) -> ModMatrix:
    """Solve matrix * X = targets columnwise; raises if no solution exists."""
    return trinity(ring, matrix, want_syzygies=False).lift_matrix(targets)
