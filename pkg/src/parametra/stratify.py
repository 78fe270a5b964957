"""Stratification of the parameter space into constructible sets.

Obstruction polynomials split the parameter space into sign patterns (each
polynomial either vanishes or not).  Provably empty patterns are pruned with
radical-membership certificates; the survivors are the strata on which the
generic answers can change.  A factorizing basis decomposition (fact_gb)
refines equation sets into simpler components with the same zero set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .modules import OpPoly, Ring
from .modops import ideal_contains_one, ideal_groebner, radical_membership
from .orders import DEGREVLEX, ModOrder
from .polynomials import (
    ParamFraction,
    ParamPoly,
    pp_divides,
    pp_lcm,
    pp_squarefree_factors,
)


# -- bridging operator polynomials and plain polynomials ---------------------------


def op_to_combined(ring: Ring, p: OpPoly) -> ParamPoly:
    """View an operator polynomial as a plain polynomial in parameters and
    operators together (parameters first).  Parameter denominators are units
    and are cleared first."""
    den = ParamPoly.one(ring.nparams)
    for c in p.terms.values():
        den = pp_lcm(den, c.den)
    cleared = p * ParamFraction.from_poly(den)
    terms = {}
    for oe, c in cleared.terms.items():
        for pe, r in c.num.terms.items():
            terms[tuple(pe) + tuple(oe)] = r
    return ParamPoly(ring.nparams + ring.nops, terms)


def combined_to_op(ring: Ring, q: ParamPoly) -> OpPoly:
    t = ring.nparams
    grouped: dict[tuple, dict[tuple, object]] = {}
    for e, r in q.terms.items():
        grouped.setdefault(tuple(e[t:]), {})[tuple(e[:t])] = r
    terms = {
        oe: ParamFraction.from_poly(ParamPoly(t, pterms))
        for oe, pterms in grouped.items()
    }
    return OpPoly(ring.nops, terms)


def op_squarefree_factors(ring: Ring, p: OpPoly) -> list[tuple[OpPoly, int]]:
    """Squarefree factors of an operator polynomial, parameter units dropped."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    _, factors = pp_squarefree_factors(op_to_combined(ring, p))
    out = []
    for f, m in factors:
        g = combined_to_op(ring, f)
        if not g.is_constant():
            out.append((g, m))
    return out


def op_strip_factor(ring: Ring, p: OpPoly, factor: OpPoly) -> OpPoly:
    """Divide out the factor as many times as it exactly divides (the result
    differs from p by the removed factor, preserving the zero set wherever
    the factor does not vanish)."""
    if p.is_zero():
        return p
    qp = op_to_combined(ring, p)
    qf = op_to_combined(ring, factor)
    if qf.is_constant():
        return p
    while True:
        quotient = pp_divides(qf, qp)
        if quotient is None:
            break
        qp = quotient
        if qp.is_constant():
            break
    return combined_to_op(ring, qp)


def _strip_all(ring: Ring, p: OpPoly, nonzero: Sequence[OpPoly]) -> OpPoly:
    for q in nonzero:
        p = op_strip_factor(ring, p, q)
    return p


# -- factorizing basis decomposition ------------------------------------------------


def fact_gb(
    ring: Ring,
    gens: Sequence[OpPoly],
    nonzero: Sequence[OpPoly] = (),
    max_components: int = 64,
) -> list[list[OpPoly]]:
    """Components whose zero sets cover the zero set of gens off the zero sets
    of the nonzero list.

    Generators are split along their squarefree factorizations, branching one
    factor at a time, with each later branch assuming the earlier factors
    nonzero.  Components forced to contain a unit (directly, or because a
    declared nonzero polynomial lies in the component ideal) are discarded.
    """
    out: list[list[OpPoly]] = []
    seen: set[frozenset] = set()
    _fact_rec(ring, tuple(gens), tuple(nonzero), out, seen, max_components)
    return out


def _fact_rec(
    ring: Ring,
    gens: tuple[OpPoly, ...],
    nonzero: tuple[OpPoly, ...],
    out: list[list[OpPoly]],
    seen: set[frozenset],
    limit: int,
) -> None:
    if len(out) >= limit:
        raise ArithmeticError("factorizing decomposition exceeded component limit")
    stripped = []
    for g in gens:
        if g.is_zero():
            continue
        g = _strip_all(ring, g, nonzero)
        if g.is_constant():
            return  # a unit survives: empty component
        stripped.append(g)
    basis = ideal_groebner(ring, stripped)
    if any(p.is_constant() and not p.is_zero() for p in basis):
        return
    for q in nonzero:
        if radical_membership(ring, q, basis):
            return  # the component lies inside V(q): certified empty
    for g in basis:
        factors = op_squarefree_factors(ring, g)
        reduced = [
            f for f, _ in factors if not _strip_all(ring, f, nonzero).is_constant()
        ]
        if not reduced:
            return  # the generator is a product of nonzero polynomials
        if len(factors) == 1 and factors[0][1] == 1 and len(reduced) == 1:
            continue  # already squarefree with nothing to discard
        rest = tuple(h for h in basis if h != g)
        for k, f in enumerate(reduced):
            _fact_rec(
                ring,
                rest + (f,),
                nonzero + tuple(reduced[:k]),
                out,
                seen,
                limit,
            )
        return
    key = frozenset(basis)
    if key not in seen:
        seen.add(key)
        out.append(basis)


# -- strata -------------------------------------------------------------------------


@dataclass
class Stratum:
    zero: tuple[ParamPoly, ...]        # these obstruction factors vanish
    nonzero: tuple[ParamPoly, ...]     # these are invertible
    status: str                        # "generic", "nonempty" or "empty"
    certificate: Optional[ParamPoly] = None   # inequation forced to vanish

    def describe(self, names: Sequence[str]) -> str:
        zs = ", ".join(f"{p.text(names)}=0" for p in self.zero) or "-"
        ns = ", ".join(f"{p.text(names)}<>0" for p in self.nonzero) or "-"
        return f"[{zs} | {ns}] ({self.status})"


def parameter_ring(names: Sequence[str]) -> Ring:
    return Ring(
        params=(),
        opvars=tuple(names),
        order=ModOrder(mono=DEGREVLEX, scheme="TOP", descending=True),
        name="parameter_space",
    )


def _pp_as_op(q: ParamPoly) -> OpPoly:
    return OpPoly(
        q.nvars, {e: ParamFraction.constant(0, c) for e, c in q.terms.items()}
    )


def stratify_obstructions(
    names: Sequence[str], factors: Sequence[ParamPoly], prune: bool = True
) -> list[Stratum]:
    """All sign patterns of the obstruction factors: the generic stratum first,
    then every pattern with at least one vanishing factor.  With pruning on,
    each pattern is classified and provably empty ones keep their
    certificate."""
    pring = parameter_ring(names)
    factors = list(factors)
    strata = [Stratum(zero=(), nonzero=tuple(factors), status="generic")]
    n = len(factors)
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            zs = tuple(factors[i] for i in subset)
            ns = tuple(factors[i] for i in range(n) if i not in subset)
            if prune:
                strata.append(_classify(pring, zs, ns))
            else:
                strata.append(Stratum(zs, ns, "nonempty"))
    return strata


def _classify(pring: Ring, zs: tuple, ns: tuple) -> Stratum:
    basis = ideal_groebner(pring, [_pp_as_op(z) for z in zs])
    if ideal_contains_one(pring, basis):
        return Stratum(zs, ns, "empty")
    for q in ns:
        if radical_membership(pring, _pp_as_op(q), basis):
            return Stratum(zs, ns, "empty", certificate=q)
    if ns:
        product = ParamPoly.one(pring.nops)
        for q in ns:
            product = product * q
        if radical_membership(pring, _pp_as_op(product), basis):
            return Stratum(zs, ns, "empty", certificate=product)
    return Stratum(zs, ns, "nonempty")


def live_strata(strata: Sequence[Stratum]) -> list[Stratum]:
    return [s for s in strata if s.status != "empty"]


# -- solving stratum equations for parameter substitutions -------------------------


def identity_images(nparams: int) -> list[ParamFraction]:
    return [
        ParamFraction.from_poly(ParamPoly.variable(nparams, i))
        for i in range(nparams)
    ]


def stratum_substitution(
    nparams: int, zero: Sequence[ParamPoly]
) -> Optional[list[ParamFraction]]:
    """Solve the vanishing conditions as parameter substitutions.

    Succeeds when the conditions can be solved one at a time, each linear in
    some still-free parameter; returns the full image vector, or None when
    the system is not triangular in that sense (such strata need manual
    treatment)."""
    images = identity_images(nparams)
    solved: set[int] = set()
    pending = list(zero)
    progress = True
    while pending and progress:
        progress = False
        remaining = []
        for p in pending:
            q = ParamFraction.from_poly(p).substitute(images).num
            if q.is_zero():
                progress = True
                continue
            if q.is_constant():
                return None  # contradictory condition
            sol = _solve_linear(q, solved)
            if sol is None:
                remaining.append(p)
                continue
            var, image = sol
            partial = identity_images(nparams)
            partial[var] = image
            images = [img.substitute(partial) for img in images]
            solved.add(var)
            progress = True
        pending = remaining
    if pending:
        return None
    return images


def _solve_linear(
    p: ParamPoly, taken: set[int]
) -> Optional[tuple[int, ParamFraction]]:
    for var in p.variables():
        if var in taken or p.degree(var) != 1:
            continue
        uni = p.univariate_in(var)
        coeff = uni.get(1)
        if coeff is None:
            continue
        rest = uni.get(0, ParamPoly.zero(p.nvars))
        return var, ParamFraction(-rest, coeff)
    return None
