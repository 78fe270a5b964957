"""Obstructions to genericity of parametric Groebner bases.

The primary detector collects the parameter denominators of a transformation
matrix produced by the engine: whenever a specialization kills one of those
denominators, the generic basis (and everything derived from it) may change.
The squarefree factors of the denominators are the reported obstructions.

A second, independent detector follows the adjoined-variables method: the
parameters become honest variables, the basis is recomputed under an order
eliminating the operator variables, and the product of the retained leading
coefficients plays the role of the obstruction polynomial.  The two routes
are compared in the test suite on every worked system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .groebner import Trinity, trinity
from .modules import ModElement, ModMatrix, OpPoly, Ring
from .orders import ModOrder, elimination_order
from .polynomials import (
    ParamFraction,
    ParamPoly,
    pp_lcm,
    pp_sort_key,
    pp_squarefree_factors,
)
from . import modops


# -- obstruction sets -----------------------------------------------------------


@dataclass(frozen=True)
class ObstructionSet:
    """Squarefree parameter polynomials whose vanishing threatens genericity."""

    nparams: int
    factors: tuple[ParamPoly, ...]
    lcm_denominator: ParamPoly
    normalization_factors: tuple[ParamPoly, ...] = ()

    def parameter_factors(self) -> list[ParamPoly]:
        return [f for f in self.factors if _is_single_parameter(f)]

    def polynomial_factors(self) -> list[ParamPoly]:
        return [f for f in self.factors if not _is_single_parameter(f)]

    def admissible(self, nonzero: frozenset[int]) -> list[ParamPoly]:
        """Factors that can still vanish when the given parameters cannot.

        A factor is discarded when it is a single term supported entirely on
        parameters declared nonzero; such a monomial has no admissible zero.
        """
        out = []
        for f in self.factors:
            if len(f.terms) == 1 and set(f.variables()) <= nonzero:
                continue
            out.append(f)
        return out

    def display_items(self, names: Sequence[str]) -> list[str]:
        """Single parameters joined into one leading item, then one item per
        nontrivial polynomial."""
        items = []
        singles = self.parameter_factors()
        if singles:
            items.append(",".join(f.text(names) for f in singles))
        items.extend(f.text(names) for f in self.polynomial_factors())
        return items


def _is_single_parameter(f: ParamPoly) -> bool:
    if len(f.terms) != 1:
        return False
    (e, c), = f.terms.items()
    return sum(e) == 1 and c == 1


def _squarefree_parts(polys: Sequence[ParamPoly]) -> list[ParamPoly]:
    seen: dict[ParamPoly, None] = {}
    for p in polys:
        if p.is_zero() or p.is_constant():
            continue
        _, factors = pp_squarefree_factors(p)
        for f, _mult in factors:
            if not f.is_constant():
                seen.setdefault(f)
    return sorted(seen, key=pp_sort_key)


def obstructions_from_denominators(
    nparams: int,
    denominators: Sequence[ParamPoly],
    log_polys: Sequence[ParamPoly] = (),
) -> ObstructionSet:
    lcm = ParamPoly.one(nparams)
    for d in denominators:
        lcm = pp_lcm(lcm, d)
    factors = _squarefree_parts(denominators)
    extra = [f for f in _squarefree_parts(log_polys) if f not in factors]
    return ObstructionSet(
        nparams=nparams,
        factors=tuple(factors),
        lcm_denominator=lcm,
        normalization_factors=tuple(extra),
    )


def matrix_denominators(matrix: ModMatrix, nops: int) -> list[ParamPoly]:
    dens = []
    for col in matrix.columns:
        for p in col.comps.values():
            if not p.is_zero():
                dens.append(p.denominator())
    return dens


def genericity_from_matrix(ring: Ring, transform: ModMatrix) -> ObstructionSet:
    """Obstructions read off a transformation matrix alone (every nonzero
    entry contributes its denominator)."""
    return obstructions_from_denominators(
        ring.nparams, matrix_denominators(transform, ring.nops)
    )


def genericity_from_trinity(ring: Ring, tri: Trinity) -> ObstructionSet:
    """Obstructions from a full basis run.

    Only transformation entries that feed the leading coefficient of a basis
    column are collected: for basis column j with leading component i, entry
    T_kj counts when the input entry M_ik is nonzero.  Numerators inverted by
    monic normalization are reported separately.
    """
    nops = ring.nops
    dens = []
    for j, gcol in enumerate(tri.gb.columns):
        i, _, _ = gcol.leading(ring.order)
        tcol = tri.transform.columns[j]
        for k in range(tri.matrix.ncols):
            if tri.matrix.entry(i, k, nops).is_zero():
                continue
            entry = tcol.comp(k, nops)
            if not entry.is_zero():
                dens.append(entry.denominator())
    return obstructions_from_denominators(
        ring.nparams, dens, log_polys=tri.log.polynomials()
    )


# -- the adjoined-variables detector ----------------------------------------------


@dataclass
class AdjoinedBasisResult:
    """Basis over the ring where parameters are adjoined as variables."""

    ring: Ring                      # operators first, then the old parameters
    matrix: ModMatrix               # the denominator-cleared input
    basis: ModMatrix
    qn: list[OpPoly]                # {p in K[params] : p * A^s inside the module}
    h: OpPoly                       # product of retained leading coefficients
    h_factors: tuple[OpPoly, ...]   # squarefree factors of h


def adjoined_ring(ring: Ring) -> Ring:
    nall = ring.nops + ring.nparams
    return Ring(
        params=(),
        opvars=ring.opvars + ring.params,
        order=ModOrder(
            mono=elimination_order(ring.nops, nall),
            scheme="POT",
            descending=True,
        ),
        name=ring.name + "_adj",
    )


def _clear_column(ring: Ring, big: Ring, col: ModElement) -> ModElement:
    if col.is_zero():
        return ModElement.zero(col.rank)
    den = ParamPoly.one(ring.nparams)
    for p in col.comps.values():
        den = pp_lcm(den, p.denominator())
    scale = ParamFraction.from_poly(den)
    numerators: list[ParamPoly] = []
    cleared: dict[int, OpPoly] = {}
    for i, p in col.comps.items():
        q = p * scale
        cleared[i] = q
        for c in q.terms.values():
            numerators.append(c.num)
    content = numerators[0]
    for n in numerators[1:]:
        content = _poly_gcd(content, n)
    inv = ParamFraction.from_poly(content).inverse()
    comps = {}
    for i, p in cleared.items():
        comps[i] = _embed_op(big, ring, p.map_coefficients(lambda c: c * inv))
    return ModElement(col.rank, comps)


def _poly_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    from .polynomials import pp_gcd

    return pp_gcd(a, b)


def _embed_op(big: Ring, ring: Ring, p: OpPoly) -> OpPoly:
    terms = {}
    for e, c in p.terms.items():
        if c.den != ParamPoly.one(ring.nparams):
            raise ValueError("denominators must be cleared before adjoining")
        for pe, q in c.num.terms.items():
            terms[tuple(e) + tuple(pe)] = ParamFraction.constant(0, q)
    return OpPoly(big.nops, terms)


def project_parameter_poly(ring: Ring, big: Ring, p: ParamPoly) -> OpPoly:
    """A polynomial in the parameters viewed inside the adjoined ring."""
    terms = {
        (0,) * ring.nops + tuple(e): ParamFraction.constant(0, c)
        for e, c in p.terms.items()
    }
    return OpPoly(big.nops, terms)


def _op_to_parampoly(p: OpPoly) -> ParamPoly:
    return ParamPoly(p.nops, {e: c.constant_value() for e, c in p.terms.items()})


def _pp_to_op(nops: int, q: ParamPoly) -> OpPoly:
    return OpPoly(nops, {e: ParamFraction.constant(0, c) for e, c in q.terms.items()})


def adjoined_basis(ring: Ring, matrix: ModMatrix) -> AdjoinedBasisResult:
    big = adjoined_ring(ring)
    cleared = ModMatrix(
        matrix.rank, [_clear_column(ring, big, col) for col in matrix.columns]
    )
    basis = trinity(big, cleared, want_syzygies=False).gb

    # Q_N: intersection over components of the operator-free part of
    # (module : e_i).
    per_component: list[list[OpPoly]] = []
    for i in range(matrix.rank):
        unit = ModElement.unit(matrix.rank, i, big.nops, big.nparams)
        quot = modops.module_quotient_by_element(big, cleared, unit)
        free = [p for p in quot if _operator_free(ring, p)]
        per_component.append(free)
    qn = modops.ideal_intersection(big, per_component)
    qn = [p for p in qn if _operator_free(ring, p)]

    qn_tri = None
    if qn:
        qn_tri = trinity(big, modops.ideal_matrix(big, qn), want_syzygies=False)

    h = OpPoly.one(big.nops, 0)
    for col in basis.columns:
        if qn_tri is not None and all(
            qn_tri.contains(ModElement(1, {0: p})) for p in col.comps.values()
        ):
            continue
        h = h * _leading_parameter_coefficient(ring, big, col)
    _, hfactors = pp_squarefree_factors(_op_to_parampoly(h))
    factors = tuple(
        _pp_to_op(big.nops, f) for f, _m in hfactors if not f.is_constant()
    )
    return AdjoinedBasisResult(
        ring=big, matrix=cleared, basis=basis, qn=qn, h=h, h_factors=factors
    )


def _operator_free(ring: Ring, p: OpPoly) -> bool:
    return all(not any(e[: ring.nops]) for e in p.terms)


def _leading_parameter_coefficient(ring: Ring, big: Ring, col: ModElement) -> OpPoly:
    comp, exp, _ = col.leading(big.order)
    opexp = exp[: ring.nops]
    poly = col.comps[comp]
    terms = {}
    for e, c in poly.terms.items():
        if e[: ring.nops] == opexp:
            terms[(0,) * ring.nops + e[ring.nops:]] = c
    return OpPoly(big.nops, terms)


def covers_obstruction(ring: Ring, result: AdjoinedBasisResult, factor: ParamPoly) -> bool:
    """True when the adjoined-route polynomial h vanishes on V(factor),
    certified by radical membership."""
    q = project_parameter_poly(ring, result.ring, factor)
    return modops.radical_membership(result.ring, result.h, [q])
