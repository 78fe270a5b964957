"""Matrix-level module operations: kernels, inverses, rank, dimension, ideals.

Everything here reduces to the Groebner engine: kernels are syzygies,
inverses are lifts of identity matrices, ideal arithmetic uses the usual
syzygy encodings (quotient, intersection, saturation, radical membership).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Sequence

from .groebner import Trinity, groebner_basis, syzygy_matrix, trinity
from .modules import ModElement, ModMatrix, OpPoly, Ring
from .orders import ModOrder, elimination_order
from .polynomials import ParamFraction, ParamPoly

# -- kernels ----------------------------------------------------------------


def right_kernel(ring: Ring, matrix: ModMatrix) -> ModMatrix:
    """Columns generating {x : matrix * x = 0}."""
    return syzygy_matrix(ring, matrix)


def left_kernel(ring: Ring, matrix: ModMatrix) -> ModMatrix:
    """Matrix N with N * matrix = 0 whose rows generate all such covectors."""
    return right_kernel(ring, matrix.transpose(ring.nops)).transpose(ring.nops)


# -- inverses ---------------------------------------------------------------


def matrix_is_identity(matrix: ModMatrix) -> bool:
    if matrix.rank != matrix.ncols:
        return False
    seen = set()
    for col in matrix.columns:
        if len(col.comps) != 1:
            return False
        (i, p), = col.comps.items()
        if not p.is_constant():
            return False
        c = p.constant_coeff()
        if not (c.is_constant() and c.constant_value() == 1):
            return False
        seen.add(i)
    return seen == set(range(matrix.rank))


def left_inverse(ring: Ring, matrix: ModMatrix) -> Optional[ModMatrix]:
    """L with L * matrix = Id, or None when the rows do not span A^ncols."""
    mt = matrix.transpose(ring.nops)
    tri = trinity(ring, mt, want_syzygies=False)
    if not matrix_is_identity(tri.gb):
        return None
    ident = ModMatrix.identity(matrix.ncols, ring.nops, ring.nparams)
    lifted = tri.lift_matrix(ident)
    return lifted.transpose(ring.nops)


def right_inverse(ring: Ring, matrix: ModMatrix) -> Optional[ModMatrix]:
    """X with matrix * X = Id, or None when the columns do not span A^rank."""
    tri = trinity(ring, matrix, want_syzygies=False)
    if not matrix_is_identity(tri.gb):
        return None
    ident = ModMatrix.identity(matrix.rank, ring.nops, ring.nparams)
    return tri.lift_matrix(ident)


# -- rank ----------------------------------------------------------------------


def column_rank(ring: Ring, matrix: ModMatrix, seed: int = 0) -> int:
    """Rank of the column span over the field of fractions.

    Primary route: alternating sum of generator counts along the iterated
    syzygy resolution (rank im = ncols - rank ker, recursively).  The result
    is cross-checked against the rank of the matrix at random rational
    points; a disagreement raises instead of returning either value.
    """
    exact = _euler_rank(ring, matrix)
    probe = _specialized_rank(ring, matrix, seed)
    if exact != probe:
        raise ArithmeticError(
            f"rank computations disagree: resolution gives {exact}, "
            f"random specialization gives {probe}"
        )
    return exact


def _euler_rank(ring: Ring, matrix: ModMatrix) -> int:
    total, sign = 0, 1
    cur = matrix
    cap = ring.nops + matrix.ncols + 4
    for _ in range(cap):
        if cur.ncols == 0:
            return total
        total += sign * cur.ncols
        cur = syzygy_matrix(ring, cur)
        sign = -sign
    raise ArithmeticError("syzygy resolution did not terminate within the expected bound")


def _specialized_rank(ring: Ring, matrix: ModMatrix, seed: int, trials: int = 4) -> int:
    rng = random.Random(seed)
    best = 0
    done = 0
    while done < trials:
        pvals = [Fraction(rng.randint(2, 499), rng.randint(1, 5)) for _ in range(ring.nparams)]
        xvals = [Fraction(rng.randint(2, 499), rng.randint(1, 5)) for _ in range(ring.nops)]
        try:
            rows = [
                [
                    _evaluate_entry(matrix.entry(i, j, ring.nops), pvals, xvals)
                    for j in range(matrix.ncols)
                ]
                for i in range(matrix.rank)
            ]
        except ZeroDivisionError:
            continue
        best = max(best, _fraction_rank(rows))
        done += 1
    return best


def _evaluate_entry(p: OpPoly, pvals: Sequence[Fraction], xvals: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for e, c in p.terms.items():
        v = c.evaluate(pvals)
        for i, k in enumerate(e):
            if k:
                v *= xvals[i] ** k
        total += v
    return total


def _fraction_rank(rows: list[list[Fraction]]) -> int:
    mat = [row[:] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        pv = mat[row][col]
        for r in range(len(mat)):
            if r != row and mat[r][col] != 0:
                f = mat[r][col] / pv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        row += 1
        rank += 1
    return rank


# -- Krull dimension of a presented module ---------------------------------------


def cokernel_dimension(ring: Ring, relations: ModMatrix) -> int:
    """Krull dimension of A^rank / <columns of relations>.

    Computed from the staircase: per component, the monomial ideal of leading
    exponents; the dimension of each surviving component is the size of the
    largest variable subset meeting no generator's support.  The zero module
    has dimension -1.
    """
    if relations.rank == 0:
        return -1
    gb = groebner_basis(ring, relations)
    leads: dict[int, list[tuple]] = {i: [] for i in range(relations.rank)}
    for col in gb.columns:
        comp, exp, _ = col.leading(ring.order)
        leads[comp].append(exp)
    best = -1
    n = ring.nops
    for comp in range(relations.rank):
        gens = leads[comp]
        if any(not any(e) for e in gens):
            continue  # component killed by a unit
        if not gens:
            best = max(best, n)
            continue
        supports = [frozenset(i for i, k in enumerate(e) if k) for e in gens]
        best = max(best, _staircase_dimension(supports, n))
    return best


def _staircase_dimension(supports: list[frozenset], n: int) -> int:
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return 0


# -- specialization -------------------------------------------------------------


def specialize_matrix(
    ring: Ring, matrix: ModMatrix, values: Sequence[Fraction]
) -> tuple[Ring, ModMatrix]:
    """Evaluate every parameter at a rational point; raises ZeroDivisionError
    when the point hits a coefficient denominator."""
    newring = Ring(params=(), opvars=ring.opvars, order=ring.order, name=ring.name)
    cols = []
    for col in matrix.columns:
        cols.append(col.map_entries(lambda p: p.evaluate_params(values)))
    return newring, ModMatrix(matrix.rank, cols)


# -- ideal arithmetic (rank-1 modules) ------------------------------------------


def ideal_matrix(ring: Ring, polys: Sequence[OpPoly]) -> ModMatrix:
    return ModMatrix(1, [ModElement(1, {0: p}) for p in polys if not p.is_zero()])


def ideal_generators(matrix: ModMatrix, nops: int) -> list[OpPoly]:
    return [col.comp(0, nops) for col in matrix.columns if not col.is_zero()]


def ideal_groebner(ring: Ring, polys: Sequence[OpPoly]) -> list[OpPoly]:
    if not any(not p.is_zero() for p in polys):
        return []
    return ideal_generators(groebner_basis(ring, ideal_matrix(ring, polys)), ring.nops)


def ideal_contains_one(ring: Ring, gens: Sequence[OpPoly]) -> bool:
    for p in ideal_groebner(ring, gens):
        if p.is_constant() and not p.is_zero():
            return True
    return False


def module_quotient_by_element(
    ring: Ring, span: ModMatrix, elem: ModElement
) -> list[OpPoly]:
    """Generators of the ideal {a in A : a*elem in <columns of span>}."""
    combined = ModMatrix(span.rank, (elem,) + span.columns)
    syz = syzygy_matrix(ring, combined)
    gens = []
    for col in syz.columns:
        a = col.comp(0, ring.nops)
        if not a.is_zero():
            gens.append(a)
    return ideal_groebner(ring, gens)


def ideal_intersection(ring: Ring, ideals: Sequence[Sequence[OpPoly]]) -> list[OpPoly]:
    """Intersection of finitely many ideals via the all-ones syzygy encoding."""
    ideals = [list(gens) for gens in ideals]
    if not ideals:
        return [OpPoly.one(ring.nops, ring.nparams)]
    if any(not gens for gens in ideals):
        return []
    r = len(ideals)
    one = OpPoly.one(ring.nops, ring.nparams)
    cols = [ModElement(r, {t: one for t in range(r)})]
    for t, gens in enumerate(ideals):
        for g in gens:
            cols.append(ModElement(r, {t: g}))
    syz = syzygy_matrix(ring, ModMatrix(r, cols))
    gens = []
    for col in syz.columns:
        a = col.comp(0, ring.nops)
        if not a.is_zero():
            gens.append(a)
    return ideal_groebner(ring, gens)


# -- extended-ring constructions (one auxiliary variable) ------------------------


def _extended_ring(ring: Ring) -> Ring:
    """Ring with one fresh variable placed first and an order eliminating it."""
    order = ModOrder(
        mono=elimination_order(1, ring.nops + 1),
        scheme=ring.order.scheme,
        descending=ring.order.descending,
    )
    return Ring(
        params=ring.params,
        opvars=("@aux",) + ring.opvars,
        order=order,
        name=ring.name + "_aux",
    )


def _pad_poly(p: OpPoly) -> OpPoly:
    return OpPoly(p.nops + 1, {(0,) + e: c for e, c in p.terms.items()})


def _strip_poly(p: OpPoly) -> OpPoly:
    return OpPoly(p.nops - 1, {e[1:]: c for e, c in p.terms.items()})


def radical_membership(ring: Ring, p: OpPoly, gens: Sequence[OpPoly]) -> bool:
    """True when p lies in the radical of <gens> (Rabinowitsch trick)."""
    if p.is_zero():
        return True
    ext = _extended_ring(ring)
    y = OpPoly.variable(ext.nops, ext.nparams, 0)
    one = OpPoly.one(ext.nops, ext.nparams)
    lifted = [_pad_poly(g) for g in gens]
    lifted.append(one - y * _pad_poly(p))
    return ideal_contains_one(ext, lifted)


def saturation(ring: Ring, gens: Sequence[OpPoly], divisor: OpPoly) -> list[OpPoly]:
    """Generators of (I : divisor^infinity) by eliminating the Rabinowitsch
    variable from I + <1 - y*divisor>."""
    ext = _extended_ring(ring)
    y = OpPoly.variable(ext.nops, ext.nparams, 0)
    one = OpPoly.one(ext.nops, ext.nparams)
    lifted = [_pad_poly(g) for g in gens]
    lifted.append(one - y * _pad_poly(divisor))
    basis = ideal_groebner(ext, lifted)
    out = [_strip_poly(p) for p in basis if all(e[0] == 0 for e in p.terms)]
    return ideal_groebner(ring, out)
