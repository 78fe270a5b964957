"""Structural analysis of finitely presented modules over the operator ring.

A behaviour is encoded by a relation matrix R: the system module is the
cokernel of the transposed columns, and its homological invariants decide
controllability and autonomy.  The vanishing of Ext groups against the free
resolution of the cokernel yields the first-nonzero index that classifies the
module (torsion-free, reflexive, ..., projective = free here).  Torsion is
extracted through the kernel/cokernel duality: the preimage of the torsion
submodule is the right kernel of the left kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .genericity import ObstructionSet, genericity_from_trinity
from .groebner import Trinity, groebner_basis, syzygy_matrix, trinity
from .modules import ModElement, ModMatrix, OpPoly, Ring
from .modops import (
    cokernel_dimension,
    column_rank,
    ideal_groebner,
    ideal_intersection,
    left_inverse,
    left_kernel,
    matrix_is_identity,
    module_quotient_by_element,
    right_kernel,
)


# -- free resolutions and Ext ------------------------------------------------------


def resolution_chain(ring: Ring, matrix: ModMatrix, depth: int) -> list[ModMatrix]:
    """[matrix, syz(matrix), syz(syz(matrix)), ...] up to the requested depth,
    stopping early once a syzygy module vanishes."""
    chain = [matrix]
    while len(chain) <= depth and chain[-1].ncols > 0:
        chain.append(syzygy_matrix(ring, chain[-1]))
    return chain


def ext_kernel_image(
    ring: Ring, chain: Sequence[ModMatrix], i: int
) -> Optional[tuple[ModMatrix, ModMatrix]]:
    """Kernel generators and image columns presenting Ext^i of the cokernel of
    chain[0], or None when the group is trivially zero (empty position)."""
    if i < 1:
        raise ValueError("ext index must be positive")
    if i - 1 >= len(chain):
        return None
    position = chain[i - 1].ncols
    if position == 0:
        return None
    nops = ring.nops
    if i < len(chain) and chain[i].ncols > 0:
        kernel = right_kernel(ring, chain[i].transpose(nops))
    else:
        kernel = ModMatrix.identity(position, nops, ring.nparams)
    image = chain[i - 1].transpose(nops)
    return kernel, image


def ext_is_zero(ring: Ring, chain: Sequence[ModMatrix], i: int) -> bool:
    pair = ext_kernel_image(ring, chain, i)
    if pair is None:
        return True
    kernel, image = pair
    if kernel.ncols == 0:
        return True
    tri = trinity(ring, image, want_syzygies=False)
    return all(tri.contains(col) for col in kernel.columns)


def first_nonzero_ext(ring: Ring, chain: Sequence[ModMatrix]) -> int:
    for i in range(1, ring.nops + 1):
        if not ext_is_zero(ring, chain, i):
            return i
    return -1


def ext_presentation(ring: Ring, chain: Sequence[ModMatrix], i: int) -> ModMatrix:
    """Relation matrix of a minimized presentation of Ext^i."""
    pair = ext_kernel_image(ring, chain, i)
    if pair is None:
        return ModMatrix(0, [])
    kernel, image = pair
    return present_subquotient(ring, kernel, image)


# -- subquotient presentations -----------------------------------------------------


def present_subquotient(ring: Ring, gens: ModMatrix, inside: ModMatrix) -> ModMatrix:
    """Relations of the module spanned by gens modulo the span of inside.

    The syzygies of the combined matrix project onto the relations of the
    generators; the presentation is then minimized and canonized.
    """
    s = gens.ncols
    if s == 0:
        return ModMatrix(0, [])
    combined = ModMatrix(gens.rank, gens.columns + inside.columns)
    syz = syzygy_matrix(ring, combined)
    cols = []
    for col in syz.columns:
        top = col.truncate(s, 0)
        if not top.is_zero():
            cols.append(top)
    relations = minimize_presentation(ring, ModMatrix(s, cols))
    if relations.ncols and relations.rank:
        relations = groebner_basis(ring, relations)
    return relations


def minimize_presentation(ring: Ring, relations: ModMatrix) -> ModMatrix:
    """Remove generators hit by unit relation entries (Gaussian elimination on
    constant pivots), then drop zero columns."""
    rows = list(range(relations.rank))
    cols: list[dict[int, OpPoly]] = [dict(c.comps) for c in relations.columns]
    while True:
        pivot = None
        for j, col in enumerate(cols):
            for i in sorted(col):
                if col[i].is_constant():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        pcol = cols[j]
        inv = pcol[i].constant_coeff().inverse()
        for j2, col in enumerate(cols):
            if j2 == j or i not in col:
                continue
            mult = col[i] * inv
            for i2, q in pcol.items():
                delta = mult * q
                cur = col.get(i2)
                new = (-delta) if cur is None else cur - delta
                if new.is_zero():
                    col.pop(i2, None)
                else:
                    col[i2] = new
        del cols[j]
        for col in cols:
            col.pop(i, None)
        rows.remove(i)
    index = {old: new for new, old in enumerate(rows)}
    out = []
    for col in cols:
        elem = ModElement(len(rows), {index[i]: p for i, p in col.items()})
        if not elem.is_zero():
            out.append(elem)
    return ModMatrix(len(rows), out)


# -- torsion -----------------------------------------------------------------------


def torsion_preimage(ring: Ring, matrix: ModMatrix) -> ModMatrix:
    """Columns generating the preimage in the ambient free module of the
    torsion submodule of the cokernel of matrix."""
    return right_kernel(ring, left_kernel(ring, matrix))


def torsion_annihilator(
    ring: Ring, matrix: ModMatrix, preimage: ModMatrix, tri: Optional[Trinity] = None
) -> list[OpPoly]:
    """Annihilator ideal of the torsion submodule: the intersection of the
    quotients of the relation span by each torsion generator."""
    if tri is None:
        tri = trinity(ring, matrix, want_syzygies=False)
    quotients = []
    for col in preimage.columns:
        if tri.contains(col):
            continue
        quotients.append(module_quotient_by_element(ring, matrix, col))
    if not quotients:
        return [OpPoly.one(ring.nops, ring.nparams)]
    return ideal_intersection(ring, quotients)


# -- the two analyses --------------------------------------------------------------


@dataclass
class AnalysisReport:
    kind: str                                   # "control" or "autonomy"
    ring: Ring
    matrix: ModMatrix                           # the analyzed input
    first_nonzero_ext: int
    verdict: str
    dimension: int
    image_rep: Optional[ModMatrix] = None
    left_inv: Optional[ModMatrix] = None
    kernel_rep: Optional[ModMatrix] = None
    obstruction: Optional[ModMatrix] = None     # minimized torsion presentation
    annihilator: Optional[list[OpPoly]] = None
    col_rank: Optional[int] = None
    module_rank: Optional[int] = None
    is_zero_module: bool = False
    obstructions: Optional[ObstructionSet] = None


def control_analysis(ring: Ring, matrix: ModMatrix, seed: int = 0) -> AnalysisReport:
    """Controllability of the behaviour whose interconnection matrix has the
    given columns.

    The kernel representation is controllable exactly when the cokernel of
    the columns is torsion-free (first nonzero Ext at least two), and admits
    an image representation with a left inverse (flatness) when every Ext
    vanishes.
    """
    nops = ring.nops
    tri = trinity(ring, matrix, want_syzygies=True)
    chain = resolution_chain(ring, matrix, nops + 1)
    fne = first_nonzero_ext(ring, chain)
    dimension = cokernel_dimension(ring, matrix.transpose(nops))
    obstructions = genericity_from_trinity(ring, tri)

    report = AnalysisReport(
        kind="control",
        ring=ring,
        matrix=matrix,
        first_nonzero_ext=fne,
        verdict="",
        dimension=dimension,
        image_rep=tri.syzygies,
        obstructions=obstructions,
    )
    if fne == -1:
        report.verdict = "strongly controllable(flat)"
        report.left_inv = left_inverse(ring, tri.syzygies)
    elif fne >= 2:
        report.verdict = "controllable, not flat"
        report.left_inv = left_inverse(ring, tri.syzygies)
    else:
        report.verdict = "not controllable"
        preimage = torsion_preimage(ring, matrix)
        report.kernel_rep = groebner_basis(
            ring, ModMatrix(matrix.rank, matrix.columns + preimage.columns)
        )
        report.obstruction = present_subquotient(ring, preimage, matrix)
        report.annihilator = torsion_annihilator(ring, matrix, preimage, tri)
    return report


def autonomy_analysis(ring: Ring, matrix: ModMatrix, seed: int = 0) -> AnalysisReport:
    """Autonomy of the behaviour cut out by the rows of the transposed input.

    The system module is the cokernel of the transposed columns; the
    behaviour is autonomous exactly when that module is torsion, i.e. when
    its dual Hom module (the syzygies of the input columns) vanishes.
    """
    nops = ring.nops
    tri = trinity(ring, matrix, want_syzygies=True)
    transposed = matrix.transpose(nops)
    chain = resolution_chain(ring, transposed, nops + 1)
    dimension = cokernel_dimension(ring, transposed)
    rank = column_rank(ring, matrix, seed=seed)
    is_zero = matrix_is_identity(groebner_basis(ring, transposed))

    report = AnalysisReport(
        kind="autonomy",
        ring=ring,
        matrix=matrix,
        first_nonzero_ext=0,
        verdict="",
        dimension=dimension,
        col_rank=rank,
        module_rank=matrix.ncols - rank,
        is_zero_module=is_zero,
    )
    if tri.syzygies.ncols > 0:
        report.first_nonzero_ext = 0
        report.verdict = "not autonomous"
        preimage = torsion_preimage(ring, matrix)
        report.kernel_rep = groebner_basis(
            ring, ModMatrix(matrix.rank, matrix.columns + preimage.columns)
        )
    else:
        report.first_nonzero_ext = first_nonzero_ext(ring, chain)
        if is_zero:
            report.verdict = "autonomous, zero module"
        else:
            report.verdict = "autonomous, torsion"
    return report
