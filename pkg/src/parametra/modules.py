"""Operator polynomials, module elements and matrices over K(p)[x1..xn].

OpPoly is a commutative polynomial in the operator variables whose
coefficients are ParamFraction values.  ModElement is a vector of OpPolys
indexed by component, ModMatrix a list of columns.  All three are immutable
value types; the Ring object carries names and the active module order and is
only needed at the boundaries (parsing, printing, specialization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .orders import DEGREVLEX, ModOrder, MonoOrder
from .polynomials import ParamFraction, ParamPoly, pp_lcm


@dataclass(frozen=True)
class Ring:
    """Names and order for K(p1..pt)[x1..xn] with the active module order."""

    params: tuple[str, ...]
    opvars: tuple[str, ...]
    order: ModOrder = ModOrder()
    name: str = "r"

    @property
    def nparams(self) -> int:
        return len(self.params)

    @property
    def nops(self) -> int:
        return len(self.opvars)

    def param_poly(self, index: int) -> ParamPoly:
        return ParamPoly.variable(self.nparams, index)

    def param_fraction(self, index: int) -> ParamFraction:
        return ParamFraction.from_poly(self.param_poly(index))

    def coeff_zero(self) -> ParamFraction:
        return ParamFraction.zero(self.nparams)

    def coeff_one(self) -> ParamFraction:
        return ParamFraction.one(self.nparams)

    def describe(self) -> str:
        ps = ",".join(self.params)
        xs = ",".join(self.opvars)
        return f"(0{',' if ps else ''}{ps}),({xs}),{self.order.token()}"


class OpPoly:
    """Polynomial in the operator variables over the parameter field."""

    __slots__ = ("nops", "terms", "_lead")

    def __init__(self, nops: int, terms: Mapping[tuple, ParamFraction]):
        object.__setattr__(self, "nops", nops)
        object.__setattr__(
            self, "terms", {e: c for e, c in terms.items() if not c.is_zero()}
        )
        object.__setattr__(self, "_lead", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("OpPoly is immutable")

    # -- factories -----------------------------------------------------------

    @classmethod
    def zero(cls, nops: int, nparams: int) -> "OpPoly":
        del nparams
        return cls(nops, {})

    @classmethod
    def from_coeff(cls, nops: int, coeff: ParamFraction) -> "OpPoly":
        return cls(nops, {(0,) * nops: coeff})

    @classmethod
    def one(cls, nops: int, nparams: int) -> "OpPoly":
        return cls.from_coeff(nops, ParamFraction.one(nparams))

    @classmethod
    def variable(cls, nops: int, nparams: int, index: int) -> "OpPoly":
        e = [0] * nops
        e[index] = 1
        return cls(nops, {tuple(e): ParamFraction.one(nparams)})

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        t = self.terms
        if not t:
            return True
        if len(t) > 1:
            return False
        return not any(next(iter(t)))

    def constant_coeff(self) -> ParamFraction:
        if self.is_zero():
            raise ValueError("zero polynomial")
        if not self.is_constant():
            raise ValueError("not constant in the operator variables")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other: "OpPoly") -> "OpPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return OpPoly(self.nops, out)

    def __sub__(self, other: "OpPoly") -> "OpPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            out[e] = -c if cur is None else cur - c
        return OpPoly(self.nops, out)

    def __neg__(self) -> "OpPoly":
        return OpPoly(self.nops, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "OpPoly":
        if isinstance(other, OpPoly):
            out: dict = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    cur = out.get(e)
                    prod = ca * cb
                    out[e] = prod if cur is None else cur + prod
            return OpPoly(self.nops, out)
        if isinstance(other, ParamFraction):
            return OpPoly(self.nops, {e: c * other for e, c in self.terms.items()})
        raise TypeError(f"cannot multiply OpPoly by {type(other)!r}")

    def scaled(self, coeff: ParamFraction) -> "OpPoly":
        return self * coeff

    def shifted(self, shift: tuple) -> "OpPoly":
        if not any(shift):
            return self
        return OpPoly(
            self.nops,
            {tuple(x + y for x, y in zip(e, shift)): c for e, c in self.terms.items()},
        )

    def __pow__(self, n: int) -> "OpPoly":
        if n < 0:
            raise ValueError("negative operator power")
        if self.is_zero():
            nparams = 0
            return self if n else OpPoly(self.nops, {})
        nparams = next(iter(self.terms.values())).nvars
        result = OpPoly.one(self.nops, nparams)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OpPoly)
            and self.nops == other.nops
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nops, frozenset(self.terms.items())))

    # -- leading data ------------------------------------------------------------

    def leading(self, mono: MonoOrder = DEGREVLEX) -> tuple[tuple, ParamFraction]:
        cached = self._lead
        if cached is not None and cached[0] is mono:
            return cached[1]
        e = max(self.terms, key=mono.key)
        out = (e, self.terms[e])
        object.__setattr__(self, "_lead", (mono, out))
        return out

    def leading_coefficient(self, mono: MonoOrder = DEGREVLEX) -> ParamFraction:
        return self.leading(mono)[1]

    # -- coefficient-level helpers ---------------------------------------------------

    def denominator(self) -> ParamPoly:
        """Monic lcm of the coefficient denominators (1 for the zero poly)."""
        if self.is_zero():
            raise ValueError("zero polynomial has no denominator")
        dens = [c.den for c in self.terms.values()]
        out = dens[0]
        for d in dens[1:]:
            out = pp_lcm(out, d)
        return out

    def map_coefficients(self, fn: Callable[[ParamFraction], ParamFraction]) -> "OpPoly":
        return OpPoly(self.nops, {e: fn(c) for e, c in self.terms.items()})

    def substitute_params(self, images: Sequence[ParamFraction]) -> "OpPoly":
        return self.map_coefficients(lambda c: c.substitute(images))

    def evaluate_params(self, values: Sequence[Fraction]) -> "OpPoly":
        """Specialize all parameters to rationals; result has zero parameters."""
        out = {}
        for e, c in self.terms.items():
            out[e] = ParamFraction.constant(0, c.evaluate(values))
        return OpPoly(self.nops, out)

    def sorted_terms(self, mono: MonoOrder = DEGREVLEX) -> list[tuple[tuple, ParamFraction]]:
        return sorted(self.terms.items(), key=lambda t: mono.key(t[0]), reverse=True)

    def text(self, ring: Ring) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.sorted_terms(ring.order.mono):
            mono = "*".join(
                ring.opvars[i] if k == 1 else f"{ring.opvars[i]}^{k}"
                for i, k in enumerate(e)
                if k
            )
            parts.append(_coeff_term_text(c, mono, ring.params))
        joined = parts[0]
        for piece in parts[1:]:
            joined += piece if piece.startswith("-") else "+" + piece
        return joined


def _coeff_term_text(c: ParamFraction, mono: str, names: Sequence[str]) -> str:
    one = ParamPoly.one(c.nvars)
    if c.den == one:
        if c.num.is_constant():
            v = c.num.constant_value()
            if not mono:
                return str(v)
            if v == 1:
                return mono
            if v == -1:
                return f"-{mono}"
            return f"{v}*{mono}"
        body = f"({c.num.text(names)})"
    else:
        body = f"({c.num.text(names)})/({c.den.text(names)})"
    return f"{body}*{mono}" if mono else body


class ModElement:
    """Vector in A^rank with OpPoly entries, sparse over the components."""

    __slots__ = ("rank", "comps", "_lead")

    def __init__(self, rank: int, comps: Mapping[int, OpPoly]):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(
            self, "comps", {i: p for i, p in comps.items() if not p.is_zero()}
        )
        object.__setattr__(self, "_lead", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("ModElement is immutable")

    @classmethod
    def zero(cls, rank: int) -> "ModElement":
        return cls(rank, {})

    @classmethod
    def unit(cls, rank: int, comp: int, nops: int, nparams: int) -> "ModElement":
        return cls(rank, {comp: OpPoly.one(nops, nparams)})

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self) -> bool:
        return bool(self.comps)

    def comp(self, i: int, nops: int) -> OpPoly:
        got = self.comps.get(i)
        return got if got is not None else OpPoly(nops, {})

    def __add__(self, other: "ModElement") -> "ModElement":
        out = dict(self.comps)
        for i, p in other.comps.items():
            cur = out.get(i)
            out[i] = p if cur is None else cur + p
        return ModElement(self.rank, out)

    def __sub__(self, other: "ModElement") -> "ModElement":
        out = dict(self.comps)
        for i, p in other.comps.items():
            cur = out.get(i)
            out[i] = -p if cur is None else cur - p
        return ModElement(self.rank, out)

    def __neg__(self) -> "ModElement":
        return ModElement(self.rank, {i: -p for i, p in self.comps.items()})

    def scaled(self, coeff: ParamFraction) -> "ModElement":
        return ModElement(self.rank, {i: p * coeff for i, p in self.comps.items()})

    def op_scaled(self, op: OpPoly) -> "ModElement":
        return ModElement(self.rank, {i: op * p for i, p in self.comps.items()})

    def sub_scaled_shift(
        self, other: "ModElement", coeff: ParamFraction, shift: tuple
    ) -> "ModElement":
        """self - coeff * x^shift * other, the reduction workhorse."""
        out = dict(self.comps)
        for i, p in other.comps.items():
            piece = p.shifted(shift) * coeff
            cur = out.get(i)
            out[i] = -piece if cur is None else cur - piece
        return ModElement(self.rank, out)

    def leading(self, order) -> tuple[int, tuple, ParamFraction]:
        """(component, exponent, coefficient) of the largest term."""
        cached = self._lead
        if cached is not None and cached[0] is order:
            return cached[1]
        # Within a fixed component every module order here agrees with its
        # monomial order, so the overall maximum is the best per-component lead.
        mono = getattr(order, "mono", None)
        if mono is None:
            mono = order.base.mono
        best = None
        best_key = None
        for i, p in self.comps.items():
            e, c = p.leading(mono)
            k = order.key(e, i)
            if best_key is None or k > best_key:
                best_key = k
                best = (i, e, c)
        if best is None:
            raise ValueError("zero element has no leading term")
        object.__setattr__(self, "_lead", (order, best))
        return best

    def monic(self, order) -> tuple["ModElement", ParamFraction]:
        """(self / leading coefficient, the leading coefficient)."""
        _, _, c = self.leading(order)
        if c.is_constant() and c.constant_value() == 1:
            return self, c
        inv = c.inverse()
        return self.scaled(inv), c

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModElement)
            and self.rank == other.rank
            and self.comps == other.comps
        )

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.comps.items())))

    def map_entries(self, fn: Callable[[OpPoly], OpPoly]) -> "ModElement":
        return ModElement(self.rank, {i: fn(p) for i, p in self.comps.items()})

    def truncate(self, rank: int, offset: int = 0) -> "ModElement":
        """Keep components offset..offset+rank-1, reindexed from zero."""
        return ModElement(
            rank,
            {i - offset: p for i, p in self.comps.items() if offset <= i < offset + rank},
        )

    def text(self, ring: Ring) -> str:
        entries = [self.comp(i, ring.nops).text(ring) for i in range(self.rank)]
        return "[" + ",".join(entries) + "]"


class ModMatrix:
    """Matrix as an ordered list of columns in A^rank."""

    __slots__ = ("rank", "columns")

    def __init__(self, rank: int, columns: Iterable[ModElement]):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "columns", tuple(columns))
        for col in self.columns:
            if col.rank != rank:
                raise ValueError("column rank mismatch")

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("ModMatrix is immutable")

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[OpPoly]]) -> "ModMatrix":
        """entries[i][j] is row i, column j."""
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        cols = []
        for j in range(ncols):
            comps = {i: entries[i][j] for i in range(nrows)}
            cols.append(ModElement(nrows, comps))
        return cls(nrows, cols)

    @classmethod
    def identity(cls, rank: int, nops: int, nparams: int) -> "ModMatrix":
        return cls(
            rank, [ModElement.unit(rank, i, nops, nparams) for i in range(rank)]
        )

    @classmethod
    def zero(cls, rank: int) -> "ModMatrix":
        return cls(rank, [])

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def entry(self, i: int, j: int, nops: int) -> OpPoly:
        return self.columns[j].comp(i, nops)

    def transpose(self, nops: int) -> "ModMatrix":
        cols = []
        for i in range(self.rank):
            comps = {j: self.entry(i, j, nops) for j in range(self.ncols)}
            cols.append(ModElement(self.ncols, comps))
        return ModMatrix(self.ncols, cols)

    def mul(self, other: "ModMatrix", nops: int) -> "ModMatrix":
        """self * other, viewing columns as images of basis vectors."""
        if other.rank != self.ncols:
            raise ValueError("shape mismatch")
        cols = []
        for col in other.columns:
            acc = ModElement.zero(self.rank)
            for k, op in col.comps.items():
                acc = acc + self.columns[k].map_entries(lambda p, op=op: op * p)
            cols.append(acc)
        return ModMatrix(self.rank, cols)

    def map_entries(self, fn: Callable[[OpPoly], OpPoly]) -> "ModMatrix":
        return ModMatrix(self.rank, [c.map_entries(fn) for c in self.columns])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.columns)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModMatrix)
            and self.rank == other.rank
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.columns))

    def text(self, ring: Ring) -> str:
        return ",\n".join(col.text(ring) for col in self.columns)

    def entry_text(self, ring: Ring) -> str:
        lines = []
        for i in range(self.rank):
            row = [self.entry(i, j, ring.nops).text(ring) for j in range(self.ncols)]
            lines.append("[" + ", ".join(row) + "]")
        return "\n".join(lines)


# -- comparisons used by the acceptance tolerances --------------------------------


def op_equal_up_to_unit(a: OpPoly, b: OpPoly) -> bool:
    """True when a = u*b for a nonzero element u of the parameter field."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if set(a.terms) != set(b.terms):
        return False
    e = next(iter(a.terms))
    u = a.terms[e] / b.terms[e]
    return all(a.terms[k] == b.terms[k] * u for k in b.terms)


def elem_equal_up_to_unit(a: ModElement, b: ModElement) -> bool:
    if a.rank != b.rank or set(a.comps) != set(b.comps):
        return False
    if a.is_zero():
        return True
    i = next(iter(a.comps))
    pa, pb = a.comps[i], b.comps[i]
    if set(pa.terms) != set(pb.terms):
        return False
    e = next(iter(pa.terms))
    u = pa.terms[e] / pb.terms[e]
    return all(
        op_equal(a.comps[k], b.comps[k].map_coefficients(lambda c: c * u))
        for k in a.comps
    )


def op_equal(a: OpPoly, b: OpPoly) -> bool:
    return a.terms == b.terms


def columns_equal_up_to_unit_and_permutation(a: ModMatrix, b: ModMatrix) -> bool:
    """Column multisets agree up to a unit scalar on each column."""
    if a.rank != b.rank or a.ncols != b.ncols:
        return False
    unused = list(b.columns)
    for col in a.columns:
        for i, cand in enumerate(unused):
            if elem_equal_up_to_unit(col, cand):
                del unused[i]
                break
        else:
            return False
    return True
