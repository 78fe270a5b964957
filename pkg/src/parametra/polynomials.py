"""Sparse polynomial and rational-function arithmetic in the parameters.

The ground field of the operator ring is K = Q(p_1, ..., p_t).  Everything in
this module lives at that coefficient level: polynomials in the parameters
with Fraction coefficients (ParamPoly) and quotients of those (ParamFraction).
Exponent vectors are plain int tuples, terms are kept in a dict, and the
canonical term order is degrevlex.

An optional quadratic extension mode turns the last-adjoined parameter s into
a square root (s^2 rewritten to a chosen polynomial, denominators
rationalized with the conjugate).  It is scoped with a context manager so the
rest of the engine never has to know about it.
"""

from __future__ import annotations

import heapq
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from math import gcd as int_gcd, isqrt
from typing import Iterator, Mapping, Optional, Sequence

Exponent = tuple

_EXTENSION: ContextVar[Optional[tuple[int, "ParamPoly"]]] = ContextVar(
    "quadratic_extension", default=None
)


@contextmanager
def quadratic_extension(index: int, square: "ParamPoly") -> Iterator[None]:
    """Compute in K(p)[s]/(s^2 - square), s being the parameter at `index`."""
    if square.degree(index) != 0:
        raise ValueError("defining square must not involve the adjoined parameter")
    token = _EXTENSION.set((index, square))
    try:
        yield
    finally:
        _EXTENSION.reset(token)


def active_extension() -> Optional[tuple[int, "ParamPoly"]]:
    return _EXTENSION.get()


def degrevlex_key(exponent: Exponent) -> tuple:
    """Sort key; larger key means larger monomial."""
    return (sum(exponent), tuple(-e for e in reversed(exponent)))


def _canonical(nvars: int, terms: dict) -> dict:
    out = {e: c for e, c in terms.items() if c}
    ext = _EXTENSION.get()
    if ext is not None:
        index, square = ext
        if any(e[index] >= 2 for e in out):
            out = _reduce_extension(out, index, square)
    return out


def _reduce_extension(terms: dict, index: int, square: "ParamPoly") -> dict:
    powers: dict[int, dict] = {}

    def square_power(k: int) -> dict:
        if k not in powers:
            if k == 1:
                powers[k] = dict(square.terms)
            else:
                powers[k] = _raw_mul(square_power(k - 1), square.terms)
        return powers[k]

    out: dict = {}
    for e, c in terms.items():
        q, r = divmod(e[index], 2)
        if q == 0:
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
            continue
        base = list(e)
        base[index] = r
        for de, dc in square_power(q).items():
            ne = tuple(b + d for b, d in zip(base, de))
            cur = out.get(ne)
            prod = c * dc
            out[ne] = prod if cur is None else cur + prod
    return {e: c for e, c in out.items() if c}


def _raw_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            cur = out.get(e)
            prod = ca * cb
            out[e] = prod if cur is None else cur + prod
    return {e: c for e, c in out.items() if c}


class ParamPoly:
    """Immutable sparse polynomial in the parameters over Q."""

    __slots__ = ("nvars", "terms", "_hash", "_lead")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction]):
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", _canonical(nvars, dict(terms)))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_lead", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("ParamPoly is immutable")

    # -- factories ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "ParamPoly":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "ParamPoly":
        return cls.constant(nvars, Fraction(1))

    @classmethod
    def constant(cls, nvars: int, value) -> "ParamPoly":
        value = Fraction(value)
        if not value:
            return cls.zero(nvars)
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "ParamPoly":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exponent: Exponent, coefficient=1) -> "ParamPoly":
        return cls(nvars, {tuple(exponent): Fraction(coefficient)})

    # -- predicates and accessors ------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        if not t:
            return True
        if len(t) > 1:
            return False
        return not any(next(iter(t)))

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading (exponent, coefficient) under degrevlex."""
        cached = self._lead
        if cached is not None:
            return cached
        e = max(self.terms, key=degrevlex_key)
        out = (e, self.terms[e])
        object.__setattr__(self, "_lead", out)
        return out

    def leading_coefficient(self) -> Fraction:
        return self.leading()[1]

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def variables(self) -> list[int]:
        present = [False] * self.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    present[i] = True
        return [i for i, p in enumerate(present) if p]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return ParamPoly(self.nvars, out)

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            out[e] = -c if cur is None else cur - c
        return ParamPoly(self.nvars, out)

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            return ParamPoly(self.nvars, _raw_mul(self.terms, other.terms))
        factor = Fraction(other)
        return ParamPoly(self.nvars, {e: c * factor for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ParamPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = ParamPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor) -> "ParamPoly":
        return self * Fraction(factor)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ParamPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:  # pragma: no cover
        return f"ParamPoly({self.text([f'p{i}' for i in range(self.nvars)])})"

    # -- calculus and evaluation ---------------------------------------------

    def derivative(self, var: int) -> "ParamPoly":
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * e[var]
        return ParamPoly(self.nvars, out)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term *= Fraction(values[i]) ** k
            total += term
        return total

    def substitute(self, images: Sequence["ParamFraction"]) -> "ParamFraction":
        """Map each parameter to a ParamFraction (possibly of another arity)."""
        if not images:
            target = 0
        else:
            target = images[0].num.nvars
        result = ParamFraction.zero(target)
        powers: dict[tuple[int, int], ParamFraction] = {}

        def power(i: int, k: int) -> ParamFraction:
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        for e, c in self.terms.items():
            term = ParamFraction.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    # -- normal forms ----------------------------------------------------------

    def monic(self) -> "ParamPoly":
        if self.is_zero():
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self * (1 / lc)

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c integer-coprime; 0 for the zero poly."""
        if self.is_zero():
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, c.numerator)
            den = den * c.denominator // int_gcd(den, c.denominator)
        return Fraction(num, den)

    def integer_cleared(self) -> tuple[Fraction, "ParamPoly"]:
        """Write self = unit * primitive with integer coefficients, positive lead."""
        if self.is_zero():
            return Fraction(0), self
        unit = self.rational_content()
        if self.leading_coefficient() < 0:
            unit = -unit
        return unit, self * (1 / unit)

    # -- univariate views --------------------------------------------------------

    def univariate_in(self, var: int) -> dict[int, "ParamPoly"]:
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[var]
            ne = list(e)
            ne[var] = 0
            buckets.setdefault(k, {})[tuple(ne)] = c
        return {k: ParamPoly(self.nvars, t) for k, t in buckets.items()}

    @staticmethod
    def from_univariate(nvars: int, var: int, coeffs: Mapping[int, "ParamPoly"]) -> "ParamPoly":
        out: dict = {}
        for k, poly in coeffs.items():
            for e, c in poly.terms.items():
                ne = list(e)
                ne[var] += k
                ne = tuple(ne)
                cur = out.get(ne)
                out[ne] = c if cur is None else cur + c
        return ParamPoly(nvars, out)

    # -- rendering -------------------------------------------------------------

    def text(self, names: Sequence[str]) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}"
                for i, k in enumerate(e)
                if k
            )
            if not mono:
                piece = str(c)
            elif c == 1:
                piece = mono
            elif c == -1:
                piece = f"-{mono}"
            else:
                piece = f"{c}*{mono}"
            if parts and not piece.startswith("-"):
                parts.append("+" + piece)
            else:
                parts.append(piece)
        return "".join(parts)


def pp_sort_key(p: ParamPoly) -> tuple:
    """Deterministic graded key used to order factor and obstruction lists."""
    terms = tuple(
        (e, c.numerator, c.denominator) for e, c in p.sorted_terms()
    )
    return (p.total_degree(), len(terms), terms)


# -- exact division -------------------------------------------------------------


def _heap_key(e: tuple) -> tuple:
    # inverted degrevlex key: the min-heap then pops the largest monomial
    return (-sum(e), tuple(reversed(e)))


def pp_divexact(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Exact quotient a/b; raises ValueError when division is not exact."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return a
    (be, bc) = b.leading()
    btail = [(fe, fc) for fe, fc in b.terms.items() if fe != be]
    quotient: dict = {}
    rem = dict(a.terms)
    heap = [(_heap_key(e), e) for e in rem]
    heapq.heapify(heap)
    while heap:
        _, e = heapq.heappop(heap)
        c = rem.pop(e, None)
        if c is None:
            continue  # canceled earlier; stale heap entry
        qe = tuple(x - y for x, y in zip(e, be))
        if any(x < 0 for x in qe):
            raise ValueError("division is not exact")
        qc = c / bc
        cur = quotient.get(qe)
        quotient[qe] = qc if cur is None else cur + qc
        for fe, fc in btail:
            ne = tuple(x + y for x, y in zip(qe, fe))
            old = rem.get(ne)
            prod = qc * fc
            nv = -prod if old is None else old - prod
            if nv:
                rem[ne] = nv
                if old is None:
                    heapq.heappush(heap, (_heap_key(ne), ne))
            elif old is not None:
                del rem[ne]
    return ParamPoly(a.nvars, quotient)


def pp_divides(b: ParamPoly, a: ParamPoly) -> Optional[ParamPoly]:
    """Quotient a/b if b divides a exactly, else None."""
    try:
        return pp_divexact(a, b)
    except ValueError:
        return None


# -- gcd ------------------------------------------------------------------------


_GCD_MEMO: dict[tuple, ParamPoly] = {}
_GCD_MEMO_LIMIT = 20000


def pp_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Monic gcd, by integer evaluation homomorphisms with a subresultant
    remainder-sequence fallback."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ext = _EXTENSION.get()
    if ext is not None and (a.degree(ext[0]) > 0 or b.degree(ext[0]) > 0):
        # Cancellation across the adjoined root is confined to divisors free of
        # it, and those divide every slice: reduce to the slice contents.
        idx = ext[0]
        ca = _gcd_many(list(a.univariate_in(idx).values())) if a.degree(idx) else a
        cb = _gcd_many(list(b.univariate_in(idx).values())) if b.degree(idx) else b
        return pp_gcd(ca, cb)
    if a.is_constant() or b.is_constant():
        return ParamPoly.one(a.nvars)
    if len(a.terms) == 1 or len(b.terms) == 1:
        return _monomial_gcd(a, b)
    if a == b or a == -b:
        return a.monic()
    common = [v for v in a.variables() if a.degree(v) > 0 and b.degree(v) > 0]
    if not common:
        return ParamPoly.one(a.nvars)
    key = (a, b) if hash(a) <= hash(b) else (b, a)
    hit = _GCD_MEMO.get(key)
    if hit is not None:
        return hit
    result = _pp_gcd_core(a, b, common)
    if len(_GCD_MEMO) >= _GCD_MEMO_LIMIT:
        _GCD_MEMO.clear()
    _GCD_MEMO[key] = result
    return result


def _pp_gcd_core(a: ParamPoly, b: ParamPoly, common: list[int]) -> ParamPoly:
    _, ia = a.integer_cleared()
    _, ib = b.integer_cleared()
    da = {e: int(c) for e, c in ia.terms.items()}
    db = {e: int(c) for e, c in ib.terms.items()}
    active, absent = _probe_variables(da, db, common)
    if not active:
        # certified: the gcd has degree zero in every common variable
        return ParamPoly.one(a.nvars)
    if absent:
        # certified not to involve v: the gcd divides both contents w.r.t. v
        v = min(absent, key=lambda i: min(a.degree(i), b.degree(i)))
        ca = _gcd_many(list(a.univariate_in(v).values()))
        cb = _gcd_many(list(b.univariate_in(v).values()))
        return pp_gcd(ca, cb)
    if len(active) <= 3:
        h = _heu_gcd(da, db, a.nvars)
        if h is not None:
            return ParamPoly(a.nvars, {e: Fraction(c) for e, c in h.items()}).monic()
        v = min(active, key=lambda i: min(a.degree(i), b.degree(i)))
    else:
        v = max(active, key=lambda i: min(a.degree(i), b.degree(i)))
    ua, ub = a.univariate_in(v), b.univariate_in(v)
    ca = _gcd_many(list(ua.values()))
    cb = _gcd_many(list(ub.values()))
    pa = {k: pp_divexact(c, ca) for k, c in ua.items()}
    pb = {k: pp_divexact(c, cb) for k, c in ub.items()}
    cont = pp_gcd(ca, cb)
    if len(active) > 3:
        part = _sparse_modular_gcd(_attach(pa, v, a.nvars), _attach(pb, v, a.nvars), v)
        if part is None:
            part = _subresultant_gcd(pa, pb, a.nvars, v)
    else:
        part = _subresultant_gcd(pa, pb, a.nvars, v)
    return (cont * part).monic()


def _attach(pieces: dict[int, ParamPoly], v: int, nvars: int) -> dict:
    """Integer-primitive term dict of sum pieces[k] * x_v^k."""
    terms: dict = {}
    for k, piece in pieces.items():
        for e, c in piece.terms.items():
            terms[e[:v] + (e[v] + k,) + e[v + 1:]] = c
    _, prim = ParamPoly(nvars, terms).integer_cleared()
    return {e: int(c) for e, c in prim.terms.items()}


# -- modular degree probe ------------------------------------------------------------
#
# For integer-primitive a and b, any common divisor g is an integer polynomial
# dividing both over Z (Gauss).  Specializing every variable but v at a point
# where the leading v-coefficient of a stays nonzero mod p preserves the
# v-degree of g, so deg gcd_p(a(rho), b(rho)) bounds deg_v(g) from above.  A
# zero bound for every common variable therefore certifies gcd = 1, and a zero
# bound for one variable lets the gcd be recovered from contents w.r.t. it.

_PROBE_PRIME = (1 << 61) - 1
_PROBE_TRIES = 6


def _probe_point(state: int) -> tuple[int, list[int]]:
    out = []
    for _ in range(64):
        state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        out.append(state >> 3)
    return state, out


def _mod_univariate(d: dict, v: int, point: list[int], p: int) -> dict[int, int]:
    """Image of an integer polynomial with every variable but v sent to the
    point, as a map degree -> residue."""
    bases = [x % p for x in point]
    pw = [_pow_table(x, p) for x in bases]
    out: dict[int, int] = {}
    for e, c in d.items():
        val = c % p
        for i, ei in enumerate(e):
            if i == v or not ei:
                continue
            cache = pw[i]
            got = cache.get(ei)
            if got is None:
                got = pow(bases[i], ei, p)
                cache[ei] = got
            val = val * got % p
        k = e[v]
        out[k] = (out.get(k, 0) + val) % p
    return {k: c for k, c in out.items() if c}


def _mod_gcd_degree(fa: dict[int, int], fb: dict[int, int], p: int) -> int:
    la = [0] * (max(fa) + 1)
    for k, c in fa.items():
        la[k] = c
    lb = [0] * (max(fb) + 1)
    for k, c in fb.items():
        lb[k] = c
    while lb:
        # la mod lb, in place on la (little-endian, lb trimmed and nonzero)
        inv = pow(lb[-1], p - 2, p)
        while len(la) >= len(lb):
            c = la[-1] * inv % p
            off = len(la) - len(lb)
            if c:
                for i in range(len(lb) - 1):
                    la[off + i] = (la[off + i] - c * lb[i]) % p
            la.pop()
            while la and not la[-1]:
                la.pop()
        la, lb = lb, la
    return len(la) - 1


def _probe_variables(
    da: dict, db: dict, common: list[int]
) -> tuple[list[int], list[int]]:
    """Split the common variables into (possibly in the gcd, certified absent)."""
    p = _PROBE_PRIME
    active: list[int] = []
    absent: list[int] = []
    state = 0x9E3779B97F4A7C15
    state, point = _probe_point(state)
    for v in common:
        bound = None
        for _ in range(_PROBE_TRIES):
            fa = _mod_univariate(da, v, point, p)
            if not fa or max(fa) != max(e[v] for e in da):
                state, point = _probe_point(state)
                continue
            fb = _mod_univariate(db, v, point, p)
            if not fb:
                state, point = _probe_point(state)
                continue
            bound = _mod_gcd_degree(fa, fb, p)
            break
        if bound == 0:
            absent.append(v)
        else:
            active.append(v)
    return active, absent


# -- sparse modular gcd --------------------------------------------------------------
#
# For wide inputs (many parameters) remainder sequences and integer-evaluation
# heuristics both explode, so the primitive gcd is computed mod a word-size
# prime with the leading coefficient imposed: for primitive integer a with
# gcd g, lc(g) divides lc(a) exactly over Z, hence G = (lc_v(a)/lc_v(g)) * g
# is an integer polynomial with the known leading coefficient lc_v(a).  G is
# rebuilt variable by variable - a recursive image fixes the support, sparse
# interpolation (transposed Vandermonde) yields further images, and Lagrange
# interpolation reassembles each level.  The candidate is verified by exact
# integer division into both inputs, so a failed reconstruction only ever
# costs time.


class _Unlucky(Exception):
    pass


class _LCG:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed or 1

    def draw(self, p: int) -> int:
        self.state = (
            self.state * 6364136223846793005 + 1442695040888963407
        ) % (1 << 64)
        return (self.state >> 3) % (p - 2) + 1


_POW_TABLES: dict[tuple[int, int], dict[int, int]] = {}


def _pow_table(x: int, p: int) -> dict[int, int]:
    """Persistent power table k -> x^k mod p.

    Evaluation points come from deterministic generators and recur across gcd
    calls, so sharing the tables converts most modular powers into dict hits.
    """
    key = (x, p)
    tab = _POW_TABLES.get(key)
    if tab is None:
        if len(_POW_TABLES) >= 4096:
            _POW_TABLES.clear()
        tab = {0: 1, 1: x % p}
        _POW_TABLES[key] = tab
    return tab


def _pd_degree(d: dict, v: int) -> int:
    return max((e[v] for e in d), default=-1)

def _pd_lead_coeff(d: dict, v: int) -> dict:
    top = _pd_degree(d, v)
    return {e[:v] + (0,) + e[v + 1:]: c for e, c in d.items() if e[v] == top}


def _pd_eval(d: dict, v: int, val: int, p: int) -> dict:
    base = val % p
    pw = _pow_table(base, p)
    out: dict = {}
    for e, c in d.items():
        k = e[v]
        w = pw.get(k)
        if w is None:
            w = pow(base, k, p)
            pw[k] = w
        ne = e[:v] + (0,) + e[v + 1:]
        out[ne] = (out.get(ne, 0) + c * w) % p
    return {e: c for e, c in out.items() if c}


def _pd_uni_image(d: dict, vmain: int, vals: dict[int, int], p: int) -> list[int]:
    """Coefficient list of the image with every var in vals evaluated."""
    bases = {v: x % p for v, x in vals.items()}
    caches = {v: _pow_table(x, p) for v, x in bases.items()}
    out = [0] * (_pd_degree(d, vmain) + 1)
    for e, c in d.items():
        val = c
        for v, x in bases.items():
            k = e[v]
            if k:
                cache = caches[v]
                w = cache.get(k)
                if w is None:
                    w = pow(x, k, p)
                    cache[k] = w
                val = val * w % p
        out[e[vmain]] = (out[e[vmain]] + val) % p
    while out and not out[-1]:
        out.pop()
    return out


def _pd_value(d: dict, vals: dict[int, int], p: int) -> int:
    bases = {v: x % p for v, x in vals.items()}
    caches = {v: _pow_table(x, p) for v, x in bases.items()}
    acc = 0
    for e, c in d.items():
        val = c
        for v, x in bases.items():
            k = e[v]
            if k:
                cache = caches[v]
                w = cache.get(k)
                if w is None:
                    w = pow(x, k, p)
                    cache[k] = w
                val = val * w % p
        acc = (acc + val) % p
    return acc


def _upoly_gcd(la: list[int], lb: list[int], p: int) -> list[int]:
    la, lb = la[:], lb[:]
    while lb:
        while len(la) >= len(lb):
            c = la[-1]
            off = len(la) - len(lb)
            if c:
                # pseudo-remainder: la := lc(lb)*la - c*x^off*lb (gcd unchanged)
                lcb = lb[-1]
                for i in range(off):
                    la[i] = la[i] * lcb % p
                for i in range(len(lb) - 1):
                    la[off + i] = (la[off + i] * lcb - c * lb[i]) % p
            la.pop()
            while la and not la[-1]:
                la.pop()
        la, lb = lb, la
    if la:
        inv = pow(la[-1], p - 2, p)
        la = [c * inv % p for c in la]
    return la


def _batch_inverse(vals: list[int], p: int) -> list[int]:
    """Inverses of all values with a single modular exponentiation."""
    n = len(vals)
    pref = [1] * (n + 1)
    for i, v in enumerate(vals):
        pref[i + 1] = pref[i] * v % p
    inv = pow(pref[n], p - 2, p)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = pref[i] * inv % p
        inv = inv * vals[i] % p
    return out


def _vand_solve(nodes: list[int], rhs: list[int], p: int) -> list[int]:
    """Solve sum_j c_j nodes_j^(i+1) = rhs_i over Zp (nodes distinct, nonzero)."""
    n = len(nodes)
    master = [1]
    for w in nodes:
        master = [
            ((master[i - 1] if i else 0) - w * master[i]) % p
            if i < len(master)
            else master[i - 1] % p
            for i in range(len(master) + 1)
        ]
    sums = []
    denoms = []
    for w in nodes:
        # synthetic division of the master polynomial by (z - w)
        q = [0] * n
        carry = master[n]
        for k in range(n - 1, -1, -1):
            q[k] = carry
            carry = (master[k] + w * carry) % p
        s = 0
        qw = 0
        for k in range(n - 1, -1, -1):
            qw = (qw * w + q[k]) % p
            s = (s + q[k] * rhs[k]) % p
        sums.append(s)
        denoms.append(qw * w % p)
    invs = _batch_inverse(denoms, p)
    return [s * inv % p for s, inv in zip(sums, invs)]


def _lagrange_basis(points: list[int], p: int) -> list[list[int]]:
    """Coefficient lists of the Lagrange basis polynomials at the points."""
    n = len(points)
    master = [1]
    for w in points:
        master = [
            ((master[i - 1] if i else 0) - w * master[i]) % p
            if i < len(master)
            else master[i - 1] % p
            for i in range(len(master) + 1)
        ]
    quotients = []
    denoms = []
    for w in points:
        q = [0] * n
        carry = master[n]
        for k in range(n - 1, -1, -1):
            q[k] = carry
            carry = (master[k] + w * carry) % p
        qw = 0
        for k in range(n - 1, -1, -1):
            qw = (qw * w + q[k]) % p
        quotients.append(q)
        denoms.append(qw)
    invs = _batch_inverse(denoms, p)
    return [[c * inv % p for c in q] for q, inv in zip(quotients, invs)]


def _zip_gcd(
    pa: dict, pb: dict, gamma: dict, order: list[int], rng: _LCG, p: int
) -> dict:
    """Image-reconstructed G with lc_vmain(G) = gamma, G = gamma/lc(g) * g.

    order[0] is the main variable; the last variable is interpolated at this
    level.  Raises _Unlucky when the random choices misbehave.
    """
    vmain = order[0]
    if len(order) == 1:
        u = _upoly_gcd(
            _pd_uni_image(pa, vmain, {}, p), _pd_uni_image(pb, vmain, {}, p), p
        )
        if not u:
            raise _Unlucky
        scale = next(iter(gamma.values())) if gamma else 1
        nv = len(next(iter(pa)))
        out = {}
        for k, c in enumerate(u):
            if c:
                e = [0] * nv
                e[vmain] = k
                out[tuple(e)] = c * scale % p
        return out

    vk = order[-1]
    rest = order[:-1]
    la = _pd_lead_coeff(pa, vmain)
    lb = _pd_lead_coeff(pb, vmain)
    dk = min(_pd_degree(pa, vk), _pd_degree(pb, vk)) + max(_pd_degree(gamma, vk), 0)
    npoints = dk + 1

    points: list[int] = []
    images: list[dict] = []
    skeleton: Optional[dict[int, list]] = None
    d1 = -1
    guard = 0
    while len(points) < npoints:
        guard += 1
        if guard > 8 * npoints + 24:
            raise _Unlucky
        rho = rng.draw(p)
        if rho in points:
            continue
        g_rho = _pd_eval(gamma, vk, rho, p)
        if not g_rho or not _pd_eval(la, vk, rho, p) or not _pd_eval(lb, vk, rho, p):
            continue
        if skeleton is None:
            image = _zip_gcd(
                _pd_eval(pa, vk, rho, p), _pd_eval(pb, vk, rho, p), g_rho, rest, rng, p
            )
            d1 = _pd_degree(image, vmain)
            if d1 == 0:
                # the primitive gcd is trivial; G is gamma itself
                return dict(gamma)
            skeleton = {}
            for e in image:
                skeleton.setdefault(e[vmain], []).append(e)
        else:
            image = _zip_sparse_image(
                pa, pb, gamma, skeleton, d1, vmain, rest[1:], vk, rho, rng, p
            )
        points.append(rho)
        images.append(image)

    if npoints == 1:
        return images[0]
    basis = _lagrange_basis(points, p)
    out: dict = {}
    for j, image in enumerate(images):
        bj = basis[j]
        for e, c in image.items():
            for k, bc in enumerate(bj):
                if bc:
                    ne = e[:vk] + (k,) + e[vk + 1:]
                    out[ne] = (out.get(ne, 0) + c * bc) % p
    return {e: c for e, c in out.items() if c}


def _term_stream(
    d: dict, vmain: int, tau: dict, vk: int, rho: int, p: int
) -> tuple[list[int], list[int], list[int]]:
    """Per-term evaluation stream for rows at tail points tau^i, vk = rho.

    Term j contributes base_j * step_j^i to the vmain-degree bucket degs_j in
    row i; the cur vector holds base_j * step_j^i and is advanced in place.
    """
    bases = {v: t % p for v, t in tau.items()}
    powtab = {v: _pow_table(x, p) for v, x in bases.items()}
    rbase = rho % p
    powrho = _pow_table(rbase, p)
    degs: list[int] = []
    cur: list[int] = []
    step: list[int] = []
    for e, c in d.items():
        m = 1
        for v, x in bases.items():
            k = e[v]
            if k:
                tab = powtab[v]
                w = tab.get(k)
                if w is None:
                    w = pow(x, k, p)
                    tab[k] = w
                m = m * w % p
        k = e[vk]
        w = powrho.get(k)
        if w is None:
            w = pow(rbase, k, p)
            powrho[k] = w
        degs.append(e[vmain])
        cur.append(c * w % p)
        step.append(m)
    return degs, cur, step


def _stream_row(stream: tuple, p: int) -> list[int]:
    """Advance the stream one row and return the coefficient list."""
    degs, cur, step = stream
    buckets: dict[int, int] = {}
    get = buckets.get
    for j in range(len(cur)):
        v = cur[j] * step[j] % p
        cur[j] = v
        dg = degs[j]
        buckets[dg] = get(dg, 0) + v
    out = [0] * (max(buckets) + 1) if buckets else []
    for dg, v in buckets.items():
        out[dg] = v % p
    while out and not out[-1]:
        out.pop()
    return out


def _zip_sparse_image(
    pa: dict,
    pb: dict,
    gamma: dict,
    skeleton: dict[int, list],
    d1: int,
    vmain: int,
    tail: list[int],
    vk: int,
    rho: int,
    rng: _LCG,
    p: int,
) -> dict:
    """One more image of G at vk=rho, using the known support."""
    need = max(len(mons) for mons in skeleton.values())
    da = _pd_degree(pa, vmain)
    db = _pd_degree(pb, vmain)
    for _ in range(6):
        tau = {v: rng.draw(p) for v in tail}
        bases = {v: x % p for v, x in tau.items()}
        tabs = {v: _pow_table(x, p) for v, x in bases.items()}

        def _mono_value(e: tuple) -> int:
            val = 1
            for v, x in bases.items():
                k = e[v]
                if k:
                    tab = tabs[v]
                    w = tab.get(k)
                    if w is None:
                        w = pow(x, k, p)
                        tab[k] = w
                    val = val * w % p
            return val

        nodes_of = {}
        ok = True
        for d, mons in skeleton.items():
            nodes = [_mono_value(e) if tail else 1 for e in mons]
            if len(set(nodes)) != len(nodes) or (tail and 0 in nodes):
                ok = False
                break
            nodes_of[d] = nodes
        if not ok:
            continue
        sa = _term_stream(pa, vmain, tau, vk, rho, p)
        sb = _term_stream(pb, vmain, tau, vk, rho, p)
        sg = _term_stream(gamma, vmain, tau, vk, rho, p)
        rows: list[list[int]] = []
        ok = True
        for _i in range(need):
            ua = _stream_row(sa, p)
            ub = _stream_row(sb, p)
            if len(ua) - 1 != da or len(ub) - 1 != db:
                ok = False
                break
            u = _upoly_gcd(ua, ub, p)
            if len(u) - 1 > d1:
                ok = False
                break
            if len(u) - 1 < d1:
                raise _Unlucky  # the support itself was too generous
            grow = _stream_row(sg, p)
            scale = grow[0] if grow else 0
            rows.append([c * scale % p for c in u])
        if not ok:
            continue
        out: dict = {}
        for d, mons in skeleton.items():
            rhs = [rows[i][d] if d < len(rows[i]) else 0 for i in range(len(mons))]
            coeffs = _vand_solve(nodes_of[d], rhs, p)
            for e, c in zip(mons, coeffs):
                if c:
                    out[e] = c
        return out
    raise _Unlucky


def _sparse_modular_gcd(da: dict, db: dict, vmain: int) -> Optional[ParamPoly]:
    """Verified monic gcd of vmain-primitive integer polynomials, or None.

    An accepted candidate c is vmain-primitive, divides both inputs over Z,
    and has the same vmain-degree as the true gcd (image degrees only ever
    overshoot), so it is the gcd up to sign.
    """
    p = _PROBE_PRIME
    nvars = len(next(iter(da)))
    ma = {e: c % p for e, c in da.items() if c % p}
    mb = {e: c % p for e, c in db.items() if c % p}
    if len(ma) != len(da) or len(mb) != len(db):
        return None
    tail = sorted(
        (
            v
            for v in range(nvars)
            if v != vmain and (_pd_degree(ma, v) > 0 or _pd_degree(mb, v) > 0)
        ),
        key=lambda v: -min(_pd_degree(ma, v), _pd_degree(mb, v)),
    )
    la = _pd_lead_coeff(ma, vmain)
    lb = _pd_lead_coeff(mb, vmain)
    gamma = la if len(la) <= len(lb) else lb
    order = [vmain] + tail
    rng = _LCG(0xA5F152ED00D5EED)
    for _ in range(3):
        try:
            big = _zip_gcd(ma, mb, gamma, order, rng, p)
        except _Unlucky:
            continue
        cand = _zip_extract(big, vmain, nvars, p)
        if cand is None:
            continue
        ic = {e: int(c) for e, c in cand.terms.items()}
        if (
            _idict_divexact(da, ic) is not None
            and _idict_divexact(db, ic) is not None
        ):
            return cand.monic()
    return None


def _zip_extract(big: dict, vmain: int, nvars: int, p: int) -> Optional[ParamPoly]:
    """Lift G = h*g from Zp to Z and strip the content h w.r.t. the main var."""
    half = p // 2
    lifted: dict = {}
    for e, c in big.items():
        lifted[e] = c - p if c > half else c
    poly = ParamPoly(nvars, {e: Fraction(c) for e, c in lifted.items()})
    if poly.is_zero():
        return None
    pieces = poly.univariate_in(vmain)
    cont = _gcd_many(list(pieces.values()))
    try:
        pp = pp_divexact(poly, cont)
    except ValueError:
        return None
    _, prim = pp.integer_cleared()
    return prim


# -- heuristic gcd on integer term dictionaries -------------------------------------


def _idict_content(d: dict) -> int:
    g = 0
    for c in d.values():
        g = int_gcd(g, c)
        if g == 1:
            return 1
    return g


def _idict_divexact(a: dict, b: dict) -> Optional[dict]:
    """Exact quotient of integer polynomials, or None."""
    if not a:
        return {}
    bl = max(b, key=degrevlex_key)
    bc = b[bl]
    rem = dict(a)
    quotient: dict = {}
    while rem:
        e = max(rem, key=degrevlex_key)
        c = rem[e]
        qe = tuple(x - y for x, y in zip(e, bl))
        if any(x < 0 for x in qe) or c % bc:
            return None
        qc = c // bc
        quotient[qe] = quotient.get(qe, 0) + qc
        for fe, fc in b.items():
            ne = tuple(x + y for x, y in zip(qe, fe))
            nv = rem.get(ne, 0) - qc * fc
            if nv:
                rem[ne] = nv
            elif ne in rem:
                del rem[ne]
    return quotient


def _idict_eval(d: dict, v: int, xi: int) -> dict:
    powers: dict[int, int] = {0: 1}
    out: dict = {}
    for e, c in d.items():
        k = e[v]
        if k not in powers:
            powers[k] = xi ** k
        ne = e[:v] + (0,) + e[v + 1:]
        out[ne] = out.get(ne, 0) + c * powers[k]
    return {e: c for e, c in out.items() if c}


def _idict_lift(g: dict, v: int, xi: int) -> dict:
    """Balanced xi-adic reconstruction along variable v."""
    out: dict = {}
    half = xi // 2
    i = 0
    while g:
        rest: dict = {}
        for e, c in g.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[e[:v] + (i,) + e[v + 1:]] = r
            q = (c - r) // xi
            if q:
                rest[e] = q
        g = rest
        i += 1
    return out


def _heu_gcd(a: dict, b: dict, nvars: int, tries: int = 7) -> Optional[dict]:
    """Gcd of two nonzero integer polynomials by evaluation at a large point
    and reconstruction, verified by trial division; None when every attempt
    fails (the caller falls back to remainder sequences)."""
    ca, cb = _idict_content(a), _idict_content(b)
    cg = int_gcd(ca, cb)
    a = {e: c // ca for e, c in a.items()}
    b = {e: c // cb for e, c in b.items()}
    if _idict_divexact(a, b) is not None:
        return {e: c * cg for e, c in b.items()}
    if _idict_divexact(b, a) is not None:
        return {e: c * cg for e, c in a.items()}
    common = [
        v
        for v in range(nvars)
        if any(e[v] for e in a) and any(e[v] for e in b)
    ]
    if not common:
        return {(0,) * nvars: cg}
    norm_a = max(abs(c) for c in a.values())
    norm_b = max(abs(c) for c in b.values())
    v = min(
        common,
        key=lambda i: min(max(e[i] for e in a), max(e[i] for e in b)),
    )
    xi = 2 * min(norm_a, norm_b) + 29
    for _ in range(tries):
        ea = _idict_eval(a, v, xi)
        eb = _idict_eval(b, v, xi)
        if ea and eb:
            g = _heu_gcd(ea, eb, nvars, tries)
            if g is not None:
                h = _idict_lift(g, v, xi)
                hc = _idict_content(h)
                if hc not in (0, 1):
                    h = {e: c // hc for e, c in h.items()}
                if (
                    _idict_divexact(a, h) is not None
                    and _idict_divexact(b, h) is not None
                ):
                    return {e: c * cg for e, c in h.items()}
        xi = xi * 73794 // 27011 + 11
    return None


def _monomial_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    e = tuple(
        min(min(ea[i] for ea in a.terms), min(eb[i] for eb in b.terms))
        for i in range(a.nvars)
    )
    return ParamPoly.monomial(a.nvars, e)


def _gcd_many(polys: list[ParamPoly]) -> ParamPoly:
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant() and not g.is_zero():
            break
        g = pp_gcd(g, p)
    return g.monic()


def _uni_degree(p: dict[int, ParamPoly]) -> int:
    return max(p) if p else -1


def _uni_scale(p: dict[int, ParamPoly], f: ParamPoly) -> dict[int, ParamPoly]:
    return {k: c * f for k, c in p.items()}


def _uni_prem(a: dict[int, ParamPoly], b: dict[int, ParamPoly], nvars: int) -> dict[int, ParamPoly]:
    """Pseudo-remainder of a by b in the main variable."""
    db = _uni_degree(b)
    lb = b[db]
    r = dict(a)
    e = _uni_degree(a) - db + 1
    while r and _uni_degree(r) >= db:
        dr = _uni_degree(r)
        lr = r[dr]
        nr: dict[int, ParamPoly] = {k: c * lb for k, c in r.items()}
        for k, c in b.items():
            kk = k + dr - db
            cur = nr.get(kk, ParamPoly.zero(nvars))
            nv = cur - lr * c
            if nv.is_zero():
                nr.pop(kk, None)
            else:
                nr[kk] = nv
        r = nr
        e -= 1
    if e > 0 and r:
        lbp = lb ** e
        r = _uni_scale(r, lbp)
    return r


def _subresultant_gcd(a: dict[int, ParamPoly], b: dict[int, ParamPoly], nvars: int, var: int) -> ParamPoly:
    """Primitive gcd of two primitive univariate-in-var polynomials."""
    if _uni_degree(a) < _uni_degree(b):
        a, b = b, a
    one = ParamPoly.one(nvars)
    g = one
    h = one
    while True:
        delta = _uni_degree(a) - _uni_degree(b)
        r = _uni_prem(a, b, nvars)
        if not r:
            break
        if _uni_degree(r) == 0:
            return one
        divisor = g * h ** delta
        a, b = b, {k: pp_divexact(c, divisor) for k, c in r.items()}
        g = a[_uni_degree(a)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = pp_divexact(g ** delta, h ** (delta - 1))
    content = _gcd_many(list(b.values()))
    primitive = {k: pp_divexact(c, content) for k, c in b.items()}
    return ParamPoly.from_univariate(nvars, var, primitive)


def pp_lcm(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    if a.is_zero() or b.is_zero():
        return ParamPoly.zero(a.nvars)
    return pp_divexact(a * b, pp_gcd(a, b)).monic()


# -- squarefree factorization ----------------------------------------------------


def pp_sqrt(p: ParamPoly) -> Optional[ParamPoly]:
    """Exact polynomial square root, or None when p is not a perfect square."""
    if p.is_zero():
        return p
    unit, prim = p.integer_cleared()
    if unit < 0:
        return None
    un, ud = unit.numerator, unit.denominator
    if isqrt(un) ** 2 != un or isqrt(ud) ** 2 != ud:
        return None
    root_unit = Fraction(isqrt(un), isqrt(ud))
    pieces = _squarefree_chain(prim)
    root = ParamPoly.constant(p.nvars, root_unit)
    for f, e in pieces:
        if e % 2:
            return None
        root = root * f ** (e // 2)
    if root * root == p:
        return root
    return None


def _squarefree_chain(p: ParamPoly) -> list[tuple[ParamPoly, int]]:
    """Content/monomial/Yun decomposition without extra splitting."""
    out: dict[ParamPoly, int] = {}
    _chain_into(p, 1, out, split=False)
    return sorted(out.items(), key=lambda fe: pp_sort_key(fe[0]))


def pp_squarefree_factors(p: ParamPoly) -> tuple[Fraction, list[tuple[ParamPoly, int]]]:
    """p = unit * prod f_i^{e_i}: f_i squarefree, pairwise coprime, primitive.

    Monomial factors are split into single parameters.  Composite coprime
    products of the same multiplicity are separated where a content split, a
    perfect-square discriminant (degree two in some parameter) or trial
    division finds them; certified irreducibility is out of scope.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit, prim = p.integer_cleared()
    out: dict[ParamPoly, int] = {}
    _chain_into(prim, 1, out, split=True)
    factors = sorted(out.items(), key=lambda fe: pp_sort_key(fe[0]))
    rebuilt = ParamPoly.constant(p.nvars, unit)
    for f, e in factors:
        rebuilt = rebuilt * f ** e
    if rebuilt != p:
        raise ArithmeticError("factorization self-check failed")
    return unit, factors


def _chain_into(p: ParamPoly, mult: int, out: dict, split: bool) -> None:
    if p.is_constant():
        if p.constant_value() != 1:
            raise ArithmeticError("unit leaked into factor chain")
        return
    nvars = p.nvars
    # monomial part
    mono = tuple(min(e[i] for e in p.terms) for i in range(nvars))
    if any(mono):
        for i, k in enumerate(mono):
            if k:
                v = ParamPoly.variable(nvars, i)
                out[v] = out.get(v, 0) + k * mult
        p = pp_divexact(p, ParamPoly.monomial(nvars, mono))
        if p.is_constant():
            return
    var = next(i for i in range(nvars) if p.degree(i) > 0)
    uni = p.univariate_in(var)
    content = _gcd_many(list(uni.values()))
    if not content.is_constant():
        _chain_into(content.monic(), mult, out, split)
        p = pp_divexact(p, content.monic())
        uni = p.univariate_in(var)
    for factor, k in _yun(p, var):
        for piece in _split_coprime(factor) if split else [factor]:
            _, prim = piece.integer_cleared()
            out[prim] = out.get(prim, 0) + k * mult


def _yun(p: ParamPoly, var: int) -> list[tuple[ParamPoly, int]]:
    """Squarefree decomposition of a var-primitive polynomial, Yun style."""
    dp = p.derivative(var)
    g = pp_gcd(p, dp)
    if g.is_constant():
        return [(p.monic(), 1)]
    out = []
    b = pp_divexact(p, g)
    c = pp_divexact(dp, g)
    i = 1
    while b.degree(var) > 0:
        d = c - b.derivative(var)
        a = pp_gcd(b, d)
        if not a.is_constant():
            out.append((a.monic(), i))
        b = pp_divexact(b, a)
        c = pp_divexact(d, a)
        i += 1
    if not b.is_constant():
        out.append((b.monic(), i))
    return out


def _split_coprime(p: ParamPoly) -> list[ParamPoly]:
    """Try to split a squarefree polynomial into coprime factors."""
    if p.is_constant():
        return []
    for var in p.variables():
        uni = p.univariate_in(var)
        if len(uni) < 2:
            continue
        content = _gcd_many(list(uni.values()))
        if not content.is_constant():
            rest = pp_divexact(p, content)
            return _split_coprime(content) + _split_coprime(rest)
        if p.degree(var) == 2:
            parts = _quadratic_split(p, var)
            if parts is not None:
                lo, hi = parts
                return _split_coprime(lo) + _split_coprime(hi)
    return [p.monic()]


def _quadratic_split(p: ParamPoly, var: int) -> Optional[tuple[ParamPoly, ParamPoly]]:
    uni = p.univariate_in(var)
    nvars = p.nvars
    zero = ParamPoly.zero(nvars)
    a = uni.get(2, zero)
    b = uni.get(1, zero)
    c = uni.get(0, zero)
    disc = b * b - 4 * a * c
    sigma = pp_sqrt(disc)
    if sigma is None:
        return None
    x = ParamPoly.variable(nvars, var)
    candidate = 2 * a * x + (b - sigma)
    cont = _gcd_many(list(candidate.univariate_in(var).values()))
    if not cont.is_constant():
        candidate = pp_divexact(candidate, cont)
    _, candidate = candidate.integer_cleared()
    cofactor = pp_divides(candidate, p)
    if cofactor is None or cofactor.is_constant():
        return None
    return candidate, cofactor


# -- rational functions -----------------------------------------------------------


class ParamFraction:
    """Quotient of ParamPolys, gcd-reduced, denominator monic under degrevlex."""

    __slots__ = ("num", "den")

    def __init__(self, num: ParamPoly, den: ParamPoly):
        num, den = _normalize_fraction(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("ParamFraction is immutable")

    @classmethod
    def _reduced(cls, num: ParamPoly, den: ParamPoly) -> "ParamFraction":
        """Wrap an already gcd-reduced pair with a monic denominator."""
        out = object.__new__(cls)
        object.__setattr__(out, "num", num)
        object.__setattr__(out, "den", den)
        return out

    @classmethod
    def from_poly(cls, p: ParamPoly) -> "ParamFraction":
        return cls._reduced(p, ParamPoly.one(p.nvars))

    @classmethod
    def constant(cls, nvars: int, value) -> "ParamFraction":
        return cls.from_poly(ParamPoly.constant(nvars, value))

    @classmethod
    def zero(cls, nvars: int) -> "ParamFraction":
        return cls.from_poly(ParamPoly.zero(nvars))

    @classmethod
    def one(cls, nvars: int) -> "ParamFraction":
        return cls.from_poly(ParamPoly.one(nvars))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ParamFraction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: "ParamFraction") -> "ParamFraction":
        # Henrici: cancel across the denominators before multiplying out, so
        # the reductions happen on pieces instead of full products.
        if _EXTENSION.get() is not None:
            # Denominators stay free of the adjoined root, so they still share
            # honest gcds; cancel across them first, then let the constructor
            # clear the conjugate-pair factors the product may pick up.
            a, b = self.num, self.den
            c, d = other.num, other.den
            if a.is_zero():
                return other
            if c.is_zero():
                return self
            if b == d:
                return ParamFraction(a + c, b)
            g = pp_gcd(b, d)
            if g.is_constant():
                return ParamFraction(a * d + c * b, b * d)
            b1 = pp_divexact(b, g)
            d1 = pp_divexact(d, g)
            return ParamFraction(a * d1 + c * b1, b1 * d)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero():
            return other
        if c.is_zero():
            return self
        if b == d:
            return ParamFraction(a + c, b)
        g = pp_gcd(b, d)
        if g.is_constant():
            num = a * d + c * b
            if num.is_zero():
                return ParamFraction.zero(a.nvars)
            return ParamFraction._reduced(num, b * d)
        b1 = pp_divexact(b, g)
        d1 = pp_divexact(d, g)
        t = a * d1 + c * b1
        if t.is_zero():
            return ParamFraction.zero(a.nvars)
        h = pp_gcd(t, g)
        if h.is_constant():
            return ParamFraction._reduced(t, b1 * d)
        return ParamFraction._reduced(pp_divexact(t, h), b1 * pp_divexact(d, h))

    def __sub__(self, other: "ParamFraction") -> "ParamFraction":
        return self + (-other)

    def __neg__(self) -> "ParamFraction":
        return ParamFraction._reduced(-self.num, self.den)

    def __mul__(self, other) -> "ParamFraction":
        if not isinstance(other, ParamFraction):
            scalar = Fraction(other)
            if not scalar:
                return ParamFraction.zero(self.nvars)
            return ParamFraction._reduced(self.num * scalar, self.den)
        if _EXTENSION.get() is not None:
            a, b = self.num, self.den
            c, d = other.num, other.den
            if a.is_zero() or c.is_zero():
                return ParamFraction.zero(a.nvars)
            g1 = pp_gcd(a, d)
            if not g1.is_constant():
                a = pp_divexact(a, g1)
                d = pp_divexact(d, g1)
            g2 = pp_gcd(c, b)
            if not g2.is_constant():
                c = pp_divexact(c, g2)
                b = pp_divexact(b, g2)
            return ParamFraction(a * c, b * d)
        a, b = self.num, self.den
        c, d = other.num, other.den
        if a.is_zero() or c.is_zero():
            return ParamFraction.zero(a.nvars)
        g1 = pp_gcd(a, d)
        if not g1.is_constant():
            a = pp_divexact(a, g1)
            d = pp_divexact(d, g1)
        g2 = pp_gcd(c, b)
        if not g2.is_constant():
            c = pp_divexact(c, g2)
            b = pp_divexact(b, g2)
        return ParamFraction._reduced(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other: "ParamFraction") -> "ParamFraction":
        return self * other.inverse()

    def inverse(self) -> "ParamFraction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if _EXTENSION.get() is not None:
            return ParamFraction(self.den, self.num)
        lc = self.num.leading_coefficient()
        if lc == 1:
            return ParamFraction._reduced(self.den, self.num)
        inv = 1 / lc
        return ParamFraction._reduced(self.den * inv, self.num * inv)

    def __pow__(self, n: int) -> "ParamFraction":
        if n < 0:
            return self.inverse() ** (-n)
        if _EXTENSION.get() is not None:
            return ParamFraction(self.num ** n, self.den ** n)
        return ParamFraction._reduced(self.num ** n, self.den ** n)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(values) / d

    def substitute(self, images: Sequence["ParamFraction"]) -> "ParamFraction":
        return self.num.substitute(images) / self.den.substitute(images)

    def text(self, names: Sequence[str]) -> str:
        if self.den == ParamPoly.one(self.nvars):
            return self.num.text(names)
        return f"({self.num.text(names)})/({self.den.text(names)})"

    def __repr__(self) -> str:  # pragma: no cover
        return f"ParamFraction({self.text([f'p{i}' for i in range(self.nvars)])})"


def _normalize_fraction(num: ParamPoly, den: ParamPoly) -> tuple[ParamPoly, ParamPoly]:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return num, ParamPoly.one(num.nvars)
    ext = _EXTENSION.get()
    if ext is not None:
        index, square = ext
        if den.degree(index) > 0:
            conj = _conjugate(den, index)
            num = num * conj
            den = den * conj
            if den.degree(index) > 0:
                raise ArithmeticError("conjugate did not clear the square root")
        # slices first: if they are already coprime we never touch the
        # (typically much larger) denominator
        parts = list(num.univariate_in(index).values()) + [den]
        g = _gcd_many(parts)
        if not g.is_constant():
            num = pp_divexact(num, g)
            den = pp_divexact(den, g)
    else:
        g = pp_gcd(num, den)
        if not g.is_constant():
            num = pp_divexact(num, g)
            den = pp_divexact(den, g)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = 1 / lc
        num = num * inv
        den = den * inv
    return num, den


def _conjugate(p: ParamPoly, index: int) -> ParamPoly:
    out = {}
    for e, c in p.terms.items():
        out[e] = -c if e[index] % 2 else c
    return ParamPoly(p.nvars, out)
