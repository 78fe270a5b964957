"""Monomial and module term orders.

Every order exposes a `key` function mapping an exponent tuple (and a
component index for module orders) to a tuple of ints; larger key means
larger term.  Keys from the same order instance are always comparable, so
sorting and max() do the right thing.

Order tokens follow the session dialect: `dp` is degrevlex, `lp` is lex,
`a(w1,...,wk)` prepends a weight-vector comparison, and a leading `c` / `C`
selects descending / ascending component tie-breaks of the term-over-position
module order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class MonoOrder:
    kind: str  # "degrevlex" | "lex" | "weighted"
    weights: Optional[tuple[int, ...]] = None
    tie: str = "degrevlex"

    def key(self, exponent: tuple) -> tuple:
        if self.kind == "degrevlex":
            return (sum(exponent), tuple(-e for e in reversed(exponent)))
        if self.kind == "lex":
            return tuple(exponent)
        if self.kind == "weighted":
            w = self.weights or ()
            wdeg = sum(wi * ei for wi, ei in zip(w, exponent))
            if self.tie == "lex":
                return (wdeg,) + tuple(exponent)
            return (wdeg, sum(exponent), tuple(-e for e in reversed(exponent)))
        raise ValueError(f"unknown monomial order kind {self.kind!r}")

    def compare(self, a: tuple, b: tuple) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def token(self) -> str:
        if self.kind == "weighted":
            w = ",".join(str(x) for x in self.weights or ())
            tie = "dp" if self.tie == "degrevlex" else "lp"
            return f"a({w}),{tie}"
        return {"degrevlex": "dp", "lex": "lp"}[self.kind]


DEGREVLEX = MonoOrder("degrevlex")
LEX = MonoOrder("lex")


@dataclass(frozen=True)
class ModOrder:
    """Module order over a monomial order.

    scheme "TOP" compares the monomial first and the component second;
    "POT" compares the component first.  With descending=True lower component
    indices are larger (gen(1) beats gen(2)), matching the session default.
    """

    mono: MonoOrder = DEGREVLEX
    scheme: str = "TOP"
    descending: bool = True

    def component_key(self, comp: int) -> int:
        return -comp if self.descending else comp

    def key(self, exponent: tuple, comp: int) -> tuple:
        if self.scheme == "TOP":
            return (self.mono.key(exponent), self.component_key(comp))
        return (self.component_key(comp), self.mono.key(exponent))

    def compare(self, a: tuple[tuple, int], b: tuple[tuple, int]) -> int:
        ka, kb = self.key(*a), self.key(*b)
        return (ka > kb) - (ka < kb)

    def token(self) -> str:
        c = "c" if self.descending else "C"
        if self.scheme == "TOP":
            return f"({c},{self.mono.token()})"
        return f"({self.mono.token()},{c})"


@dataclass(frozen=True)
class LiftOrder:
    """Order for tagged bases: tag components sit strictly below the others.

    Components 0..main_rank-1 are the honest module positions, everything
    from main_rank on is a tag.  Any term in a tag component is smaller than
    any term in a main component; within each block the base order applies.
    """

    base: ModOrder
    main_rank: int

    def key(self, exponent: tuple, comp: int) -> tuple:
        if comp < self.main_rank:
            return (1, self.base.key(exponent, comp))
        return (0, self.base.key(exponent, comp - self.main_rank))

    def compare(self, a: tuple[tuple, int], b: tuple[tuple, int]) -> int:
        ka, kb = self.key(*a), self.key(*b)
        return (ka > kb) - (ka < kb)


def elimination_order(nfirst: int, ntotal: int) -> MonoOrder:
    """Order eliminating the first `nfirst` variables of `ntotal`.

    Weight 1 on the first block and 0 on the rest: a monomial containing any
    first-block variable beats every monomial in the remaining variables, so
    basis elements free of the first block reveal the eliminated ideal.
    """
    weights = (1,) * nfirst + (0,) * (ntotal - nfirst)
    return MonoOrder("weighted", weights=weights, tie="degrevlex")


def parse_order_token(text: str, nvars: int) -> ModOrder:
    """Parse tokens like `(c,dp)`, `(C,lp)` or `(a(1,1),dp)`."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts: list[str] = []
    depth = 0
    current = ""
    for ch in body:
        if ch == "," and depth == 0:
            parts.append(current.strip())
            current = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        current += ch
    if current.strip():
        parts.append(current.strip())

    descending = True
    seen_c = False
    weights: Optional[tuple[int, ...]] = None
    base_kind: Optional[str] = None
    for part in parts:
        if part == "c":
            descending, seen_c = True, True
        elif part == "C":
            descending, seen_c = False, True
        elif part.startswith("a(") and part.endswith(")"):
            ws = tuple(int(x) for x in part[2:-1].split(",") if x.strip())
            if len(ws) > nvars:
                raise ValueError("weight vector longer than the variable list")
            weights = ws + (0,) * (nvars - len(ws))
        elif part in ("dp", "Dp"):
            base_kind = "degrevlex"
        elif part in ("lp",):
            base_kind = "lex"
        else:
            raise ValueError(f"unsupported order token {part!r}")
    if base_kind is None:
        base_kind = "degrevlex"
    if weights is not None:
        tie = "degrevlex" if base_kind == "degrevlex" else "lex"
        mono = MonoOrder("weighted", weights=weights, tie=tie)
    else:
        mono = MonoOrder(base_kind)
    del seen_c  # `c`/`C` only fixes the component direction here
    return ModOrder(mono=mono, scheme="TOP", descending=descending)
