"""Builder expressions for uniform families on final segments of the naturals.

A :class:`Family` pairs a builder expression with the start of the final
segment it lives on.  Every operation works through :func:`restrict_step`,
which turns the family ``F`` into its section ``F_{n}`` on base ``n + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import DSLError, PreconditionError
from .ordinal import OMEGA, ZERO, Ordinal, OrdinalKind, ord_add, ord_classify, ord_mul_omega
from .setcore import (
    ALL,
    FinSet,
    GroundSet,
    _Scanner,
    contains_all,
    fmax,
    gs_count_below,
    gs_iter,
    gs_max_below,
    gs_min_above,
)


@dataclass(frozen=True)
class Affine:
    """The map ``n -> a*n + b``."""

    a: int
    b: int = 0

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def __str__(self):
        if self.a == 0:
            return str(self.b)
        head = "n" if self.a == 1 else f"{self.a}n"
        return head if self.b == 0 else f"{head}+{self.b}"


class Expr:
    """Base class of builder expressions."""


@dataclass(frozen=True)
class Point(Expr):
    """The family ``{()}``."""

    def __str__(self):
        return "point"


POINT = Point()


@dataclass(frozen=True)
class Pow(Expr):
    k: int

    def __str__(self):
        return f"pow({self.k})"


@dataclass(frozen=True)
class Diag(Expr):
    """The family whose section at ``n`` is ``pow(f(n))``."""

    f: Affine

    def __str__(self):
        return "schreier" if self.f == Affine(1, 0) else f"diag({self.f})"


@dataclass(frozen=True)
class Sum(Expr):
    """``upper (+) lower``: sets ``s | t`` with ``s`` in ``lower``, ``t`` in ``upper``, ``max(s) < min(t)``."""

    upper: Expr
    lower: Expr

    def __str__(self):
        return f"sum({self.upper},{self.lower})"


@dataclass(frozen=True)
class Iter(Expr):
    """The family whose section at ``n`` is the ``f(n)``-fold sum chain of ``body``."""

    body: Expr
    f: Affine

    def __str__(self):
        return f"iter({self.body},{self.f})"


def pow_(k: int) -> Expr:
    if k < 0:
        raise PreconditionError("pow needs k >= 0")
    return POINT if k == 0 else Pow(k)


def diag(f: Affine) -> Diag:
    if f.a < 1:
        raise PreconditionError(f"diag({f}): the map must be strictly increasing")
    return Diag(f)


def sum_(upper: Expr, lower: Expr) -> Expr:
    if isinstance(lower, Point):
        return upper
    if isinstance(upper, Point):
        return lower
    return Sum(upper, lower)


def iter_(body: Expr, f: Affine) -> Iter:
    if f.a < 1:
        raise PreconditionError(f"iter(..,{f}): the map must be strictly increasing")
    if isinstance(body, Point):
        raise PreconditionError("iter needs a body of positive rank")
    return Iter(body, f)


SCHREIER = Diag(Affine(1, 0))


def chain(body: Expr, k: int) -> Expr:
    """``body (+) body (+) ... (+) body`` with ``k`` copies."""
    out: Expr = POINT
    for _ in range(k):
        out = sum_(out, body)
    return out


@lru_cache(maxsize=None)
def expr_rank(e: Expr) -> Ordinal:
    if isinstance(e, Point):
        return ZERO
    if isinstance(e, Pow):
        return Ordinal.of(e.k)
    if isinstance(e, Diag):
        return OMEGA
    if isinstance(e, Sum):
        return ord_add(expr_rank(e.upper), expr_rank(e.lower))
    if isinstance(e, Iter):
        return ord_mul_omega(expr_rank(e.body))
    raise TypeError(e)


@lru_cache(maxsize=65536)
def expr_step(e: Expr, n: int) -> Expr:
    """The section at ``n`` of the family denoted by ``e``."""
    if isinstance(e, Point):
        raise PreconditionError("the point family has no sections")
    if isinstance(e, Pow):
        return pow_(e.k - 1)
    if isinstance(e, Diag):
        return pow_(e.f(n))
    if isinstance(e, Sum):
        return sum_(e.upper, expr_step(e.lower, n))
    if isinstance(e, Iter):
        return chain(e.body, e.f(n))
    raise TypeError(e)


@dataclass(frozen=True)
class Family:
    expr: Expr
    base: int = 0

    def __str__(self):
        return str(self.expr) if self.base == 0 else f"{self.expr}@{self.base}"

    @property
    def rank(self) -> Ordinal:
        return expr_rank(self.expr)

    @property
    def is_point(self) -> bool:
        return isinstance(self.expr, Point)

    @classmethod
    def parse(cls, text: str) -> "Family":
        return parse_family(text)


def uniform_rank(fam: Family | Expr) -> Ordinal:
    return expr_rank(fam.expr if isinstance(fam, Family) else fam)


def restrict_step(fam: Family, n: int) -> Family:
    if fam.is_point:
        raise PreconditionError("the point family has no sections")
    if n < fam.base:
        raise PreconditionError(f"{n} is below the base {fam.base} of {fam}")
    return Family(expr_step(fam.expr, n), n + 1)


def descend(fam: Family, s: FinSet) -> Family:
    """The section ``F_s``; ``s`` must be an initial segment of some member."""
    cur = fam
    for x in s:
        if cur.is_point:
            raise PreconditionError(f"{tuple(s)} is not an initial segment of a member of {fam}")
        if x < cur.base:
            raise PreconditionError(f"{tuple(s)} is not increasing above the base of {fam}")
        cur = restrict_step(cur, x)
    return cur


def is_prefix(fam: Family, s: FinSet) -> bool:
    try:
        descend(fam, s)
    except PreconditionError:
        return False
    return True


def fam_member(fam: Family, t: FinSet) -> bool:
    cur = fam
    for x in t:
        if cur.is_point or x < cur.base:
            return False
        cur = restrict_step(cur, x)
    return cur.is_point


def t_min(fam: Family, n: int) -> FinSet:
    """The unique member that is an initial segment of ``{n, n+1, ...}``."""
    if n < fam.base:
        raise PreconditionError(f"{n} is below the base {fam.base}")
    out = []
    cur, x = fam, n
    while not cur.is_point:
        out.append(x)
        cur = restrict_step(cur, x)
        x += 1
    return tuple(out)


def _complete(fam: Family, w: FinSet, M: GroundSet) -> FinSet:
    if not contains_all(M, w):
        raise PreconditionError(f"{tuple(w)} is not contained in {M}")
    cur = descend(fam, w)
    out = list(w)
    while not cur.is_point:
        x = gs_min_above(M, cur.base - 1)
        out.append(x)
        cur = restrict_step(cur, x)
    return tuple(out)


def min_completion(fam: Family, w: FinSet, M: GroundSet = ALL) -> FinSet:
    """The lexicographically least member of ``F|M`` extending the proper prefix ``w``."""
    w = tuple(w)
    if fam_member(fam, w):
        raise PreconditionError(f"{w} is already a member of {fam}")
    return _complete(fam, w, M)


def check_member(fam: Family, t: FinSet, M: GroundSet) -> None:
    if not fam_member(fam, t):
        raise PreconditionError(f"{tuple(t)} is not a member of {fam}")
    if not contains_all(M, t):
        raise PreconditionError(f"{tuple(t)} is not contained in {M}")


def lex_next(fam: Family, t: FinSet, M: GroundSet = ALL) -> FinSet:
    check_member(fam, t, M)
    if not t:
        raise PreconditionError("the point family has a single member")
    return _complete(fam, t[:-1] + (gs_min_above(M, t[-1]),), M)


def enumerate_members(fam: Family, M: GroundSet = ALL, count: int | None = None) -> Iterator[FinSet]:
    """Members of ``F|M`` in increasing lexicographic order."""
    if count == 0:
        return
    t = _complete(fam, (), M)
    yield t
    produced = 1
    while count is None or produced < count:
        if not t:
            return
        t = _complete(fam, t[:-1] + (gs_min_above(M, t[-1]),), M)
        yield t
        produced += 1


def lex_rank_parts(fam: Family, t: FinSet, M: GroundSet = ALL) -> tuple[Ordinal, Ordinal]:
    """``(offset of the block of min(t), position of t inside that block)``."""
    check_member(fam, t, M)
    if not t:
        return ZERO, ZERO
    head = _blocks_below(fam, t[0], M)
    inner = ZERO
    cur = restrict_step(fam, t[0])
    for x in t[1:]:
        inner = ord_add(inner, _blocks_below(cur, x, M))
        cur = restrict_step(cur, x)
    return head, inner


def _blocks_below(fam: Family, x: int, M: GroundSet) -> Ordinal:
    """Sum of ``w^rank(F_n)`` over ``n`` in ``M``, ``base <= n < x``.

    Section ranks never decrease with ``n``, so only the trailing stretch of
    equal rank survives ordinal addition.
    """
    top = gs_max_below(M, x)
    if top is None or top < fam.base:
        return ZERO
    beta = restrict_step(fam, top).rank
    if ord_classify(fam.rank)[0] is not OrdinalKind.LIMIT:
        count = gs_count_below(M, x) - gs_count_below(M, fam.base)
    else:
        count, n = 1, gs_max_below(M, top)
        while n is not None and n >= fam.base and restrict_step(fam, n).rank == beta:
            count, n = count + 1, gs_max_below(M, n)
    return Ordinal(((beta, count),))


def lex_rank(fam: Family, t: FinSet, M: GroundSet = ALL) -> Ordinal:
    """Ordinal position of ``t`` in ``(F|M, <_lex)``."""
    head, inner = lex_rank_parts(fam, t, M)
    return ord_add(head, inner)


def finite_rank_reduction(fam: Family, M: GroundSet, k: int, search_limit: int = 100_000) -> FinSet:
    """A finite ``u`` inside ``M`` with ``F_u`` of finite rank ``>= k``."""
    if fam.rank.is_finite:
        raise PreconditionError(f"{fam} already has finite rank {fam.rank}")
    u: list[int] = []
    cur = fam
    while not cur.rank.is_finite:
        for i, n in enumerate(gs_iter(M, max(cur.base, fmax(tuple(u)) + 1) - 1)):
            if i > search_limit:
                raise PreconditionError("finite_rank_reduction: search limit exceeded")
            nxt = restrict_step(cur, n)
            if nxt.rank >= k:
                break
        u.append(n)
        cur = nxt
    return tuple(u)


def alpha_sequence(fam: Family, M: GroundSet = ALL) -> Iterator[tuple[int, Ordinal]]:
    """``(n, rank of F_{n})`` for ``n`` in ``M`` above the base."""
    for n in gs_iter(M, fam.base - 1):
        yield n, restrict_step(fam, n).rank


def rank_kind(fam: Family) -> OrdinalKind:
    return ord_classify(fam.rank)[0]


# ---------------------------------------------------------------------------
# DSL
#   B   ::= "point" | "pow(" NAT ")" | "schreier" | "diag(" AFF ")"
#         | "sum(" B "," B ")" | "iter(" B "," AFF ")"
#   AFF ::= [NAT] "n" ["+" NAT] | NAT
#   top ::= B ["@" NAT]


def parse_family(text: str) -> Family:
    sc = _Scanner(text)
    e = _parse_expr(sc)
    base = 0
    if sc.accept("@"):
        base = sc.nat()
    sc.done()
    return Family(e, base)


def _parse_affine(sc: _Scanner) -> Affine:
    sc.skip()
    a = None
    if sc.pos < len(sc.text) and sc.text[sc.pos].isdigit():
        a = sc.nat()
    if not sc.accept("n"):
        if a is None:
            sc.error("expected an affine map such as 2n+1")
        return Affine(0, a)
    b = sc.nat() if sc.accept("+") else 0
    return Affine(1 if a is None else a, b)


def _parse_expr(sc: _Scanner) -> Expr:
    start = sc.pos
    try:
        if sc.accept("point"):
            return POINT
        if sc.accept("schreier"):
            return SCHREIER
        if sc.accept("pow("):
            k = sc.nat()
            sc.expect(")")
            return pow_(k)
        if sc.accept("diag("):
            f = _parse_affine(sc)
            sc.expect(")")
            return diag(f)
        if sc.accept("sum("):
            upper = _parse_expr(sc)
            sc.expect(",")
            lower = _parse_expr(sc)
            sc.expect(")")
            return sum_(upper, lower)
        if sc.accept("iter("):
            body = _parse_expr(sc)
            sc.expect(",")
            f = _parse_affine(sc)
            sc.expect(")")
            return iter_(body, f)
    except PreconditionError as exc:
        raise DSLError(str(exc), sc.text, start) from None
    sc.error("expected a family expression")
