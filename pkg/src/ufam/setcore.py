"""Finite sets of naturals and finitely described infinite ground sets.

Finite sets are plain increasing tuples of ints.  A :class:`GroundSet` is a
small expression tree; every accepted expression has a :class:`NormalForm`
on which membership, successor queries and run predicates are exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import DSLError, PreconditionError, RejectedGroundSet
from .ordinal import Ordering

FinSet = tuple[int, ...]


def finset(items: Iterable[int] = ()) -> FinSet:
    """Build a FinSet from any iterable of naturals."""
    out = tuple(sorted(set(items)))
    if out and out[0] < 0:
        raise ValueError("FinSet elements must be naturals")
    return out


def fmax(s: FinSet) -> int:
    """``max`` with the convention ``max(()) == -1``."""
    return s[-1] if s else -1


def fmin(s: FinSet) -> int:
    if not s:
        raise PreconditionError("min of the empty set")
    return s[0]


def format_finset(s: FinSet) -> str:
    return "{" + ",".join(map(str, s)) + "}"


def lex_compare(s: FinSet, t: FinSet) -> Ordering:
    """``s <_lex t`` iff the least element of the symmetric difference lies in ``s``."""
    diff = set(s).symmetric_difference(t)
    if not diff:
        return Ordering.EQUAL
    return Ordering.LESS if min(diff) in s else Ordering.GREATER


def lex_less(s: FinSet, t: FinSet) -> bool:
    return lex_compare(s, t) is Ordering.LESS


def is_initial_segment(s: FinSet, t: FinSet) -> bool:
    return len(s) <= len(t) and tuple(t[: len(s)]) == tuple(s)


def decompose_terminal_run(t: FinSet) -> tuple[FinSet, int, int]:
    """Split ``t`` as ``u + (p, p+1, ..., p+m)`` with the terminal run maximal."""
    if not t:
        raise PreconditionError("decompose_terminal_run needs a nonempty set")
    i = len(t) - 1
    while i > 0 and t[i - 1] == t[i] - 1:
        i -= 1
    return tuple(t[:i]), t[i], t[-1] - t[i]


# ---------------------------------------------------------------------------
# Ground set expressions


class GroundSet:
    """Base class of ground set expressions."""

    @cached_property
    def normal(self) -> "NormalForm":
        return self._normalize()

    def _normalize(self) -> "NormalForm":
        raise NotImplementedError

    def __contains__(self, x: int) -> bool:
        return gs_member(self, x)

    def __or__(self, other: "GroundSet") -> "GroundSet":
        return Union(self, other)


@dataclass(frozen=True, eq=True)
class FinalSegment(GroundSet):
    start: int = 0

    def __str__(self):
        return "all" if self.start == 0 else f"seg({self.start})"

    def _normalize(self):
        return NormalForm.periodic(self.start, 1, {0})


@dataclass(frozen=True, eq=True)
class Finite(GroundSet):
    elements: FinSet = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", finset(self.elements))

    def __str__(self):
        return "fin" + format_finset(self.elements)

    def _normalize(self):
        return NormalForm.finite(self.elements)


@dataclass(frozen=True, eq=True)
class Arithmetic(GroundSet):
    first: int
    step: int

    def __post_init__(self):
        if self.step < 1 or self.first < 0:
            raise RejectedGroundSet(f"ap({self.first},{self.step}): need first >= 0 and step >= 1")

    def __str__(self):
        return f"ap({self.first},{self.step})"

    def _normalize(self):
        return NormalForm.periodic(self.first, self.step, {self.first % self.step})


@dataclass(frozen=True, eq=True)
class Blocks(GroundSet):
    """Intervals ``[b_k, b_k + L_k)`` with ``L_k = base_len + len_step*k`` and gaps ``gap``."""

    start: int
    gap: int
    base_len: int
    len_step: int

    def __post_init__(self):
        if self.start < 0 or self.gap < 1 or self.base_len < 1 or self.len_step < 0:
            raise RejectedGroundSet(
                f"{self}: need start >= 0, gap >= 1, base_len >= 1, len_step >= 0"
            )

    def __str__(self):
        return f"blocks({self.start},{self.gap},{self.base_len},{self.len_step})"

    def _normalize(self):
        if self.len_step == 0:
            period = self.base_len + self.gap
            residues = {(self.start + i) % period for i in range(self.base_len)}
            return NormalForm.periodic(self.start, period, residues)
        comp = BlockComponent(self.start, self.gap, self.base_len, self.len_step)
        return NormalForm(head=frozenset(), threshold=0, period=1, residues=frozenset(), blocks=(comp,))


@dataclass(frozen=True, eq=True)
class Union(GroundSet):
    left: GroundSet
    right: GroundSet

    def __str__(self):
        right = str(self.right)
        if isinstance(self.right, (Union, MinusFinite)):
            right = f"({right})"
        return f"{self.left}|{right}"

    def _normalize(self):
        return self.left.normal.union(self.right.normal)


@dataclass(frozen=True, eq=True)
class MinusFinite(GroundSet):
    base: GroundSet
    removed: FinSet

    def __post_init__(self):
        object.__setattr__(self, "removed", finset(self.removed))

    def __str__(self):
        return f"{self.base}\\fin{format_finset(self.removed)}"

    def _normalize(self):
        return self.base.normal.minus(self.removed)


@dataclass(frozen=True, eq=True)
class TailCut(GroundSet):
    """``base`` intersected with ``(n, oo)``."""

    base: GroundSet
    n: int

    def __str__(self):
        return f"cut({self.base},{self.n})"

    def _normalize(self):
        return self.base.normal.cut(self.n)


ALL = FinalSegment(0)


def cut_above(g: GroundSet, n: int) -> GroundSet:
    """``g`` restricted to ``(n, oo)``, merging nested cuts."""
    if isinstance(g, TailCut):
        return TailCut(g.base, max(g.n, n))
    return TailCut(g, n)


# ---------------------------------------------------------------------------
# Normal forms


def _tri(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True)
class BlockComponent:
    """A growing Blocks set (``len_step >= 1``) restricted to ``(floor, oo)`` minus ``excluded``."""

    start: int
    gap: int
    base_len: int
    len_step: int
    floor: int = -1
    excluded: frozenset = frozenset()

    def block_start(self, k: int) -> int:
        return self.start + k * (self.base_len + self.gap) + self.len_step * _tri(k)

    def block_len(self, k: int) -> int:
        return self.base_len + self.len_step * k

    def block_index(self, x: int) -> int:
        """Largest ``k`` with ``block_start(k) <= x``; -1 if ``x`` precedes every block."""
        if x < self.start:
            return -1
        lo, hi = 0, 1
        while self.block_start(hi) <= x:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.block_start(mid) <= x:
                lo = mid
            else:
                hi = mid
        return lo

    def raw_member(self, x: int) -> bool:
        k = self.block_index(x)
        return k >= 0 and x < self.block_start(k) + self.block_len(k)

    def member(self, x: int) -> bool:
        return x > self.floor and x not in self.excluded and self.raw_member(x)

    def raw_min_above(self, k: int) -> int:
        x = k + 1
        i = self.block_index(x)
        if i >= 0 and x < self.block_start(i) + self.block_len(i):
            return x
        return self.block_start(i + 1)

    def min_above(self, k: int) -> int:
        x = self.raw_min_above(max(k, self.floor))
        while x in self.excluded:
            x = self.raw_min_above(x)
        return x

    def raw_count_below(self, x: int) -> int:
        k = self.block_index(x - 1)
        if k < 0:
            return 0
        full = k * self.base_len + self.len_step * _tri(k)
        return full + min(self.block_len(k), x - self.block_start(k))

    def count_below(self, x: int) -> int:
        lo = self.floor + 1
        if x <= lo:
            return 0
        dropped = sum(1 for e in self.excluded if lo <= e < x and self.raw_member(e))
        return self.raw_count_below(x) - self.raw_count_below(lo) - dropped

    @property
    def zone(self) -> int:
        """Every ``x > zone`` is unaffected by ``floor`` and ``excluded``."""
        return max([self.floor, *self.excluded], default=-1)

    def core(self) -> tuple:
        return (self.start, self.gap, self.base_len, self.len_step)


@dataclass(frozen=True)
class NormalForm:
    """``head`` below ``threshold``, ultimately periodic above it, plus growing block components."""

    head: frozenset
    threshold: int
    period: int
    residues: frozenset
    blocks: tuple = ()

    @classmethod
    def periodic(cls, threshold: int, period: int, residues) -> "NormalForm":
        return cls(frozenset(), threshold, period, frozenset(residues))

    @classmethod
    def finite(cls, elements) -> "NormalForm":
        elements = frozenset(elements)
        return cls(elements, max(elements, default=-1) + 1, 1, frozenset())

    # ultimately periodic part

    def periodic_member(self, x: int) -> bool:
        if x < self.threshold:
            return x in self.head
        return x % self.period in self.residues

    @property
    def full(self) -> bool:
        """The periodic part covers a final segment."""
        return len(self.residues) == self.period

    @property
    def periodic_infinite(self) -> bool:
        return bool(self.residues)

    def _rethreshold(self, threshold: int, period: int) -> "NormalForm":
        threshold = max(threshold, self.threshold)
        head = frozenset(x for x in range(threshold) if self.periodic_member(x))
        residues = frozenset(r for r in range(period) if self.residues and (r % self.period) in self.residues)
        return NormalForm(head, threshold, period, residues, self.blocks)

    def _absorb_blocks(self) -> "NormalForm":
        # a full periodic part swallows block components above the threshold
        if not self.full or not self.blocks:
            return self
        head = set(self.head)
        for comp in self.blocks:
            head.update(x for x in range(self.threshold) if comp.member(x))
        return NormalForm(frozenset(head), self.threshold, self.period, self.residues, ())

    def union(self, other: "NormalForm") -> "NormalForm":
        period = math.lcm(self.period, other.period)
        threshold = max(self.threshold, other.threshold)
        a = self._rethreshold(threshold, period)
        b = other._rethreshold(threshold, period)
        blocks = tuple(dict.fromkeys(a.blocks + b.blocks))
        nf = NormalForm(a.head | b.head, threshold, period, a.residues | b.residues, blocks)
        nf = nf._absorb_blocks()
        if nf.blocks and nf.periodic_infinite:
            raise RejectedGroundSet(
                "union of a growing blocks component with an infinite, non-cofinite periodic set "
                "has no exact run normal form"
            )
        if len(nf.blocks) > 1:
            cores = {c.core() for c in nf.blocks}
            if len(cores) > 1:
                raise RejectedGroundSet("union interleaves two growing blocks components")
            nf = NormalForm(nf.head, nf.threshold, nf.period, nf.residues, (_merge_same_core(nf.blocks),))
        return nf

    def minus(self, removed: Iterable[int]) -> "NormalForm":
        removed = frozenset(removed)
        threshold = max([self.threshold, *(x + 1 for x in removed)])
        nf = self._rethreshold(threshold, self.period)
        blocks = tuple(
            BlockComponent(*c.core(), floor=c.floor, excluded=c.excluded | removed) for c in nf.blocks
        )
        return NormalForm(nf.head - removed, nf.threshold, nf.period, nf.residues, blocks)

    def cut(self, n: int) -> "NormalForm":
        threshold = max(self.threshold, n + 1)
        nf = self._rethreshold(threshold, self.period)
        blocks = tuple(
            BlockComponent(*c.core(), floor=max(c.floor, n), excluded=frozenset(x for x in c.excluded if x > n))
            for c in nf.blocks
        )
        return NormalForm(frozenset(x for x in nf.head if x > n), nf.threshold, nf.period, nf.residues, blocks)

    # queries

    def member(self, x: int) -> bool:
        if x < 0:
            return False
        return self.periodic_member(x) or any(c.member(x) for c in self.blocks)

    @property
    def infinite(self) -> bool:
        return self.periodic_infinite or bool(self.blocks)

    @property
    def zone(self) -> int:
        """Beyond ``zone`` the set is exactly its periodic part or exactly its block component."""
        return max([self.threshold - 1, *(c.zone for c in self.blocks)])

    def min_above(self, k: int) -> int | None:
        k = max(k, -1)
        cands = []
        for x in sorted(self.head):
            if x > k:
                cands.append(x)
                break
        if self.periodic_infinite:
            lo = max(k + 1, self.threshold)
            cands.append(min(lo + ((r - lo) % self.period) for r in self.residues))
        cands.extend(c.min_above(k) for c in self.blocks)
        return min(cands) if cands else None

    def count_below(self, x: int) -> int:
        """Number of elements ``< x``."""
        x = max(x, 0)
        n = sum(1 for h in self.head if h < x)
        if x > self.threshold and self.residues:
            def upto(z: int) -> int:  # members of the periodic part in [0, z)
                return sum((z - 1 - r) // self.period + 1 for r in self.residues if r <= z - 1)

            n += upto(x) - upto(self.threshold)
        for c in self.blocks:
            # the head may repeat block members below the threshold
            n += c.count_below(x) - sum(1 for h in self.head if h < x and c.member(h))
        return n

    def max_gap(self) -> int:
        """Largest distance between consecutive elements beyond ``zone``."""
        if self.blocks:
            return self.blocks[0].gap + 1
        if not self.periodic_infinite:
            raise PreconditionError("finite set has no eventual gap")
        rs = sorted(self.residues)
        return max((b - a) for a, b in zip(rs, rs[1:] + [rs[0] + self.period]))


def _merge_same_core(blocks: tuple) -> BlockComponent:
    # several restrictions of one growing blocks set: keep the union exactly
    floor = min(c.floor for c in blocks)
    top = max(c.zone for c in blocks)
    ref = blocks[0]
    excluded = frozenset(
        x for x in range(floor + 1, top + 1) if ref.raw_member(x) and not any(c.member(x) for c in blocks)
    )
    return BlockComponent(*ref.core(), floor=floor, excluded=excluded)


# ---------------------------------------------------------------------------
# Public operations


def gs_member(M: GroundSet, x: int) -> bool:
    return M.normal.member(x)


def gs_is_infinite(M: GroundSet) -> bool:
    return M.normal.infinite


def gs_min_above(M: GroundSet, k: int) -> int:
    """Least element of ``M`` strictly above ``k``."""
    x = M.normal.min_above(k)
    if x is None:
        raise PreconditionError(f"{M} has no element above {k}")
    return x


def gs_iter(M: GroundSet, above: int = -1) -> Iterator[int]:
    nf = M.normal
    x = nf.min_above(above)
    while x is not None:
        yield x
        x = nf.min_above(x)


def gs_count_below(M: GroundSet, x: int) -> int:
    """``|M & [0, x)|`` computed from the normal form."""
    return M.normal.count_below(x)


def gs_max_below(M: GroundSet, x: int) -> int | None:
    """Largest element of ``M`` below ``x``, or ``None``."""
    nf = M.normal
    if nf.count_below(x) == 0:
        return None
    for y in range(x - 1, -1, -1):
        if nf.member(y):
            return y
    return None


def gs_elements_below(M: GroundSet, bound: int) -> list[int]:
    nf = M.normal
    return [x for x in range(bound) if nf.member(x)]


def contains_interval(M: GroundSet, lo: int, hi: int) -> bool:
    """``{lo, ..., hi}`` is a subset of ``M``."""
    nf = M.normal
    return all(nf.member(x) for x in range(lo, hi + 1))


def contains_all(M: GroundSet, s: Iterable[int]) -> bool:
    nf = M.normal
    return all(nf.member(x) for x in s)


class RunKind(enum.Enum):
    NONE_BEYOND = "none_beyond"
    FINITELY_MANY = "finitely_many"
    INFINITELY_MANY = "infinitely_many"


@dataclass(frozen=True)
class RunReport:
    """Classification of the starts ``i`` of runs ``{i, ..., i+l-1}`` inside ``M``.

    ``bound`` is, for the finite kinds, the least ``b`` with no run start ``>= b``.
    ``max_length`` is the supremum of run lengths, ``None`` when unbounded.
    """

    length: int
    kind: RunKind
    bound: int | None
    arbitrarily_long: bool
    max_length: int | None

    @property
    def infinitely_many(self) -> bool:
        return self.kind is RunKind.INFINITELY_MANY

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "kind": self.kind.value,
            "bound": self.bound,
            "arbitrarily_long": self.arbitrarily_long,
            "max_length": self.max_length,
        }


def _periodic_run_exists(nf: NormalForm, l: int) -> bool:
    if not nf.residues:
        return False
    if nf.full:
        return True
    return any(all((r + j) % nf.period in nf.residues for j in range(l)) for r in range(nf.period))


def _max_run_length(nf: NormalForm) -> int | None:
    if nf.blocks or nf.full:
        return None
    best = cur = 0
    # a run crossing the threshold ends within one period beyond it
    for x in range(nf.threshold + 2 * nf.period + 1):
        cur = cur + 1 if nf.member(x) else 0
        best = max(best, cur)
    return best


def gs_runs(M: GroundSet, l: int) -> RunReport:
    if l < 1:
        raise PreconditionError("run length must be >= 1")
    nf = M.normal
    max_len = _max_run_length(nf)
    arbitrarily = max_len is None
    if arbitrarily or _periodic_run_exists(nf, l):
        return RunReport(l, RunKind.INFINITELY_MANY, None, arbitrarily, max_len)
    last = None
    for i in range(nf.threshold + nf.period):
        if all(nf.member(i + j) for j in range(l)):
            last = i
    if last is None:
        return RunReport(l, RunKind.NONE_BEYOND, 0, False, max_len)
    return RunReport(l, RunKind.FINITELY_MANY, last + 1, False, max_len)


def first_run_start(M: GroundSet, l: int, above: int = -1) -> int | None:
    """Least ``i > above`` with ``{i, ..., i+l-1}`` contained in ``M``, or ``None``."""
    nf = M.normal
    if nf.blocks:
        comp = nf.blocks[0]
        k = 0
        while comp.block_len(k) < l or comp.block_start(k) + comp.block_len(k) - l <= max(above, nf.zone):
            k += 1
        bound = comp.block_start(k) + comp.block_len(k) - l + 1
    elif _periodic_run_exists(nf, l):
        bound = max(nf.threshold, above + 1) + nf.period + 1
    else:
        bound = nf.threshold + nf.period
    run = 0
    lo = above + 1
    for x in range(max(lo, 0), bound + l):
        run = run + 1 if nf.member(x) else 0
        if run >= l and x - l + 1 >= lo:
            return x - l + 1
    return None


def run_starts(M: GroundSet, l: int, above: int = -1) -> Iterator[int]:
    i = first_run_start(M, l, above)
    while i is not None:
        yield i
        i = first_run_start(M, l, i)


# ---------------------------------------------------------------------------
# DSL
#   G    ::= atom (("|" atom) | ("\" fin))*
#   atom ::= "all" | "seg(" NAT ")" | fin | "ap(" NAT "," NAT ")"
#          | "blocks(" NAT "," NAT "," NAT "," NAT ")" | "cut(" G "," NAT ")" | "(" G ")"
#   fin  ::= "fin{" [item ("," item)*] "}"     item ::= NAT [".." NAT]


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise DSLError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.accept(s):
            self.error(f"expected {s!r}")

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def done(self):
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")

    def finset_body(self, close: str = "}") -> FinSet:
        items: list[int] = []
        if self.accept(close):
            return ()
        while True:
            a = self.nat()
            if self.accept(".."):
                b = self.nat()
                if b < a:
                    self.error("empty range")
                items.extend(range(a, b + 1))
            else:
                items.append(a)
            if self.accept(close):
                break
            self.expect(",")
        if len(set(items)) != len(items):
            self.error("repeated element")
        return finset(items)


def parse_finset(text: str) -> FinSet:
    """Parse a literal such as ``{2,5,9}`` (ranges ``a..b`` allowed)."""
    sc = _Scanner(text)
    sc.expect("{")
    result = sc.finset_body()
    sc.done()
    return result


def parse_groundset(text: str) -> GroundSet:
    sc = _Scanner(text)
    g = _parse_g(sc)
    sc.done()
    return g


def _parse_g(sc: _Scanner) -> GroundSet:
    g = _parse_atom(sc)
    while True:
        if sc.accept("|"):
            g = Union(g, _parse_atom(sc))
        elif sc.accept("\\"):
            sc.expect("fin{")
            g = MinusFinite(g, sc.finset_body())
        else:
            return g


def _parse_atom(sc: _Scanner) -> GroundSet:
    if sc.accept("("):
        g = _parse_g(sc)
        sc.expect(")")
        return g
    if sc.accept("all"):
        return ALL
    if sc.accept("seg("):
        n = sc.nat()
        sc.expect(")")
        return FinalSegment(n)
    if sc.accept("fin{"):
        return Finite(sc.finset_body())
    if sc.accept("ap("):
        a = sc.nat()
        sc.expect(",")
        d = sc.nat()
        sc.expect(")")
        return Arithmetic(a, d)
    if sc.accept("blocks("):
        args = [sc.nat()]
        for _ in range(3):
            sc.expect(",")
            args.append(sc.nat())
        sc.expect(")")
        return Blocks(*args)
    if sc.accept("cut("):
        g = _parse_g(sc)
        sc.expect(",")
        n = sc.nat()
        sc.expect(")")
        return TailCut(g, n)
    sc.error("expected a ground set")
