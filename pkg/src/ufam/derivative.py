"""Limit points and finite Cantor-Bendixson derivatives of restrictions ``F|M``."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import PreconditionError
from .family import (
    Family,
    check_member,
    descend,
    fam_member,
    finite_rank_reduction,
    is_prefix,
    _complete,
    t_min,
)
from .ordinal import OMEGA
from .setcore import (
    FinSet,
    GroundSet,
    cut_above,
    decompose_terminal_run,
    fmax,
    gs_iter,
    gs_member,
    gs_min_above,
    gs_runs,
    lex_less,
    run_starts,
)


class LimitReason(enum.Enum):
    OK = "ok"
    TERMINAL_RUN_TOO_SHORT = "terminal_run_too_short"
    PREDECESSOR_NOT_IN_M = "predecessor_not_in_M"
    MIN_TOO_SMALL_UNSUPPORTED = "min_too_small_unsupported"


@dataclass
class LimitVerdict:
    t: FinSet
    is_limit: bool
    u: FinSet
    p: int
    m: int
    reason: LimitReason
    witnesses: list[FinSet] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "t": list(self.t),
            "is_limit": self.is_limit,
            "u": list(self.u),
            "p": self.p,
            "m": self.m,
            "reason": self.reason.value,
            "witnesses": [list(w) for w in self.witnesses],
        }


def is_limit_point(fam: Family, M: GroundSet, t: FinSet) -> LimitVerdict:
    """Decide whether ``t`` is a limit point of ``F|M`` inside ``F``.

    Members with ``min(t) <= 1`` fall outside the characterization and get
    ``reason = min_too_small_unsupported`` with ``is_limit = False``.
    """
    t = tuple(t)
    check_member(fam, t, M)
    u, p, m = decompose_terminal_run(t)
    if t[0] <= 1:
        return LimitVerdict(t, False, u, p, m, LimitReason.MIN_TOO_SMALL_UNSUPPORTED)
    assert u + t_min(descend(fam, u), p) == t, "member is not of the form u | t_p(F_u)"
    if m < 1:
        return LimitVerdict(t, False, u, p, m, LimitReason.TERMINAL_RUN_TOO_SHORT)
    if not gs_member(M, p - 1):
        return LimitVerdict(t, False, u, p, m, LimitReason.PREDECESSOR_NOT_IN_M)
    return LimitVerdict(t, True, u, p, m, LimitReason.OK)


def witness_oracle(fam: Family, M: GroundSet, t: FinSet, count: int) -> list[FinSet]:
    """Members ``u | {p-1} | v_i`` of ``F|M`` increasing towards ``t``, with ``min(v_i)`` growing.

    Every split ``t = u | rest`` is tried; a split is usable when ``p - 1``
    (``p = min(rest)``) lies in ``M`` strictly above ``u``, ``u | {p-1}`` is a
    proper prefix, and ``u | t_p(F_u)`` reproduces ``t``.  A full list of
    ``count`` sets certifies that ``t`` is a limit point.
    """
    t = tuple(t)
    check_member(fam, t, M)
    for j in range(len(t)):
        u, p = t[:j], t[j]
        if p - 1 <= fmax(u) or not gs_member(M, p - 1):
            continue
        prefix = u + (p - 1,)
        if not is_prefix(fam, prefix) or fam_member(fam, prefix):
            continue
        if u + t_min(descend(fam, u), p) != t:
            continue
        out: list[FinSet] = []
        q = t[-1]  # min(v_i) starts beyond t and grows
        while len(out) < count:
            q = gs_min_above(M, q)
            s = _complete(fam, prefix + (q,), M)
            if not (fam_member(fam, s) and lex_less(s, t)):
                break
            if out and not lex_less(out[-1], s):
                break
            out.append(s)
        if len(out) == count:
            return out
    return []


def finite_derivative_member_pow(k: int, M: GroundSet, t: FinSet, l: int) -> bool:
    """Exact membership of ``t`` in the ``l``-th derivative of ``M^[k]`` for ``2 <= l < k``."""
    if not 2 <= l < k:
        raise PreconditionError(f"need 2 <= l < k, got l={l}, k={k}")
    t = tuple(t)
    if len(t) != k or not all(gs_member(M, x) for x in t):
        raise PreconditionError(f"{t} is not in M^[{k}]")
    u, p, m = decompose_terminal_run(t)
    return m >= l and gs_member(M, p - 1) and p - 1 > fmax(u) and gs_runs(M, l + 1).infinitely_many


def finite_derivative_sufficient(fam: Family, M: GroundSet, t: FinSet, l: int) -> bool:
    """One-sided test: ``True`` only when every premise for level-``l`` membership holds."""
    if l < 1:
        raise PreconditionError("level must be >= 1")
    t = tuple(t)
    check_member(fam, t, M)
    u, p, m = decompose_terminal_run(t)
    if not (p - 1 > fmax(u) and p >= 1 and gs_member(M, p - 1) and m >= l):
        return False
    prefix = u + (p - 1,)
    if not is_prefix(fam, prefix):
        return False
    if descend(fam, prefix).rank < l:
        return False
    return gs_runs(M, l + 1).infinitely_many


# ---------------------------------------------------------------------------
# CB index of M^[k]


@dataclass
class PowIndexReport:
    k: int
    index: int
    certified: bool
    clauses: dict[str, bool]
    levels: dict[int, bool]

    @property
    def violated(self) -> list[str]:
        return [name for name, ok in self.clauses.items() if not ok]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "index": self.index,
            "certified": self.certified,
            "lower": self.index,
            "upper": self.index,
            "clauses": self.clauses,
            "violated": self.violated,
            "levels": {str(l): v for l, v in self.levels.items()},
        }


def _level_nonempty(k: int, M: GroundSet, l: int) -> bool:
    """Some ``t`` in ``M^[k]`` lies in the ``l``-th derivative (``1 <= l < k``).

    Terminates: with finitely many candidate runs the generator is exhausted,
    with infinitely many the supply of elements below ``p - 1`` keeps growing.
    """
    if l >= 2 and not gs_runs(M, l + 1).infinitely_many:
        return False
    # t = u | {p..p+m} with {p-1..p+l} in M and k-1-m elements of M below p-1
    for start in run_starts(M, l + 2):
        p = start + 1
        m = l
        while m < k - 1 and gs_member(M, p + m + 1):
            m += 1
        need = k - 1 - m
        below = 0
        for x in gs_iter(M):
            if x >= p - 1 or below >= need:
                break
            below += 1
        if below >= need:
            return True
    return False


def cb_index_pow(k: int, M: GroundSet) -> PowIndexReport:
    """CB index of ``M^[k]`` as a subspace of ``N^[k]`` (``k > 2``)."""
    if k <= 2:
        raise PreconditionError("cb_index_pow needs k > 2")
    if not M.normal.infinite:
        raise PreconditionError(f"{M} is finite")
    clauses = {
        "run_of_length_k_plus_1": next(run_starts(M, k + 1), None) is not None,
        "infinitely_many_runs_of_length_k": gs_runs(M, k).infinitely_many,
    }
    levels = {0: True}
    for l in range(1, k):
        levels[l] = _level_nonempty(k, M, l)
    top = max(l for l, ok in levels.items() if ok)
    certified = all(clauses.values())
    index = k if certified else top + 1
    return PowIndexReport(k, index, certified, clauses, levels)


# ---------------------------------------------------------------------------
# index theorems built on adequacy


def cb_index_omega(fam: Family, M: GroundSet) -> bool:
    """``F|M`` has CB index omega; only for omega-uniform ``F``."""
    from .adequacy import is_adequate

    if fam.rank != OMEGA:
        raise PreconditionError(f"{fam} has rank {fam.rank}, not w")
    return is_adequate(fam, M).verdict


def cb_index_adequate(fam: Family, M: GroundSet):
    """``(rank, transcript)`` for an ``F``-adequate ``M``."""
    from .adequacy import is_adequate

    tr = is_adequate(fam, M)
    if not tr.verdict:
        raise PreconditionError(f"{M} is not {fam}-adequate; no index claim is made")
    return fam.rank, tr


def nash_williams_demo(fam: Family, M: GroundSet) -> tuple[FinSet, LimitVerdict]:
    """A member of ``F|M`` that is not a limit point, with its verdict."""
    if fam.rank < 2:
        raise PreconditionError("nash_williams_demo needs rank >= 2")
    N = cut_above(M, 1)  # keep min(t) > 1 so the characterization applies
    if not N.normal.infinite:
        raise PreconditionError(f"{M} is finite")
    if fam.rank.is_finite:
        u: FinSet = ()
        section = descend(fam, u)
    else:
        u = finite_rank_reduction(fam, N, 2)
        section = descend(fam, u)
    k = int(section.rank)
    w: list[int] = []
    x = max(fmax(u), section.base - 1)
    for _ in range(k - 2):
        x = gs_min_above(N, x)
        w.append(x)
    p = gs_min_above(N, x)
    q = gs_min_above(N, p + 1)
    t = u + tuple(w) + (p, q)
    verdict = is_limit_point(fam, N, t)
    if verdict.is_limit or not gs_member(M, q):
        raise AssertionError(f"construction failed for {fam} on {M}: {t}")
    return t, is_limit_point(fam, M, t)
