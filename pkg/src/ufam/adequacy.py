"""F-adequacy of ground sets and membership in ``M(F)``.

The recursion follows the three cases (rank 2, successor, limit).  Witness
searches are bounded using the run structure of the normal form:

* cofinite sets: a witness exists at the first element past the irregular zone;
* sets whose runs are bounded by ``R``: members of infinite rank need
  ``t_{n+1} = [n+1, n+|t|]`` with ``|t| >= n + 2``, so ``n < R``;
* a single growing blocks component: the same size argument bounds ``n`` by the
  last block whose length exceeds its start.

When a bound is larger than the configured window the verdict may be
reported with ``certified = False``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Any

from .errors import PreconditionError
from .family import Family, restrict_step, t_min
from .ordinal import OMEGA, Ordinal, OrdinalKind, ord_add, ord_classify
from .setcore import (
    FinSet,
    GroundSet,
    contains_all,
    cut_above,
    fmax,
    gs_iter,
    gs_member,
    gs_runs,
    run_starts,
)

DEFAULT_WINDOW = 64
LIMIT_SAMPLES = 3
# nested transcripts on cofinite sets are expanded this deep, then summarized
DETAIL_DEPTH = 4


@dataclass
class Witness:
    rank: Ordinal
    n: int | None = None
    v: FinSet | None = None
    ok: bool = True
    checks: dict[str, bool] = field(default_factory=dict)
    sub: "AdequacyTranscript | None" = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.n is not None:
            out["n"] = self.n
        if self.v is not None:
            out["v"] = list(self.v)
        out["rank"] = str(self.rank)
        out["ok"] = self.ok
        if self.checks:
            out["checks"] = dict(self.checks)
        out["sub"] = self.sub.to_json() if self.sub is not None else None
        return out


@dataclass
class AdequacyTranscript:
    family: str
    ground: str
    rank: Ordinal
    case: str
    verdict: bool
    certified: bool
    window: int | None
    witnesses: list[Witness] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "case": self.case,
            "family": self.family,
            "ground": self.ground,
            "rank": str(self.rank),
            "window": self.window,
            "certified": self.certified,
            "note": self.note,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _shape(M: GroundSet) -> str:
    nf = M.normal
    if nf.full:
        return "cofinite"
    if nf.blocks:
        return "blocks"
    return "bounded"


def _on_base(fam: Family, M: GroundSet) -> GroundSet:
    if fam.base == 0 or next(gs_iter(M), fam.base) >= fam.base:
        return M
    return cut_above(M, fam.base - 1)


def is_omega_adequate(M: GroundSet) -> bool:
    """``M`` contains arbitrarily long intervals of consecutive integers."""
    return gs_runs(M, 1).arbitrarily_long


def _large_member_bound(M: GroundSet) -> int | None:
    """An ``N`` with ``[n, 2n+2]`` not inside ``M`` for every ``n >= N``; ``None`` for cofinite sets."""
    nf = M.normal
    if nf.full:
        return None
    if not nf.blocks:
        return gs_runs(M, 1).max_length or 0
    comp = nf.blocks[0]
    last = None
    k = 0
    while True:
        diff = comp.block_len(k) - comp.block_start(k)
        if diff >= 3:
            last = k
        elif k >= 1:
            break
        k += 1
    top = comp.block_start(last + 1) if last is not None else 0
    return max(nf.zone + 1, top)


def m_set_infinite(fam: Family, M: GroundSet) -> bool:
    """Whether ``M(F)`` is infinite (``M`` infinite, ``rank(F) >= 2``)."""
    kind, _ = ord_classify(fam.rank)
    if kind is OrdinalKind.LIMIT:
        return True
    M = _on_base(fam, M)
    if fam.rank.is_finite:
        k = int(fam.rank)
        return gs_runs(M, 3 if k == 2 else k + 1).infinitely_many
    return M.normal.full


def _m_set_witness(fam: Family, M: GroundSet, n: int, window: int, depth: int = 0) -> Witness:
    t = t_min(fam, n + 1)
    checks = {"t_next_inside": contains_all(M, t)}
    w = Witness(rank=fam.rank, n=n, checks=checks)
    if fam.rank == 2 or not checks["t_next_inside"]:
        w.ok = checks["t_next_inside"]
        return w
    section = restrict_step(fam, n)
    tail = cut_above(M, n)
    # cheap check first: an infinite M_n(F_n) at infinite successor rank needs a cofinite tail
    checks["tail_m_set_infinite"] = m_set_infinite(section, tail)
    if checks["tail_m_set_infinite"]:
        w.sub = _adequate(section, tail, window, depth + 1)
        checks["tail_adequate"] = w.sub.verdict
    w.ok = all(checks.values())
    return w


def m_set_contains(fam: Family, M: GroundSet, n: int, window: int = DEFAULT_WINDOW) -> bool:
    kind, _ = ord_classify(fam.rank)
    if kind is not OrdinalKind.SUCCESSOR or fam.rank < 2:
        raise PreconditionError(f"M(F) membership needs a successor rank >= 2, got {fam.rank}")
    if n < fam.base or not gs_member(M, n):
        raise PreconditionError(f"{n} is not an element of {M} above the base")
    return _m_set_witness(fam, M, n, window).ok


def is_adequate(fam: Family, M: GroundSet, window: int = DEFAULT_WINDOW) -> AdequacyTranscript:
    if fam.rank < 2:
        raise PreconditionError(f"adequacy needs rank >= 2, got {fam.rank}")
    return _adequate(fam, M, window, 0)


def _adequate(fam: Family, M: GroundSet, window: int, depth: int) -> AdequacyTranscript:
    M = _on_base(fam, M)
    if not M.normal.infinite:
        raise PreconditionError(f"{M} is finite")
    kind, _ = ord_classify(fam.rank)
    if depth > DETAIL_DEPTH and M.normal.full and not fam.rank.is_finite:
        return _cofinite_summary(fam, M, kind)
    if kind is OrdinalKind.LIMIT:
        return _limit_case(fam, M, window, depth)
    return _successor_case(fam, M, window, depth)


def _cofinite_summary(fam: Family, M: GroundSet, kind: OrdinalKind) -> AdequacyTranscript:
    case = "limit" if kind is OrdinalKind.LIMIT else "successor"
    n = next(gs_iter(M, M.normal.zone))
    w = Witness(rank=fam.rank, n=n, checks={"cofinite_tail": True})
    return AdequacyTranscript(
        str(fam), str(M), fam.rank, case, True, True, None, [w], "cofinite ground set (not expanded)"
    )


def _successor_case(fam: Family, M: GroundSet, window: int, depth: int) -> AdequacyTranscript:
    case = "rank2" if fam.rank == 2 else "successor"
    tr = AdequacyTranscript(str(fam), str(M), fam.rank, case, False, True, None)
    if fam.rank.is_finite:
        # n in M(F) forces {n, ..., n+k} inside M, so only run starts are candidates
        k = int(fam.rank)
        first = next(run_starts(M, k + 1), None)
        tr.window = first
        if first is None:
            tr.note = f"no run of length {k + 1}"
            return tr
        w = _m_set_witness(fam, M, first, window, depth)
        tr.witnesses.append(w)
        tr.verdict = w.ok
        if not w.ok:
            tr.note = f"finitely many runs of length {k}"
        return tr

    bound = _large_member_bound(M)
    if bound is None:
        bound = M.normal.zone + 2
    tr.window = bound
    candidates = [n for n in islice(gs_iter(M), window + 1) if n < bound]
    if len(candidates) > window:
        candidates = candidates[:window]
        tr.certified = False
        tr.note = f"search truncated to {window} candidates below {bound}"
    for n in candidates:
        w = _m_set_witness(fam, M, n, window, depth)
        if w.ok:
            tr.witnesses.append(w)
            tr.verdict = True
            tr.certified = True
            return tr
    if tr.certified:
        tr.note = f"no element below {bound} belongs to M(F)"
        if candidates:
            tr.witnesses.append(_m_set_witness(fam, M, candidates[0], window, depth))
    return tr


def _successor_descent(fam: Family, M: GroundSet, target: Ordinal, above: int) -> tuple[FinSet, Family]:
    """Descend along ``M`` to a section of successor rank ``>= target``."""
    v: list[int] = []
    cur = fam
    while True:
        for m in gs_iter(M, max(above, fmax(tuple(v)), cur.base - 1)):
            nxt = restrict_step(cur, m)
            if nxt.rank >= target:
                break
        v.append(m)
        cur = nxt
        if ord_classify(cur.rank)[0] is OrdinalKind.SUCCESSOR:
            return tuple(v), cur


def _limit_case(fam: Family, M: GroundSet, window: int, depth: int) -> AdequacyTranscript:
    shape = _shape(M)
    tr = AdequacyTranscript(str(fam), str(M), fam.rank, "limit", False, True, None)
    if shape == "cofinite":
        tr.verdict = True
        tr.note = "cofinite ground set"
        above = M.normal.zone
    elif fam.rank == OMEGA:
        tr.verdict = is_omega_adequate(M)
        tr.note = "arbitrarily long runs" if tr.verdict else f"runs bounded by {gs_runs(M, 1).max_length}"
        above = -1
    else:
        tr.note = (
            "rank above w needs members [n, 2n+2] for infinitely many sections; "
            "this set has only finitely many"
        )
        above = -1
    tr.window = LIMIT_SAMPLES
    # sample the first indices j of the limit sequence and exhibit v for each
    for j, _ in zip(gs_iter(M, fam.base - 1), range(LIMIT_SAMPLES)):
        alpha_j = restrict_step(fam, j).rank
        target = max(ord_add(alpha_j, 1), Ordinal.of(2))
        v, section = _successor_descent(fam, M, target, max(above, j))
        sub = _adequate(section, cut_above(M, v[-1]), window, depth + 1)
        tr.witnesses.append(Witness(rank=section.rank, v=v, ok=sub.verdict, sub=sub))
        if not tr.verdict:
            if not sub.verdict:
                break
    if not tr.verdict and tr.witnesses and all(w.ok for w in tr.witnesses) and fam.rank == OMEGA:
        # bounded runs: show the first index whose target outruns them
        r = gs_runs(M, 1).max_length or 0
        v, section = _successor_descent(fam, M, Ordinal.of(max(r, 2)), -1)
        sub = _adequate(section, cut_above(M, v[-1]), window, depth + 1)
        tr.witnesses.append(Witness(rank=section.rank, v=v, ok=sub.verdict, sub=sub))
    if tr.verdict:
        assert all(w.ok for w in tr.witnesses)
    return tr
