"""The front ``A_F``, F-trees described by schemas, and the adequate set ``E(T)``.

A schema assigns a successor ground set to every node through the entry with
the longest prefix of that node; successors are cut above ``max(node)``.  A
node is terminal exactly when it lies in ``A_F``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from itertools import islice
from pathlib import Path
from typing import Iterator

from .adequacy import AdequacyTranscript, Witness, is_adequate
from .errors import PreconditionError
from .family import Family, descend, is_prefix, restrict_step, t_min
from .ordinal import OMEGA, OrdinalKind, ord_classify
from .setcore import (
    FinSet,
    FinalSegment,
    Finite,
    GroundSet,
    Union,
    cut_above,
    fmax,
    gs_iter,
    gs_member,
    parse_groundset,
)

DEFAULT_FANOUT = 4
CERT_FANOUT = 3


def a_front_member(fam: Family, s: FinSet) -> bool:
    """``s`` belongs to ``A_F``: the section ``F_s`` is omega-uniform."""
    s = tuple(s)
    if not is_prefix(fam, s):
        raise PreconditionError(f"{s} is not an initial segment of a member of {fam}")
    return descend(fam, s).rank == OMEGA


@dataclass(frozen=True)
class SchemaEntry:
    prefix: FinSet
    successors: GroundSet
    terminal: bool | None = None


@dataclass(frozen=True)
class FTreeSchema:
    entries: tuple[SchemaEntry, ...]
    depth: int

    @classmethod
    def from_json(cls, doc: dict | str) -> "FTreeSchema":
        if isinstance(doc, str):
            doc = json.loads(doc)
        entries = tuple(
            SchemaEntry(
                tuple(node.get("prefix", [])),
                parse_groundset(node["successors"]),
                node.get("terminal"),
            )
            for node in doc["nodes"]
        )
        return cls(entries, int(doc.get("depth", 3)))

    @classmethod
    def load(cls, path: str | Path) -> "FTreeSchema":
        return cls.from_json(Path(path).read_text())

    @classmethod
    def uniform(cls, successors: GroundSet | str, depth: int = 3) -> "FTreeSchema":
        """Every node takes its successors from the same set."""
        if isinstance(successors, str):
            successors = parse_groundset(successors)
        return cls((SchemaEntry((), successors),), depth)

    def entry_for(self, node: FinSet) -> SchemaEntry | None:
        best = None
        for e in self.entries:
            if node[: len(e.prefix)] == e.prefix and (best is None or len(e.prefix) > len(best.prefix)):
                best = e
        return best

    def successors(self, node: FinSet) -> GroundSet:
        e = self.entry_for(node)
        if e is None:
            raise PreconditionError(f"no schema entry covers {node}")
        return cut_above(e.successors, fmax(node)) if node else e.successors


def _children(schema: FTreeSchema, node: FinSet, fam: Family) -> Iterator[int]:
    """Children ``n`` of ``node`` in increasing order (the node must be internal)."""
    floor = max(fmax(node), descend(fam, node).base - 1)
    return gs_iter(schema.successors(node), floor)


@dataclass
class TreeReport:
    valid: bool
    violations: list[str]
    nodes_checked: int

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": self.violations, "nodes_checked": self.nodes_checked}


def _in_tree(fam: Family, schema: FTreeSchema, node: FinSet) -> bool:
    for i in range(len(node)):
        parent = node[:i]
        if not is_prefix(fam, parent) or a_front_member(fam, parent):
            return False
        succ = schema.successors(parent)
        if not gs_member(succ, node[i]) or node[i] < descend(fam, parent).base:
            return False
    return is_prefix(fam, node)


def validate_ftree(fam: Family, schema: FTreeSchema, fanout: int = DEFAULT_FANOUT) -> TreeReport:
    """Check downward closure, ``Ter(T)`` inside ``A_F`` and infinite branching."""
    if not fam.rank > OMEGA:
        raise PreconditionError(f"F-trees need rank > w, {fam} has rank {fam.rank}")
    violations: list[str] = []
    for e in schema.entries:
        if e.prefix and not _in_tree(fam, schema, e.prefix):
            violations.append(f"entry {list(e.prefix)} is not a node of the tree")
    checked = 0
    stack: list[FinSet] = [()]
    while stack:
        node = stack.pop()
        checked += 1
        section = descend(fam, node)
        terminal = section.rank == OMEGA
        if section.rank < OMEGA:
            violations.append(f"node {list(node)} has section rank {section.rank} < w, outside the closure of A_F")
            continue
        entry = schema.entry_for(node)
        if entry is None:
            violations.append(f"no schema entry covers node {list(node)}")
            continue
        if entry.terminal is not None and entry.prefix == node and entry.terminal != terminal:
            violations.append(
                f"node {list(node)} declared terminal={entry.terminal} but A_F membership is {terminal}"
            )
        if terminal or len(node) >= schema.depth:
            continue
        succ = schema.successors(node)
        if not succ.normal.infinite:
            violations.append(f"node {list(node)} has finitely many successors ({succ})")
            continue
        kids = list(islice(_children(schema, node, fam), fanout))
        # section ranks grow with n, so the least child bounds all of them
        if kids and restrict_step(section, kids[0]).rank < OMEGA:
            violations.append(f"child {list(node + (kids[0],))} has section rank below w")
        stack.extend(node + (n,) for n in reversed(kids))
    return TreeReport(not violations, violations, checked)


def _require_valid(fam: Family, schema: FTreeSchema) -> None:
    report = validate_ftree(fam, schema)
    if not report.valid:
        raise PreconditionError("invalid F-tree: " + "; ".join(report.violations))


def contribution(fam: Family, node: FinSet) -> FinSet:
    """``{n} | t_{n+1}(F_s)`` for the node ``s | {n}``."""
    s, n = node[:-1], node[-1]
    return (n,) + t_min(descend(fam, s), n + 1)


def et_nodes(fam: Family, schema: FTreeSchema, depth: int | None = None) -> Iterator[FinSet]:
    """Non-root nodes by increasing last element; shallower nodes first on ties."""
    depth = schema.depth if depth is None else depth
    heap: list[tuple[int, int, FinSet, Iterator[int]]] = []

    def push_first(parent: FinSet) -> None:
        if a_front_member(fam, parent) or len(parent) >= depth:
            return
        it = _children(schema, parent, fam)
        n = next(it, None)
        if n is not None:
            heapq.heappush(heap, (n, len(parent) + 1, parent + (n,), it))

    push_first(())
    while heap:
        n, d, node, siblings = heapq.heappop(heap)
        yield node
        nxt = next(siblings, None)
        if nxt is not None:
            heapq.heappush(heap, (nxt, d, node[:-1] + (nxt,), siblings))
        push_first(node)


def et_expand(fam: Family, schema: FTreeSchema, budget: int) -> list[FinSet]:
    """The first ``budget`` contributions to ``E(T)`` in canonical order."""
    _require_valid(fam, schema)
    return [contribution(fam, node) for node in islice(et_nodes(fam, schema), budget)]


def et_groundset(fam: Family, schema: FTreeSchema) -> GroundSet:
    """``E(T)`` as a ground set: a finite head below ``h`` and everything from ``h`` on.

    Root contributions ``{n} | t_{n+1}`` have at least ``n + 2`` elements,
    so once ``n`` exceeds the eventual gap of the root successors they overlap
    and cover a final segment.
    """
    _require_valid(fam, schema)
    root = schema.successors(())
    nf = root.normal
    h = next(gs_iter(root, max(nf.zone, nf.max_gap(), fam.base - 1)))
    assert len(t_min(fam, h + 1)) >= h + 2
    head: set[int] = set()
    for node in et_nodes(fam, schema, depth=h + 1):
        if node[-1] >= h:
            break
        head.update(x for x in contribution(fam, node) if x < h)
    return Union(Finite(tuple(sorted(head))), FinalSegment(h))


# ---------------------------------------------------------------------------
# certificate following the induction on the rank


def _runs_certificate(fam: Family, ground: str) -> AdequacyTranscript:
    return AdequacyTranscript(str(fam), ground, fam.rank, "limit", True, True, None,
                              note="arbitrarily long runs from root contributions")


def _certify(fam: Family, schema: FTreeSchema, node: FinSet, ground: str) -> AdequacyTranscript:
    section = descend(fam, node)
    if section.rank == OMEGA:
        return _runs_certificate(section, ground)
    kind, _ = ord_classify(section.rank)
    case = "limit" if kind is OrdinalKind.LIMIT else "successor"
    tr = AdequacyTranscript(str(section), ground, section.rank, case, True, True, CERT_FANOUT)
    for n in islice(_children(schema, node, fam), CERT_FANOUT):
        child = node + (n,)
        sub = _certify(fam, schema, child, ground)
        w = Witness(rank=section.rank, ok=sub.verdict, sub=sub)
        if case == "successor":
            w.n = n
            w.checks = {"t_next_inside": True, "tail_adequate": sub.verdict, "tail_m_set_infinite": True}
        else:
            w.v = (n,)
            w.rank = descend(fam, child).rank
        tr.witnesses.append(w)
    tr.note = "root children lie in M(F)" if case == "successor" else "each child subtree is adequate"
    return tr


def et_adequate_certificate(fam: Family, schema: FTreeSchema) -> AdequacyTranscript:
    """Adequacy of ``E(T)`` by induction on the rank, spot-checked with :func:`is_adequate`."""
    _require_valid(fam, schema)
    M = et_groundset(fam, schema)
    tr = _certify(fam, schema, (), str(M))
    check = is_adequate(fam, M)
    if check.verdict != tr.verdict:
        raise AssertionError(f"certificate and decision procedure disagree on {M}")
    tr.note += f"; confirmed by the decision procedure on {M}"
    return tr
