"""Shared strategies, independent oracles and the ground-set catalog."""

from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import strategies as st

from ufam.ordinal import Ordinal
from ufam.setcore import parse_groundset

# ---------------------------------------------------------------------------
# ordinals below w^w as coefficient vectors, highest exponent first


def vec_to_ordinal(coeffs: dict[int, int]) -> Ordinal:
    terms = tuple((Ordinal.of(e), c) for e, c in sorted(coeffs.items(), reverse=True) if c)
    return Ordinal(terms)


def vec_add(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if not any(b.values()):
        return dict(a)
    lead = max(e for e, c in b.items() if c)
    out = {e: c for e, c in a.items() if e > lead and c}
    out[lead] = a.get(lead, 0) + b[lead]
    out.update({e: c for e, c in b.items() if e < lead and c})
    return out


def vec_key(a: dict[int, int], width: int = 8) -> tuple[int, ...]:
    return tuple(a.get(e, 0) for e in range(width, -1, -1))


coeff_vectors = st.dictionaries(st.integers(0, 4), st.integers(0, 5), max_size=4)


# ---------------------------------------------------------------------------
# brute-force ground sets


def brute_members(text: str, limit: int) -> set[int]:
    """Membership in a ground set by direct evaluation of its expression."""
    g = parse_groundset(text)
    return {x for x in range(limit) if _eval(g, x)}


def _eval(g, x: int) -> bool:
    from ufam import setcore as sc

    if isinstance(g, sc.FinalSegment):
        return x >= g.start
    if isinstance(g, sc.Finite):
        return x in g.elements
    if isinstance(g, sc.Arithmetic):
        return x >= g.first and (x - g.first) % g.step == 0
    if isinstance(g, sc.Blocks):
        start, k = g.start, 0
        while start <= x:
            length = g.base_len + k * g.len_step
            if x < start + length:
                return True
            start += length + g.gap
            k += 1
        return False
    if isinstance(g, sc.Union):
        return _eval(g.left, x) or _eval(g.right, x)
    if isinstance(g, sc.MinusFinite):
        return x not in g.removed and _eval(g.base, x)
    if isinstance(g, sc.TailCut):
        return x > g.n and _eval(g.base, x)
    raise TypeError(g)


def runs_of(members: set[int], limit: int) -> list[tuple[int, int]]:
    """Maximal runs ``(start, length)`` of consecutive members below ``limit``."""
    out = []
    x = 0
    while x < limit:
        if x in members and x - 1 not in members:
            y = x
            while y + 1 in members:
                y += 1
            out.append((x, y - x + 1))
            x = y + 1
        else:
            x += 1
    return out


# ---------------------------------------------------------------------------
# brute-force families over {0, ..., N-1}


def brute_pow(k: int, universe) -> list[tuple[int, ...]]:
    return sorted(combinations(sorted(universe), k))


def is_schreier(t: tuple[int, ...]) -> bool:
    return len(t) >= 1 and len(t) == t[0] + 1


# ---------------------------------------------------------------------------
# catalog

CATALOG = [
    "all",
    "ap(0,2)",
    "ap(1,3)|ap(2,3)",
    "blocks(10,3,2,1)",
    "fin{4,5,6}|ap(11,2)",
    "ap(0,3)|ap(1,3)",
    "blocks(10,4,3,0)",
    "blocks(10,4,3,0)|fin{0..3}",
    "seg(5)\\fin{7}",
    "ap(0,5)|ap(1,5)|ap(2,5)|ap(3,5)",
]


@pytest.fixture(params=CATALOG)
def catalog_set(request):
    return parse_groundset(request.param)


# ---------------------------------------------------------------------------
# random ground-set expressions (may be rejected; callers filter)

_nat = st.integers(0, 30)
_atoms = st.one_of(
    st.builds(lambda n: f"seg({n})", _nat),
    st.builds(lambda a, d: f"ap({a},{d})", _nat, st.integers(1, 7)),
    st.builds(
        lambda s, g, l, dl: f"blocks({s},{g},{l},{dl})",
        _nat, st.integers(1, 5), st.integers(1, 4), st.integers(0, 2),
    ),
)
_fins = st.lists(_nat, min_size=1, max_size=5).map(lambda xs: "fin{" + ",".join(map(str, sorted(set(xs)))) + "}")


@st.composite
def groundset_texts(draw):
    parts = draw(st.lists(st.one_of(_atoms, _fins), min_size=1, max_size=3))
    if all(p.startswith("fin") for p in parts):
        parts.append(draw(_atoms))
    text = "|".join(parts)
    if draw(st.booleans()):
        text += "\\" + draw(_fins)
    if draw(st.booleans()):
        text = f"cut({text},{draw(_nat)})"
    return text


def accepted(text: str):
    """The parsed ground set, or ``None`` when it has no exact normal form."""
    from ufam.errors import RejectedGroundSet

    try:
        g = parse_groundset(text)
        g.normal
    except RejectedGroundSet:
        return None
    return g


# ---------------------------------------------------------------------------
# families: membership by splitting sets, independent of restrict_step

BUILDERS = [
    "pow(1)",
    "pow(2)",
    "pow(3)",
    "pow(4)",
    "schreier",
    "diag(2n+1)",
    "sum(schreier,pow(1))",
    "sum(pow(2),pow(1))",
    "sum(diag(2n+1),pow(2))",
    "sum(schreier,schreier)",
    "iter(pow(1),n+1)",
    "iter(pow(2),n)",
]


def oracle_member(e, t: tuple[int, ...]) -> bool:
    from ufam import family as fm

    if isinstance(e, fm.Point):
        return t == ()
    if isinstance(e, fm.Pow):
        return len(t) == e.k
    if isinstance(e, fm.Diag):
        return bool(t) and len(t) == e.f(t[0]) + 1
    if isinstance(e, fm.Sum):
        return any(oracle_member(e.lower, t[:i]) and oracle_member(e.upper, t[i:]) for i in range(len(t) + 1))
    if isinstance(e, fm.Iter):
        return bool(t) and _in_chain(e.body, e.f(t[0]), t[1:])
    raise TypeError(e)


def _in_chain(body, j: int, t: tuple[int, ...]) -> bool:
    if j == 0:
        return t == ()
    return any(oracle_member(body, t[:i]) and _in_chain(body, j - 1, t[i:]) for i in range(1, len(t) + 1))


def pow_rank_vector(t: tuple[int, ...], offset: int = 0) -> dict[int, int]:
    """Lex rank of ``t`` in ``[offset, oo)^[k]`` as a coefficient vector."""
    k = len(t)
    out: dict[int, int] = {}
    prev = offset - 1
    for i, a in enumerate(t):
        out[k - 1 - i] = a - prev - 1
        prev = a
    return out


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "seconds": 0.0})
    entry["ok"] = entry["ok"] and report.passed
    entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {status}  {e['title']} ({e['seconds']:.1f} s)")
