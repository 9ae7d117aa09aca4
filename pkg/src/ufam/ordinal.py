"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
terms with strictly decreasing exponents.  Exponents are themselves
ordinals, so the type is closed under the operations used for ranks of
uniform families (sum and right multiplication by omega).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import total_ordering
from typing import Union

from .errors import DSLError, PreconditionError

OrdinalLike = Union["Ordinal", int]


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exp, coef in self.terms:
            if not isinstance(exp, Ordinal):
                raise TypeError("exponent must be an Ordinal")
            if not isinstance(coef, int) or coef < 1:
                raise ValueError(f"coefficient must be a positive int, got {coef!r}")
            if prev is not None and not exp < prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp

    # construction helpers

    @classmethod
    def of(cls, value: OrdinalLike) -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot convert {value!r} to Ordinal")
        if value < 0:
            raise ValueError("ordinals are non-negative")
        return ZERO if value == 0 else cls(((ZERO, value),))

    @classmethod
    def omega_power(cls, exponent: OrdinalLike) -> "Ordinal":
        return cls(((cls.of(exponent), 1),))

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        return _Parser(text).parse()

    # queries

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return all(exp.is_zero for exp, _ in self.terms)

    @property
    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise PreconditionError("0 has no leading exponent")
        return self.terms[0][0]

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    # comparison

    def _cmp(self, other: "Ordinal") -> int:
        for (ea, ca), (eb, cb) in zip(self.terms, other.terms):
            c = ea._cmp(eb)
            if c:
                return c
            if ca != cb:
                return -1 if ca < cb else 1
        return (len(self.terms) > len(other.terms)) - (len(self.terms) < len(other.terms))

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if other < 0:
                return False
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return hash(self.terms)

    # arithmetic

    def __add__(self, other: OrdinalLike) -> "Ordinal":
        return ord_add(self, other)

    def __radd__(self, other: OrdinalLike) -> "Ordinal":
        return ord_add(other, self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coef in self.terms:
            if exp.is_zero:
                parts.append(str(coef))
                continue
            if exp == ONE:
                base = "w"
            elif exp.is_finite:
                base = f"w^{int(exp)}"
            else:
                base = f"w^({exp})"
            parts.append(base if coef == 1 else f"{base}*{coef}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Ordinal({str(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def ord_compare(a: OrdinalLike, b: OrdinalLike) -> Ordering:
    return Ordering(Ordinal.of(a)._cmp(Ordinal.of(b)))


def ord_add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = Ordinal.of(a), Ordinal.of(b)
    if b.is_zero:
        return a
    lead, lead_coef = b.terms[0]
    kept = [t for t in a.terms if not t[0] < lead]
    if kept and kept[-1][0] == lead:
        kept[-1] = (lead, kept[-1][1] + lead_coef)
        return Ordinal(tuple(kept) + b.terms[1:])
    return Ordinal(tuple(kept) + b.terms)


def ord_mul_omega(a: OrdinalLike) -> Ordinal:
    """Return ``a * w``, which is ``w^(e+1)`` for ``a`` with leading exponent ``e``."""
    a = Ordinal.of(a)
    if a.is_zero:
        raise PreconditionError("ord_mul_omega requires a > 0")
    return Ordinal.omega_power(ord_add(a.leading_exponent, 1))


class OrdinalKind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


def ord_classify(a: OrdinalLike) -> tuple[OrdinalKind, Ordinal | None]:
    """Classify ``a``; the second item is the predecessor for successors."""
    a = Ordinal.of(a)
    if a.is_zero:
        return OrdinalKind.ZERO, None
    exp, coef = a.terms[-1]
    if not exp.is_zero:
        return OrdinalKind.LIMIT, None
    head = a.terms[:-1]
    pred = head if coef == 1 else head + ((ZERO, coef - 1),)
    return OrdinalKind.SUCCESSOR, Ordinal(pred)


def ord_is_indecomposable(a: OrdinalLike) -> bool:
    a = Ordinal.of(a)
    if a.is_zero:
        raise PreconditionError("0 is not considered for indecomposability")
    return len(a.terms) == 1 and a.terms[0][1] == 1


class _Parser:
    # ord   := term ("+" term)*
    # term  := NAT | "w" ["^" (NAT | "(" ord ")")] ["*" NAT]
    def __init__(self, text: str):
        self.text = text.replace(" ", "")
        self.pos = 0

    def error(self, msg):
        raise DSLError(msg, self.text, self.pos)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def nat(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def parse(self) -> Ordinal:
        result = self.ord()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return result

    def ord(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        result = ZERO
        for t in terms:
            if not t.is_zero and not result.is_zero and not t.leading_exponent < result.terms[-1][0]:
                # canonical forms list strictly decreasing terms
                self.error("terms must be written largest first")
            result = ord_add(result, t)
        return result

    def term(self) -> Ordinal:
        if self.peek() == "w":
            self.pos += 1
            exp = ONE
            if self.peek() == "^":
                self.pos += 1
                if self.peek() == "(":
                    self.pos += 1
                    exp = self.ord()
                    if self.peek() != ")":
                        self.error("expected ')'")
                    self.pos += 1
                else:
                    exp = Ordinal.of(self.nat())
            coef = 1
            if self.peek() == "*":
                self.pos += 1
                coef = self.nat()
                if coef == 0:
                    self.error("coefficient must be positive")
            return Ordinal(((exp, coef),))
        return Ordinal.of(self.nat())
