import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import coeff_vectors, vec_add, vec_key, vec_to_ordinal
from ufam.errors import DSLError, PreconditionError
from ufam.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordering,
    Ordinal,
    OrdinalKind,
    ord_add,
    ord_classify,
    ord_compare,
    ord_is_indecomposable,
    ord_mul_omega,
)

P = Ordinal.parse


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("0", "0", Ordering.EQUAL),
        ("w", "w+1", Ordering.LESS),
        ("w*2+3", "w^2", Ordering.LESS),
        ("w^2", "w*5+7", Ordering.GREATER),
        ("w^(w)", "w^7*3", Ordering.GREATER),
    ],
)
def test_compare_examples(a, b, expected):
    assert ord_compare(P(a), P(b)) is expected


@pytest.mark.parametrize(
    "a, b, expected",
    [("1", "w", "w"), ("w", "1", "w+1"), ("w*2+3", "w", "w*3"), ("w^2+w", "w^2", "w^2*2"), ("5", "3", "8")],
)
def test_add_examples(a, b, expected):
    assert ord_add(P(a), P(b)) == P(expected)


@pytest.mark.parametrize("a, expected", [("1", "w"), ("w+1", "w^2"), ("w^2*3+w", "w^3"), ("7", "w")])
def test_mul_omega_examples(a, expected):
    assert ord_mul_omega(P(a)) == P(expected)


def test_mul_omega_rejects_zero():
    with pytest.raises(PreconditionError):
        ord_mul_omega(ZERO)


@pytest.mark.parametrize(
    "a, kind, pred",
    [
        ("0", OrdinalKind.ZERO, None),
        ("w+2", OrdinalKind.SUCCESSOR, "w+1"),
        ("1", OrdinalKind.SUCCESSOR, "0"),
        ("w^2", OrdinalKind.LIMIT, None),
        ("w^2+w", OrdinalKind.LIMIT, None),
    ],
)
def test_classify(a, kind, pred):
    k, p = ord_classify(P(a))
    assert k is kind
    assert (p is None) if pred is None else p == P(pred)


@pytest.mark.parametrize("a, expected", [("w", True), ("w*2", False), ("w^3", True), ("1", True), ("3", False)])
def test_indecomposable(a, expected):
    assert ord_is_indecomposable(P(a)) is expected


def test_indecomposable_rejects_zero():
    with pytest.raises(PreconditionError):
        ord_is_indecomposable(ZERO)


@pytest.mark.parametrize("text", ["0", "5", "w", "w^2*3+w+4", "w^(w+1)*2+w^3", "w^(w^2)"])
def test_print_parse_roundtrip(text):
    assert str(P(text)) == text


@pytest.mark.parametrize("bad", ["", "w+w^2", "w*0", "x", "w^", "3+w"])
def test_parse_errors(bad):
    with pytest.raises(DSLError):
        P(bad)


def test_int_interop():
    assert P("3") == 3
    assert OMEGA > 10**9
    assert int(P("12")) == 12
    assert ONE + 1 == 2


@given(coeff_vectors, coeff_vectors)
def test_compare_matches_vector_oracle(a, b):
    oa, ob = vec_to_ordinal(a), vec_to_ordinal(b)
    ka, kb = vec_key(a), vec_key(b)
    expected = Ordering.LESS if ka < kb else Ordering.GREATER if ka > kb else Ordering.EQUAL
    assert ord_compare(oa, ob) is expected


@given(coeff_vectors, coeff_vectors)
def test_add_matches_vector_oracle(a, b):
    assert ord_add(vec_to_ordinal(a), vec_to_ordinal(b)) == vec_to_ordinal(vec_add(a, b))


@given(coeff_vectors, coeff_vectors, coeff_vectors)
def test_add_associative(a, b, c):
    x, y, z = map(vec_to_ordinal, (a, b, c))
    assert ord_add(ord_add(x, y), z) == ord_add(x, ord_add(y, z))


@given(coeff_vectors, coeff_vectors)
def test_add_monotone_and_absorbing(a, b):
    x, y = vec_to_ordinal(a), vec_to_ordinal(b)
    s = ord_add(x, y)
    assert x <= s and y <= s
    if not y.is_zero and (x.is_zero or x.leading_exponent < y.leading_exponent):
        assert s == y


@given(coeff_vectors.filter(lambda d: any(d.values())))
def test_mul_omega_indecomposable_and_larger(a):
    x = vec_to_ordinal(a)
    y = ord_mul_omega(x)
    assert ord_is_indecomposable(y)
    assert y > x


@given(coeff_vectors)
def test_roundtrip_property(a):
    x = vec_to_ordinal(a)
    assert P(str(x)) == x
    assert hash(P(str(x))) == hash(x)


@given(st.integers(0, 10**6))
def test_finite_values_agree_with_int(n):
    assert Ordinal.of(n) == n
    assert str(Ordinal.of(n)) == str(n)
