from fractions import Fraction

import pytest

from mcdeform.artin import ArtinianLocalDGA, m_filtration, make_dual_numbers, make_square_zero, validate_artinian
from mcdeform.dgla import tensor_dgla, nilpotency_class
from mcdeform.errors import ShapeMismatch

from helpers import sl2, xy_lie


def test_dual_numbers():
    R = make_dual_numbers(2)
    assert R.labels == ("1", "e") and R.mul("e", "e") == {}
    R = make_dual_numbers(3)
    assert R.mul("e", "e") == {"e^2": 1} and R.mul("e^2", "e") == {}
    for n in range(2, 6):
        assert validate_artinian(make_dual_numbers(n))
    with pytest.raises(ValueError):
        make_dual_numbers(1)


def test_untruncated_polynomial_is_not_nilpotent():
    # Q[x] cut to span(1, x) but with x * x = x: m is idempotent, never nilpotent
    R = ArtinianLocalDGA(["1", "x"], [0, 0], "1", ["x"], {("x", "x"): {"x": 1}})
    assert validate_artinian(R).axiom == "nilpotent"


def test_eta_example():
    R = make_square_zero({"eta": -1})
    assert validate_artinian(R)
    assert R.mul("eta", "eta") == {}


def test_validation_failures():
    R = ArtinianLocalDGA(["1", "p"], [0, 1], "1", ["p"])
    assert validate_artinian(R).axiom == "nonpositive_grading"
    R = ArtinianLocalDGA(["1", "a", "b"], [0, 0, 0], "1", ["a"])
    assert validate_artinian(R).axiom == "residue_field"
    R = ArtinianLocalDGA(["1", "a", "b"], [0, 0, -1], "1", ["a", "b"], {("a", "a"): {"b": 1}})
    assert validate_artinian(R).axiom == "degree"
    R = ArtinianLocalDGA(["1", "a"], [0, 0], "1", ["a"], {("1", "a"): {"a": 2}})
    assert validate_artinian(R).axiom == "unit"
    R = ArtinianLocalDGA(["1", "a", "b", "c"], [0, 0, 0, 0], "1", ["a", "b", "c"],
                         {("a", "b"): {"c": 1}, ("b", "a"): {"c": 2}})
    assert validate_artinian(R).axiom == "commutativity"
    R = ArtinianLocalDGA(["1", "a", "b"], [0, -1, 0], "1", ["a", "b"], differential={"a": {"b": 1}, "b": {"b": 1}})
    assert validate_artinian(R).axiom == "degree"
    R = ArtinianLocalDGA(["1", "a", "b"], [0, -1, 0], "1", ["a", "b"], {("a", "a"): {}},
                         differential={"a": {"1": 1}})
    assert validate_artinian(R).axiom in ("leibniz", "ideal")
    with pytest.raises(ShapeMismatch):
        ArtinianLocalDGA(["1"], [0], "1", ["zz"])


def test_associativity_failure():
    # a*a = b, a*b = 0, but b*a declared as c
    R = ArtinianLocalDGA(["1", "a", "b", "c"], [0, 0, 0, 0], "1", ["a", "b", "c"],
                         {("a", "a"): {"b": 1}, ("a", "b"): {"c": 1}, ("b", "a"): {"c": 1}})
    assert validate_artinian(R)
    R = ArtinianLocalDGA(["1", "a", "b", "c"], [0, 0, 0, 0], "1", ["a", "b", "c"],
                         {("a", "a"): {"b": 1}, ("a", "b"): {"c": 1}, ("b", "a"): {"c": 1},
                          ("a", "c"): {"b": 1}, ("c", "a"): {"b": 1}})
    assert not validate_artinian(R)


def test_filtrations():
    F3 = m_filtration(make_dual_numbers(3))
    assert F3.index == 3
    assert [sorted(v) for v in F3.level(1)] == [["e"], ["e^2"]]
    assert F3.level(2) == [{"e^2": 1}] and F3.level(3) == []
    F2 = m_filtration(make_dual_numbers(2))
    assert F2.index == 2 and F2.level(1) == [{"e": 1}]
    R = make_square_zero({"e1": 0, "e2": 0, "e12": 0}, {("e1", "e2"): {"e12": 1}})
    assert validate_artinian(R)
    assert m_filtration(R).level(2) == [{"e12": 1}]


def test_filtration_is_multiplicative():
    R = make_dual_numbers(5)
    F = m_filtration(R)
    for i in range(1, 4):
        for j in range(1, 5 - i):
            for u in F.level(i):
                for v in F.level(j):
                    prod = R.multiply(u, v)
                    assert set(prod) <= {lab for w in F.level(i + j) for lab in w}


def test_tensor_with_m_is_nilpotent():
    for n in (2, 3, 4):
        m = make_dual_numbers(n).maximal_ideal()
        for g in (xy_lie(), sl2()):
            c = nilpotency_class(tensor_dgla(m, g))
            assert isinstance(c, int) and c <= n - 1
