import pytest
from hypothesis import given
from hypothesis import strategies as st

from ndlt.metrics import Confusion, accuracy, confusion, f1


def test_confusion_examples():
    assert confusion([1, 0, 1], [1, 0, 0]) == Confusion(tp=1, fp=0, fn=1, tn=1)
    c = confusion([1, 0, 0, 1], [1, 0, 0, 1])
    assert c.fp == c.fn == 0
    c = confusion([1, 0, 1, 0], [0, 1, 0, 1])
    assert c.tp == c.tn == 0


def test_confusion_errors():
    with pytest.raises(ValueError):
        confusion([1, 0], [1])
    with pytest.raises(ValueError):
        confusion([], [])


def test_f1_examples():
    assert f1(Confusion(1, 0, 1, 0)) == pytest.approx(2 / 3)
    assert f1(Confusion(4, 0, 0, 3)) == 1.0
    assert f1(Confusion(0, 0, 0, 5)) == 0.0


def test_accuracy_examples():
    assert accuracy(Confusion(1, 0, 1, 1)) == pytest.approx(2 / 3)
    assert accuracy(Confusion(2, 0, 0, 2)) == 1.0
    assert accuracy(Confusion(0, 2, 2, 0)) == 0.0
    with pytest.raises(ValueError):
        accuracy(Confusion(0, 0, 0, 0))


pairs = st.integers(1, 50).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 1), min_size=n, max_size=n), st.lists(st.integers(0, 1), min_size=n, max_size=n))
)


@given(pairs)
def test_totals_and_bounds(p):
    t, q = p
    c = confusion(t, q)
    assert c.total == len(t)
    assert 0.0 <= f1(c) <= 1.0 and 0.0 <= accuracy(c) <= 1.0
    assert (f1(c) == 1.0) == (c.fp == 0 and c.fn == 0 and c.tp > 0)


@given(pairs)
def test_accuracy_symmetric_under_class_swap(p):
    t, q = p
    assert accuracy(confusion(t, q, 1)) == accuracy(confusion(t, q, 0))


def test_f1_not_symmetric():
    t, q = [1, 1, 1, 0], [1, 1, 0, 0]
    assert f1(confusion(t, q, 1)) != f1(confusion(t, q, 0))
