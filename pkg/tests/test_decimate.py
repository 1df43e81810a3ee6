import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betadec.decimate import OrderedConfig, TieError, decimate, decimate_rows, even, superimpose


def line(*vals):
    return OrderedConfig(np.array(vals, dtype=float), "line")


def circle(*vals):
    return OrderedConfig(np.array(vals, dtype=float), "circle")


def test_decimate_examples():
    assert decimate(line(9, 7, 5, 3, 1), 2).values.tolist() == [7, 3]
    assert decimate(line(9, 7, 5, 3, 1), 1).values.tolist() == [9, 7, 5, 3, 1]
    assert decimate(line(9, 7, 5, 3, 1), 3).values.tolist() == [5]
    with pytest.raises(ValueError):
        decimate(line(1), 0)


def test_even_alias():
    cfg = line(5, 4, 3, 2, 1)
    assert even(cfg).values.tolist() == decimate(cfg, 2).values.tolist()


def test_superimpose_examples():
    assert superimpose(line(3, 1), line(2)).values.tolist() == [3, 2, 1]
    assert superimpose(line(7), OrderedConfig(np.array([]), "line")).values.tolist() == [7]
    assert superimpose(circle(1, 4), circle(2, 5)).values.tolist() == [1, 2, 4, 5]


def test_superimpose_errors():
    with pytest.raises(ValueError):
        superimpose(line(1), circle(1))
    with pytest.raises(TieError):
        superimpose(line(2, 1), line(1))


def test_ordering_validation():
    with pytest.raises(ValueError):
        line(1, 2)
    with pytest.raises(ValueError):
        circle(2, 1)
    with pytest.raises(ValueError):
        circle(0.0, 1.0)
    with pytest.raises(ValueError):
        OrderedConfig(np.array([1.0]), "torus")


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.sets(st.floats(-100, 100), min_size=1, max_size=12), st.integers(1, 5))
def test_decimate_length_and_order(vals, p):
    cfg = OrderedConfig(np.sort(np.array(sorted(vals)))[::-1], "line")
    out = decimate(cfg, p)
    assert len(out) == len(cfg) // p
    assert np.all(np.diff(out.values) < 0) or len(out) < 2


@settings(max_examples=60, deadline=None, derandomize=True)
@given(
    st.sets(st.floats(0.01, 6.27), min_size=1, max_size=6),
    st.sets(st.floats(0.01, 6.27), min_size=1, max_size=6),
)
def test_superimpose_then_trivial_decimate(a, b):
    if a & b:
        return
    c1 = OrderedConfig(np.array(sorted(a)), "circle")
    c2 = OrderedConfig(np.array(sorted(b)), "circle")
    merged = superimpose(c1, c2)
    assert decimate(merged, 1).values.tolist() == merged.values.tolist()
    assert len(merged) == len(c1) + len(c2)
    assert np.all(np.diff(merged.values) > 0) or len(merged) < 2


def test_decimate_rows_matches_scalar():
    rows = np.array([[9.0, 7.0, 5.0, 3.0, 1.0], [10.0, 8.0, 6.0, 4.0, 2.0]])
    out = decimate_rows(rows, 2)
    assert out.tolist() == [[7.0, 3.0], [8.0, 4.0]]
