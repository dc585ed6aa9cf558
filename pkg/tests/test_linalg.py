from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrat.exactnum import ONE, CycNum, root_of_unity
from hopfbrat.linalg import Echelon, add_into, kernel, rank, solve, vec_equal

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def matrices(draw):
    rows = draw(st.integers(1, 5))
    cols = draw(st.integers(1, 5))
    entries = draw(st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    zeta = draw(st.sampled_from([1, 3, 4]))
    # mix in a root of unity so elimination is not purely rational
    w = root_of_unity(zeta)
    return [[w * e if (i + j) % 2 else CycNum.rational(e) for j, e in enumerate(r)] for i, r in enumerate(entries)]


def columns_of(m):
    return {j: {i: m[i][j] for i in range(len(m)) if m[i][j]} for j in range(len(m[0]))}


def apply(m, x):
    out = {}
    for j, c in x.items():
        for i in range(len(m)):
            add_into(out, {i: m[i][j] * c})
    return out


def test_small_example():
    cols = {"a": {0: ONE, 1: ONE}, "b": {0: ONE, 1: ONE}, "c": {1: ONE}}
    ker = kernel(cols, ["a", "b", "c"])
    assert len(ker) == 1
    assert vec_equal(ker[0], {"b": ONE, "a": -ONE})
    assert rank(cols.values()) == 2


def test_express_tracks_generators():
    e = Echelon(track=True)
    e.insert({0: ONE, 1: ONE}, "x")
    e.insert({1: ONE}, "y")
    assert vec_equal(e.express({0: ONE * 2}), {"x": ONE * 2, "y": -ONE * 2})
    assert e.express({2: ONE}) is None


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    cols = columns_of(m)
    keys = list(cols)
    ker = kernel(cols, keys)
    for v in ker:
        assert apply(m, v) == {}
    r = rank(cols.values())
    assert len(ker) == len(keys) - r
    # row rank equals column rank
    assert r == rank({j: m[i][j] for j in keys if m[i][j]} for i in range(len(m)))


@settings(max_examples=80, deadline=None)
@given(matrices(), st.data())
def test_solve_recovers_consistent_targets(m, data):
    cols = columns_of(m)
    x = {j: CycNum.rational(data.draw(small)) for j in cols}
    target = apply(m, x)
    sol = solve(cols, list(cols), target)
    assert sol is not None
    assert vec_equal(apply(m, sol), target)
