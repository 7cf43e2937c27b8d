from hypothesis import given, strategies as st

from autostab.digits import (add_fixed_length, as_word, canonical_rep, concat, evaluate, evaluate1,
                             fixed_length_word, format_word, parse_word, power, shift)


def test_evaluate_two_dimensional():
    assert evaluate(((-3, 2), (-2, 3), (0, 4)), 10) == (-23, 432)


def test_evaluate_empty_word():
    assert evaluate((), 10, dim=1) == (0,)
    assert evaluate1((), 7) == 0


def test_two_words_share_a_value():
    for d in (2, 3, 10):
        assert evaluate1(((-1,), (1,)), d) == evaluate1(((d - 1,), (0,)), d) == d - 1


def test_canonical_examples():
    assert canonical_rep((-23, 432), 10) == ((-3, 2), (-2, 3), (0, 4))
    assert canonical_rep(0, 5) == ()
    assert canonical_rep(-7, 2) == ((-1,), (-1,), (-1,))


def test_word_combinators():
    assert evaluate1(power(as_word([1]), 3), 10) == 111
    s = shift(as_word([1, 2]), 1, 10)
    assert s == ((10,), (20,)) and evaluate1(s, 10) == 210
    w = as_word([4, 5])
    assert concat((), w) == w


def test_add_fixed_length():
    assert add_fixed_length(as_word([5]), as_word([7]), 2, 10) == ((2,), (1,))
    assert add_fixed_length((), (), 0, 10) == ()
    assert add_fixed_length(as_word([9, 9]), as_word([1]), 2, 10) is None


def test_parse_and_format():
    w = parse_word("(-3,2) (-2,3) (0,4)")
    assert evaluate(w, 10) == (-23, 432)
    assert parse_word(format_word(w)) == w
    assert parse_word("ε") == ()


@given(st.integers(-10 ** 12, 10 ** 12), st.integers(2, 16))
def test_canonical_round_trip(a, d):
    w = canonical_rep(a, d)
    assert evaluate1(w, d) == a
    assert not w or w[-1] != (0,)
    assert all(abs(l[0]) < d and (l[0] == 0 or (l[0] > 0) == (a > 0)) for l in w)


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), max_size=6),
       st.integers(2, 10))
def test_canonical_round_trip_pairs(vals, d):
    for a in vals:
        assert evaluate(canonical_rep(a, d), d, dim=2) == a


@given(st.integers(0, 10 ** 6), st.integers(0, 12), st.integers(2, 10))
def test_fixed_length_word(v, n, d):
    w = fixed_length_word(v, n, d)
    if v < d ** n:
        assert len(w) == n and evaluate1(w, d) == v
    else:
        assert w is None
