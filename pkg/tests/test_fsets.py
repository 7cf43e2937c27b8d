from hypothesis import given, settings, strategies as st

from autostab import autoset as aset
from autostab import fsets as fs
from autostab.digits import as_word, evaluate1


def test_cycle_elements():
    assert [e[0] for e in fs.cycle_elements(fs.CycleSet(1, 1, 10), 3)] == [1, 11, 111]
    assert [e[0] for e in fs.cycle_elements(fs.CycleSet(21, 2, 10), 2)] == [21, 2121]
    assert fs.cycle_elements(fs.CycleSet((1, 2), 1, 10), 2) == [(1, 2), (11, 22)]


def test_cycle_word_form_keeps_value():
    for a, delta, d in [(21, 2, 10), (7, 1, 3), (-45, 2, 4), (1000, 1, 10)]:
        w = fs.cycle_word_form(fs.CycleSet(a, delta, d))
        assert len(w) == delta and evaluate1(w, d) == a


def test_cycle_autoset_matches_enumeration():
    for a, delta, d in [(1, 1, 10), (5, 2, 3), (-4, 1, 3), (13, 1, 3)]:
        A = fs.cycle_autoset(fs.CycleSet(a, delta, d))
        want = fs.window_members(fs.Cycle(a, delta), d, -3000, 3000)
        assert {x for x in range(-3000, 3001) if A.member(x)} == want


def test_cycle_to_regex():
    R = fs.cycle_to_regex(fs.CycleSet(13, 1, 3))
    got = [e[0] for e in fs.cycle_elements(fs.CycleSet(13, 1, 3), 8)]
    assert [v for v in got if v not in R.exceptions][:4] == [R.element(k) for k in range(4)]
    assert fs.carry_sequence(13, 1, 3, 4)[:3] == [0, 4, 5]


def test_translate_regex_repunits():
    # 3 + {[1^k 1]} starts at 3 + 1 = 4, then 3 + 11 = 14
    R = fs.translate_regex(3, (), as_word([1]), as_word([1]), 10)
    values = set(R.exceptions) | set(R.elements(4))
    assert {4, 14, 114, 1114} <= values


def test_coset_automaton():
    A = fs.coset_automaton(2, 5, 10)
    assert A.member(17) and not A.member(18) and A.member(-3)
    assert all(A.member(x) == (x % 5 == 2) for x in range(-200, 200))


def test_powers_identity():
    for d in (2, 3, 10):
        assert fs.to_autoset(fs.powers_identity(d), d).equals(fs.powers_autoset(d))


def test_expression_text():
    e = fs.Trans(7, fs.Sum(fs.Cycle(5, 2), fs.Cycle(1, 1)))
    assert "C(5;2)" in e.text() and "C(1;1)" in e.text()


exprs = st.recursive(
    st.one_of(
        st.builds(fs.Cycle, st.integers(-9, 9), st.integers(1, 2)),
        st.builds(fs.Coset, st.integers(0, 4), st.integers(1, 5)),
        st.just(fs.Powers()),
        st.builds(lambda v: fs.Finite(tuple(v)), st.lists(st.integers(-30, 30), max_size=3)),
    ),
    lambda inner: st.one_of(
        st.builds(fs.Union, inner, inner),
        st.builds(fs.Inter, inner, inner),
        st.builds(fs.Trans, st.integers(-20, 20), inner),
        st.builds(fs.Neg, inner),
    ),
    max_leaves=4,
)


@settings(max_examples=40, deadline=None)
@given(exprs, st.sampled_from([2, 3]))
def test_automaton_agrees_with_direct_enumeration(e, d):
    A = fs.to_autoset(e, d)
    window = range(-400, 401)
    assert {x for x in window if A.member(x)} == fs.window_members(e, d, -400, 400)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(-5, 5))
def test_sums_of_cycles(a, b, c):
    e = fs.Trans(c, fs.Sum(fs.Cycle(a, 1), fs.Cycle(b, 2)))
    A = fs.to_autoset(e, 3)
    assert {x for x in range(-500, 501) if A.member(x)} == fs.window_members(e, 3, -500, 500)
