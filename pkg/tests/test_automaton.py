import random

import pytest
from hypothesis import given, settings, strategies as st

from autostab import automaton as fa

A2 = ((0,), (1,))
D3 = ((0,), (1,), (2,))


def regex_0102(alphabet=D3):
    # 0: reading 0*; 1: after the 1; 2: after the 2; 3: dead
    table = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 2): 2}
    return fa.from_function(alphabet, 0, lambda q, a: table.get((q, a[0]), 3), lambda q: q == 2)


def matches_0102(w):
    s = "".join(str(a[0]) for a in w)
    return s.count("1") == 1 and s.endswith("2") and set(s[:-1]) <= {"0", "1"} and s.count("2") == 1


def random_dfa(rng, alphabet, n):
    rows = [[rng.randrange(n) for _ in alphabet] for _ in range(n)]
    return fa.Dfa(alphabet, rows, 0, {q for q in range(n) if rng.random() < 0.5})


dfas = st.builds(lambda seed, n, k: random_dfa(random.Random(seed), tuple((i,) for i in range(k)), n),
                 st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(1, 3))


def test_transition_table_must_be_total():
    with pytest.raises(fa.AutomatonError):
        fa.Dfa(A2, [[0]], 0, set())


def test_membership_examples():
    assert fa.universal(A2).accepts(((1,), (0,), (1,)))
    parity = fa.from_function(A2, 0, lambda q, a: 1 - q, lambda q: q == 0)
    assert parity.accepts(((0,),) * 4) and not parity.accepts(((0,),) * 3)
    A = regex_0102()
    for w in fa.words_up_to(D3, 6):
        assert A.accepts(w) == matches_0102(w)


def test_union_matches_enumeration():
    one = fa.from_function(D3, 0, lambda q, a: {(0, 0): 0, (0, 1): 1}.get((q, a[0]), 2), lambda q: q == 1)
    two = fa.from_function(D3, 0, lambda q, a: {(0, 0): 0, (0, 2): 1}.get((q, a[0]), 2), lambda q: q == 1)
    both = fa.from_function(D3, 0, lambda q, a: 0 if q == 0 and a[0] == 0 else (1 if q == 0 else 2),
                            lambda q: q == 1)
    U = fa.union(one, two)
    for w in fa.words_up_to(D3, 6):
        assert U.accepts(w) == both.accepts(w)


def test_minimize_examples():
    E = fa.minimize(fa.empty_language(A2))
    assert E.n == 1 and not E.finals
    # (ab)* through six states, three of them redundant copies
    ab = (("a",), ("b",))
    rows = [[1, 5], [5, 2], [3, 5], [5, 4], [1, 5], [5, 5]]
    A = fa.Dfa(ab, rows, 0, {0, 2, 4})
    M = fa.minimize(A)
    assert M.n == 3 and fa.equivalent(A, M)


def test_count_words():
    assert fa.count_words(fa.universal(D3), 4) == 81
    assert fa.count_words(fa.universal(A2), 7) == 128
    assert fa.count_words(regex_0102(), 5) == 4


def test_pumping():
    ab = (("a",), ("b",))
    A = fa.from_function(ab, 0, lambda q, a: 0 if q == 0 and a == ("a",) else (1 if q == 0 else 2),
                         lambda q: q == 1)
    assert fa.pumping_length(fa.from_function(A2, 0, lambda q, a: (q + 1) % 3, lambda q: q == 0)) == 3
    w = (("a",),) * 3 + (("b",),)
    u, v, rest = fa.pump_decompose(A, w)
    assert v and u + v + rest == w
    for k in range(5):
        assert A.accepts(u + v * k + rest)


def test_sparsity_examples():
    S = fa.is_sparse(regex_0102())
    assert S.sparse
    assert fa.is_sparse(fa.from_words(D3, [((1,), (2,)), ((0,),)])).sparse
    bc = fa.universal((("b",), ("c",)))
    N = fa.is_sparse(bc)
    assert not N.sparse and N.y1 != N.y2 and len(N.y1) == len(N.y2)


def test_loop_language():
    a = (("a",),)
    A = fa.Dfa(a, [[1], [0]], 0, set())
    L = fa.loop_language(A, 0)
    assert L.accepts(())
    for n in range(8):
        assert L.accepts(a * n) == (n % 2 == 0)


def test_forbidden_suffix_examples():
    assert fa.forbidden_suffix_witness(fa.universal(D3)) is None
    digits10 = tuple((i,) for i in range(10))
    even = fa.from_function(digits10, None, lambda q, a: a[0] % 2 == 0 if q is None else q,
                            lambda q: q is True)
    assert fa.forbidden_suffix_witness(even) is None
    r, s, tau = fa.forbidden_suffix_witness(regex_0102())
    assert fa.check_forbidden_suffix(regex_0102(), r, s, tau, repeats=6)
    assert all(fa.suffix_forbidden_at(regex_0102(), ((1,), (1,)), n) for n in range(11))


def test_serialization_round_trip():
    A = regex_0102()
    assert fa.from_json(fa.to_json(A)) == A
    dot = fa.to_dot(A)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")


@settings(max_examples=60, deadline=None)
@given(dfas, dfas)
def test_boolean_laws(A, B):
    if A.alphabet != B.alphabet:
        return
    assert fa.equivalent(fa.complement(fa.complement(A)), A)
    assert fa.is_empty(fa.intersection(A, fa.complement(A)))
    assert fa.equivalent(fa.union(A, B), fa.complement(fa.intersection(fa.complement(A), fa.complement(B))))
    assert fa.equivalent(fa.difference(A, B), fa.intersection(A, fa.complement(B)))


@settings(max_examples=60, deadline=None)
@given(dfas)
def test_minimize_is_canonical(A):
    M = fa.minimize(A)
    assert fa.equivalent(A, M)
    assert fa.minimize(M) == M
    assert M.n <= A.n + 1


@settings(max_examples=40, deadline=None)
@given(dfas, st.integers(0, 10 ** 6))
def test_loop_language_is_closed(A, seed):
    rng = random.Random(seed)
    L = fa.loop_language(A, A.start)
    words = [w for w in fa.words_up_to(A.alphabet, 4) if L.accepts(w)]
    for _ in range(10):
        u, v = rng.choice(words), rng.choice(words)
        assert L.accepts(u + v)


def test_longest_word_length():
    assert fa.longest_word_length(fa.from_words(D3, [((1,), (2,)), ((0,),)])) == 2
    assert fa.longest_word_length(fa.empty_language(D3)) == -1
    assert fa.longest_word_length(fa.universal(D3)) is None


@settings(max_examples=60, deadline=None)
@given(dfas)
def test_longest_word_length_matches_counts(A):
    L = fa.longest_word_length(A)
    n = A.n + 2
    counts = [fa.count_words(A, k) for k in range(2 * n)]
    if L is None:
        assert any(counts[n:])
    else:
        assert L == max((k for k, c in enumerate(counts) if c), default=-1)
