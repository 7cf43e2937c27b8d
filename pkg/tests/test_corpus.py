import pytest

from autostab import automaton as fa
from autostab import classify as cl
from autostab import corpus
from autostab.digits import evaluate1


def test_manifest_names_are_buildable():
    names = {e.name for e in corpus.entries()}
    assert names <= set(corpus.BUILDERS)
    assert len(corpus.entries()) >= 10


def test_unknown_name():
    with pytest.raises(corpus.CorpusError):
        corpus.build("nope", 3)


@pytest.mark.parametrize("entry", [e for e in corpus.entries() if e.name != "bset"], ids=lambda e: f"{e.name}/{e.d}")
def test_entry_matches_expectation(entry):
    res = corpus.run_entry(entry, N=3)
    assert res["match"], res


def test_baum_sweet_against_sequence():
    A = corpus.baum_sweet(2)
    assert all(A.member(n) == bool(corpus.baum_sweet_sequence(n)) for n in range(0, 600))


def test_even_length_and_ends():
    E = corpus.even_length(3)
    assert E.member(3) and E.member(-8) and not E.member(9) and E.member(0)
    P = corpus.ends_pm1(3)
    assert P.member(1) and P.member(-4) and P.member(10) and not P.member(6)


def test_no_zero_digit():
    Z = corpus.no_zero_digit(3)
    assert Z.member(4) and not Z.member(3) and Z.member(-4)


def test_bset_member():
    d = 8
    x = evaluate1(((7,), (6,), (6,), (4,)), d)
    assert corpus.bset_member(x, d)
    assert not corpus.bset_member(evaluate1(((7,), (6,), (4,), (4,)), d), d)
    assert corpus.bset_member(d ** 5, d) and corpus.bset_member(0, d)


def test_bset_truncation_agrees_with_exact_membership():
    d = 8
    B = corpus.bset_truncated(d, 3)
    for i in range(4):
        for j in range(4):
            w = ((7,),) * i + ((6,),) * j + ((4,),) * i
            assert B.member(evaluate1(w, d))
    for x in range(d ** 4):
        assert B.member(x) == corpus.bset_member(x, d)


def test_bset_multiplication_graph():
    res = corpus.bset_definability_check(8, 3)
    # (1, 0, 0) encodes as the number 1, a power of d, so it lies in B
    # even though i > j
    assert res["powers_recovered"]
    assert res["mismatches"] == [(1, 0, 0)]


def test_bset_injectivity():
    res = corpus.bset_injectivity_check(8, 5)
    assert res["injective"] and res["triples"] == 216


def _combo(i, j, k, d=8):
    return sum(c * (d ** e - 1) // (d - 1) for c, e in ((1, i), (2, j), (4, k)))


def test_bset_encodes_products():
    assert corpus.bset_member(_combo(1, 2, 3), 8)
    assert not corpus.bset_member(_combo(1, 1, 3), 8)
