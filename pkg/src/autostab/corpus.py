"""Named example sets with their expected classifications.

Each builder returns a value-closed AutoSet. Expectations live in
corpus_manifest.json next to this module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional

from . import automaton as fa
from . import autoset as aset
from . import fsets as fs
from .autoset import AutoSet
from .digits import canonical_rep, evaluate1


class CorpusError(ValueError):
    pass


def _signed_canonical(d: int, magnitude: fa.Dfa, signs=(1, -1)) -> AutoSet:
    """Integers whose canonical digit magnitudes are accepted by `magnitude`.

    `magnitude` reads the absolute values of the canonical digits of a number
    (so it only ever sees words without trailing zeros).
    """
    sig = aset.signed_alphabet(d, 1)
    DEAD = "dead"

    def step(st, a):
        if st == DEAD:
            return DEAD
        sign, q = st
        v = a[0]
        if v:
            s = 1 if v > 0 else -1
            if sign and s != sign or s not in signs:
                return DEAD
            sign = s
        return (sign, magnitude.step(q, (abs(v),)))

    def final(st):
        return st != DEAD and st[1] in magnitude.finals

    raw = fa.from_function(sig, (0, magnitude.start), step, final)
    canon = fa.intersection(raw, _canonical(d))
    return aset.from_language(fa.minimize(canon), d)


def _canonical(d: int) -> fa.Dfa:
    from .classify import canonical_words

    return canonical_words(d)


def _digit_dfa(d: int, start, step: Callable, final: Callable) -> fa.Dfa:
    return fa.minimize(fa.from_function(aset.digit_alphabet(d), start, step, final))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise CorpusError(msg)


def powers(d: int) -> AutoSet:
    return fs.powers_autoset(d)


def zero_one_zero_two(d: int) -> AutoSet:
    """[0*10*2]: d^i + 2 d^(j+1) for i <= j."""
    _need(d >= 3, "0*10*2 needs the digit 2, so d >= 3")
    # 0: reading 0*; 1: after the 1, reading 0*; 2: after the 2; 3: dead
    table = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 2): 2}
    return aset.from_language(
        _digit_dfa(d, 0, lambda q, a: table.get((q, a[0]), 3), lambda q: q == 2), d)


def ends_pm1(d: int) -> AutoSet:
    """Canonical representation ends (most significant digit) in 1 or -1."""
    _need(d > 2, "ends-in-±1 needs d > 2")
    return _signed_canonical(d, _digit_dfa(d, False, lambda q, a: a[0] == 1 if a[0] else q, lambda q: q))


def no_zero_digit(d: int) -> AutoSet:
    _need(d > 2, "no-zero-digit needs d > 2")
    return _signed_canonical(d, _digit_dfa(d, True, lambda q, a: q and a[0] != 0, lambda q: q))


def even_length(d: int) -> AutoSet:
    return _signed_canonical(d, _digit_dfa(d, 0, lambda q, a: 1 - q, lambda q: q == 0))


def baum_sweet(d: int = 2) -> AutoSet:
    """Binary canonical representation without a block of zeros of odd length."""
    _need(d == 2, "Baum-Sweet is a base-2 set")

    def step(q, a):
        if q == "dead":
            return q
        if a[0] == 0:
            return 1 - q
        return "dead" if q == 1 else 0

    return _signed_canonical(2, _digit_dfa(2, 0, step, lambda q: q == 0))


def baum_sweet_sequence(n: int) -> int:
    """b(0) = 1, b(2n+1) = b(n), b(4n) = b(n) for n > 0, b(4n+2) = 0."""
    n = abs(n)
    while True:
        if n == 0:
            return 1
        if n % 2:
            n //= 2
        elif n % 4 == 2:
            return 0
        else:
            n //= 4


def complement_0102(d: int) -> AutoSet:
    return aset.complement(zero_one_zero_two(d))


def cycle_sum(d: int) -> AutoSet:
    return fs.to_autoset(fs.Trans(7, fs.Sum(fs.Cycle(5, 2), fs.Cycle(1, 1))), d)


def coset_2_5(d: int) -> AutoSet:
    return fs.coset_automaton(2, 5, d)


# the B set: d^N together with the numbers [7^i 6^j 4^i]

def bset_member(x: int, d: int) -> bool:
    """Exact membership in B by reading the canonical digits."""
    _need(d >= 8, "B needs d >= 8")
    if x < 0:
        return False
    if x == 0:
        return True
    w = [a[0] for a in canonical_rep(x, d)]
    if w.count(1) == 1 and w[-1] == 1 and not any(w[:-1]):
        return True
    i = 0
    while i < len(w) and w[i] == 7:
        i += 1
    j = i
    while j < len(w) and w[j] == 6:
        j += 1
    return len(w) - j == i and all(v == 4 for v in w[j:])


def bset_truncated(d: int, depth: int) -> AutoSet:
    """d^N together with [7^i 6^j 4^i] for i <= depth.

    B itself is not d-automatic (its canonical words 7^i 6^j 4^i form a
    non-regular language), but every truncation is; it agrees with B on all
    numbers whose leading 7-block has length at most depth.
    """
    _need(d >= 8, "B needs d >= 8")
    digits = aset.digit_alphabet(d)
    seven, six, four = (digits.index((v,)) for v in (7, 6, 4))
    nfa = fa.Nfa.empty(digits)
    for i in range(depth + 1):
        # 7^i, then 6*, then 4^i
        q = nfa.add_state(final=(i == 0))
        nfa.starts.add(q)
        for _ in range(i):
            t = nfa.add_state()
            nfa.add_edge(q, seven, t)
            q = t
        hub = nfa.add_state(final=(i == 0))
        nfa.add_edge(q, six, hub)
        nfa.add_edge(hub, six, hub)
        if i:
            first = nfa.add_state(final=(i == 1))
            nfa.add_edge(q, four, first)
            nfa.add_edge(hub, four, first)
            p = first
            for k in range(2, i + 1):
                t = nfa.add_state(final=(k == i))
                nfa.add_edge(p, four, t)
                p = t
    body = aset.from_language(fa.minimize(fa.determinize(nfa)), d)
    return aset.union(body, powers(d))


def bset(d: int, depth: int = 8) -> AutoSet:
    return bset_truncated(d, depth)


def _ones(value: int, length: int, d: int) -> int:
    """[value^length]: the word of `length` copies of the digit value."""
    return value * (d ** length - 1) // (d - 1)


def bset_injectivity_check(d: int, bound: int) -> dict:
    """Is (x, y, z) -> [1^x] + [2^y] + [4^z] injective on {0..bound}^3?"""
    _need(d >= 8, "B needs d >= 8")
    seen = {}
    collisions = []
    decoded_ok = True
    for x in range(bound + 1):
        for y in range(bound + 1):
            for z in range(bound + 1):
                v = _ones(1, x, d) + _ones(2, y, d) + _ones(4, z, d)
                if v in seen:
                    collisions.append((seen[v], (x, y, z)))
                seen[v] = (x, y, z)
                # each digit below 8 is a unique subset sum of {1, 2, 4}
                digits = [a[0] for a in canonical_rep(v, d)]
                back = tuple(sum(1 for g in digits if g & bit) for bit in (1, 2, 4))
                decoded_ok &= back == (x, y, z)
    return {"injective": not collisions and decoded_ok, "triples": (bound + 1) ** 3,
            "collisions": collisions, "decoded": decoded_ok}


def bset_definability_check(d: int, bound: int, B: Optional[AutoSet] = None) -> dict:
    """(d^i, d^j, d^k) in the multiplication graph with i <= j iff the combination lies in B.

    Membership goes through the truncated B automaton, which is exact for
    every combination arising with exponents at most bound.
    """
    _need(d >= 8, "B needs d >= 8")
    if B is None:
        B = bset_truncated(d, bound)
    mismatches = []
    for i in range(bound + 1):
        for j in range(bound + 1):
            for k in range(bound + 1):
                a, b, c = d ** i, d ** j, d ** k
                lhs = a * b == c and a <= b
                combo = (a - 1) // (d - 1) + 2 * (b - 1) // (d - 1) + 4 * (c - 1) // (d - 1)
                rhs = B.member(combo)
                if lhs != rhs or rhs != bset_member(combo, d):
                    mismatches.append((i, j, k))
    pw = powers(d)
    window = range(-d ** 3, d ** 5 + 1)
    recovery = all(pw.member(a) == (a == 1 or (a != 0 and B.member(a) and a % d == 0)) for a in window)
    return {"ok": not mismatches and recovery, "triples": (bound + 1) ** 3,
            "mismatches": mismatches, "powers_recovered": recovery}


# registry

BUILDERS = {
    "powers": powers,
    "0*10*2": zero_one_zero_two,
    "ends-pm1": ends_pm1,
    "no-zero-digit": no_zero_digit,
    "even-length": even_length,
    "baum-sweet": baum_sweet,
    "complement-0*10*2": complement_0102,
    "cycle-sum": cycle_sum,
    "coset-2-5": coset_2_5,
    "bset": bset,
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    d: int
    sparse: bool
    generic_in_Z: bool
    verdict: str
    construction: Optional[str]
    locus: str

    def build(self) -> AutoSet:
        return build(self.name, self.d)


@lru_cache(maxsize=None)
def manifest() -> dict:
    text = resources.files(__package__).joinpath("corpus_manifest.json").read_text()
    return json.loads(text)


def entries() -> list:
    return [CorpusEntry(e["name"], e["d"], e["sparse"], e["generic_in_Z"], e["verdict"],
                        e.get("construction"), e["locus"]) for e in manifest()["entries"]]


def build(name: str, d: int) -> AutoSet:
    if name not in BUILDERS:
        raise CorpusError(f"unknown corpus set {name!r}; known: {', '.join(BUILDERS)}")
    if d < 2:
        raise CorpusError("base must be at least 2")
    return BUILDERS[name](d)


def run_entry(entry: CorpusEntry, N: int = 5) -> dict:
    """Classify one entry and compare against its expectations."""
    from .classify import classify, is_sparse_set

    A = entry.build()
    sparse = is_sparse_set(A).sparse
    generic = aset.is_generic_in_integers(A).generic if not sparse else False
    v = classify(A, N=N)
    got = {"sparse": sparse, "generic_in_Z": generic, "verdict": v.kind}
    want = {"sparse": entry.sparse, "generic_in_Z": entry.generic_in_Z, "verdict": entry.verdict}
    return {"name": entry.name, "d": entry.d, "expected": want, "observed": got,
            "construction": v.construction, "match": got == want, "verdict": v}
