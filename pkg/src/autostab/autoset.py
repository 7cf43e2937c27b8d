"""Automatic subsets of Z^m with value-level semantics.

An AutoSet keeps a minimal DFA over the signed digit alphabet {-d+1..d-1}^m
that accepts every representation of every member, so membership never
depends on which representation is chosen.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Iterable, Optional, Sequence, Union

from . import automaton as fa
from .digits import canonical_rep, evaluate, as_letter


@lru_cache(maxsize=None)
def signed_alphabet(d: int, m: int = 1) -> tuple:
    return tuple(iproduct(range(-d + 1, d), repeat=m))


@lru_cache(maxsize=None)
def digit_alphabet(d: int, m: int = 1) -> tuple:
    return tuple(iproduct(range(d), repeat=m))


def _vec(c, m):
    return (c,) * m


@dataclass(frozen=True)
class AutoSet:
    base: int
    dim: int
    dfa: fa.Dfa

    def __post_init__(self):
        if self.dfa.alphabet != signed_alphabet(self.base, self.dim):
            raise ValueError("recognizer must use the full signed digit alphabet")

    def member(self, a) -> bool:
        return self.dfa.accepts(canonical_rep(a, self.base))

    __contains__ = member

    def accepts_word(self, w) -> bool:
        return self.dfa.accepts(w)

    @property
    def states(self) -> int:
        return self.dfa.n

    def to_dict(self) -> dict:
        return {"base": self.base, "dim": self.dim, "semantics": "value-closed",
                "automaton": fa.to_dict(self.dfa)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "AutoSet":
        if obj.get("semantics") != "value-closed":
            raise ValueError("only value-closed automata can be loaded as sets")
        return cls(obj["base"], obj["dim"], fa.from_dict(obj["automaton"]))

    @classmethod
    def from_json(cls, text: str) -> "AutoSet":
        return cls.from_dict(json.loads(text))

    def equals(self, other: "AutoSet") -> bool:
        _check_pair(self, other)
        return fa.equivalent(self.dfa, other.dfa)


def _check_pair(A: AutoSet, B: AutoSet) -> None:
    if A.base != B.base or A.dim != B.dim:
        raise ValueError("base or dimension mismatch")


def _wrap(d: int, m: int, dfa: fa.Dfa) -> AutoSet:
    return AutoSet(d, m, fa.minimize(dfa))


# value closure

def _padded(raw: fa.Nfa, m: int) -> fa.Nfa:
    """Copy of raw that also accepts every accepted word followed by zero letters."""
    zero = _vec(0, m)
    trans = [dict((k, set(v)) for k, v in row.items()) for row in raw.trans]
    alphabet = raw.alphabet if zero in raw.alphabet else raw.alphabet + (zero,)
    nfa = fa.Nfa(alphabet, raw.n, set(raw.starts), set(raw.finals), trans)
    z = alphabet.index(zero)
    done = nfa.add_state(final=True)
    for q in list(raw.finals) + [done]:
        nfa.add_edge(q, z, done)
    return nfa


def _carry_bound(d: int, letters: Sequence) -> int:
    """Carries of absolute value at most this bound stay within it."""
    L = max((abs(v) for a in letters for v in a), default=0)
    return -(-(d - 1 + L) // (d - 1))


def _completable(edges, finals, n, d, m) -> Callable[[int, tuple], bool]:
    """Predicate on (q, c): some word z leads q to a final state and [z] = c.

    Small carries form a closed region that is solved by a backward worklist;
    larger carries shrink by a factor of about d per letter, so they are
    decided by memoized recursion into the small region.
    """
    B = _carry_bound(d, [y for row in edges for y, _ in row])
    back = [[] for _ in range(n)]
    for q in range(n):
        for y, t in edges[q]:
            back[t].append((q, y))
    good = {(q, _vec(0, m)) for q in finals}
    todo = list(good)
    # (q, c) is good when q --y--> t and (t, (c - y)/d) is good, i.e. c = y + d c'
    while todo:
        t, c2 = todo.pop()
        for q, y in back[t]:
            c = tuple(yv + d * cv for yv, cv in zip(y, c2))
            if max(map(abs, c)) <= B and (q, c) not in good:
                good.add((q, c))
                todo.append((q, c))
    memo = {}

    def check(q, c):
        if max(map(abs, c), default=0) <= B:
            return (q, c) in good
        key = (q, c)
        if key not in memo:
            memo[key] = False
            for y, t in edges[q]:
                diff = [cv - yv for cv, yv in zip(c, y)]
                if all(v % d == 0 for v in diff) and check(t, tuple(v // d for v in diff)):
                    memo[key] = True
                    break
        return memo[key]

    return check


def value_closure(raw: Union[fa.Dfa, fa.Nfa], d: int, m: int = 1) -> AutoSet:
    """Set of values of words accepted by raw, recognizing all their representations.

    raw may read arbitrary integer letters of dimension m.
    """
    sig = signed_alphabet(d, m)
    if isinstance(raw, fa.Dfa):
        raw = fa.dfa_to_nfa(raw)
    if any(len(a) != m for a in raw.alphabet):
        raise ValueError("raw automaton letters have the wrong dimension")
    R = _padded(raw, m)
    letters = R.alphabet
    edges = [[(letters[i], t) for i, ts in sorted(row.items()) for t in ts] for row in R.trans]
    good = _completable(edges, R.finals, R.n, d, m)

    nfa = fa.Nfa(sig, 0, set(), set(), [])
    ids = {}

    def sid(s):
        if s not in ids:
            ids[s] = nfa.add_state(final=good(*s))
        return ids[s]

    zero = _vec(0, m)
    todo = []
    for q in sorted(R.starts):
        s = (q, zero)
        nfa.starts.add(sid(s))
        todo.append(s)
    seen = set(todo)
    while todo:
        q, c = todo.pop()
        src = ids[(q, c)]
        for xi, x in enumerate(sig):
            for y, t in edges[q]:
                diff = [ci + xv - yv for ci, xv, yv in zip(c, x, y)]
                if all(v % d == 0 for v in diff):
                    s = (t, tuple(v // d for v in diff))
                    nfa.add_edge(src, xi, sid(s))
                    if s not in seen:
                        seen.add(s)
                        todo.append(s)
    return _wrap(d, m, fa.determinize(nfa))


def lift(A: AutoSet, letters: Sequence) -> fa.Dfa:
    """Minimal DFA over arbitrary integer letters accepting w iff [w] is in A."""
    d, m = A.base, A.dim
    letters = tuple(as_letter(a) for a in letters)
    sig = A.dfa.alphabet
    T = A.dfa.trans
    zero = _vec(0, m)
    edges = [[(sig[i], t) for i, t in enumerate(T[q])] for q in range(A.dfa.n)]
    good = _completable(edges, A.dfa.finals, A.dfa.n, d, m)
    sig_index = {y: i for i, y in enumerate(sig)}
    options = {}

    def opts(c, x):
        """Digits y (with the next carry) such that c + x - y is divisible by d."""
        key = (c, x)
        if key not in options:
            per = []
            for cv, xv in zip(c, x):
                r = (cv + xv) % d
                per.append([r, r - d] if r else [0])
            out = []
            for y in iproduct(*per):
                if y in sig_index:
                    out.append((sig_index[y], tuple((cv + xv - yv) // d for cv, xv, yv in zip(c, x, y))))
            options[key] = out
        return options[key]

    nfa = fa.Nfa(letters, 0, set(), set(), [])
    ids = {}

    def sid(s):
        if s not in ids:
            ids[s] = nfa.add_state(final=good(*s))
        return ids[s]

    start = (A.dfa.start, zero)
    nfa.starts.add(sid(start))
    todo = [start]
    while todo:
        q, c = todo.pop()
        src = ids[(q, c)]
        for xi, x in enumerate(letters):
            for yi, c2 in opts(c, x):
                s = (T[q][yi], c2)
                new = s not in ids
                nfa.add_edge(src, xi, sid(s))
                if new:
                    todo.append(s)
    return fa.minimize(fa.determinize(nfa))


def from_language(dfa: fa.Dfa, d: int, m: int = 1) -> AutoSet:
    """Value closure of a DFA over any sub-alphabet of the signed digits."""
    return value_closure(fa.minimize(dfa), d, m)


# basic sets

def empty(d: int, m: int = 1) -> AutoSet:
    return AutoSet(d, m, fa.minimize(fa.empty_language(signed_alphabet(d, m))))


def everything(d: int, m: int = 1) -> AutoSet:
    return AutoSet(d, m, fa.minimize(fa.universal(signed_alphabet(d, m))))


def finite(values: Iterable, d: int, m: int = 1) -> AutoSet:
    words = [canonical_rep(as_letter(v), d) for v in values]
    for w in words:
        if w and len(w[0]) != m:
            raise ValueError("dimension mismatch")
    return value_closure(fa.from_words(signed_alphabet(d, m), words), d, m)


def singleton(value, d: int, m: int = 1) -> AutoSet:
    return finite([value], d, m)


@lru_cache(maxsize=None)
def naturals(d: int) -> AutoSet:
    """The nonnegative integers (dimension 1)."""
    return from_language(fa.universal(digit_alphabet(d)), d)


@lru_cache(maxsize=None)
def negatives(d: int) -> AutoSet:
    """The strictly negative integers (dimension 1)."""
    letters = [(-k,) for k in range(d)]
    # nonpositive digits with at least one nonzero digit
    rows = [[0 if a == (0,) else 1 for a in letters], [1] * d]
    return from_language(fa.Dfa(letters, rows, 0, {1}), d)


# algebra

def union(A: AutoSet, B: AutoSet) -> AutoSet:
    _check_pair(A, B)
    return _wrap(A.base, A.dim, fa.union(A.dfa, B.dfa))


def intersection(A: AutoSet, B: AutoSet) -> AutoSet:
    _check_pair(A, B)
    return _wrap(A.base, A.dim, fa.intersection(A.dfa, B.dfa))


def difference(A: AutoSet, B: AutoSet) -> AutoSet:
    _check_pair(A, B)
    return _wrap(A.base, A.dim, fa.difference(A.dfa, B.dfa))


def complement(A: AutoSet) -> AutoSet:
    return AutoSet(A.base, A.dim, fa.complement(A.dfa))


def negate(A: AutoSet) -> AutoSet:
    sig = A.dfa.alphabet
    perm = [A.dfa.letter_index(tuple(-v for v in a)) for a in sig]
    rows = [[row[j] for j in perm] for row in A.dfa.trans]
    return _wrap(A.base, A.dim, fa.Dfa(sig, rows, A.dfa.start, A.dfa.finals))


@lru_cache(maxsize=None)
def _adder_table(d: int, m: int):
    """(carry, z) -> list of (x index, y index, next carry) with c + x + y = z + d * next."""
    sig = signed_alphabet(d, m)
    carries = list(iproduct(range(-2, 3), repeat=m))
    table = {}
    for c in carries:
        for z in sig:
            out = []
            for xi, x in enumerate(sig):
                for yi, y in enumerate(sig):
                    tot = [ci + a + b - zz for ci, a, b, zz in zip(c, x, y, z)]
                    if all(v % d == 0 for v in tot):
                        out.append((xi, yi, tuple(v // d for v in tot)))
            table[(c, z)] = out
    return table


def minkowski_sum(A: AutoSet, B: AutoSet) -> AutoSet:
    """{a + b : a in A, b in B} via a three-track carry automaton."""
    _check_pair(A, B)
    d, m = A.base, A.dim
    sig = signed_alphabet(d, m)
    table = _adder_table(d, m)
    zero = _vec(0, m)
    TA, TB = A.dfa.trans, B.dfa.trans
    start = (A.dfa.start, B.dfa.start, zero)
    nfa = fa.Nfa(sig, 0, set(), set(), [])
    ids = {}

    def sid(s):
        if s not in ids:
            ids[s] = nfa.add_state(final=s[2] == zero and s[0] in A.dfa.finals and s[1] in B.dfa.finals)
        return ids[s]

    nfa.starts.add(sid(start))
    todo = [start]
    while todo:
        s = todo.pop()
        p, q, c = s
        src = ids[s]
        for zi, z in enumerate(sig):
            for xi, yi, c2 in table[(c, z)]:
                t = (TA[p][xi], TB[q][yi], c2)
                new = t not in ids
                nfa.add_edge(src, zi, sid(t))
                if new:
                    todo.append(t)
    raw = fa.minimize(fa.determinize(nfa))
    return value_closure(raw, d, m)


def translate(A: AutoSet, c) -> AutoSet:
    """c + A: read x, feed the letters x_i - gamma_i to the lifted recognizer of A."""
    c = as_letter(c)
    if len(c) != A.dim:
        raise ValueError("dimension mismatch")
    if all(v == 0 for v in c):
        return A
    d, m = A.base, A.dim
    gamma = canonical_rep(c, d)
    zero = _vec(0, m)
    sig = signed_alphabet(d, m)
    wide = list(iproduct(range(-2 * d + 2, 2 * d - 1), repeat=m))
    L = lift(A, wide)
    k = len(gamma)

    def step(state, x):
        pos, q = state
        g = gamma[pos] if pos < k else zero
        return min(pos + 1, k), L.step(q, tuple(a - b for a, b in zip(x, g)))

    def final(state):
        pos, q = state
        rest = tuple(tuple(-v for v in g) for g in gamma[pos:])
        return L.run(rest, q) in L.finals

    return _wrap(d, m, fa.from_function(sig, (0, L.start), step, final))


def nonneg_part(A: AutoSet) -> AutoSet:
    return intersection(A, naturals(A.base))


def digit_language(A: AutoSet) -> fa.Dfa:
    """Minimal DFA for the nonnegative-digit words accepted by A (dimension 1)."""
    sig = A.dfa.alphabet
    keep = digit_alphabet(A.base, A.dim)
    cols = [sig.index(a) for a in keep]
    rows = [[row[j] for j in cols] for row in A.dfa.trans]
    return fa.minimize(fa.Dfa(keep, rows, A.dfa.start, A.dfa.finals))


def is_subset_of_naturals(A: AutoSet) -> bool:
    if A.dim != 1:
        raise ValueError("dimension 1 only")
    return fa.is_empty(intersection(A, negatives(A.base)).dfa)


def enumerate_members(A: AutoSet, lo: int, hi: int) -> list:
    return [a for a in range(lo, hi + 1) if A.member(a)]


# genericity

@dataclass(frozen=True)
class Genericity:
    generic: bool
    offsets: tuple = ()        # translates covering the set's ambient half-line or line
    witness: Optional[tuple] = None   # (r, s, tau) for a non-generic tail
    tail: Optional[str] = None        # "positive" or "negative" for the failing tail

    def to_dict(self) -> dict:
        out = {"generic": self.generic}
        if self.generic:
            out["offsets"] = [min(self.offsets), max(self.offsets)]
        else:
            r, s, tau = self.witness
            out["witness"] = {"r": r, "s": s, "suffix": [a[0] for a in tau]}
            out["tail"] = self.tail
        return out


GAP_SCAN_CAP = 1 << 17


def _max_gap(A: AutoSet, limit: int) -> Optional[int]:
    """Largest distance from any x in [0, limit] to the next member >= x."""
    nxt = next((x for x in range(limit + 1, 2 * limit + 3) if A.member(x)), None)
    if nxt is None:
        return None
    worst = 0
    for x in range(limit, -1, -1):
        if A.member(x):
            nxt = x
        worst = max(worst, nxt - x)
    return worst


def covers(A: AutoSet, offsets: Iterable[int], lo: int, hi: int) -> bool:
    offs = list(offsets)
    return all(any(A.member(x - t) for t in offs) for x in range(lo, hi + 1))


def is_generic_in_naturals(A: AutoSet) -> Genericity:
    """Decide whether finitely many translates of A (a subset of N) cover N."""
    if A.dim != 1:
        raise ValueError("dimension 1 only")
    if not is_subset_of_naturals(A):
        raise ValueError("set is not contained in the naturals")
    L = digit_language(A)
    w = fa.forbidden_suffix_witness(L)
    if w is not None:
        return Genericity(False, witness=w, tail="positive")
    p = fa.pumping_length(L)
    limit = min(A.base ** (p + 2), GAP_SCAN_CAP)
    gap = _max_gap(A, limit)
    if gap is None:
        raise AssertionError("no forbidden suffix but the set has no members in range")
    offsets = tuple(range(0, -gap - 1, -1))
    if not covers(A, offsets, 0, min(limit, 10 ** 4)):
        raise AssertionError("empirical gap bound failed to cover")
    return Genericity(True, offsets=offsets)


def is_generic_in_integers(A: AutoSet) -> Genericity:
    pos = is_generic_in_naturals(nonneg_part(A))
    if not pos.generic:
        return pos
    neg = is_generic_in_naturals(nonneg_part(negate(A)))
    if not neg.generic:
        return Genericity(False, witness=neg.witness, tail="negative")
    lo, hi = min(pos.offsets), -min(neg.offsets)
    return Genericity(True, offsets=tuple(range(lo, hi + 1)))


# ladders

@dataclass(frozen=True)
class Ladder:
    """Rows a_0..a_N and columns b_0..b_N with relation(a_i, b_j) iff i <= j.

    Each row is a tuple of integers x_1..x_k; the relation is the conjunction
    of (x_l + b in A) == signs[l], or the disjunction when any_of is set. The
    plain relation x + y in A has k = 1.
    """
    rows: tuple
    cols: tuple
    signs: tuple = (True,)
    note: str = "x+y in A"
    any_of: bool = False

    @property
    def N(self) -> int:
        return len(self.rows) - 1

    def holds(self, member: Callable[[int], bool], i: int, j: int) -> bool:
        parts = (member(x + self.cols[j]) == s for x, s in zip(self.rows[i], self.signs))
        return any(parts) if self.any_of else all(parts)

    def matrix(self, member: Callable[[int], bool]) -> list:
        n = len(self.rows)
        return [[self.holds(member, i, j) for j in range(n)] for i in range(n)]

    def verify(self, member: Callable[[int], bool]) -> bool:
        n = len(self.rows)
        if len(self.cols) != n or any(len(r) != len(self.signs) for r in self.rows):
            return False
        return all(self.holds(member, i, j) == (i <= j) for i in range(n) for j in range(n))

    def to_dict(self, member: Optional[Callable[[int], bool]] = None) -> dict:
        out = {"N": self.N, "relation": self.note, "combine": "or" if self.any_of else "and",
               "signs": list(self.signs), "rows": [list(r) for r in self.rows],
               "cols": list(self.cols)}
        if member is not None:
            out["membership"] = [[[member(x + b) for x in r] for b in self.cols] for r in self.rows]
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "Ladder":
        return cls(tuple(tuple(r) for r in obj["rows"]), tuple(obj["cols"]),
                   tuple(obj.get("signs", [True])), obj.get("relation", "x+y in A"),
                   obj.get("combine", "and") == "or")

    @classmethod
    def plain(cls, rows: Sequence[int], cols: Sequence[int]) -> "Ladder":
        return cls(tuple((a,) for a in rows), tuple(cols))


def find_ladder(rel: Callable[[int, int], bool], N: int, row_pool: Sequence[int],
                col_pool: Sequence[int], max_nodes: int = 200_000) -> Optional[tuple]:
    """Backtracking search for a_0..a_N, b_0..b_N from the pools with rel(a_i,b_j) iff i <= j.

    Choices are made in the order a_0, b_0, a_1, b_1, ...; every pair is checked
    when its later member is chosen. Returns (rows, cols) or None.
    """
    cache = {}

    def R(a, b):
        key = (a, b)
        v = cache.get(key)
        if v is None:
            v = cache[key] = rel(a, b)
        return v

    rows, cols = [], []
    budget = [max_nodes]

    def pick_row(i):
        for a in row_pool:
            budget[0] -= 1
            if budget[0] < 0:
                return False
            if a in rows or any(R(a, b) for b in cols):
                continue
            rows.append(a)
            if pick_col(i):
                return True
            rows.pop()
        return False

    def pick_col(i):
        for b in col_pool:
            budget[0] -= 1
            if budget[0] < 0:
                return False
            if b in cols or not all(R(a, b) for a in rows):
                continue
            cols.append(b)
            if i == N or pick_row(i + 1):
                return True
            cols.pop()
        return False

    if pick_row(0):
        return tuple(rows), tuple(cols)
    return None


def seed_pool(d: int, bound: int) -> list:
    """Small integers plus signed multiples k*d^i inside [-bound, bound], ordered by size."""
    pool = set(range(-min(bound, 2 * d * d), min(bound, 2 * d * d) + 1))
    p = 1
    while p <= bound:
        for k in range(1, d):
            for v in (k * p, -k * p):
                if abs(v) <= bound:
                    pool.add(v)
        p *= d
    return sorted(pool, key=lambda v: (abs(v), v))


def ladder_search(A: AutoSet, N: int, bound: int, pool: Optional[Sequence[int]] = None,
                  max_nodes: int = 200_000) -> Optional[Ladder]:
    """Search for an N-ladder of x + y in A with entries in [-bound, bound].

    Absence of a result is not evidence of stability.
    """
    if A.dim != 1:
        raise ValueError("ladder search is implemented for dimension 1")
    cand = list(pool) if pool is not None else seed_pool(A.base, bound)
    cand = [v for v in cand if abs(v) <= bound]
    found = find_ladder(lambda a, b: A.member(a + b), N, cand, cand, max_nodes)
    if found is None:
        return None
    ladder = Ladder.plain(*found)
    assert ladder.verify(A.member)
    return ladder
