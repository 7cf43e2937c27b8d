"""Symbolic F-set building blocks and their automata.

C(a; delta) is the set {a + d^delta a + ... + d^(n delta) a : n >= 0}. Finite
sums of translates of such sets are sparse; cosets r + sZ supply the
non-sparse stable sets.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence

from . import automaton as fa
from . import autoset as aset
from .autoset import AutoSet
from .digits import as_letter, canonical_rep, evaluate, evaluate1, fixed_length_word, power


@dataclass(frozen=True)
class CycleSet:
    a: tuple
    delta: int
    base: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_letter(self.a))
        if self.delta < 1:
            raise ValueError("delta must be positive")
        if self.base < 2:
            raise ValueError("base must be at least 2")

    @property
    def dim(self) -> int:
        return len(self.a)


def cycle_elements(C: CycleSet, n: int) -> list:
    """First n elements, from el(0) = a and el(k+1) = a + d^delta el(k)."""
    out = []
    cur = None
    f = C.base ** C.delta
    for _ in range(n):
        cur = C.a if cur is None else tuple(x + f * y for x, y in zip(C.a, cur))
        out.append(cur)
    return out


def cycle_word_form(C: CycleSet) -> tuple:
    """A word of length delta with value a; any overflow sits in the last letter."""
    d, delta = C.base, C.delta
    cols = []
    for v in C.a:
        sign = -1 if v < 0 else 1
        rest = abs(v)
        col = []
        for _ in range(delta - 1):
            rest, r = divmod(rest, d)
            col.append(sign * r)
        col.append(sign * rest)
        cols.append(col)
    return tuple(tuple(c[i] for c in cols) for i in range(delta))


def cycle_autoset(C: CycleSet) -> AutoSet:
    if C.dim == 1:
        a = C.a[0]
        if a == 0:
            return aset.singleton(0, C.base)
        if a < 0:
            return aset.negate(cycle_autoset(CycleSet(-a, C.delta, C.base)))
        return regex_autoset(cycle_to_regex(C))
    sigma = cycle_word_form(C)
    letters = sorted(set(sigma))
    # sigma sigma*
    n = len(sigma)
    nfa = fa.Nfa(tuple(letters), 0, set(), set(), [])
    for i in range(n + 1):
        nfa.add_state(final=(i == n))
    nfa.starts.add(0)
    for i, a in enumerate(sigma):
        nfa.add_edge(i, letters.index(a), i + 1)
    nfa.add_edge(n, letters.index(sigma[0]), 1)
    return aset.value_closure(fa.minimize(fa.determinize(nfa)), C.base, C.dim)


def regex_autoset(R: "RegexForm") -> AutoSet:
    """Digit-level automaton for x y* z plus the exceptions."""
    d = R.base
    digits = aset.digit_alphabet(d)
    nfa = fa.Nfa(digits, 0, set(), set(), [])

    def chain(src, word):
        q = src
        for a in word:
            t = nfa.add_state()
            nfa.add_edge(q, digits.index(a), t)
            q = t
        return q

    s0 = nfa.add_state()
    nfa.starts.add(s0)
    loop = chain(s0, R.x)
    if R.y:
        end = chain(loop, R.y[:-1])
        nfa.add_edge(end, digits.index(R.y[-1]), loop)
    nfa.finals.add(chain(loop, R.z))
    for v in R.exceptions:
        nfa.finals.add(chain(s0, canonical_rep(v, d)))
    return aset.value_closure(fa.minimize(fa.determinize(nfa)), d, 1)


# regular-expression forms for one-dimensional cycles

@dataclass(frozen=True)
class RegexForm:
    """{[x y^k z] : k >= 0} together with finitely many extra elements.

    threshold is the index from which the pumped family takes over.
    """
    x: tuple
    y: tuple
    z: tuple
    threshold: int
    exceptions: tuple
    base: int

    def element(self, k: int) -> int:
        return evaluate1(self.x + self.y * k + self.z, self.base)

    def elements(self, count: int) -> list:
        return [self.element(k) for k in range(count)]


def carry_sequence(a: int, delta: int, d: int, steps: int) -> list:
    """b_i with [sigma^i] = b_i d^(i delta) + c_i and 0 <= c_i < d^(i delta)."""
    D = d ** delta
    out = [0]
    for _ in range(steps):
        out.append((out[-1] + a) // D)
    return out


def cycle_to_regex(C: CycleSet) -> RegexForm:
    """Nonnegative one-dimensional C(a;delta) as [u v^k w] past a threshold."""
    if C.dim != 1 or C.a[0] < 0:
        raise ValueError("cycle_to_regex needs a one-dimensional a >= 0")
    a, delta, d = C.a[0], C.delta, C.base
    D = d ** delta
    b, c, N = 0, 0, 0
    # walk until the carry stops changing; b never exceeds a, so this ends
    while True:
        nb = (b + a) // D
        if N >= 1 and nb == b:
            break
        c += d ** (N * delta) * ((b + a) % D)
        b = nb
        N += 1
        assert b <= a
    p = (b + a) % D
    u = fixed_length_word(c, N * delta, d)
    v = fixed_length_word(p, delta, d)
    w = canonical_rep(b, d)
    elems = cycle_elements(C, N - 1)
    return RegexForm(u, v, w, N, tuple(e[0] for e in elems), d)


def _all_top_digit(word: tuple, d: int) -> bool:
    return all(l[0] == d - 1 for l in word)


def translate_regex(gamma: int, u: tuple, v: tuple, w: tuple, d: int, search: int = 256) -> RegexForm:
    """gamma + {[u v^k w] : k >= 0} as a RegexForm over nonnegative digits.

    Exceptions hold the values for k below the threshold.
    """
    if not v:
        raise ValueError("the pumped word must be nonempty")
    if gamma == 0:
        return RegexForm(u, v, w, 0, (), d)
    gamma0, orig = gamma, (u, v, w)
    if _all_top_digit(v, d) and gamma + evaluate1(u, d) - d ** len(u) >= 0:
        # [u v^k w] = [u] - d^|u| + d^(|u|+k|v|) ([w] + 1)
        gamma = gamma + evaluate1(u, d) - d ** len(u)
        u = ((0,),) * len(u)
        v = ((0,),) * len(v)
        w = canonical_rep(evaluate1(w, d) + 1, d)
    for N in range(search):
        head = u + v * N
        val = gamma + evaluate1(head, d)
        x = fixed_length_word(val, len(head), d)
        if x is not None:
            ou, ov, ow = orig
            ex = tuple(gamma0 + evaluate1(ou + ov * k + ow, d) for k in range(N))
            return RegexForm(x, v, w, N, ex, d)
    raise ValueError("translate does not stay in the naturals")


def coset_automaton(r: int, s: int, d: int) -> AutoSet:
    """r + sZ: the DFA tracks the value of the prefix and the next digit weight mod s."""
    if s < 1:
        raise ValueError("modulus must be positive")
    sig = aset.signed_alphabet(d, 1)
    r %= s
    dfa = fa.from_function(
        sig, (0, 1 % s),
        lambda st, a: ((st[0] + a[0] * st[1]) % s, (st[1] * d) % s),
        lambda st: st[0] == r,
    )
    return AutoSet(d, 1, fa.minimize(dfa))


# description trees

class Expr:
    def __add__(self, other):
        return Sum(self, other)

    def __or__(self, other):
        return Union(self, other)

    def __and__(self, other):
        return Inter(self, other)

    def __sub__(self, other):
        return Diff(self, other)

    def __invert__(self):
        return Compl(self)


@dataclass(frozen=True)
class Cycle(Expr):
    a: int
    delta: int

    def text(self):
        return f"C({self.a};{self.delta})"


@dataclass(frozen=True)
class Coset(Expr):
    r: int
    s: int

    def text(self):
        return f"coset({self.r},{self.s})"


@dataclass(frozen=True)
class Powers(Expr):
    def text(self):
        return "powers()"


@dataclass(frozen=True)
class Finite(Expr):
    values: tuple

    def text(self):
        return "{" + ",".join(map(str, self.values)) + "}"


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr

    def text(self):
        return f"({self.left.text()} + {self.right.text()})"


@dataclass(frozen=True)
class Trans(Expr):
    b: int
    body: Expr

    def text(self):
        return f"trans({self.b}, {self.body.text()})"


@dataclass(frozen=True)
class Neg(Expr):
    body: Expr

    def text(self):
        return f"neg({self.body.text()})"


@dataclass(frozen=True)
class Union(Expr):
    left: Expr
    right: Expr

    def text(self):
        return f"union({self.left.text()}, {self.right.text()})"


@dataclass(frozen=True)
class Inter(Expr):
    left: Expr
    right: Expr

    def text(self):
        return f"inter({self.left.text()}, {self.right.text()})"


@dataclass(frozen=True)
class Diff(Expr):
    left: Expr
    right: Expr

    def text(self):
        return f"diff({self.left.text()}, {self.right.text()})"


@dataclass(frozen=True)
class Compl(Expr):
    body: Expr

    def text(self):
        return f"compl({self.body.text()})"


EMPTY = Finite(())


def union_all(parts: Sequence[Expr]) -> Expr:
    parts = list(parts)
    if not parts:
        return EMPTY
    return reduce(Union, parts)


def sum_all(parts: Sequence[Expr]) -> Expr:
    parts = list(parts)
    if not parts:
        return Finite((0,))
    return reduce(Sum, parts)


def nnf(e: Expr, negated: bool = False) -> Expr:
    """Push complements down to non-Boolean nodes; differences become intersections."""
    if isinstance(e, Compl):
        return nnf(e.body, not negated)
    if isinstance(e, Diff):
        return nnf(Inter(e.left, Compl(e.right)), negated)
    if isinstance(e, Union):
        l, r = nnf(e.left, negated), nnf(e.right, negated)
        return Inter(l, r) if negated else Union(l, r)
    if isinstance(e, Inter):
        l, r = nnf(e.left, negated), nnf(e.right, negated)
        return Union(l, r) if negated else Inter(l, r)
    return Compl(e) if negated else e


def to_autoset(e: Expr, d: int) -> AutoSet:
    if isinstance(e, Cycle):
        return cycle_autoset(CycleSet(e.a, e.delta, d))
    if isinstance(e, Coset):
        return coset_automaton(e.r, e.s, d)
    if isinstance(e, Powers):
        return powers_autoset(d)
    if isinstance(e, Finite):
        return aset.finite(e.values, d)
    if isinstance(e, Sum):
        return aset.minkowski_sum(to_autoset(e.left, d), to_autoset(e.right, d))
    if isinstance(e, Trans):
        return aset.translate(to_autoset(e.body, d), e.b)
    if isinstance(e, Neg):
        return aset.negate(to_autoset(e.body, d))
    if isinstance(e, Union):
        return aset.union(to_autoset(e.left, d), to_autoset(e.right, d))
    if isinstance(e, Inter):
        return aset.intersection(to_autoset(e.left, d), to_autoset(e.right, d))
    if isinstance(e, Diff):
        return aset.difference(to_autoset(e.left, d), to_autoset(e.right, d))
    if isinstance(e, Compl):
        return aset.complement(to_autoset(e.body, d))
    raise TypeError(f"not a set expression: {e!r}")


def powers_autoset(d: int) -> AutoSet:
    """d^N from the digit language 0*1."""
    digits = aset.digit_alphabet(d)
    rows = [[2] * d for _ in range(3)]
    rows[0][0] = 0
    rows[0][1] = 1
    rows[1][0] = 1
    return aset.from_language(fa.Dfa(digits, rows, 0, {1}), d)


def powers_identity(d: int) -> Expr:
    """{1} united with 1 + C(d-1;1)."""
    return Union(Finite((1,)), Trans(1, Cycle(d - 1, 1)))


# direct enumeration, independent of the automata

def _generate(e: Expr, d: int, cap: int) -> set:
    if isinstance(e, Cycle):
        out = set()
        if e.a == 0:
            return {0}
        cur = e.a
        while abs(cur) <= cap:
            out.add(cur)
            cur = e.a + d ** e.delta * cur
        return out
    if isinstance(e, Powers):
        out, p = set(), 1
        while p <= cap:
            out.add(p)
            p *= d
        return out
    if isinstance(e, Finite):
        return {v for v in e.values if abs(v) <= cap}
    if isinstance(e, Sum):
        wide = cap * d ** 4 + 1
        L, R = _generate(e.left, d, wide), _generate(e.right, d, wide)
        return {x + y for x in L for y in R if abs(x + y) <= cap}
    if isinstance(e, Trans):
        return {x + e.b for x in _generate(e.body, d, cap + abs(e.b)) if abs(x + e.b) <= cap}
    if isinstance(e, Neg):
        return {-x for x in _generate(e.body, d, cap)}
    if isinstance(e, Union):
        return _generate(e.left, d, cap) | _generate(e.right, d, cap)
    if isinstance(e, Inter):
        return _generate(e.left, d, cap) & _generate(e.right, d, cap)
    if isinstance(e, Diff):
        return _generate(e.left, d, cap) - _generate(e.right, d, cap)
    if isinstance(e, Coset):
        return {x for x in range(-cap, cap + 1) if (x - e.r) % e.s == 0}
    if isinstance(e, Compl):
        inner = _generate(e.body, d, cap)
        return {x for x in range(-cap, cap + 1) if x not in inner}
    raise TypeError(f"not a set expression: {e!r}")


def window_members(e: Expr, d: int, lo: int, hi: int) -> set:
    """Members in [lo, hi] by direct arithmetic.

    Sums are formed from summand elements up to d^4 times the window radius,
    which is exact whenever no cancellation between larger summands lands in
    the window.
    """
    cap = max(abs(lo), abs(hi))
    return {x for x in _generate(e, d, cap) if lo <= x <= hi}
