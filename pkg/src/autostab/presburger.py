"""Exponent predicates for pumped words, and the order-elimination rewriter.

An exponent predicate describes {t : s_1^t_1 ... s_n^t_n is accepted}. The
rewriter takes a quantifier-free formula over (N, 0, S, residues mod delta, <)
and either removes the order or exhibits a ladder showing it cannot be removed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import permutations, product as iproduct
from math import gcd
from typing import Iterable, Optional, Sequence

from . import automaton as fa


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class ReachProfile:
    """States delta(q, s^t): table[t] for t < threshold + period, then periodic."""
    state: int
    threshold: int
    period: int
    table: tuple

    def at(self, t: int) -> int:
        if t < self.threshold:
            return self.table[t]
        return self.table[self.threshold + (t - self.threshold) % self.period]


def reach_profile(A: fa.Dfa, q: int, word: Sequence) -> ReachProfile:
    word = tuple(word)
    if not word:
        raise ValueError("pumped word must be nonempty")
    seen = {}
    seq = []
    cur = q
    while cur not in seen:
        seen[cur] = len(seq)
        seq.append(cur)
        cur = A.run(word, cur)
    return ReachProfile(q, seen[cur], len(seq) - seen[cur], tuple(seq))


# predicates: disjunctions of conjunctions of atoms over linear terms.
# a term is a tuple of integer coefficients, one per variable.
# atoms: ("eq", term, c)  term == c
#        ("ge", term, c)  term >= c
#        ("mod", term, c, m)  term == c (mod m)

def _unit(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


def _sub(u: tuple, v: tuple) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def _value(term: tuple, t: Sequence[int]) -> int:
    return sum(c * x for c, x in zip(term, t))


def _atom_holds(atom, t) -> bool:
    v = _value(atom[1], t)
    if atom[0] == "eq":
        return v == atom[2]
    if atom[0] == "ge":
        return v >= atom[2]
    return v % atom[3] == atom[2] % atom[3]


@dataclass(frozen=True)
class ExponentPredicate:
    nvars: int
    cases: tuple  # tuple of conjunctions; a conjunction is a tuple of atoms
    modulus: int = 1

    def __call__(self, t: Sequence[int]) -> bool:
        return any(all(_atom_holds(a, t) for a in conj) for conj in self.cases)

    def is_box(self) -> bool:
        return all(sum(1 for c in a[1] if c) == 1 and max(a[1]) == 1 for conj in self.cases for a in conj)

    def boxes(self) -> list:
        """Per-variable view: each case maps a variable to ("=", c) or (">=", N, c)."""
        out = []
        for conj in self.cases:
            box = {}
            for a in conj:
                i = a[1].index(1)
                if a[0] == "eq":
                    box[i] = ("=", a[2])
                elif a[0] == "ge":
                    prev = box.get(i, (">=", 0, None))
                    box[i] = (">=", a[2], prev[2])
                else:
                    prev = box.get(i, (">=", 0, None))
                    box[i] = (">=", prev[1], a[2])
            out.append(box)
        return out

    def text(self) -> str:
        names = [f"t{i + 1}" for i in range(self.nvars)]

        def term(tm):
            parts = []
            for c, nm in zip(tm, names):
                if c == 1:
                    parts.append(f"+{nm}")
                elif c == -1:
                    parts.append(f"-{nm}")
                elif c:
                    parts.append(f"{c:+d}*{nm}")
            s = "".join(parts).lstrip("+")
            return s or "0"

        def atom(a):
            if a[0] == "eq":
                return f"{term(a[1])} = {a[2]}"
            if a[0] == "ge":
                return f"{term(a[1])} >= {a[2]}"
            return f"{term(a[1])} ≡ {a[2]} mod {a[3]}"

        if not self.cases:
            return "false"
        return " | ".join("(" + " & ".join(map(atom, c)) + ")" if c else "true" for c in self.cases)


def normalize(nvars: int, cases: Iterable) -> ExponentPredicate:
    """Rewrite every residue atom to one global modulus (the lcm of all moduli)."""
    cases = [tuple(c) for c in cases]
    mu = reduce(_lcm, (a[3] for c in cases for a in c if a[0] == "mod"), 1)
    out = []
    seen = set()
    for conj in cases:
        fixed = [a for a in conj if a[0] != "mod"]
        options = []
        for a in conj:
            if a[0] == "mod":
                m = a[3]
                options.append([("mod", a[1], r, mu) for r in range(mu) if r % m == a[2] % m])
        for choice in iproduct(*options):
            c = tuple(fixed) + tuple(choice)
            if _consistent_mods(c) and c not in seen:
                seen.add(c)
                out.append(c)
    return ExponentPredicate(nvars, tuple(out), mu)


def _consistent_mods(conj) -> bool:
    res = {}
    for a in conj:
        if a[0] == "mod":
            if res.setdefault(a[1], a[2]) != a[2]:
                return False
    return True


def power_membership(A: fa.Dfa, words: Sequence[Sequence], start: Optional[int] = None,
                     finals: Optional[Iterable[int]] = None) -> ExponentPredicate:
    """Predicate for s_1^t_1 ... s_n^t_n being accepted, by branching on each profile."""
    words = [tuple(w) for w in words]
    if any(not w for w in words):
        raise ValueError("pumped words must be nonempty")
    n = len(words)
    finals = A.finals if finals is None else frozenset(finals)
    memo = {}

    def rec(q: int, i: int) -> list:
        key = (q, i)
        if key in memo:
            return memo[key]
        if i == n:
            res = [()] if q in finals else []
        else:
            prof = reach_profile(A, q, words[i])
            e = _unit(n, i)
            res = []
            for t in range(prof.threshold):
                for rest in rec(prof.table[t], i + 1):
                    res.append((("eq", e, t),) + rest)
            for j in range(prof.period):
                t = prof.threshold + j
                head = (("ge", e, prof.threshold), ("mod", e, t % prof.period, prof.period))
                for rest in rec(prof.table[t], i + 1):
                    res.append(head + rest)
        memo[key] = res
        return res

    q0 = A.start if start is None else start
    return normalize(n, rec(q0, 0))


def padded_power_membership(A: fa.Dfa, patterns: Sequence[Sequence[int]]) -> ExponentPredicate:
    """Predicate over the block lengths k_ij for multi-track words.

    Track i carries l_i1^k_i1 ... l_in^k_in, right-padded with zeros to the
    common length; the word is read letter by letter as tuples. Variables are
    ordered track by track. At each step the shortest remaining first block
    (ties to the earliest track) is consumed in lockstep with the others.
    """
    m = len(patterns)
    var = {}
    for i, pat in enumerate(patterns):
        for j in range(len(pat)):
            var[(i, j)] = len(var)
    n = len(var)
    blocks0 = tuple(
        tuple((int(l), _unit(n, var[(i, j)])) for j, l in enumerate(pat))
        for i, pat in enumerate(patterns)
    )
    zero_term = (0,) * n

    def rec(q, blocks) -> list:
        active = [i for i in range(m) if blocks[i]]
        if not active:
            return [()] if q in A.finals else []
        out = []
        for pos, i0 in enumerate(active):
            t_term = blocks[i0][0][1]
            order = []
            for p2, i in enumerate(active):
                if i != i0:
                    order.append(("ge", _sub(blocks[i][0][1], t_term), 1 if p2 < pos else 0))
            letter = tuple(blocks[i][0][0] if blocks[i] else 0 for i in range(m))
            nxt = []
            for i in range(m):
                if i == i0:
                    nxt.append(blocks[i][1:])
                elif blocks[i]:
                    l, tm = blocks[i][0]
                    nxt.append(((l, _sub(tm, t_term)),) + blocks[i][1:])
                else:
                    nxt.append(())
            nxt = tuple(nxt)
            prof = reach_profile(A, q, (letter,))
            for t in range(prof.threshold):
                for rest in rec(prof.table[t], nxt):
                    out.append(tuple(order) + (("eq", t_term, t),) + rest)
            for j in range(prof.period):
                t = prof.threshold + j
                head = tuple(order) + (("ge", t_term, prof.threshold),
                                       ("mod", t_term, t % prof.period, prof.period))
                for rest in rec(prof.table[t], nxt):
                    out.append(head + rest)
        return out

    if not n:
        return normalize(0, [()] if A.start in A.finals else [])
    cases = (_simplify(c) for c in rec(A.start, blocks0))
    return normalize(n, (c for c in cases if _plausible(c)))


def _plausible(conj: tuple) -> bool:
    """Cheap contradiction check among atoms on the same term (or its negation)."""
    by_term = {}
    for a in conj:
        tm = a[1]
        neg = tuple(-x for x in tm)
        if neg in by_term and neg < tm:
            tm = neg
            a = ("le",) + a[1:] if a[0] == "ge" else (a[0], tm, -a[2]) + a[3:]
        by_term.setdefault(tm, []).append(a)
    for atoms in by_term.values():
        lo, hi, eq = None, None, set()
        for a in atoms:
            if a[0] == "eq":
                eq.add(a[2])
            elif a[0] == "ge":
                lo = a[2] if lo is None else max(lo, a[2])
            elif a[0] == "le":
                hi = -a[2] if hi is None else min(hi, -a[2])
        if len(eq) > 1:
            return False
        if lo is not None and hi is not None and lo > hi:
            return False
        for v in eq:
            if lo is not None and v < lo or hi is not None and v > hi:
                return False
            if any(a[0] == "mod" and a[1] == atoms[0][1] and (v - a[2]) % a[3] for a in atoms):
                return False
    return True


def _simplify(conj: tuple) -> tuple:
    """Drop atoms on the zero term that hold trivially."""
    out = []
    for a in conj:
        if not any(a[1]):
            if a[0] == "ge" and 0 >= a[2] or a[0] == "eq" and a[2] == 0 or a[0] == "mod" and a[2] % a[3] == 0:
                continue
        out.append(a)
    return tuple(out)


def powers_relation(X, d: Optional[int] = None) -> ExponentPredicate:
    """{(k_1..k_n) : (d^k_1, ..., d^k_n) in X} for an automatic X inside N^n."""
    from . import autoset as aset

    d = X.base
    n = X.dim
    if not aset.fa.is_empty(aset.intersection(X, aset.complement(nonneg_orthant(d, n))).dfa):
        raise ValueError("set is not contained in the nonnegative orthant")
    shifted = aset.translate(aset.intersection(X, positive_orthant(d, n)), (-1,) * n)
    # d^k - 1 is the word (d-1)^k on its own track
    return padded_power_membership(shifted.dfa, [[d - 1]] * n)


def nonneg_orthant(d: int, n: int):
    from . import autoset as aset

    return aset.from_language(fa.universal(aset.digit_alphabet(d, n)), d, n)


def positive_orthant(d: int, n: int):
    from . import autoset as aset

    letters = aset.digit_alphabet(d, n)
    full = (1 << n) - 1
    dfa = fa.from_function(
        letters, 0,
        lambda s, a: s | sum(1 << i for i, v in enumerate(a) if v),
        lambda s: s == full,
    )
    return aset.from_language(dfa, d, n)


# formulas over (N, 0, S, residues, <)
#
# A term is (var, offset) with var None for a constant. Atoms:
#   ("eq", t1, t2)       t1 == t2
#   ("lt", t1, t2)       t1 < t2
#   ("mod", t, m, K)     t == K (mod m)
# Connectives: ("and", ...), ("or", ...), ("not", f), ("true",), ("false",).

TRUE = ("true",)
FALSE = ("false",)


def And(*fs):
    out = []
    for f in fs:
        if f == FALSE:
            return FALSE
        if f == TRUE:
            continue
        out.extend(f[1:] if f[0] == "and" else [f])
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else ("and",) + tuple(out)


def Or(*fs):
    out = []
    for f in fs:
        if f == TRUE:
            return TRUE
        if f == FALSE:
            continue
        out.extend(f[1:] if f[0] == "or" else [f])
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else ("or",) + tuple(out)


def Not(f):
    if f == TRUE:
        return FALSE
    if f == FALSE:
        return TRUE
    if f[0] == "not":
        return f[1]
    return ("not", f)


def var(i: int, offset: int = 0) -> tuple:
    return (i, offset)


def const(c: int) -> tuple:
    return (None, c)


def _tval(t, x):
    return t[1] if t[0] is None else x[t[0]] + t[1]


def eval_formula(f, x: Sequence[int]) -> bool:
    op = f[0]
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "not":
        return not eval_formula(f[1], x)
    if op == "and":
        return all(eval_formula(g, x) for g in f[1:])
    if op == "or":
        return any(eval_formula(g, x) for g in f[1:])
    if op == "eq":
        return _tval(f[1], x) == _tval(f[2], x)
    if op == "lt":
        return _tval(f[1], x) < _tval(f[2], x)
    if op == "mod":
        return (_tval(f[1], x) - f[3]) % f[2] == 0
    raise ValueError(f"unknown connective {op!r}")


eval_ldelta = eval_formula


def compile_formula(f):
    """A Python closure equivalent to eval_formula(f, .), for hot loops."""
    def term(t):
        return str(t[1]) if t[0] is None else f"x[{t[0]}]+{t[1]}"

    def go(g):
        op = g[0]
        if op == "true":
            return "True"
        if op == "false":
            return "False"
        if op == "not":
            return f"(not {go(g[1])})"
        if op in ("and", "or"):
            return "(" + f" {op} ".join(go(h) for h in g[1:]) + ")"
        if op == "eq":
            return f"({term(g[1])}=={term(g[2])})"
        if op == "lt":
            return f"({term(g[1])}<{term(g[2])})"
        return f"(({term(g[1])}-{g[3]})%{g[2]}==0)"

    return eval(f"lambda x: {go(f)}")


def atoms(f) -> Iterable:
    if f[0] in ("and", "or"):
        for g in f[1:]:
            yield from atoms(g)
    elif f[0] == "not":
        yield from atoms(f[1])
    elif f[0] in ("eq", "lt", "mod"):
        yield f


def variables(f) -> set:
    out = set()
    for a in atoms(f):
        for t in a[1:3] if a[0] != "mod" else a[1:2]:
            if isinstance(t, tuple) and t[0] is not None:
                out.add(t[0])
    return out


def has_order(f) -> bool:
    return any(a[0] == "lt" and a[1][0] is not None and a[2][0] is not None for a in atoms(f))


def _map_atoms(f, fn):
    op = f[0]
    if op in ("true", "false"):
        return f
    if op == "not":
        return Not(_map_atoms(f[1], fn))
    if op == "and":
        return And(*(_map_atoms(g, fn) for g in f[1:]))
    if op == "or":
        return Or(*(_map_atoms(g, fn) for g in f[1:]))
    return fn(f)


def _fold_atom(a):
    """Evaluate atoms without variables and canonicalize the rest."""
    if a[0] == "mod":
        t, m, K = a[1], a[2], a[3]
        if t[0] is None:
            return TRUE if (t[1] - K) % m == 0 else FALSE
        return ("mod", (t[0], 0), m, (K - t[1]) % m)
    t1, t2 = a[1], a[2]
    if t1[0] is None and t2[0] is None:
        ok = t1[1] == t2[1] if a[0] == "eq" else t1[1] < t2[1]
        return TRUE if ok else FALSE
    if a[0] == "eq":
        if t1[0] is None:
            t1, t2 = t2, t1
        if t2[0] is None:
            v = t2[1] - t1[1]
            return ("eq", (t1[0], 0), (None, v)) if v >= 0 else FALSE
        if t1[0] == t2[0]:
            return TRUE if t1[1] == t2[1] else FALSE
        # x_i + a = x_j + b as S^e x_i = x_j with e >= 0
        if t1[1] < t2[1]:
            t1, t2 = t2, t1
        return ("eq", (t1[0], t1[1] - t2[1]), (t2[0], 0))
    # x + a < y + b
    if t1[0] is not None and t2[0] is not None and t1[0] == t2[0]:
        return TRUE if t1[1] < t2[1] else FALSE
    if t2[0] is None:
        # x + a < c  iff  not (x = c-a or x > c-a) iff x < c - a
        c = t2[1] - t1[1]
        if c <= 0:
            return FALSE
        return Or(*(("eq", (t1[0], 0), (None, k)) for k in range(c)))
    if t1[0] is None:
        # c < y + b  iff  not (y + b <= c)
        c = t1[1] - t2[1]
        if c < 0:
            return TRUE
        return Not(Or(*(("eq", (t2[0], 0), (None, k)) for k in range(c + 1))))
    diff = t1[1] - t2[1]
    if diff >= 0:
        return ("lt", (t1[0], diff), (t2[0], 0))
    # x < y + c with c >= 1 iff not (S^(c-1) y < x)
    return Not(("lt", (t2[0], -diff - 1), (t1[0], 0)))


def normalize_formula(f):
    """Rewrite atoms into the four canonical forms (constants folded)."""
    return _map_atoms(f, _fold_atom)


def formula_constants(f) -> tuple:
    """(M, delta): M exceeds every constant and successor exponent; delta is the lcm of moduli."""
    M, delta = 0, 1
    for a in atoms(f):
        if a[0] == "mod":
            delta = _lcm(delta, a[2])
            continue
        t1, t2 = a[1], a[2]
        if t1[0] is None or t2[0] is None:
            c = (t2[1] - t1[1]) if t1[0] is not None else (t1[1] - t2[1])
            M = max(M, abs(c))
        else:
            M = max(M, abs(t1[1] - t2[1]))
    return M + 1, delta


def substitute(f, j: int, t: tuple):
    """Replace x_j by the term t = (var or None, offset)."""
    def sub(term):
        if term[0] == j:
            return (t[0], t[1] + term[1])
        return term

    def fn(a):
        if a[0] == "mod":
            return _fold_atom(("mod", sub(a[1]), a[2], a[3]))
        return _fold_atom((a[0], sub(a[1]), sub(a[2])))

    return _map_atoms(f, fn)


# text form

def _tokens(text: str) -> list:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_formula(text: str):
    """Parse the prefix form, e.g. (and (mod x1 2 1) (lt (S 2 x1) x2))."""
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of formula")
        pos += 1
        return toks[pos - 1]

    def term():
        tok = take()
        if tok == "(":
            head = take()
            if head != "S":
                raise ValueError(f"expected S in term, got {head!r}")
            e = int(take())
            inner = term()
            if take() != ")":
                raise ValueError("unbalanced term")
            return (inner[0], inner[1] + e)
        if tok.startswith("x"):
            return (int(tok[1:]) - 1, 0)
        return (None, int(tok))

    def form():
        tok = take()
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok != "(":
            raise ValueError(f"unexpected token {tok!r}")
        head = take()
        if head in ("and", "or"):
            parts = []
            while peek() != ")":
                parts.append(form())
            take()
            return And(*parts) if head == "and" else Or(*parts)
        if head == "not":
            g = form()
            take()
            return Not(g)
        if head in ("eq", "lt"):
            t1, t2 = term(), term()
            take()
            return (head, t1, t2)
        if head == "mod":
            t = term()
            m, K = int(take()), int(take())
            take()
            return ("mod", t, m, K)
        if head in ("true", "false"):
            take()
            return TRUE if head == "true" else FALSE
        raise ValueError(f"unknown connective {head!r}")

    f = form()
    if pos != len(toks):
        raise ValueError("trailing tokens in formula")
    return f


def format_formula(f) -> str:
    def term(t):
        if t[0] is None:
            return str(t[1])
        x = f"x{t[0] + 1}"
        return f"(S {t[1]} {x})" if t[1] else x

    op = f[0]
    if op in ("true", "false"):
        return op
    if op == "not":
        return f"(not {format_formula(f[1])})"
    if op in ("and", "or"):
        return f"({op} " + " ".join(format_formula(g) for g in f[1:]) + ")"
    if op == "mod":
        return f"(mod {term(f[1])} {f[2]} {f[3]})"
    return f"({op} {term(f[1])} {term(f[2])})"


# order elimination

@dataclass(frozen=True)
class FormulaLadder:
    """Rows fix the variables in `left`, columns those in `right`.

    The formula holds on row k joined with column l iff k <= l.
    """
    left: tuple
    right: tuple
    rows: tuple   # each row: tuple of values for `left`
    cols: tuple

    @property
    def N(self) -> int:
        return len(self.rows) - 1

    def point(self, k: int, l: int, n: int) -> tuple:
        x = [0] * n
        for v, val in zip(self.left, self.rows[k]):
            x[v] = val
        for v, val in zip(self.right, self.cols[l]):
            x[v] = val
        return tuple(x)

    def verify(self, f, n: int) -> bool:
        size = len(self.rows)
        if len(self.cols) != size:
            return False
        return all(eval_formula(f, self.point(k, l, n)) == (k <= l)
                   for k in range(size) for l in range(size))

    def extend(self, j: int, source: Optional[int], value: int) -> "FormulaLadder":
        """Add x_j = x_source + value (or the constant value when source is None)."""
        if source is None or source in self.left:
            pos = None if source is None else self.left.index(source)
            rows = tuple(r + ((value if pos is None else r[pos] + value),) for r in self.rows)
            return FormulaLadder(self.left + (j,), self.right, rows, self.cols)
        pos = self.right.index(source)
        cols = tuple(c + (c[pos] + value,) for c in self.cols)
        return FormulaLadder(self.left, self.right + (j,), self.rows, cols)


@dataclass(frozen=True)
class Rewrite:
    """Outcome of order elimination: an order-free formula or a ladder."""
    formula: Optional[tuple]
    ladder: Optional[FormulaLadder]
    M: int
    delta: int

    @property
    def stable(self) -> bool:
        return self.formula is not None


def _spread_point(order: Sequence[int], residues: dict, W: int, n: int) -> tuple:
    x = [0] * n
    for p, v in enumerate(order):
        x[v] = (p + 1) * W + residues[v]
    return tuple(x)


def _spread_formula(active: Sequence[int], residues: dict, M: int, delta: int):
    parts = []
    for i in active:
        if delta > 1:
            parts.append(("mod", (i, 0), delta, residues[i]))
        for K in range(M):
            parts.append(Not(("eq", (i, 0), (None, K))))
    for i in active:
        for j in active:
            if i != j:
                for e in range(M):
                    parts.append(Not(("eq", (i, e), (j, 0))))
    return And(*parts)


def _adjacent_failure(truth: dict, active: tuple):
    """A true ordering with an adjacent swap that is false, as (order, position)."""
    for order, ok in truth.items():
        if not ok:
            continue
        for p in range(1, len(order)):
            swapped = order[:p - 1] + (order[p], order[p - 1]) + order[p + 1:]
            if not truth[swapped]:
                return order, p
    return None


def _zigzag(order: tuple, p: int, residues: dict, W: int, N: int) -> FormulaLadder:
    """Ladder with the variable at position p-1 below position p exactly when k <= l."""
    left = order[:p]
    right = order[p:]
    low = {v: (q + 1) * W + residues[v] for q, v in enumerate(order[:p - 1])}
    high = {v: (p + 2 * N + 3 + q) * W + residues[v] for q, v in enumerate(order[p + 1:])}
    a, b = order[p - 1], order[p]
    rows = []
    for k in range(N + 1):
        vals = dict(low)
        vals[a] = (p + 2 * k) * W + residues[a]
        rows.append(tuple(vals[v] for v in left))
    cols = []
    for l in range(N + 1):
        vals = dict(high)
        vals[b] = (p + 2 * l + 1) * W + residues[b]
        cols.append(tuple(vals[v] for v in right))
    return FormulaLadder(tuple(left), tuple(right), tuple(rows), tuple(cols))


def ldelta_rewrite(f, n: Optional[int] = None, N: int = 5) -> Rewrite:
    """Remove the order from a quantifier-free formula, or produce an N-ladder.

    Tuples with some coordinate below M, or two coordinates closer than M,
    satisfy an equality atom; those cases are handled by substituting the
    equality and recursing on fewer variables. On the remaining spread-out
    tuples the truth value depends only on residues and the order of the
    coordinates; if it depends on the order, an adjacent swap changes it and
    the zig-zag ladder follows.
    """
    f = normalize_formula(f)
    if n is None:
        n = max(variables(f), default=-1) + 1
    M0, delta0 = formula_constants(f)
    memo = {}

    def rec(g, active: tuple):
        key = (g, active)
        if key in memo:
            return memo[key]
        if not active:
            res = TRUE if eval_formula(g, (0,) * n) else FALSE
            memo[key] = res
            return res
        M, delta = formula_constants(g)
        disjuncts = []
        for j in active:
            rest = tuple(v for v in active if v != j)
            for K in range(M):
                sub = rec(substitute(g, j, (None, K)), rest)
                if isinstance(sub, FormulaLadder):
                    return sub.extend(j, None, K)
                disjuncts.append(And(("eq", (j, 0), (None, K)), sub))
            for i in rest:
                for e in range(M):
                    sub = rec(substitute(g, j, (i, e)), rest)
                    if isinstance(sub, FormulaLadder):
                        return sub.extend(j, i, e)
                    disjuncts.append(And(("eq", (i, e), (j, 0)), sub))
        W = delta * (M + 2)
        test = compile_formula(g)
        orders = list(permutations(active))
        for res_vec in iproduct(range(delta), repeat=len(active)):
            residues = dict(zip(active, res_vec))
            truth = {o: test(_spread_point(o, residues, W, n)) for o in orders}
            if all(truth.values()):
                disjuncts.append(_spread_formula(active, residues, M, delta))
            elif any(truth.values()):
                order, p = _adjacent_failure(truth, active)
                return _zigzag(order, p, residues, W, N)
        res = Or(*disjuncts)
        memo[key] = res
        return res

    out = rec(f, tuple(range(n)))
    if isinstance(out, FormulaLadder):
        return Rewrite(None, out, M0, delta0)
    return Rewrite(out, None, M0, delta0)
