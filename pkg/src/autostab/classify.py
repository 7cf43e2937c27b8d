"""Stability classification of d-automatic subsets of Z with certificates.

Sparse sets are decided exactly: the set is cut into ordered-exponent pieces
alpha + {[s_1^e_1] + ... + [s_n^e_n] : e_1 <= ... <= e_n}, the exponent
relation is computed as a formula, and the order-elimination rewriter either
removes the order (yielding an F-set description) or produces a ladder.
Non-sparse sets go through the forbidden-suffix constructions; the generic
non-sparse case has no decision procedure and is reported as inconclusive
after a bounded ladder search.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations_with_replacement, permutations, product as iproduct
from math import lcm
from typing import Optional, Sequence

from . import automaton as fa
from . import autoset as aset
from . import fsets as fs
from . import presburger as pb
from .autoset import AutoSet, Ladder
from .digits import canonical_rep, evaluate1, fixed_length_word

DEFAULT_N = 5


def canonical_words(d: int) -> fa.Dfa:
    """Canonical representations: one sign throughout, no trailing zero; epsilon for 0."""
    sig = aset.signed_alphabet(d, 1)
    # states: start, zeros so far, (sign, last letter nonzero)
    START, ZEROS, DEAD = "s", "z", "x"

    def step(q, a):
        v = a[0]
        if q == DEAD:
            return DEAD
        if q in (START, ZEROS):
            return ZEROS if v == 0 else (1 if v > 0 else -1, True)
        sign, _ = q
        if v == 0:
            return (sign, False)
        if (v > 0) != (sign > 0):
            return DEAD
        return (sign, True)

    return fa.minimize(fa.from_function(sig, START, step, lambda q: q == START or (q not in (ZEROS, DEAD) and q[1])))


def canonical_language(A: AutoSet) -> fa.Dfa:
    if A.dim != 1:
        raise ValueError("dimension 1 only")
    return fa.minimize(fa.intersection(A.dfa, canonical_words(A.base)))


def is_sparse_set(A: AutoSet):
    return fa.is_sparse(canonical_language(A))


# ordered-exponent decomposition

def _sigma_word(value: int, length: int, d: int) -> tuple:
    """Length-`length` word of the given value; overflow goes into the last letter."""
    return fs.cycle_word_form(fs.CycleSet(value, length, d))


@dataclass(frozen=True)
class CycleComponent:
    """alpha + {[s_1^e_1] + ... + [s_n^e_n] : e_1 <= ... <= e_n}; every s_i has the same length."""
    alpha: int
    sigmas: tuple      # integer values [s_i]
    length: int        # common word length of the s_i
    base: int

    @property
    def n(self) -> int:
        return len(self.sigmas)

    @property
    def words(self) -> tuple:
        return tuple(_sigma_word(s, self.length, self.base) for s in self.sigmas)

    def power_value(self, i: int, e: int) -> int:
        """[s_i^e]."""
        D = self.base ** self.length
        return self.sigmas[i] * (D ** e - 1) // (D - 1)

    def value(self, exps: Sequence[int]) -> int:
        return self.alpha + sum(self.power_value(i, e) for i, e in enumerate(exps))

    def elements(self, bound: int) -> set:
        """Members of absolute value at most bound."""
        if not self.sigmas:
            return {self.alpha} if abs(self.alpha) <= bound else set()
        # a canonical word of length L has absolute value at least d^(L-1)
        digits = 1
        while self.base ** (digits - 1) <= bound:
            digits += 1
        top = digits // self.length + 1
        out = set()
        for exps in combinations_with_replacement(range(top + 1), self.n):
            v = self.value(exps)
            if abs(v) <= bound:
                out.add(v)
        return out

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "sigmas": list(self.sigmas), "length": self.length,
                "words": [[l[0] for l in w] for w in self.words]}


@dataclass(frozen=True)
class CycleDecomposition:
    components: tuple
    base: int

    def elements(self, bound: int) -> set:
        out = set()
        for c in self.components:
            out |= c.elements(bound)
        return out

    def to_dict(self) -> dict:
        return {"base": self.base, "components": [c.to_dict() for c in self.components]}


def _component_cycles(parts: tuple, d: int) -> list:
    """Ordered-exponent pieces for one bounded component u0 w1* u1 ... wn* un."""
    us = [tuple(parts[i]) for i in range(0, len(parts), 2)]
    ws = [tuple(parts[i]) for i in range(1, len(parts), 2)]
    if not ws:
        return [CycleComponent(evaluate1(us[0], d), (), 1, d)]
    L = reduce(lcm, (len(w) for w in ws))
    out = []
    # w* = union over j < L/|w| of w^j (w^(L/|w|))*
    for js in iproduct(*(range(L // len(w)) for w in ws)):
        u = [us[0] + ws[0] * js[0]] + [us[i] + (ws[i] * js[i] if i < len(ws) else ()) for i in range(1, len(us))]
        W = [()] + [w * (L // len(w)) for w in ws] + [()]
        D = d ** L
        Q = [0]
        for x in u:
            Q.append(Q[-1] + len(x))
        sig = []
        for i in range(1, len(ws) + 1):
            s = (D - 1) * d ** Q[i] * evaluate1(u[i], d) + d ** Q[i] * evaluate1(W[i], d) \
                - d ** Q[i + 1] * evaluate1(W[i + 1], d)
            sig.append(s)
        alpha = evaluate1(tuple(x for part in u for x in part), d)
        out.append(CycleComponent(alpha, tuple(sig), L, d))
    return out


def sparse_to_cycles(A: AutoSet, sparse: Optional[fa.Sparse] = None) -> CycleDecomposition:
    """Write a sparse A as a finite union of ordered-exponent pieces."""
    if sparse is None:
        sparse = is_sparse_set(A)
    if not sparse.sparse:
        raise ValueError("set is not sparse")
    comps = []
    seen = set()
    for parts in sparse.components:
        for c in _component_cycles(parts, A.base):
            if c not in seen:
                seen.add(c)
                comps.append(c)
    return CycleDecomposition(tuple(comps), A.base)


# exponent relations

def _gap_atom(atom, order: tuple):
    """Translate an atom on the gap t_k = e_f(k) - e_f(k-1) (e_f(0) = 0) into a formula."""
    k = atom[1].index(1)
    hi = order[k]
    lo = order[k - 1] if k else None
    if atom[0] == "eq":
        if lo is None:
            return ("eq", (hi, 0), (None, atom[2]))
        return ("eq", (lo, atom[2]), (hi, 0))
    if atom[0] == "ge":
        if lo is None:
            return pb.Not(("lt", (hi, 0), (None, atom[2])))
        return pb.Not(("lt", (hi, 0), (lo, atom[2])))
    r, m = atom[2], atom[3]
    if lo is None:
        return ("mod", (hi, 0), m, r)
    return pb.Or(*(pb.And(("mod", (lo, 0), m, s), ("mod", (hi, 0), m, (s + r) % m)) for s in range(m)))


def exponent_formula(A: AutoSet, comp: CycleComponent):
    """Formula for X = {e in N^n : alpha + sum [s_i^e_i] in A}, one disjunct per ordering."""
    if comp.n == 0:
        return pb.TRUE if A.member(comp.alpha) else pb.FALSE
    shifted = aset.translate(A, -comp.alpha)
    # every s_i is a multiple of d^Q; strip that factor so the lifted letters stay small
    d, Q = comp.base, 0
    while all(s % d ** (Q + 1) == 0 for s in comp.sigmas):
        Q += 1
    if Q:
        dfa = shifted.dfa
        start = dfa.run(((0,),) * Q, dfa.start)
        shifted = AutoSet(d, 1, fa.Dfa(dfa.alphabet, dfa.trans, start, dfa.finals))
        comp = CycleComponent(0, tuple(s // d ** Q for s in comp.sigmas), comp.length, d)
    words = comp.words
    parts = []
    lifted = {}
    for order in permutations(range(comp.n)):
        taus = []
        for k in range(comp.n):
            taus.append(tuple((sum(words[order[j]][p][0] for j in range(k, comp.n)),)
                              for p in range(comp.length)))
        letters = tuple(sorted({a for t in taus for a in t}))
        if letters not in lifted:
            lifted[letters] = aset.lift(shifted, letters)
        pred = pb.power_membership(lifted[letters], taus)
        region = pb.And(*(pb.Not(("lt", (order[k], 0), (order[k - 1], 0))) for k in range(1, comp.n)))
        cases = [pb.And(*(_gap_atom(a, order) for a in conj)) for conj in pred.cases]
        parts.append(pb.And(region, pb.Or(*cases)))
    return pb.normalize_formula(pb.Or(*parts))


def _ladder_from_exponents(comp: CycleComponent, fl: pb.FormulaLadder) -> Ladder:
    rows = []
    for r in fl.rows:
        rows.append(comp.alpha + sum(comp.power_value(v, x) for v, x in zip(fl.left, r)))
    cols = []
    for c in fl.cols:
        cols.append(sum(comp.power_value(v, x) for v, x in zip(fl.right, c)))
    return Ladder.plain(rows, cols)


# F-set recovery from an order-free exponent formula
#
# A type fixes which exponents equal a constant below M, groups the others into
# classes of mutually close exponents (fixed offsets from the least member) and
# fixes each class's residue; classes are pairwise at least M apart. An
# order-free formula is constant on every type. The relaxed box of a type drops
# the separation between classes, so it is a union of the type and finer ones.

@dataclass(frozen=True)
class ExponentBox:
    consts: tuple      # ((var, value), ...)
    classes: tuple     # ((anchor residue, ((var, offset), ...)), ...)
    lower: int
    modulus: int

    def contains(self, x: Sequence[int]) -> bool:
        if any(x[v] != K for v, K in self.consts):
            return False
        for res, members in self.classes:
            anchor = x[members[0][0]] - members[0][1]
            if anchor < self.lower or (anchor - res) % self.modulus:
                return False
            if any(x[v] != anchor + off for v, off in members):
                return False
        return True


def _class_shapes(vs: tuple, M: int):
    """Offset assignments for one class: least offset 0, sorted gaps below M."""
    if len(vs) == 1:
        yield ((vs[0], 0),)
        return
    # order of members along the line, then the gaps
    seen = set()
    for perm in permutations(vs):
        for gaps in iproduct(range(M), repeat=len(vs) - 1):
            offs = [0]
            for g in gaps:
                offs.append(offs[-1] + g)
            shape = tuple(sorted(zip(perm, offs)))
            if shape not in seen:
                seen.add(shape)
                yield shape


def _set_partitions(items: tuple):
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield ((head,),) + part
        for i in range(len(part)):
            yield part[:i] + ((head,) + part[i],) + part[i + 1:]


def _types(n: int, M: int, delta: int):
    """All exponent types as (box, representative point), coarsest first."""
    out = []
    for kinds in iproduct(*([range(-1, M)] * n)):
        consts = tuple((v, K) for v, K in enumerate(kinds) if K >= 0)
        free = tuple(v for v, K in enumerate(kinds) if K < 0)
        for part in _set_partitions(free):
            for shapes in iproduct(*(list(_class_shapes(tuple(sorted(c)), M)) for c in part)):
                shapes = tuple(sorted(tuple(sorted(s, key=lambda t: (t[1], t[0]))) for s in shapes))
                for res in iproduct(range(delta), repeat=len(shapes)):
                    box = ExponentBox(consts, tuple(zip(res, shapes)), M, delta)
                    out.append((len(shapes), box))
    out.sort(key=lambda t: -t[0])
    W = delta * (n + 1) * (M + 1)
    typed = []
    for _, box in out:
        x = [0] * n
        for v, K in box.consts:
            x[v] = K
        for c, (res, members) in enumerate(box.classes):
            anchor = (c + 1) * W + res
            for v, off in members:
                x[v] = anchor + off
        typed.append((box, tuple(x)))
    return typed


def box_image(comp: CycleComponent, box: ExponentBox) -> fs.Expr:
    """alpha + {sum [s_i^e_i] : e in box} as translates of sums of cycles."""
    D = comp.base ** comp.length
    shift = comp.alpha + sum(comp.power_value(v, K) for v, K in box.consts)
    summands = []
    for res, members in box.classes:
        start = box.lower + (res - box.lower) % box.modulus
        shift += sum(comp.power_value(v, start + off) for v, off in members)
        rho = sum(D ** (start + off) * comp.power_value(v, box.modulus) for v, off in members)
        if rho:
            summands.append(fs.Union(fs.Finite((0,)), fs.Cycle(rho, comp.length * box.modulus)))
    if not summands:
        return fs.Finite((shift,))
    body = fs.sum_all(summands)
    return body if shift == 0 else fs.Trans(shift, body)


def formula_image(comp: CycleComponent, f) -> fs.Expr:
    """Image of the order-free exponent set defined by f, as a Boolean combination.

    Types are visited coarsest first; a relaxed box is added or removed whenever
    the running combination disagrees with f on the type's representative.
    """
    if comp.n == 0:
        return fs.Finite((comp.alpha,)) if pb.eval_formula(f, ()) else fs.EMPTY
    M, delta = pb.formula_constants(f)
    test = pb.compile_formula(f)
    ops = []
    for box, x in _types(comp.n, M, delta):
        status = False
        for b, inc in ops:
            if b.contains(x):
                status = inc
        want = test(x)
        if status != want:
            ops.append((box, want))
    expr = None
    for box, inc in ops:
        img = box_image(comp, box)
        if expr is None:
            expr = img if inc else fs.EMPTY
        else:
            expr = fs.Union(expr, img) if inc else fs.Diff(expr, img)
    return fs.EMPTY if expr is None else expr


# ladders for x +_K y in L from a forbidden suffix

def _length_class(alphabet: tuple, r: int, s: int) -> fa.Dfa:
    """Words whose length lies in r + sN."""
    return fa.from_function(alphabet, 0,
                            lambda i, a: i + 1 if i < r else r + (i - r + 1) % s,
                            lambda i: i == r)


def _ends_with(alphabet: tuple, suffix: tuple) -> fa.Dfa:
    k = len(suffix)
    return fa.minimize(fa.from_function(alphabet, (), lambda t, a: (t + (a,))[-k:] if k else (),
                                        lambda t: t == suffix))


def _value_beaten(T: fa.Dfa, larger: bool) -> fa.Dfa:
    """Words t with some word of T of the same length and larger (or smaller) value."""
    alphabet = T.alphabet
    target = 1 if larger else -1
    index = {}
    nfa = fa.Nfa.empty(alphabet)

    def sid(st):
        if st not in index:
            index[st] = nfa.add_state(final=st[0] in T.finals and st[1] == target)
            todo.append(st)
        return index[st]

    todo = []
    nfa.starts.add(sid((T.start, 0)))
    while todo:
        q, cmp = st = todo.pop()
        src = index[st]
        for i, x in enumerate(alphabet):
            for j, y in enumerate(alphabet):
                c = 1 if y[0] > x[0] else (-1 if y[0] < x[0] else cmp)
                nfa.add_edge(src, i, sid((T.trans[q][j], c)))
    return fa.minimize(fa.determinize(nfa))


@dataclass(frozen=True)
class WordLadder:
    """Words d_i of length K and e_j with d_i +_K e_j in L iff i <= j."""
    K: int
    ds: tuple
    es: tuple
    case: str
    base: int

    @property
    def N(self) -> int:
        return len(self.ds) - 1

    def combined(self, i: int, j: int):
        return fixed_length_word(evaluate1(self.ds[i], self.base) + evaluate1(self.es[j], self.base),
                                 self.K, self.base)

    def verify(self, L: fa.Dfa) -> bool:
        n = len(self.ds)
        if len(self.es) != n or any(len(x) != self.K for x in self.ds):
            return False
        for i in range(n):
            for j in range(n):
                w = self.combined(i, j)
                if (w is not None and L.accepts(w)) != (i <= j):
                    return False
        return True

    def to_dict(self) -> dict:
        return {"K": self.K, "case": self.case,
                "d": [[l[0] for l in w] for w in self.ds],
                "e": [[l[0] for l in w] for w in self.es]}


class HypothesisError(ValueError):
    pass


def nongen_ladder(L: fa.Dfa, witness: tuple, N: int, rich: Optional[fa.NotSparse] = None) -> WordLadder:
    """An N-ladder for x +_K y in L, where L = L*, L is not sparse and
    no word of L with length in r + sN ends in sigma (witness = (r, s, sigma)).
    """
    r, s, sigma = witness
    sigma = tuple(sigma)
    alphabet = L.alphabet
    d = fa._digit_base(L)
    in_class = fa.intersection(L, _length_class(alphabet, r, s))
    occurring = []
    for a in fa.words_up_to(alphabet, len(sigma)):
        if len(a) == len(sigma) and not fa.is_empty(fa.intersection(in_class, _ends_with(alphabet, a))):
            occurring.append(a)
    if sigma in occurring:
        raise HypothesisError("sigma occurs as a suffix in the length class")
    if not occurring:
        raise HypothesisError("the length class is empty")
    val = lambda w: evaluate1(w, d)
    below = [a for a in occurring if val(a) < val(sigma)]
    if below:
        larger = True
        a = max(below, key=val)
    else:
        larger = False
        a = min(occurring, key=val)
    ending = _ends_with(alphabet, a)
    T = fa.intersection(L, ending)
    extremal = fa.minimize(fa.difference(fa.intersection(in_class, ending), _value_beaten(T, larger)))
    p = fa.pumping_length(extremal)
    long_enough = fa.intersection(extremal, fa.from_function(alphabet, 0, lambda i, x: min(i + 1, p),
                                                              lambda i: i >= p))
    word = fa.shortest_word(long_enough)
    if word is None:
        raise HypothesisError("no long value-extremal words; L is not as required")
    u, v, w = fa.pump_decompose(extremal, word)
    while len(w) < len(a):
        w = v + w
    D = lambda k: d ** k
    wu = w + u
    period = lcm(len(wu), len(v))
    n, m = period // len(wu), period // len(v)
    X, Y = wu * n, v * m
    if val(X) != val(Y):
        case = "strict" if larger else "strict-dual"
        K = len(u) + N * period + len(w)
        ds = [u + X * (N - i) + Y * i + w for i in range(N + 1)]
        gap = abs(val(Y) - val(X))
        alpha = fixed_length_word(gap, period, d)
        es = [((0,),) * len(u) + alpha * (N - i) for i in range(N + 1)]
        head = len(u) + N * period
    else:
        case = "equal" if larger else "equal-dual"
        if rich is None:
            rich = fa.is_sparse(fa.minimize(L))
            if rich.sparse:
                raise HypothesisError("L is sparse")
        v1, w1 = (u + w) * n, u + w
        b, c = rich.x + rich.y1 + rich.z, rich.x + rich.y2 + rich.z
        size = lcm(len(b), len(v1))
        b, c, v1 = b * (size // len(b)), c * (size // len(c)), v1 * (size // len(v1))
        if b == v1:
            b = c
        K = N * size + len(w1)
        ds = [b * (N - i) + v1 * i + w1 for i in range(N + 1)]
        alpha = fixed_length_word(abs(val(v1) - val(b)), size, d)
        es = [alpha * (N - i) for i in range(N + 1)]
        head = N * size
    if not larger:
        # the e_i stand for negative numbers; move d^head from each d_i over to each e_i
        shift = D(head)
        ds = [fixed_length_word(val(x) - shift, K, d) for x in ds]
        es = [fixed_length_word(shift - val(y), K, d) for y in es]
    lad = WordLadder(K, tuple(ds), tuple(es), case, d)
    if not lad.verify(L):
        raise AssertionError(f"constructed ladder ({case}) failed verification")
    return lad


# verdicts

STABLE, UNSTABLE, INCONCLUSIVE = "StableCertified", "UnstableCertified", "Inconclusive"


@dataclass
class Verdict:
    kind: str
    base: int
    fset: Optional[fs.Expr] = None
    evidence: tuple = ()            # per-component (component, order-free formula text)
    ladder: Optional[Ladder] = None
    plain_ladder: Optional[Ladder] = None
    construction: Optional[str] = None
    diagnostics: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def stable(self) -> Optional[bool]:
        return {STABLE: True, UNSTABLE: False}.get(self.kind)

    def certificate(self, member=None) -> dict:
        if self.kind == STABLE:
            return {"fset": self.fset.text() if self.fset is not None else None,
                    "evidence": [{"component": c, "formula": f} for c, f in self.evidence]}
        if self.kind == UNSTABLE:
            out = {"ladder": self.ladder.to_dict(member)}
            if self.plain_ladder is not None and self.plain_ladder is not self.ladder:
                out["plain_ladder"] = self.plain_ladder.to_dict(member)
            return out
        return {"diagnostics": self.diagnostics}

    def to_dict(self, member=None) -> dict:
        return {"verdict": self.kind, "certificate": self.certificate(member),
                "provenance": self.construction, "parameters": self.parameters,
                "timings": self.timings}


def _exact_fset(A: AutoSet, expr: fs.Expr) -> Optional[fs.Expr]:
    """expr itself when its automaton equals A; otherwise patch a finite difference."""
    B = fs.to_autoset(expr, A.base)
    if B.equals(A):
        return expr
    extra, missing = aset.difference(B, A), aset.difference(A, B)
    fixes = []
    for part in (extra, missing):
        canon = canonical_language(part)
        if not _is_finite(canon):
            return None
        fixes.append(sorted(evaluate1(w, A.base) for w in _finite_words(canon)))
    if fixes[0]:
        expr = fs.Diff(expr, fs.Finite(tuple(fixes[0])))
    if fixes[1]:
        expr = fs.Union(expr, fs.Finite(tuple(fixes[1])))
    return expr if fs.to_autoset(expr, A.base).equals(A) else None


def _is_finite(A: fa.Dfa) -> bool:
    """No cycle through a reachable live state."""
    keep = fa.live_states(A) & fa.reachable(A)
    comps = fa._sccs(sorted(keep), lambda q: [t for t in A.trans[q] if t in keep])
    return all(len(c) == 1 and c[0] not in A.trans[c[0]] for c in comps)


def _finite_words(A: fa.Dfa) -> list:
    live = fa.live_states(A)
    out = []

    def walk(q, w):
        if q in A.finals:
            out.append(w)
        for i, t in enumerate(A.trans[q]):
            if t in live:
                walk(t, w + (A.alphabet[i],))

    if A.start in live:
        walk(A.start, ())
    return out


def classify_sparse(A: AutoSet, dec: Optional[CycleDecomposition] = None, N: int = DEFAULT_N) -> Verdict:
    """Decide stability of a sparse set; the answer is always certified."""
    if dec is None:
        dec = sparse_to_cycles(A)
    t0 = time.perf_counter()
    evidence, images = [], []
    for comp in dec.components:
        f = exponent_formula(A, comp)
        rw = pb.ldelta_rewrite(f, comp.n, N)
        if not rw.stable:
            lad = _ladder_from_exponents(comp, rw.ladder)
            if not lad.verify(A.member):
                raise AssertionError("exponent ladder did not transfer to the set")
            # a small plain search often finds a more readable ladder as well
            small = aset.ladder_search(A, N, A.base ** (N + 3), max_nodes=20_000)
            return Verdict(UNSTABLE, A.base, ladder=lad, plain_ladder=small or lad,
                           construction="sparse-rewriter",
                           diagnostics={"component": comp.to_dict()},
                           timings={"sparse": time.perf_counter() - t0})
        evidence.append((comp.to_dict(), pb.format_formula(rw.formula)))
        images.append(formula_image(comp, rw.formula))
    t1 = time.perf_counter()
    expr = _exact_fset(A, fs.union_all(images))
    if expr is None:
        raise AssertionError("recovered F-set description does not match the set")
    return Verdict(STABLE, A.base, fset=expr, evidence=tuple(evidence), construction="sparse-rewriter",
                   timings={"rewrite": t1 - t0, "fset": time.perf_counter() - t1})


# non-sparse sets

def _infinite_in_class(L: fa.Dfa, r: int, s: int) -> bool:
    return not _is_finite(fa.intersection(L, _length_class(L.alphabet, r, s)))


def _separating_word(M: fa.Dfa, p: int, q: int) -> tuple:
    """Shortest word accepted from exactly one of p and q."""
    start = (p, q)
    parent = {start: None}
    queue = [start]
    for pair in queue:
        a, b = pair
        if (a in M.finals) != (b in M.finals):
            out = []
            while parent[pair] is not None:
                pair, letter = parent[pair]
                out.append(letter)
            return tuple(reversed(out))
        for i, x in enumerate(M.alphabet):
            nxt = (M.trans[a][i], M.trans[b][i])
            if nxt not in parent:
                parent[nxt] = (pair, x)
                queue.append(nxt)
    raise ValueError("states are equivalent; the automaton is not minimal")


@dataclass(frozen=True)
class LoopChoice:
    """A state q whose loop language supports the word-ladder construction."""
    state: int
    loops: fa.Dfa
    witness: tuple
    route: str          # "finish-state" or "forbidden-infix"


def state_conditions(M: fa.Dfa, witness: tuple) -> LoopChoice:
    """Find a live q with L_q non-sparse and a forbidden suffix on some length class.

    M is the minimal DFA of all digit representations of a non-sparse subset of
    N that is not generic in N; witness is a forbidden-suffix triple for M.
    """
    live = fa.live_states(M)
    loops = {}

    def loop_dfa(q):
        if q not in loops:
            loops[q] = fa.minimize(fa.loop_language(M, q))
        return loops[q]

    rich = [q for q in sorted(live) if not fa.is_sparse(loop_dfa(q)).sparse]
    if not rich:
        raise HypothesisError("every loop language is sparse")
    r, s, tau = witness
    for q in rich:
        finishes = sorted(t for t in fa.reachable(M, [q]) if t in M.finals)
        for f in finishes:
            Lf = loop_dfa(f)
            if fa.is_sparse(Lf).sparse:
                continue
            mu = fa.shortest_word(M, targets={f})
            lo = max(0, len(mu) - r)
            for t in range(lo, lo + s):
                rr = r + t - len(mu)
                if _infinite_in_class(Lf, rr, s):
                    w = (rr, s, tuple(tau) + ((0,),) * t)
                    return LoopChoice(f, Lf, w, "finish-state")
        # every reachable finish state has a sparse loop language: build a forbidden infix
        target = finishes[0]
        back = [p for p in range(M.n) if q in fa.reachable(M, [p])]
        word = ()
        for p in back:
            cur = M.run(word, p)
            if q in fa.reachable(M, [cur]):
                word += fa.shortest_word(M, sources=[cur], targets={target})
        return LoopChoice(q, loop_dfa(q), (0, 1, word), "forbidden-infix")
    raise HypothesisError("no loop language meets the hypotheses")


def natural_ladder(A: AutoSet, N: int = DEFAULT_N, witness: Optional[tuple] = None) -> tuple:
    """Boolean-combination ladder for x + y in A inside N, for A (within N) neither sparse nor generic.

    Returns (Ladder, LoopChoice, WordLadder).
    """
    P = aset.nonneg_part(A)
    M = aset.digit_language(P)
    if witness is None:
        witness = fa.forbidden_suffix_witness(M)
        if witness is None:
            raise HypothesisError("the set is generic in N")
    choice = state_conditions(M, witness)
    words = nongen_ladder(choice.loops, choice.witness, N)
    q = choice.state
    mu = fa.shortest_word(M, targets={q})
    seps = {}
    for other in range(M.n):
        if other != q:
            sep = _separating_word(M, q, other)
            seps.setdefault(sep, M.run(sep, q) in M.finals)
    d = A.base
    rows = tuple(tuple(evaluate1(mu + x + sep, d) for sep in seps) for x in words.ds)
    cols = tuple(evaluate1(((0,),) * len(mu) + y, d) for y in words.es)
    lad = Ladder(rows, cols, tuple(seps.values()), note="conjunction of (x_k + y in A) == sign_k")
    if not lad.verify(A.member):
        raise AssertionError("Boolean-combination ladder failed verification")
    return lad, choice, words


def _negated(lad: Ladder) -> Ladder:
    return Ladder(tuple(tuple(-x for x in r) for r in lad.rows), tuple(-y for y in lad.cols),
                  lad.signs, lad.note, lad.any_of)


def _forbidden_prefix(canon: fa.Dfa, d: int) -> tuple:
    """Shortest digit word that starts no accepted word, without a trailing zero."""
    live = fa.live_states(canon)
    digits = [(i,) for i in range(d)]
    parent = {canon.start: None}
    queue = [canon.start]
    for q in queue:
        if q not in live:
            out = []
            while parent[q] is not None:
                q, a = parent[q]
                out.append(a)
            word = tuple(reversed(out))
            return word + ((1,),) if word and word[-1] == (0,) or not word else word
        for a in digits:
            t = canon.step(q, a)
            if t not in parent:
                parent[t] = (q, a)
                queue.append(t)
    raise HypothesisError("every digit word is a prefix of a member")


def mixed_ladder(A: AutoSet, cover: aset.Genericity, N: int = DEFAULT_N) -> Ladder:
    """A within N sparse and -A within N generic in N: the half-line ladder.

    B, the union of A + g for the covering shifts g, contains every negative
    number and meets r + sN nowhere, where s = d^|p| and r = [p] for a
    forbidden prefix p of B's nonnegative members.
    """
    d = A.base
    shifts = sorted({-t for t in cover.offsets})
    B = reduce(aset.union, (aset.translate(A, g) for g in shifts))
    if not fa.is_empty(aset.difference(aset.negatives(d), B).dfa):
        raise AssertionError("shifted copies do not cover the negative numbers")
    canon = canonical_language(aset.nonneg_part(B))
    prefix = _forbidden_prefix(canon, d)
    r, s = evaluate1(prefix, d), d ** len(prefix)
    rows = tuple(tuple(r + s * i - g for g in shifts) for i in range(N + 1))
    cols = tuple(-s * (j + 1) for j in range(N + 1))
    lad = Ladder(rows, cols, (True,) * len(shifts), note="x + y in A + g for some shift g", any_of=True)
    if not lad.verify(A.member):
        raise AssertionError("half-line ladder failed verification")
    return lad


def periodic_description(A: AutoSet, limit: int = 64) -> Optional[fs.Expr]:
    """A as a union of cosets r + sZ, up to finitely many exceptions, when s <= limit."""
    d = A.base
    for s in range(1, limit + 1):
        moved = aset.translate(A, s)
        if moved.equals(A):
            return fs.union_all([fs.Coset(r, s) for r in range(s) if A.member(r)])
        # the exceptions sit inside [-K, K] when the two differ in finitely many places
        L = fa.longest_word_length(canonical_language(
            aset.union(aset.difference(A, moved), aset.difference(moved, A))))
        if L is None:
            continue
        K = d ** max(L, 0) + s
        far = [r for r in range(s) if A.member(r + s * K)]
        if far != [r for r in range(s) if A.member(r - s * K)]:
            continue
        P = fs.union_all([fs.Coset(r, s) for r in far]) if far else fs.Finite(())
        inside = {x for x in range(-s * K, s * K + 1) if A.member(x)}
        periodic = {x for x in range(-s * K, s * K + 1) if x % s in far}
        desc = P
        if periodic - inside:
            desc = fs.Diff(desc, fs.Finite(tuple(sorted(periodic - inside))))
        if inside - periodic:
            desc = fs.Union(desc, fs.Finite(tuple(sorted(inside - periodic))))
        if fs.to_autoset(desc, d).equals(A):
            return desc
    return None


def classify_nonsparse(A: AutoSet, N: int = DEFAULT_N, bound: Optional[int] = None,
                       max_nodes: int = 50_000) -> Verdict:
    d = A.base
    bound = d ** 12 if bound is None else bound
    t0 = time.perf_counter()
    pos, neg = aset.nonneg_part(A), aset.nonneg_part(aset.negate(A))
    gen = {"positive": aset.is_generic_in_naturals(pos), "negative": aset.is_generic_in_naturals(neg)}
    sparse = {"positive": is_sparse_set(pos).sparse, "negative": is_sparse_set(neg).sparse}
    diag = {"tails": {k: {"generic_in_N": gen[k].generic, "sparse": sparse[k]} for k in gen}}
    timings = {"tails": time.perf_counter() - t0}

    def plain():
        return aset.ladder_search(A, N, bound, max_nodes=max_nodes)

    if gen["positive"].generic and gen["negative"].generic:
        lo, hi = min(gen["positive"].offsets), -min(gen["negative"].offsets)
        diag["genericity"] = {"generic": True, "offsets": [lo, hi]}
        desc = periodic_description(A)
        if desc is not None:
            return Verdict(STABLE, d, fset=desc, construction="coset",
                           diagnostics=diag, timings=timings)
        lad = plain()
        if lad is not None:
            return Verdict(UNSTABLE, d, ladder=lad, plain_ladder=lad, construction="brute-force",
                           diagnostics=diag, timings=timings)
        diag["search"] = {"N": N, "bound": bound, "max_nodes": max_nodes, "found": False}
        return Verdict(INCONCLUSIVE, d, diagnostics=diag, timings=timings)
    for tail, other, flip in (("positive", "negative", False), ("negative", "positive", True)):
        if sparse[tail] and gen[other].generic:
            target = aset.negate(A) if flip else A
            lad = mixed_ladder(target, gen[other], N)
            if flip:
                lad = _negated(lad)
            timings["ladder"] = time.perf_counter() - t0
            return Verdict(UNSTABLE, d, ladder=lad, plain_ladder=plain(), construction="mixed-coset",
                           diagnostics=diag, timings=timings)
    flip = sparse["positive"] or gen["positive"].generic
    target = aset.negate(A) if flip else A
    tail = "negative" if flip else "positive"
    lad, choice, words = natural_ladder(target, N, gen[tail].witness)
    if flip:
        lad = _negated(lad)
    diag["loop"] = {"tail": tail, "state": choice.state, "route": choice.route,
                    "witness": {"r": choice.witness[0], "s": choice.witness[1],
                                "suffix": [a[0] for a in choice.witness[2]]},
                    "word_ladder": words.to_dict()}
    timings["ladder"] = time.perf_counter() - t0
    return Verdict(UNSTABLE, d, ladder=lad, plain_ladder=plain(), construction="nongen-Lq",
                   diagnostics=diag, timings=timings)


def classify(A: AutoSet, N: int = DEFAULT_N, bound: Optional[int] = None, max_nodes: int = 50_000) -> Verdict:
    """Stability of x + y in A over (Z, +), with a verified certificate when decided."""
    if N < 1:
        raise ValueError("ladder size N must be at least 1")
    if A.dim != 1:
        raise ValueError("classification is implemented for subsets of Z")
    t0 = time.perf_counter()
    A = AutoSet(A.base, 1, fa.minimize(A.dfa))
    sp = is_sparse_set(A)
    params = {"d": A.base, "N": N, "bound": A.base ** 12 if bound is None else bound}
    if sp.sparse:
        v = classify_sparse(A, sparse_to_cycles(A, sp), N)
    else:
        v = classify_nonsparse(A, N, bound, max_nodes)
    v.parameters = {**params, "sparse": sp.sparse}
    v.timings["total"] = time.perf_counter() - t0
    _recheck(A, v)
    return v


def _recheck(A: AutoSet, v: Verdict) -> None:
    """Certificates are rechecked through membership (or automaton equality) only."""
    if v.kind == UNSTABLE:
        assert v.ladder.verify(A.member)
        assert v.plain_ladder is None or v.plain_ladder.verify(A.member)
    elif v.kind == STABLE:
        assert fs.to_autoset(v.fset, A.base).equals(A)
