"""Finite automata over finite letter alphabets.

States are integers 0..n-1. Alphabets are tuples of hashable letters (integer
tuples, plus the reserved separator "$" in one internal construction). The
order of the alphabet is the letter order used for every tie-break.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Hashable, Iterable, Iterator, Optional, Sequence

SEPARATOR = "$"


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple
    trans: tuple  # trans[q][i] is the target of state q on alphabet[i]
    start: int
    finals: frozenset
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "trans", tuple(tuple(row) for row in self.trans))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.alphabet)})
        k = len(self.alphabet)
        n = len(self.trans)
        if not 0 <= self.start < n:
            raise AutomatonError("start state out of range")
        for row in self.trans:
            if len(row) != k or any(not 0 <= t < n for t in row):
                raise AutomatonError("transition function must be total")

    @property
    def n(self) -> int:
        return len(self.trans)

    def letter_index(self, a) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise AutomatonError(f"letter {a!r} is not in the alphabet") from None

    def step(self, q: int, a) -> int:
        return self.trans[q][self.letter_index(a)]

    def run(self, word: Iterable, q: Optional[int] = None) -> int:
        q = self.start if q is None else q
        idx = self._index
        tr = self.trans
        for a in word:
            try:
                q = tr[q][idx[a]]
            except KeyError:
                raise AutomatonError(f"letter {a!r} is not in the alphabet") from None
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(word) in self.finals

    def with_start(self, q: int) -> "Dfa":
        return Dfa(self.alphabet, self.trans, q, self.finals)

    def with_finals(self, finals: Iterable[int]) -> "Dfa":
        return Dfa(self.alphabet, self.trans, self.start, frozenset(finals))


@dataclass
class Nfa:
    """Nondeterministic automaton without epsilon moves.

    trans[q] maps a letter index to a set of target states.
    """
    alphabet: tuple
    n: int
    starts: set
    finals: set
    trans: list

    @classmethod
    def empty(cls, alphabet: Sequence) -> "Nfa":
        return cls(tuple(alphabet), 0, set(), set(), [])

    def add_state(self, final: bool = False) -> int:
        self.trans.append({})
        self.n += 1
        if final:
            self.finals.add(self.n - 1)
        return self.n - 1

    def add_edge(self, p: int, letter_idx: int, q: int) -> None:
        self.trans[p].setdefault(letter_idx, set()).add(q)

    def accepts(self, word: Iterable) -> bool:
        idx = {a: i for i, a in enumerate(self.alphabet)}
        cur = set(self.starts)
        for a in word:
            i = idx[a]
            cur = {t for q in cur for t in self.trans[q].get(i, ())}
        return bool(cur & self.finals)


# construction helpers

def from_function(alphabet: Sequence, start, step: Callable, is_final: Callable) -> Dfa:
    """Explore the reachable part of an implicit DFA whose states are hashable."""
    alphabet = tuple(alphabet)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for a in alphabet:
            t = step(s, a)
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        rows.append(row)
        i += 1
    finals = {ids[s] for s in order if is_final(s)}
    return Dfa(alphabet, rows, 0, finals)


def universal(alphabet: Sequence) -> Dfa:
    return Dfa(tuple(alphabet), [[0] * len(alphabet)], 0, {0})


def empty_language(alphabet: Sequence) -> Dfa:
    return Dfa(tuple(alphabet), [[0] * len(alphabet)], 0, set())


def from_words(alphabet: Sequence, words: Iterable[Sequence]) -> Dfa:
    """DFA for a finite set of words (a trie plus a sink)."""
    alphabet = tuple(alphabet)
    idx = {a: i for i, a in enumerate(alphabet)}
    rows = [[None] * len(alphabet)]
    finals = set()
    for w in words:
        q = 0
        for a in w:
            i = idx[a]
            if rows[q][i] is None:
                rows.append([None] * len(alphabet))
                rows[q][i] = len(rows) - 1
            q = rows[q][i]
        finals.add(q)
    sink = len(rows)
    rows.append([sink] * len(alphabet))
    rows = [[sink if t is None else t for t in r] for r in rows]
    return Dfa(alphabet, rows, 0, finals)


def extend_alphabet(A: Dfa, alphabet: Sequence) -> Dfa:
    """Same language over a larger alphabet; new letters go to a fresh sink."""
    alphabet = tuple(alphabet)
    missing = set(A.alphabet) - set(alphabet)
    if missing:
        raise AutomatonError(f"new alphabet drops letters {sorted(missing, key=repr)}")
    sink = A.n
    rows = []
    for q in range(A.n):
        rows.append([A.trans[q][A._index[a]] if a in A._index else sink for a in alphabet])
    rows.append([sink] * len(alphabet))
    return Dfa(alphabet, rows, A.start, A.finals)


def map_letters(A: Dfa, f: Callable) -> Nfa:
    """Image of L(A) under a letter-to-letter map, as an NFA over the image letters."""
    image = []
    seen = set()
    for a in A.alphabet:
        b = f(a)
        if b not in seen:
            seen.add(b)
            image.append(b)
    idx = {b: i for i, b in enumerate(image)}
    nfa = Nfa(tuple(image), A.n, {A.start}, set(A.finals), [{} for _ in range(A.n)])
    for q in range(A.n):
        for i, a in enumerate(A.alphabet):
            nfa.add_edge(q, idx[f(a)], A.trans[q][i])
    return nfa


def dfa_to_nfa(A: Dfa) -> Nfa:
    nfa = Nfa(A.alphabet, A.n, {A.start}, set(A.finals), [{} for _ in range(A.n)])
    for q in range(A.n):
        for i, t in enumerate(A.trans[q]):
            nfa.add_edge(q, i, t)
    return nfa


# boolean algebra

def _same_alphabet(A: Dfa, B: Dfa) -> None:
    if A.alphabet != B.alphabet:
        if set(A.alphabet) != set(B.alphabet):
            raise AutomatonError("alphabet mismatch")


def product(A: Dfa, B: Dfa, op: Callable[[bool, bool], bool]) -> Dfa:
    _same_alphabet(A, B)
    bidx = [B.letter_index(a) for a in A.alphabet]

    ids = {(A.start, B.start): 0}
    order = [(A.start, B.start)]
    rows = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for k in range(len(A.alphabet)):
            t = (A.trans[p][k], B.trans[q][bidx[k]])
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        rows.append(row)
        i += 1
    finals = {ids[s] for s in order if op(s[0] in A.finals, s[1] in B.finals)}
    return Dfa(A.alphabet, rows, 0, finals)


def union(A: Dfa, B: Dfa) -> Dfa:
    return product(A, B, lambda x, y: x or y)


def intersection(A: Dfa, B: Dfa) -> Dfa:
    return product(A, B, lambda x, y: x and y)


def difference(A: Dfa, B: Dfa) -> Dfa:
    return product(A, B, lambda x, y: x and not y)


def symmetric_difference(A: Dfa, B: Dfa) -> Dfa:
    return product(A, B, lambda x, y: x != y)


def complement(A: Dfa) -> Dfa:
    # transitions are total by construction, so flipping finals suffices
    return Dfa(A.alphabet, A.trans, A.start, set(range(A.n)) - A.finals)


# determinize / minimize / trim

def determinize(N: Nfa) -> Dfa:
    k = len(N.alphabet)
    start = frozenset(N.starts)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        S = order[i]
        row = []
        for a in range(k):
            T = set()
            for q in S:
                T.update(N.trans[q].get(a, ()))
            T = frozenset(T)
            if T not in ids:
                ids[T] = len(order)
                order.append(T)
            row.append(ids[T])
        rows.append(row)
        i += 1
    finals = {ids[S] for S in order if S & N.finals}
    return Dfa(N.alphabet, rows, 0, finals)


def reachable(A: Dfa, sources: Optional[Iterable[int]] = None) -> set:
    seen = set([A.start] if sources is None else sources)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for t in A.trans[q]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def coreachable(A: Dfa) -> set:
    """States from which some final state is reachable."""
    rev = [[] for _ in range(A.n)]
    for q in range(A.n):
        for t in A.trans[q]:
            rev[t].append(q)
    seen = set(A.finals)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def live_states(A: Dfa) -> set:
    return reachable(A) & coreachable(A)


def longest_word_length(A: Dfa) -> Optional[int]:
    """Length of the longest accepted word; -1 when empty, None when infinite."""
    live = live_states(A)
    if A.start not in live:
        return -1
    indeg = {q: 0 for q in live}
    for q in live:
        for t in A.trans[q]:
            if t in live:
                indeg[t] += 1
    order = [q for q in live if indeg[q] == 0]
    for q in order:
        for t in A.trans[q]:
            if t in live:
                indeg[t] -= 1
                if indeg[t] == 0:
                    order.append(t)
    if len(order) < len(live):
        return None
    depth = {}
    for q in reversed(order):
        best = 0 if q in A.finals else -1
        for t in A.trans[q]:
            if t in live and depth[t] >= 0:
                best = max(best, depth[t] + 1)
        depth[q] = best
    return depth[A.start]


def renumber(A: Dfa) -> Dfa:
    """Reachable part, states numbered in BFS order from the start (letter order)."""
    ids = {A.start: 0}
    order = [A.start]
    i = 0
    while i < len(order):
        for t in A.trans[order[i]]:
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
        i += 1
    rows = [[ids[t] for t in A.trans[q]] for q in order]
    return Dfa(A.alphabet, rows, 0, {ids[q] for q in order if q in A.finals})


def minimize(A: Dfa) -> Dfa:
    """The unique minimal total DFA, canonically numbered."""
    A = renumber(A)
    n = A.n
    cls = [1 if q in A.finals else 0 for q in range(n)]
    count = len(set(cls))
    while True:
        sigs = {}
        new = []
        for q in range(n):
            sig = (cls[q],) + tuple(cls[t] for t in A.trans[q])
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        cls, count = new, len(sigs)
    cls = new
    rows = [None] * count
    for q in range(n):
        if rows[cls[q]] is None:
            rows[cls[q]] = [cls[t] for t in A.trans[q]]
    finals = {cls[q] for q in A.finals}
    return renumber(Dfa(A.alphabet, rows, cls[A.start], finals))


def trim(A: Dfa) -> Dfa:
    """Drop unreachable and dead states, then add one sink to stay total.

    The sink (if any is needed) is the last state.
    """
    live = sorted(live_states(A))
    if not live:
        return empty_language(A.alphabet)
    ids = {q: i for i, q in enumerate(live)}
    sink = len(live)
    rows = [[ids.get(t, sink) for t in A.trans[q]] for q in live]
    need_sink = any(sink in r for r in rows)
    if need_sink:
        rows.append([sink] * len(A.alphabet))
    start = ids.get(A.start, sink)
    return Dfa(A.alphabet, rows, start, {ids[q] for q in A.finals if q in ids})


def is_empty(A: Dfa) -> bool:
    return not (reachable(A) & A.finals)


def shortest_word(A: Dfa, sources: Optional[Iterable[int]] = None, targets: Optional[set] = None) -> Optional[tuple]:
    """Shortest, then lexicographically least (letter order) word from a source to a target."""
    targets = A.finals if targets is None else targets
    sources = [A.start] if sources is None else list(sources)
    return _bfs_paths(A, sources).shortest_to(targets)


class _bfs_paths:
    def __init__(self, A: Dfa, sources):
        self.parent = {}
        self.order = []
        dq = deque()
        for s in sorted(set(sources)):
            if s not in self.parent:
                self.parent[s] = None
                dq.append(s)
        while dq:
            q = dq.popleft()
            self.order.append(q)
            for i, t in enumerate(A.trans[q]):
                if t not in self.parent:
                    self.parent[t] = (q, A.alphabet[i])
                    dq.append(t)

    def path(self, q) -> tuple:
        out = []
        while self.parent[q] is not None:
            q, a = self.parent[q]
            out.append(a)
        return tuple(reversed(out))

    def shortest_to(self, targets) -> Optional[tuple]:
        for q in self.order:
            if q in targets:
                return self.path(q)
        return None


def equivalent(A: Dfa, B: Dfa) -> bool:
    return is_empty(symmetric_difference(A, B))


def counterexample(A: Dfa, B: Dfa) -> Optional[tuple]:
    return shortest_word(symmetric_difference(A, B))


def words_up_to(alphabet: Sequence, n: int) -> Iterator[tuple]:
    for k in range(n + 1):
        yield from iproduct(alphabet, repeat=k)


def language_up_to(A: Dfa, n: int) -> set:
    return {w for w in words_up_to(A.alphabet, n) if A.accepts(w)}


# serialization

def _letter_json(a):
    return list(a) if isinstance(a, tuple) else a


def _letter_from_json(a):
    return tuple(a) if isinstance(a, list) else a


def to_dict(A: Dfa) -> dict:
    return {
        "alphabet": [_letter_json(a) for a in A.alphabet],
        "states": A.n,
        "start": A.start,
        "finals": sorted(A.finals),
        "transitions": [[q, i, t] for q in range(A.n) for i, t in enumerate(A.trans[q])],
    }


def from_dict(obj: dict) -> Dfa:
    alphabet = tuple(_letter_from_json(a) for a in obj["alphabet"])
    n = obj["states"]
    rows = [[None] * len(alphabet) for _ in range(n)]
    for q, i, t in obj["transitions"]:
        rows[q][i] = t
    if any(t is None for r in rows for t in r):
        raise AutomatonError("transition table is not total")
    return Dfa(alphabet, rows, obj["start"], set(obj["finals"]))


def to_json(A: Dfa) -> str:
    return json.dumps(to_dict(A), sort_keys=True)


def from_json(text: str) -> Dfa:
    return from_dict(json.loads(text))


def _label(a) -> str:
    if isinstance(a, tuple):
        return a[0].__str__() if len(a) == 1 else "(" + ",".join(map(str, a)) + ")"
    return str(a)


def to_dot(A: Dfa, name: str = "A") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  init [shape=point];']
    for q in range(A.n):
        shape = "doublecircle" if q in A.finals else "circle"
        lines.append(f"  q{q} [shape={shape}];")
    lines.append(f"  init -> q{A.start};")
    for q in range(A.n):
        grouped = {}
        for i, t in enumerate(A.trans[q]):
            grouped.setdefault(t, []).append(_label(A.alphabet[i]))
        for t, labels in grouped.items():
            lab = ",".join(labels).replace('"', '\\"')
            lines.append(f'  q{q} -> q{t} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# counting and pumping

def count_words(A: Dfa, n: int) -> int:
    """Number of accepted words of length exactly n."""
    vec = [0] * A.n
    vec[A.start] = 1
    for _ in range(n):
        nxt = [0] * A.n
        for q, c in enumerate(vec):
            if c:
                for t in A.trans[q]:
                    nxt[t] += c
        vec = nxt
    return sum(vec[q] for q in A.finals)


def pumping_length(A: Dfa) -> int:
    """Number of live states of A (the canonical sink of trim(A) is not counted)."""
    return len(live_states(A))


def pump_decompose(A: Dfa, w: Sequence) -> tuple:
    """Split an accepted word at the first repeated state of its run: (u, v, rest)."""
    w = tuple(w)
    p = pumping_length(A)
    if not A.accepts(w):
        raise AutomatonError("word is not accepted")
    if len(w) < p:
        raise AutomatonError(f"word shorter than the pumping length {p}")
    seen = {A.start: 0}
    q = A.start
    for j, a in enumerate(w, start=1):
        q = A.step(q, a)
        if q in seen:
            i = seen[q]
            return w[:i], w[i:j], w[j:]
        seen[q] = j
    raise AssertionError("no repeated state on a run longer than the state count")


# sparsity

@dataclass(frozen=True)
class Sparse:
    """Bounded decomposition; each component is (u0, w1, u1, ..., wn, un)."""
    components: tuple

    @property
    def sparse(self) -> bool:
        return True


@dataclass(frozen=True)
class NotSparse:
    """x {y1, y2}* z lies inside the language, y1 != y2 and |y1| = |y2| > 0."""
    x: tuple
    y1: tuple
    y2: tuple
    z: tuple

    @property
    def sparse(self) -> bool:
        return False


def _sccs(nodes: Sequence[int], succ: Callable[[int], Iterable[int]]) -> list:
    """Tarjan's algorithm, iterative; returns a list of sorted components."""
    index = {}
    low = {}
    on = set()
    stack = []
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def _scc_structure(A: Dfa):
    live = live_states(A)
    nodes = sorted(live)
    comps = _sccs(nodes, lambda q: [t for t in A.trans[q] if t in live])
    comp_of = {}
    for ci, comp in enumerate(comps):
        for q in comp:
            comp_of[q] = ci
    return live, comps, comp_of


def _path_within(A: Dfa, src: int, dst: int, allowed: set) -> tuple:
    """Shortest, letter-order least word from src to dst staying inside `allowed`."""
    parent = {src: None}
    dq = deque([src])
    while dq:
        q = dq.popleft()
        if q == dst:
            break
        for i, t in enumerate(A.trans[q]):
            if t in allowed and t not in parent:
                parent[t] = (q, A.alphabet[i])
                dq.append(t)
    out = []
    q = dst
    while parent[q] is not None:
        q, a = parent[q]
        out.append(a)
    return tuple(reversed(out))


def is_sparse(A: Dfa):
    live, comps, comp_of = _scc_structure(A)
    # look for a live state with two distinct cycles through it
    for comp in sorted(comps):
        members = set(comp)
        inner = [(q, i, t) for q in comp for i, t in enumerate(A.trans[q]) if t in members]
        if len(inner) > len(comp):
            return _not_sparse_witness(A, comp, members, inner)
    return Sparse(tuple(_skeletons(A, live, comps, comp_of)))


def _not_sparse_witness(A: Dfa, comp, members, inner) -> NotSparse:
    from math import lcm

    for q in comp:
        edges = [(i, t) for (p, i, t) in inner if p == q]
        if len(edges) >= 2:
            break
    (i1, t1), (i2, t2) = edges[0], edges[1]
    c1 = (A.alphabet[i1],) + (_path_within(A, t1, q, members) if t1 != q else ())
    c2 = (A.alphabet[i2],) + (_path_within(A, t2, q, members) if t2 != q else ())
    L = lcm(len(c1), len(c2))
    y1 = c1 * (L // len(c1))
    y2 = c2 * (L // len(c2))
    x = shortest_word(A, targets={q})
    z = shortest_word(A, sources=[q])
    return NotSparse(x, y1, y2, z)


def _cycle_word(A: Dfa, q: int, members: set) -> tuple:
    word = []
    p = q
    while True:
        for i, t in enumerate(A.trans[p]):
            if t in members:
                word.append((A.alphabet[i], t))
                p = t
                break
        if p == q:
            return tuple(word)


def _skeletons(A: Dfa, live, comps, comp_of) -> Iterator[tuple]:
    cyclic = {}
    for ci, comp in enumerate(comps):
        members = set(comp)
        if any(t in members for q in comp for t in A.trans[q]):
            cyclic[ci] = members

    def outgoing(q, ci):
        for i, t in enumerate(A.trans[q]):
            if t in live and comp_of[t] != ci:
                yield A.alphabet[i], t

    def walk(q, parts, u):
        ci = comp_of[q]
        if ci in cyclic:
            steps = _cycle_word(A, q, cyclic[ci])
            w = tuple(a for a, _ in steps)
            parts = parts + (u, w)
            p = q
            for k in range(len(steps)):
                prefix = w[:k]
                if p in A.finals:
                    yield parts + (prefix,)
                for a, t in outgoing(p, ci):
                    yield from walk(t, parts, prefix + (a,))
                p = steps[k][1]
        else:
            if q in A.finals:
                yield parts + (u,)
            for a, t in outgoing(q, ci):
                yield from walk(t, parts, u + (a,))

    if A.start in live:
        yield from walk(A.start, (), ())


def bounded_words(component: tuple, max_len: int) -> set:
    """All words of a bounded component u0 w1* u1 ... of length at most max_len."""
    out = set()

    def rec(i, acc):
        if len(acc) > max_len:
            return
        if i == len(component) - 1:
            w = acc + component[i]
            if len(w) <= max_len:
                out.add(w)
            return
        u, w = component[i], component[i + 1]
        base = acc + u
        k = 0
        while len(base) + k * len(w) <= max_len:
            rec(i + 2, base + w * k)
            k += 1
            if not w:
                break

    rec(0, ())
    return out


def loop_language(A: Dfa, q: int) -> Dfa:
    """Words leading from q back to q."""
    if not 0 <= q < A.n:
        raise AutomatonError(f"unknown state {q}")
    return Dfa(A.alphabet, A.trans, q, {q})


# forbidden suffixes

def _digit_base(A: Dfa) -> int:
    d = len(A.alphabet)
    if set(A.alphabet) != {(i,) for i in range(d)}:
        raise AutomatonError("forbidden_suffix_witness needs the digit alphabet 0..d-1")
    return d


def separator_language(A: Dfa) -> Dfa:
    """DFA for {0^m $ t : no word of length m followed by t is accepted}."""
    d = _digit_base(A)
    alphabet = A.alphabet + (SEPARATOR,)
    sep = len(alphabet) - 1
    n = A.n
    # states 0..n-1: still reading the 0^m block; n..2n-1: after the separator
    nfa = Nfa(alphabet, 2 * n, {A.start}, {n + f for f in A.finals}, [{} for _ in range(2 * n)])
    zero = A.letter_index((0,))
    for q in range(n):
        for t in A.trans[q]:
            nfa.add_edge(q, zero, t)
        nfa.add_edge(q, sep, n + q)
        for i in range(d):
            nfa.add_edge(n + q, i, n + A.trans[q][i])
    extendable = determinize(nfa)
    # shape 0* $ digits*
    rows = [[2] * len(alphabet) for _ in range(3)]
    rows[0][zero] = 0
    rows[0][sep] = 1
    for i in range(d):
        rows[1][i] = 1
    shape = Dfa(alphabet, rows, 0, {1})
    return minimize(intersection(complement(extendable), shape))


def forbidden_suffix_witness(A: Dfa) -> Optional[tuple]:
    """(r, s, tau): no accepted word of length r + k*s (k >= 0) ends in tau.

    Returns None when every suffix occurs at all large lengths. Among witnesses
    the shortest tau is chosen, ties broken by letter order, then the least r.
    """
    S = separator_language(A)
    zero = (0,)
    seq = []
    pos = {}
    q = S.start
    while q not in pos:
        pos[q] = len(seq)
        seq.append(q)
        q = S.step(q, zero)
    first, period = pos[q], len(seq) - pos[q]
    best = None
    for m in range(first, first + period):
        after = S.step(seq[m], SEPARATOR)
        tau = shortest_word(S, sources=[after])
        if tau is None:
            continue
        key = (len(tau), [S.letter_index(a) for a in tau], m)
        if best is None or key < best[0]:
            best = (key, m, tau)
    if best is None:
        return None
    _, m, tau = best
    return m + len(tau), period, tau


def suffix_forbidden_at(A: Dfa, tau: Sequence, length: int) -> bool:
    """True when no accepted word of the given length ends in tau."""
    tau = tuple(tau)
    m = length - len(tau)
    if m < 0:
        return True
    cur = {A.start}
    for _ in range(m):
        cur = {t for q in cur for t in A.trans[q]}
    return all(A.run(tau, q) not in A.finals for q in cur)


def check_forbidden_suffix(A: Dfa, r: int, s: int, tau: Sequence, repeats: int = 3) -> bool:
    return all(suffix_forbidden_at(A, tau, r + k * s) for k in range(repeats))
