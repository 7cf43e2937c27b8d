"""Command-line front end: set expressions in, verdicts and certificates out.

Expression grammar (loosest binding first)::

    expr   := inter ('|' inter)*
    inter  := diff ('&' diff)*
    diff   := sum ('-' sum)*
    sum    := unary ('+' unary)*
    unary  := '~' unary | atom
    atom   := re[d=K](regex) | re(regex) | C(a;delta) | coset(r,s) | powers()
            | corpus(name) | {n, ...} | union(e,e) | inter(e,e) | diff(e,e)
            | compl(e) | trans(b,e) | neg(e) | (expr)

Regexes are read least significant digit first over the signed digit
alphabet: 0-9 and a-z stand for digit values 0..35, <k> for any signed digit
k; operators are concatenation, |, *, +, ? and parentheses, and . matches any
digit. A regex denotes the integers with at least one representation in its
language.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional

from . import automaton as fa
from . import autoset as aset
from . import corpus
from . import fsets as fs
from .autoset import AutoSet, Ladder


class ExprSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        self.msg, self.text, self.pos = msg, text, pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        src = text.splitlines()[line - 1] if text else ""
        super().__init__(f"line {line}, column {col}: {msg}\n  {src}\n  {' ' * (col - 1)}^")


# extra AST leaves beyond the F-set nodes

@dataclass(frozen=True)
class Regex(fs.Expr):
    pattern: str
    base: Optional[int] = None

    def text(self):
        tag = f"[d={self.base}]" if self.base is not None else ""
        return f"re{tag}({self.pattern})"


@dataclass(frozen=True)
class CorpusSet(fs.Expr):
    name: str

    def text(self):
        return f"corpus({self.name})"


# regex -> position automaton

class _RegexParser:
    def __init__(self, text: str, offset: int, full: str):
        self.s, self.i, self.offset, self.full = text, 0, offset, full

    def error(self, msg):
        raise ExprSyntaxError(msg, self.full, self.offset + self.i)

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else None

    def parse(self):
        node = self.alt()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r} in regex")
        return node

    def alt(self):
        parts = [self.cat()]
        while self.peek() == "|":
            self.i += 1
            parts.append(self.cat())
        return parts[0] if len(parts) == 1 else ("alt", parts)

    def cat(self):
        parts = []
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.post())
        return ("cat", parts)

    def post(self):
        node = self.base()
        while self.peek() is not None and self.peek() in "*+?":
            node = ({"*": "star", "+": "plus", "?": "opt"}[self.peek()], node)
            self.i += 1
        return node

    def base(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            node = self.alt()
            if self.peek() != ")":
                self.error("missing ')' in regex")
            self.i += 1
            return node
        if c == "<":
            end = self.s.find(">", self.i)
            if end < 0:
                self.error("missing '>'")
            try:
                v = int(self.s[self.i + 1:end])
            except ValueError:
                self.error("expected an integer digit inside <...>")
            self.i = end + 1
            return ("sym", v)
        if c == ".":
            self.i += 1
            return ("any",)
        if c is not None and (c.isdigit() or "a" <= c <= "z"):
            self.i += 1
            return ("sym", int(c, 36))
        if c is not None and c.isspace():
            self.i += 1
            return ("cat", [])
        self.error(f"unexpected {c!r} in regex" if c else "unexpected end of regex")


def _glushkov(tree, alphabet: tuple) -> fa.Nfa:
    """Position automaton: one state per letter occurrence plus an initial state."""
    positions = []   # position -> set of letter indices
    follow = []

    def walk(node):
        """Returns (nullable, first, last)."""
        kind = node[0]
        if kind in ("sym", "any"):
            idx = {i for i, a in enumerate(alphabet) if kind == "any" or a[0] == node[1]}
            positions.append(idx)
            follow.append(set())
            p = len(positions) - 1
            return False, {p}, {p}
        if kind == "cat":
            nullable, first, last = True, set(), set()
            for part in node[1]:
                n2, f2, l2 = walk(part)
                for p in last:
                    follow[p] |= f2
                if nullable:
                    first |= f2
                last = last | l2 if n2 else l2
                nullable = nullable and n2
            return nullable, first, last
        if kind == "alt":
            res = [walk(p) for p in node[1]]
            return (any(r[0] for r in res), set().union(*(r[1] for r in res)),
                    set().union(*(r[2] for r in res)))
        n, f, l = walk(node[1])
        if kind in ("star", "plus"):
            for p in l:
                follow[p] |= f
        return (n or kind != "plus"), f, l

    nullable, first, last = walk(tree)
    nfa = fa.Nfa.empty(alphabet)
    init = nfa.add_state(final=nullable)
    nfa.starts.add(init)
    states = [nfa.add_state(final=(p in last)) for p in range(len(positions))]
    for p in first:
        for i in positions[p]:
            nfa.add_edge(init, i, states[p])
    for p, nxt in enumerate(follow):
        for q in nxt:
            for i in positions[q]:
                nfa.add_edge(states[p], i, states[q])
    return nfa


def regex_autoset(pattern: str, d: int, offset: int = 0, full: Optional[str] = None) -> AutoSet:
    full = pattern if full is None else full
    tree = _RegexParser(pattern, offset, full).parse()
    alphabet = aset.signed_alphabet(d, 1)
    _check_digits(tree, d, full, offset)
    return aset.value_closure(_glushkov(tree, alphabet), d)


def _check_digits(tree, d, full, offset):
    if tree[0] == "sym":
        if abs(tree[1]) >= d:
            raise ExprSyntaxError(f"digit {tree[1]} is not a base-{d} digit", full, offset)
    elif tree[0] in ("cat", "alt"):
        for p in tree[1]:
            _check_digits(p, d, full, offset)
    elif tree[0] != "any":
        _check_digits(tree[1], d, full, offset)


# expression parser

_FUNCS = {"union": 2, "inter": 2, "diff": 2, "compl": 1, "neg": 1}


class _Parser:
    def __init__(self, text: str):
        self.s, self.i = text, 0

    def error(self, msg, pos=None):
        raise ExprSyntaxError(msg, self.s, self.i if pos is None else pos)

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else None

    def expect(self, c):
        if self.peek() != c:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"expected {c!r}, found {found}")
        self.i += 1

    def ident(self):
        self.ws()
        j = self.i
        while j < len(self.s) and (self.s[j].isalnum() or self.s[j] in "_-*"):
            j += 1
        word, self.i = self.s[self.i:j], j
        return word

    def integer(self):
        self.ws()
        j = self.i
        if j < len(self.s) and self.s[j] in "+-":
            j += 1
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        try:
            v = int(self.s[self.i:j])
        except ValueError:
            self.error("expected an integer")
        self.i = j
        return v

    def parse(self):
        e = self.union()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")
        return e

    def _chain(self, sub, op, node):
        e = sub()
        while self.peek() == op:
            self.i += 1
            e = node(e, sub())
        return e

    def union(self):
        return self._chain(self.inter, "|", fs.Union)

    def inter(self):
        return self._chain(self.diff, "&", fs.Inter)

    def diff(self):
        return self._chain(self.sum, "-", fs.Diff)

    def sum(self):
        return self._chain(self.unary, "+", fs.Sum)

    def unary(self):
        if self.peek() == "~":
            self.i += 1
            return fs.Compl(self.unary())
        return self.atom()

    def atom(self):
        c = self.peek()
        if c is None:
            self.error("unexpected end of input")
        if c == "(":
            self.i += 1
            e = self.union()
            self.expect(")")
            return e
        if c == "{":
            self.i += 1
            vals = []
            if self.peek() != "}":
                vals.append(self.integer())
                while self.peek() == ",":
                    self.i += 1
                    vals.append(self.integer())
            self.expect("}")
            return fs.Finite(tuple(sorted(set(vals))))
        start = self.i
        name = self.ident()
        if not name:
            self.error(f"unexpected {c!r}")
        if name == "re":
            return self.regex()
        if name == "C":
            self.expect("(")
            a = self.integer()
            self.expect(";")
            delta = self.integer()
            self.expect(")")
            if delta < 1:
                self.error("cycle period must be positive", start)
            return fs.Cycle(a, delta)
        if name == "coset":
            self.expect("(")
            r = self.integer()
            self.expect(",")
            s = self.integer()
            self.expect(")")
            if s < 1:
                self.error("coset modulus must be positive", start)
            return fs.Coset(r, s)
        if name == "powers":
            self.expect("(")
            self.expect(")")
            return fs.Powers()
        if name == "corpus":
            self.expect("(")
            cname = self.ident()
            if cname not in corpus.BUILDERS:
                self.error(f"unknown corpus set {cname!r}", start)
            self.expect(")")
            return CorpusSet(cname)
        if name == "trans":
            self.expect("(")
            b = self.integer()
            self.expect(",")
            e = self.union()
            self.expect(")")
            return fs.Trans(b, e)
        if name in _FUNCS:
            self.expect("(")
            args = [self.union()]
            for _ in range(_FUNCS[name] - 1):
                self.expect(",")
                args.append(self.union())
            self.expect(")")
            return {"union": fs.Union, "inter": fs.Inter, "diff": fs.Diff,
                    "compl": fs.Compl, "neg": fs.Neg}[name](*args)
        self.error(f"unknown name {name!r}", start)

    def regex(self):
        base = None
        if self.peek() == "[":
            self.i += 1
            self.ws()
            if not self.s.startswith("d", self.i):
                self.error("expected d=<base>")
            self.i += 1
            self.expect("=")
            base = self.integer()
            self.expect("]")
        self.expect("(")
        depth, j = 1, self.i
        while j < len(self.s) and depth:
            depth += {"(": 1, ")": -1}.get(self.s[j], 0)
            j += 1
        if depth:
            self.error("unbalanced parentheses in regex")
        pattern, offset = self.s[self.i:j - 1], self.i
        _RegexParser(pattern, offset, self.s).parse()   # syntax check now, digits at evaluation
        self.i = j
        return Regex(pattern, base)


def parse(text: str) -> fs.Expr:
    return _Parser(text).parse()


def evaluate(e: fs.Expr, d: int) -> AutoSet:
    """The value-closed automaton of an expression in base d."""
    if isinstance(e, Regex):
        if e.base is not None and e.base != d:
            raise ValueError(f"regex is tagged with base {e.base} but the base is {d}")
        return regex_autoset(e.pattern, d)
    if isinstance(e, CorpusSet):
        return corpus.build(e.name, d)
    if isinstance(e, (fs.Cycle, fs.Coset, fs.Powers, fs.Finite)):
        return fs.to_autoset(e, d)
    if isinstance(e, fs.Sum):
        return aset.minkowski_sum(evaluate(e.left, d), evaluate(e.right, d))
    if isinstance(e, fs.Trans):
        return aset.translate(evaluate(e.body, d), e.b)
    if isinstance(e, fs.Neg):
        return aset.negate(evaluate(e.body, d))
    if isinstance(e, fs.Compl):
        return aset.complement(evaluate(e.body, d))
    ops = {fs.Union: aset.union, fs.Inter: aset.intersection, fs.Diff: aset.difference}
    return ops[type(e)](evaluate(e.left, d), evaluate(e.right, d))


def load(text: str, d: int) -> AutoSet:
    A = evaluate(parse(text), d)
    return AutoSet(d, 1, fa.minimize(A.dfa))


# output helpers

def digest(payload: dict) -> str:
    """Hash of everything except timings, so reruns can be compared."""
    body = {k: v for k, v in payload.items() if k != "timings"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.format == "json" else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _write_certificate(args, payload: dict) -> None:
    if getattr(args, "cert", None):
        with open(args.cert, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _ladder_text(lad: Ladder) -> str:
    lines = [f"  relation: {lad.note} ({'any' if lad.any_of else 'all'} of {len(lad.signs)})"]
    for i, r in enumerate(lad.rows):
        lines.append(f"  a_{i} = {list(r) if len(r) > 1 else r[0]}")
    for j, b in enumerate(lad.cols):
        lines.append(f"  b_{j} = {b}")
    return "\n".join(lines)


# subcommands

def cmd_classify(args) -> int:
    from .classify import INCONCLUSIVE, classify

    A = load(args.expr, args.d)
    v = classify(A, N=args.N, bound=args.bound)
    payload = v.to_dict()
    payload["expression"] = args.expr
    payload["digest"] = digest(payload)
    _write_certificate(args, payload)
    lines = [f"verdict: {v.kind}", f"construction: {v.construction}"]
    if v.fset is not None:
        lines.append(f"F-set: {v.fset.text()}")
    if v.ladder is not None:
        lines.append("ladder:")
        lines.append(_ladder_text(v.ladder))
    if v.plain_ladder is not None and v.plain_ladder != v.ladder:
        lines.append("plain ladder:")
        lines.append(_ladder_text(v.plain_ladder))
    if v.kind == INCONCLUSIVE:
        lines.append(f"diagnostics: {json.dumps(v.diagnostics, sort_keys=True)}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return 2 if v.kind == INCONCLUSIVE else 0


def cmd_decompose(args) -> int:
    from .classify import is_sparse_set, sparse_to_cycles

    A = load(args.expr, args.d)
    if not is_sparse_set(A).sparse:
        print("error: the set is not sparse, so it has no cycle decomposition", file=sys.stderr)
        return 1
    dec = sparse_to_cycles(A)
    payload = dec.to_dict()
    lines = [f"{len(dec.components)} component(s)"]
    for c in payload["components"]:
        lines.append("  " + json.dumps(c, sort_keys=True))
    _emit(args, payload, "\n".join(lines) + "\n")
    return 0


def cmd_ladder(args) -> int:
    A = load(args.expr, args.d)
    pool = aset.seed_pool(args.d, args.bound)
    if args.seed is not None:
        random.Random(args.seed).shuffle(pool)
    lad = aset.ladder_search(A, args.N, args.bound, pool=pool)
    if lad is None:
        payload = {"found": False, "N": args.N, "bound": args.bound}
        _emit(args, payload, f"no {args.N}-ladder with entries in [-{args.bound}, {args.bound}]\n")
        return 2
    payload = {"found": True, "ladder": lad.to_dict(A.member)}
    _emit(args, payload, "ladder:\n" + _ladder_text(lad) + "\n")
    return 0


def cmd_generic(args) -> int:
    A = load(args.expr, args.d)
    g = aset.is_generic_in_integers(A)
    payload = g.to_dict()
    _emit(args, payload, f"generic in Z: {g.generic}\n{json.dumps(payload, sort_keys=True)}\n")
    return 0


def cmd_sparse(args) -> int:
    from .classify import is_sparse_set

    A = load(args.expr, args.d)
    res = is_sparse_set(A)
    payload = {"sparse": res.sparse}
    if not res.sparse:
        payload["witness"] = {k: [a[0] for a in getattr(res, k)] for k in ("x", "y1", "y2", "z")}
    _emit(args, payload, f"sparse: {res.sparse}\n")
    return 0


def cmd_export(args) -> int:
    A = load(args.expr, args.d)
    fmt = "dot" if args.dot else args.format
    if fmt == "dot":
        text = fa.to_dot(A.dfa)
    else:
        text = json.dumps(A.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_corpus(args) -> int:
    if args.action == "list":
        rows = corpus.entries()
        payload = {"entries": [e.__dict__ for e in rows]}
        text = "".join(f"{e.name:<20} d={e.d:<3} {e.verdict:<18} {e.locus}\n" for e in rows)
        _emit(args, payload, text)
        return 0
    rows = [e for e in corpus.entries()
            if (args.name is None or e.name == args.name) and (args.d is None or e.d == args.d)]
    if not rows:
        if args.name is None or args.d is None:
            print("error: no matching corpus entry", file=sys.stderr)
            return 1
        A = corpus.build(args.name, args.d)
        from .classify import classify

        v = classify(A, N=args.N)
        _emit(args, v.to_dict(), f"{args.name} d={args.d}: {v.kind} ({v.construction})\n")
        return 0
    results, ok = [], True
    for e in rows:
        r = corpus.run_entry(e, N=args.N)
        r.pop("verdict")
        ok &= r["match"]
        results.append(r)
    text = "".join(f"{'ok  ' if r['match'] else 'FAIL'} {r['name']:<20} d={r['d']:<3} "
                   f"{r['observed']['verdict']} ({r['construction']})\n" for r in results)
    _emit(args, {"results": results}, text)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    with open(args.certificate) as fh:
        cert = json.load(fh)
    d = args.d if args.d is not None else cert.get("parameters", {}).get("d")
    if d is None:
        print("error: base unknown; pass --d", file=sys.stderr)
        return 1
    A = load(args.against, d)
    ok, reason = check_certificate(cert, A)
    print(f"{'valid' if ok else 'INVALID'}: {reason}")
    return 0 if ok else 1


def check_certificate(cert: dict, A: AutoSet) -> tuple:
    """Recheck a verdict certificate against A using membership queries only."""
    from .classify import STABLE, UNSTABLE

    kind, body = cert.get("verdict"), cert.get("certificate", {})
    if kind == UNSTABLE:
        for key in ("ladder", "plain_ladder"):
            if key in body and body[key] is not None:
                lad = Ladder.from_dict(body[key])
                if not lad.verify(A.member):
                    return False, f"{key} fails the i <= j pattern"
        return True, f"ladder of size {len(body['ladder']['rows'])} verified"
    if kind == STABLE:
        if not body.get("fset"):
            return False, "no F-set description"
        B = load(body["fset"], A.base)
        if not B.equals(A):
            return False, "F-set description differs from the set"
        return True, "F-set description equals the set"
    return False, f"verdict {kind!r} carries no checkable certificate"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="autostab", description="Stability of automatic sets of integers.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, expr=True, d_required=True):
        if expr:
            sp.add_argument("expr", help="set expression")
        sp.add_argument("--d", type=int, required=d_required, help="base, at least 2")
        sp.add_argument("--N", type=int, default=5, help="ladder size")
        sp.add_argument("--bound", type=int, default=None, help="entry bound for ladder search")
        sp.add_argument("--format", choices=("text", "json", "dot"), default="text")
        sp.add_argument("--seed", type=int, default=None, help="shuffles search order only")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")

    sp = sub.add_parser("classify", help="stable or unstable, with a certificate")
    common(sp)
    sp.add_argument("--cert", help="also write the JSON certificate to this file")
    sp.set_defaults(func=cmd_classify)
    for name, fn, help_ in (("decompose", cmd_decompose, "cycle decomposition of a sparse set"),
                            ("ladder", cmd_ladder, "bounded search for a ladder"),
                            ("generic", cmd_generic, "do finitely many translates cover Z?"),
                            ("sparse", cmd_sparse, "sparsity of the canonical language")):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("export", help="automaton as DOT or JSON")
    common(sp)
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(func=cmd_export)
    sp = sub.add_parser("corpus", help="named example sets")
    sp.add_argument("action", choices=("list", "run"))
    sp.add_argument("name", nargs="?")
    common(sp, expr=False, d_required=False)
    sp.set_defaults(func=cmd_corpus)
    sp = sub.add_parser("verify", help="recheck a certificate file")
    sp.add_argument("certificate")
    sp.add_argument("--against", required=True, help="set expression")
    sp.add_argument("--d", type=int, default=None)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "d", None) is not None and args.d < 2:
        print("error: --d must be at least 2", file=sys.stderr)
        return 1
    if getattr(args, "N", 1) < 1:
        print("error: --N must be at least 1", file=sys.stderr)
        return 1
    if args.command == "ladder" and args.bound is None:
        args.bound = args.d ** 6
    try:
        return args.func(args)
    except ExprSyntaxError as exc:
        print(f"syntax error at {exc}", file=sys.stderr)
        return 1
    except (ValueError, corpus.CorpusError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
