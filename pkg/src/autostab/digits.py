"""Base-d positional words over integer-tuple letters, least significant digit first.

A letter is a tuple of ints (its length is the dimension m). A word is a tuple
of letters. Plain tuples keep words hashable and cheap to slice.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

Letter = tuple
Word = tuple


def _check_base(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"base must be an integer >= 2, got {d!r}")


def as_letter(x) -> Letter:
    if isinstance(x, int):
        return (x,)
    return tuple(int(v) for v in x)


def as_word(letters: Iterable) -> Word:
    """Coerce ints or tuples into a word; ints become 1-dimensional letters."""
    w = tuple(as_letter(x) for x in letters)
    if w and len({len(l) for l in w}) != 1:
        raise ValueError("letters of a word must share one dimension")
    return w


def word_dim(w: Word, default: int = 1) -> int:
    return len(w[0]) if w else default


def evaluate(w: Sequence[Letter], d: int, dim: Optional[int] = None) -> tuple:
    """Componentwise sum of d**i * letter_i."""
    _check_base(d)
    m = dim if dim is not None else word_dim(w)
    acc = [0] * m
    scale = 1
    for letter in w:
        if len(letter) != m:
            raise ValueError("dimension mismatch")
        for k, v in enumerate(letter):
            acc[k] += v * scale
        scale *= d
    return tuple(acc)


def evaluate1(w: Sequence, d: int) -> int:
    """Value of a one-dimensional word given as letters or bare ints."""
    total = 0
    scale = 1
    for x in w:
        total += (x[0] if isinstance(x, tuple) else x) * scale
        scale *= d
    return total


def _digits(n: int, d: int) -> list[int]:
    out = []
    while n:
        n, r = divmod(n, d)
        out.append(r)
    return out


def canonical_rep(a, d: int) -> Word:
    """Usual digits of each component (negated for negatives), zero padded."""
    _check_base(d)
    a = as_letter(a)
    cols = []
    for v in a:
        ds = _digits(abs(v), d)
        cols.append([-x for x in ds] if v < 0 else ds)
    n = max((len(c) for c in cols), default=0)
    return tuple(
        tuple(c[i] if i < len(c) else 0 for c in cols) for i in range(n)
    )


def is_signed(letter: Letter, d: int) -> bool:
    return all(-d < v < d for v in letter)


def is_nonnegative(letter: Letter, d: int) -> bool:
    return all(0 <= v < d for v in letter)


def concat(u: Word, v: Word) -> Word:
    if u and v and len(u[0]) != len(v[0]):
        raise ValueError("dimension mismatch")
    return tuple(u) + tuple(v)


def power(s: Word, n: int) -> Word:
    if n < 0:
        raise ValueError("negative exponent")
    return tuple(s) * n


def shift(s: Word, i: int, d: int) -> Word:
    """Multiply every letter by d**i."""
    f = d ** i
    return tuple(tuple(f * v for v in letter) for letter in s)


def fixed_length_word(value: int, length: int, d: int) -> Optional[Word]:
    """The length-`length` nonnegative-digit word of `value`, if it fits."""
    if value < 0 or value >= d ** length:
        return None
    out = []
    for _ in range(length):
        value, r = divmod(value, d)
        out.append((r,))
    return tuple(out)


def add_fixed_length(s: Word, t: Word, K: int, d: int) -> Optional[Word]:
    """The length-K digit word for [s] + [t], or None when the sum does not fit."""
    for letter in tuple(s) + tuple(t):
        if len(letter) != 1 or not is_nonnegative(letter, d):
            raise ValueError("add_fixed_length needs nonnegative one-dimensional digits")
    return fixed_length_word(evaluate1(s, d) + evaluate1(t, d), K, d)


def parse_word(text: str) -> Word:
    """Parse `(-3,2) (-2,3) (0,4)` or `1 0 2` (LSB first)."""
    text = text.strip()
    if not text or text == "ε":
        return ()
    letters = []
    for tok in text.replace(")(", ") (").split():
        tok = tok.strip("()")
        letters.append(tuple(int(x) for x in tok.split(",")))
    return as_word(letters)


def format_word(w: Word) -> str:
    if not w:
        return "ε"
    if len(w[0]) == 1:
        return " ".join(str(l[0]) for l in w)
    return " ".join("(" + ",".join(map(str, l)) + ")" for l in w)
