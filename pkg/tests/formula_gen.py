"""Random quantifier-free formulas over (N, 0, S, residues, <) for tests."""
import random

from autostab.presburger import And, Not, Or


def random_atom(rng: random.Random, n: int, delta: int, M: int):
    kind = rng.choice(["mod", "eqc", "eq", "lt", "lt"])
    i = rng.randrange(n)
    if kind == "mod":
        return ("mod", (i, 0), delta, rng.randrange(delta))
    if kind == "eqc":
        return ("eq", (i, 0), (None, rng.randrange(M)))
    j = rng.randrange(n)
    if j == i and n > 1:
        j = (i + 1) % n
    return (kind, (i, rng.randrange(M)), (j, 0))


def random_formula(rng: random.Random, n: int, delta: int, M: int, depth: int = 3):
    if depth == 0 or rng.random() < 0.3:
        return random_atom(rng, n, delta, M)
    op = rng.choice(["and", "or", "not"])
    if op == "not":
        return Not(random_formula(rng, n, delta, M, depth - 1))
    parts = [random_formula(rng, n, delta, M, depth - 1) for _ in range(rng.randint(2, 3))]
    return And(*parts) if op == "and" else Or(*parts)
