"""Shared generators and independent reference computations for the tests."""

from __future__ import annotations

import random
from collections import deque

from relorders.words import Ambient, FtaElement, Word, multiply, invert

LETTERS = {1: (1, -1), 2: (1, -1, 2, -2), 3: (1, -1, 2, -2, 3, -3)}


def random_word(rng: random.Random, n: int, max_len: int, min_len: int = 0) -> Word:
    letters = [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]
    out: list[int] = []
    length = rng.randint(min_len, max_len)
    while len(out) < length:
        x = rng.choice(letters)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return Word(out)


def random_generators(rng: random.Random, n: int = 2, max_gens: int = 4, max_len: int = 6) -> list[Word]:
    return [random_word(rng, n, max_len, 1) for _ in range(rng.randint(1, max_gens))]


def free_corpus(seed: int = 2024, count: int = 50):
    """Criterion-4 corpus: subgroups with at most 4 generators of length at most 6."""
    rng = random.Random(seed)
    return [random_generators(rng) for _ in range(count)]


def random_fta_generators(rng: random.Random, n=2, m=1, max_gens=3, max_len=4, box=3) -> list[FtaElement]:
    return [
        FtaElement(random_word(rng, n, max_len), tuple(rng.randint(-box, box) for _ in range(m)))
        for _ in range(rng.randint(1, max_gens))
    ]


def fta_corpus(seed: int = 77, count: int = 20):
    """Criterion-9 corpus: n=2, m in {1,2}, at most 3 generators."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.choice([1, 2])
        out.append((Ambient(2, m), random_fta_generators(rng, m=m)))
    return out


def products_within(gens: list[Word], max_factors: int, max_len: int) -> set[Word]:
    """Reduced products of at most ``max_factors`` generators (or inverses), kept if short.

    Purely combinatorial: a positive-evidence membership oracle independent of
    any automaton.
    """
    symbols = list(gens) + [invert(g) for g in gens]
    seen = {Word()}
    frontier = deque([(Word(), 0)])
    while frontier:
        w, depth = frontier.popleft()
        if depth == max_factors:
            continue
        for s in symbols:
            nxt = multiply(w, s)
            if nxt not in seen and len(nxt) <= max_len:
                seen.add(nxt)
                frontier.append((nxt, depth + 1))
    return seen


def sympy_invariant_factors(rows, m):
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    if not rows:
        return ()
    return tuple(abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ) if d != 0)
