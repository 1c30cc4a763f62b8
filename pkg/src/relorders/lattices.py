"""Exact integer lattice algebra in Z^m.

Lattices are stored by the rows of their Hermite normal form, which makes
equality and coset representatives canonical.  Smith decompositions are
computed on demand and cached per lattice.  All arithmetic uses Python
integers, so nothing overflows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Lattice",
    "LatticeCoset",
    "SnfResult",
    "QuotientMachine",
    "UnsolvableError",
    "hnf",
    "smith",
    "lattice_from_rows",
    "snf",
    "member",
    "canonical_rep",
    "lattice_order",
    "lattice_spectrum",
    "k_root",
    "k_root_coset",
    "solve_completion_matrix",
    "quotient_machine",
    "divisors",
    "format_matrix",
    "parse_matrix",
]

Vector = tuple[int, ...]
Matrix = list[list[int]]


class UnsolvableError(ArithmeticError):
    pass


def divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def vecmat(v: Sequence[int], mat: Sequence[Sequence[int]], cols: int) -> Vector:
    out = [0] * cols
    for coeff, row in zip(v, mat):
        if coeff:
            for j in range(cols):
                out[j] += coeff * row[j]
    return tuple(out)


def determinant(mat: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in mat]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(rows: Iterable[Sequence[int]], m: int) -> tuple[Vector, ...]:
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, pivot columns strictly increase, and entries above
    each pivot lie in ``[0, pivot)``.  Zero rows are dropped.
    """
    work = [list(r) for r in rows if any(r)]
    for r in work:
        if len(r) != m:
            raise ValueError("row length mismatch")
    done: list[list[int]] = []
    for col in range(m):
        while True:
            live = [r for r in work if r[col]]
            if not live:
                break
            pivot = min(live, key=lambda r: abs(r[col]))
            others = [r for r in live if r is not pivot]
            if not others:
                break
            for r in others:
                q = r[col] // pivot[col]
                for j in range(col, m):
                    r[j] -= q * pivot[j]
        live = [r for r in work if r[col]]
        if not live:
            continue
        pivot = live[0]
        work = [r for r in work if r is not pivot and any(r)]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        for r in done:
            q = r[col] // pivot[col]
            if q:
                for j in range(col, m):
                    r[j] -= q * pivot[j]
        done.append(pivot)
    return tuple(tuple(r) for r in done)


def smith(a: Sequence[Sequence[int]], cols: int) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(P, D, Q)`` with ``P a Q = D`` diagonal, P and Q unimodular.

    The nonzero diagonal entries are positive and form a divisibility chain.
    """
    rows = len(a)
    d = [list(r) for r in a]
    p = identity_matrix(rows)
    q = identity_matrix(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in q:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        p[dst] = [x + f * y for x, y in zip(p[dst], p[src])]

    def add_col(dst, src, f):
        for r in d:
            r[dst] += f * r[src]
        for r in q:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        entries = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
            rest = [(abs(d[i][t]), i, "r") for i in range(t + 1, rows) if d[i][t]]
            rest += [(abs(d[t][j]), j, "c") for j in range(t + 1, cols) if d[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            p[t] = [-x for x in p[t]]
        t += 1
    return p, d, q


def _inverse_unimodular(mat: Matrix) -> Matrix:
    n = len(mat)
    p, d, q = smith(mat, n)
    # p mat q = I (diagonal of units, all +1 after sign fix) so mat^-1 = q p
    for i in range(n):
        if d[i][i] != 1:
            raise ValueError("matrix is not unimodular")
    return matmul(q, p)


@dataclass(frozen=True)
class SnfResult:
    P: Matrix
    Q: Matrix
    Q_inv: Matrix
    divisors: tuple[int, ...]


class Lattice:
    """A subgroup of Z^m, held by its row Hermite normal form."""

    def __init__(self, rows: Iterable[Sequence[int]], ambient_rank: int):
        self.rows = hnf(rows, ambient_rank)
        self.ambient_rank = ambient_rank

    @classmethod
    def full(cls, m: int) -> "Lattice":
        return cls(identity_matrix(m), m)

    @classmethod
    def scaled_full(cls, m: int, k: int) -> "Lattice":
        return cls([[k * int(i == j) for j in range(m)] for i in range(m)], m)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    @cached_property
    def snf(self) -> SnfResult:
        m = self.ambient_rank
        p, d, q = smith(self.rows, m)
        divs = tuple(d[i][i] for i in range(self.rank))
        check = matmul(matmul(p, self.rows), q)
        assert check == d, "Smith decomposition failed its identity check"
        return SnfResult(p, q, _inverse_unimodular(q) if m else [], divs)

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.ambient_rank == other.ambient_rank
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.rows, self.ambient_rank))

    def __repr__(self):
        return f"Lattice({format_matrix(self.rows)}, m={self.ambient_rank})"

    def __contains__(self, a: Sequence[int]) -> bool:
        return member(self, a)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice(self.rows + other.rows, self.ambient_rank)

    def coordinates(self, a: Sequence[int]) -> Vector | None:
        """Integer x with ``x . rows = a``, or None when ``a`` is not in the lattice."""
        if len(a) != self.ambient_rank:
            raise ValueError("dimension mismatch")
        rest = list(a)
        coords = []
        for row, col in zip(self.rows, self.pivots):
            if any(rest[j] for j in range(col)):
                return None
            c, r = divmod(rest[col], row[col])
            if r:
                return None
            coords.append(c)
            if c:
                for j in range(col, len(rest)):
                    rest[j] -= c * row[j]
        if any(rest):
            return None
        return tuple(coords)

    def reduce(self, a: Sequence[int]) -> Vector:
        if len(a) != self.ambient_rank:
            raise ValueError("dimension mismatch")
        out = list(a)
        for row, col in zip(self.rows, self.pivots):
            c = out[col] // row[col]
            if c:
                for j in range(col, len(out)):
                    out[j] -= c * row[j]
        return tuple(out)

    def scaled(self, k: int) -> "Lattice":
        return Lattice([[k * x for x in r] for r in self.rows], self.ambient_rank)


@dataclass(frozen=True)
class LatticeCoset:
    """The coset ``representative + lattice`` with a canonical representative."""

    representative: Vector
    lattice: Lattice

    def __post_init__(self):
        object.__setattr__(self, "representative", self.lattice.reduce(self.representative))

    def __contains__(self, a: Sequence[int]) -> bool:
        return member(self.lattice, tuple(x - y for x, y in zip(a, self.representative)))

    def __add__(self, other: "LatticeCoset") -> "LatticeCoset":
        rep = tuple(x + y for x, y in zip(self.representative, other.representative))
        return LatticeCoset(rep, self.lattice)

    def __str__(self):
        return f"{format_vector(self.representative)} + {format_matrix(self.lattice.rows)}"


def format_vector(v: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def lattice_from_rows(rows: Iterable[Sequence[int]], m: int | None = None) -> Lattice:
    rows = [tuple(r) for r in rows]
    if m is None:
        if not rows:
            raise ValueError("ambient rank needed for an empty row list")
        m = len(rows[0])
    return Lattice(rows, m)


def snf(lattice: Lattice) -> SnfResult:
    return lattice.snf


def member(lattice: Lattice, a: Sequence[int]) -> bool:
    return lattice.coordinates(a) is not None


def canonical_rep(a: Sequence[int], lattice: Lattice) -> Vector:
    return lattice.reduce(a)


def lattice_order(lattice: Lattice, a: Sequence[int]) -> int:
    """Least k >= 1 with ``k a`` in the lattice, or 0 if there is none."""
    m = lattice.ambient_rank
    if len(a) != m:
        raise ValueError("dimension mismatch")
    if m == 0:
        return 1
    s = lattice.snf
    lam = vecmat(a, s.Q, m)
    r = lattice.rank
    if any(lam[r:]):
        return 0
    order = 1
    for d, x in zip(s.divisors, lam):
        order = lcm(order, d // gcd(d, x))
    return order


def lattice_spectrum(lattice: Lattice) -> set[int]:
    m, r = lattice.ambient_rank, lattice.rank
    top = lattice.snf.divisors[-1] if r else 1
    orderset = set(divisors(top))
    if r < m:
        orderset.add(0)
    return orderset


def k_root(lattice: Lattice, k: int) -> Lattice:
    """The lattice ``{a : k a in L}``, which contains L."""
    if k < 1:
        raise ValueError("k must be positive")
    m = lattice.ambient_rank
    s = lattice.snf
    rows = [
        [(d // gcd(d, k)) * x for x in qrow]
        for d, qrow in zip(s.divisors, s.Q_inv)
    ]
    return Lattice(rows, m)


def k_root_coset(coset: LatticeCoset, k: int) -> LatticeCoset | None:
    """``{a : k a in coset}`` as a coset of ``k_root(L, k)``, or None if empty."""
    lattice = coset.lattice
    m = lattice.ambient_rank
    if m == 0:
        return LatticeCoset((), lattice)
    s = lattice.snf
    alpha = list(vecmat(coset.representative, s.Q, m))
    r = lattice.rank
    for i in range(m):
        if i < r:
            d = s.divisors[i]
            g = gcd(d, k)
            if alpha[i] % g:
                return None
            # solve alpha_i + d z = 0 (mod k)
            kk, dd = k // g, d // g
            target = (-alpha[i] // g) % kk
            z = (target * pow(dd, -1, kk)) % kk if kk > 1 else 0
            alpha[i] += d * z
        elif alpha[i] % k:
            return None
    x = vecmat(alpha, s.Q_inv, m)
    assert all(c % k == 0 for c in x) and member(
        lattice, tuple(a - b for a, b in zip(x, coset.representative))
    )
    return LatticeCoset(tuple(c // k for c in x), k_root(lattice, k))


def solve_completion_matrix(
    U: Sequence[Sequence[int]], A: Sequence[Sequence[int]], B: Lattice
) -> Matrix:
    """Find an integer s x m matrix C with every row of ``U C - A`` in B."""
    p_rows = len(U)
    m = B.ambient_rank
    s_cols = len(U[0]) if U else 0
    if len(A) != p_rows:
        raise ValueError("U and A must have the same number of rows")
    if s_cols == 0:
        for row in A:
            if not member(B, row):
                raise UnsolvableError("a generator vector lies outside the lattice")
        return []
    P, D, Q = smith(U, s_cols)
    PA = matmul(P, A) if A and m else [[] for _ in range(p_rows)]
    c_prime = [[0] * m for _ in range(s_cols)]
    for i in range(p_rows):
        d = D[i][i] if i < s_cols else 0
        alpha = tuple(PA[i]) if m else ()
        if d == 0:
            if not member(B, alpha):
                raise UnsolvableError("inconsistent completion system")
            continue
        root = k_root_coset(LatticeCoset(alpha, B), d)
        if root is None:
            raise UnsolvableError(f"no integer solution of {d} c = {format_vector(alpha)} mod L")
        c_prime[i] = list(root.representative)
    C = matmul(Q, c_prime) if m else [[] for _ in range(s_cols)]
    for urow, arow in zip(U, A):
        diff = tuple(x - y for x, y in zip(vecmat(urow, C, m), arow))
        assert member(B, diff), "completion matrix check failed"
    return C


class QuotientMachine:
    """The finite group Z^m / N for a full-rank lattice N."""

    def __init__(self, modulus: Lattice):
        if modulus.rank != modulus.ambient_rank:
            raise ValueError("the modulus lattice must have full rank")
        self.modulus = modulus
        self.m = modulus.ambient_rank

    @property
    def size(self) -> int:
        out = 1
        for i, row in enumerate(self.modulus.rows):
            out *= row[i]
        return out

    def canonical(self, a: Sequence[int]) -> Vector:
        return self.modulus.reduce(a)

    def elements(self) -> Iterator[Vector]:
        bounds = [row[i] for i, row in enumerate(self.modulus.rows)]
        for a in itertools.product(*(range(b) for b in bounds)):
            yield tuple(a)

    def zero(self) -> Vector:
        return (0,) * self.m

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.canonical(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a: Sequence[int]) -> Vector:
        return self.canonical(tuple(-x for x in a))

    def order_of(self, a: Sequence[int]) -> int:
        return lattice_order(self.modulus, a)


def quotient_machine(lattice: Lattice, k: int) -> QuotientMachine:
    """The machine for Z^m / (L + k Z^m)."""
    m = lattice.ambient_rank
    return QuotientMachine(lattice + Lattice.scaled_full(m, k))


def format_matrix(rows: Iterable[Sequence[int]]) -> str:
    return "[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in rows) + "]"


def parse_matrix(text: str) -> list[list[int]]:
    import json

    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ValueError("matrix must be a list of rows")
    return [[int(x) for x in r] for r in data]
