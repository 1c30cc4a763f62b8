"""Relative orders, spectra, roots and pure closures in a free group.

Everything here reduces to walks in Stallings automata.  The order of ``w``
in a coset ``Hu`` is read off the orbit of the basepoint under ``w``; the set
of elements of a given order is a finite union of preorbits of trails, each
of which is a coset computed in a product automaton.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .automata import (
    DEFAULT_LIMITS,
    Automaton,
    Limits,
    ResourceGuardError,
    SubgroupF,
    build_stallings,
    coset_automaton,
    index,
    membership,
    product_component,
    shortest_word,
)
from .lattices import divisors
from .words import IDENTITY, Word, format_word, invert, multiply

__all__ = [
    "CosetPart",
    "CosetUnionDescription",
    "order",
    "spectrum_bound",
    "preorbit",
    "elements_of_order",
    "k_roots",
    "has_order_zero",
    "order_zero_description",
    "spectrum",
    "is_S_pure",
    "pure_closure",
    "build_K_O",
]


@dataclass(frozen=True)
class CosetPart:
    subgroup: SubgroupF
    representative: Word

    def __contains__(self, g: Word) -> bool:
        return membership(self.subgroup, g, self.representative)


@dataclass
class CosetUnionDescription:
    """A union of cosets ``K_i w_i``, closed under conjugation by ``conjugator``."""

    parts: list[CosetPart]
    conjugator: SubgroupF
    label: int
    rank: int = field(default=0)

    def __post_init__(self):
        if not self.rank:
            self.rank = self.conjugator.rank

    def __bool__(self):
        return bool(self.parts)

    def __len__(self):
        return len(self.parts)

    def part_containing(self, g: Word) -> int | None:
        for i, part in enumerate(self.parts):
            if g in part:
                return i
        return None

    def covers(self, g: Word, conjugators: Iterable[Word]) -> bool:
        """True if ``c g c^-1`` lies in some part for one of ``conjugators``.

        Only a sufficient test: the caller supplies finitely many elements of
        the conjugating subgroup.
        """
        for c in conjugators:
            h = multiply(c, multiply(g, invert(c)))
            if self.part_containing(h) is not None:
                return True
        return False

    def serialize(self) -> str:
        lines = []
        for part in self.parts:
            basis = ", ".join(format_word(w, self.rank) for w in part.subgroup.basis)
            lines.append(f"part: subgroup-basis=[{basis}] rep={format_word(part.representative, self.rank)}")
        basis = ", ".join(format_word(w, self.rank) for w in self.conjugator.basis)
        lines.append(f"conjugator=[{basis}]")
        lines.append(f"label={self.label}")
        return "\n".join(lines)

    __str__ = serialize


# --- orders ------------------------------------------------------------------


def spectrum_bound(H: SubgroupF, u: Word = IDENTITY) -> int:
    if membership(H, u):
        return len(H.restricted_vertices)
    aut, _ = coset_automaton(H, u)
    return aut.num_vertices


def order(H: SubgroupF, w: Word, u: Word = IDENTITY) -> int:
    """Least ``i >= 1`` with ``w^i`` in ``Hu``, or 0 if there is none."""
    for i in range(1, spectrum_bound(H, u) + 1):
        if membership(H, w**i, u):
            return i
    return 0


# --- trail search ------------------------------------------------------------


class _ProductCache:
    """Connected components of finite products of one automaton, built lazily."""

    def __init__(self, aut: Automaton, limits: Limits):
        self.aut = aut
        self.limits = limits
        self.component_of: dict[tuple[int, ...], int] = {}
        self.components: list[tuple[list[tuple[int, ...]], dict[tuple[int, ...], int], list[dict[int, int]]]] = []

    def component(self, tup: tuple[int, ...]) -> int:
        cid = self.component_of.get(tup)
        if cid is None:
            tuples, ids, delta = product_component([self.aut] * len(tup), tup, self.limits)
            cid = len(self.components)
            self.components.append((tuples, ids, delta))
            for t in tuples:
                self.component_of[t] = cid
        return cid

    def connected(self, s: tuple[int, ...], t: tuple[int, ...]) -> bool:
        return self.component(s) == self.component(t)

    def coset(self, s: tuple[int, ...], t: tuple[int, ...]) -> tuple[SubgroupF, Word]:
        """Labels from ``s`` to ``t`` in the product, as ``(K, w)`` with set ``K w``."""
        cid = self.component(s)
        tuples, ids, delta = self.components[cid]
        prod = Automaton(self.aut.rank, delta, ids[s], {ids[s]})
        w = shortest_word(prod, ids[s], ids[t])
        return SubgroupF.from_automaton(prod, ids[s]), w


class _TrailCounter:
    def __init__(self, limit: int):
        self.limit = limit
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.limit:
            raise ResourceGuardError(f"trail enumeration exceeds {self.limit} trails")


def _closed_trails(
    cache: _ProductCache, vertices: Sequence[int], k: int, counter: _TrailCounter
) -> Iterator[tuple[int, ...]]:
    """Closed trails of length k whose first vertex is their minimum.

    Only trails with a nonempty preorbit are produced; prefixes are pruned as
    soon as their partial preorbit is empty.
    """
    allowed = sorted(vertices)

    def extend(trail: tuple[int, ...]):
        p0 = trail[0]
        if len(trail) == k:
            if cache.connected(trail, trail[1:] + (p0,)):
                yield trail
            return
        for q in allowed:
            if q <= p0 or q in trail:
                continue
            counter.tick()
            if cache.connected(trail, trail[1:] + (q,)):
                yield from extend(trail + (q,))

    for p0 in allowed:
        counter.tick()
        yield from extend((p0,))


def _open_trails(
    cache: _ProductCache,
    vertices: Sequence[int],
    k: int,
    counter: _TrailCounter,
    accept_ends: Callable[[int, int], bool],
) -> Iterator[tuple[int, ...]]:
    """Injective trails of length k (k+1 distinct vertices) with nonempty preorbit."""
    allowed = sorted(vertices)

    def extend(trail: tuple[int, ...]):
        if len(trail) == k + 1:
            if accept_ends(trail[0], trail[-1]):
                yield trail
            return
        for q in allowed:
            if q in trail:
                continue
            counter.tick()
            if cache.connected(trail, trail[1:] + (q,)):
                yield from extend(trail + (q,))

    for p0 in allowed:
        counter.tick()
        yield from extend((p0,))


def preorbit(
    H: SubgroupF, trail: Sequence[int], limits: Limits = DEFAULT_LIMITS, automaton: Automaton | None = None
) -> tuple[SubgroupF, Word] | None:
    """Words ``w`` with ``trail[i-1] . w = trail[i]`` for all i, as a coset ``K w``."""
    aut = automaton or H.automaton
    trail = tuple(trail)
    if len(trail) < 2:
        raise ValueError("a trail needs at least two vertices")
    for v in trail:
        if not 0 <= v < aut.num_vertices:
            raise ValueError(f"vertex {v} is not in the automaton")
    cache = _ProductCache(aut, limits)
    start, end = trail[:-1], trail[1:]
    if not cache.connected(start, end):
        return None
    return cache.coset(start, end)


def _conjugated(K: SubgroupF, w: Word, v: Word) -> CosetPart:
    return CosetPart(K.conjugate(v) if v else K, w.conjugate(v))


def _add_part(parts: list[CosetPart], part: CosetPart) -> None:
    for old in parts:
        if part.representative in old:
            return
    parts.append(part)


def _intersection_with_conjugate(H: SubgroupF, u: Word, limits: Limits) -> SubgroupF:
    """``H`` meet ``u^-1 H u``, the loops at (bp, Hu) in the square of St(Hu)."""
    aut, target = coset_automaton(H, u)
    cache = _ProductCache(aut, limits)
    K, _ = cache.coset((aut.basepoint, target), (aut.basepoint, target))
    return K


def elements_of_order(
    H: SubgroupF, k: int, u: Word = IDENTITY, limits: Limits = DEFAULT_LIMITS
) -> CosetUnionDescription:
    """All elements of order exactly k in ``Hu`` as a union of conjugated cosets."""
    if k < 1:
        raise ValueError("k must be at least 1")
    counter = _TrailCounter(limits.max_trails)
    if membership(H, u):
        return _subgroup_order_k(H, k, limits, counter)
    return _coset_order_k(H, k, u, limits, counter)


def _subgroup_order_k(H, k, limits, counter, first_only=False) -> CosetUnionDescription:
    parts: list[CosetPart] = []
    if k > len(H.restricted_vertices):
        return CosetUnionDescription(parts, H, k)
    if k == 1:
        return CosetUnionDescription([CosetPart(H, IDENTITY)], H, 1)
    aut = H.automaton
    cache = _ProductCache(aut, limits)
    for trail in _closed_trails(cache, H.restricted_vertices, k, counter):
        K, w = cache.coset(trail, trail[1:] + trail[:1])
        v = shortest_word(aut, trail[0], aut.basepoint)
        _add_part(parts, _conjugated(K, w, v))
        if first_only:
            break
    return CosetUnionDescription(parts, H, k)


def _coset_order_k(H, k, u, limits, counter, first_only=False) -> CosetUnionDescription:
    aut, target = coset_automaton(H, u)
    conj = _intersection_with_conjugate(H, u, limits)
    parts: list[CosetPart] = []
    if k > aut.num_vertices:
        return CosetUnionDescription(parts, conj, k, H.rank)
    cache = _ProductCache(aut, limits)
    bp = aut.basepoint

    def ends_ok(q0, qk):
        return cache.connected((q0, qk), (bp, target))

    for trail in _open_trails(cache, range(aut.num_vertices), k, counter, ends_ok):
        K, w = cache.coset(trail[:-1], trail[1:])
        _, v = cache.coset((trail[0], trail[-1]), (bp, target))
        _add_part(parts, _conjugated(K, w, v))
        if first_only:
            break
    return CosetUnionDescription(parts, conj, k, H.rank)


def k_roots(H: SubgroupF, k: int, limits: Limits = DEFAULT_LIMITS) -> CosetUnionDescription:
    """All ``g`` with ``g^k`` in H: the orders dividing k, merged."""
    parts: list[CosetPart] = []
    for d in divisors(k):
        for part in elements_of_order(H, d, limits=limits).parts:
            parts.append(part)
    return CosetUnionDescription(parts, H, k)


def has_order_zero(H: SubgroupF, u: Word = IDENTITY) -> bool:
    if not membership(H, u):
        return True
    return index(H) == float("inf")


def order_zero_description(
    H: SubgroupF, u: Word, limits: Limits = DEFAULT_LIMITS
) -> CosetUnionDescription:
    """Elements none of whose positive powers lie in ``Hu`` (H of finite index)."""
    if membership(H, u):
        raise ValueError("u lies in H; use has_order_zero for the subgroup case")
    if index(H) == float("inf"):
        raise ValueError("H has infinite index; the order-zero set is not a finite union")
    aut = H.automaton
    bp = aut.basepoint
    target = aut.read(bp, u.letters)
    cache = _ProductCache(aut, limits)
    counter = _TrailCounter(limits.max_trails)
    others = [v for v in range(aut.num_vertices) if v not in (bp, target)]
    parts: list[CosetPart] = []

    def extend(trail):
        if cache.connected(trail, trail[1:] + (bp,)):
            K, w = cache.coset(trail, trail[1:] + (bp,))
            _add_part(parts, CosetPart(K, w))
        for q in others:
            if q in trail:
                continue
            counter.tick()
            if cache.connected(trail, trail[1:] + (q,)):
                extend(trail + (q,))

    extend((bp,))
    return CosetUnionDescription(parts, _intersection_with_conjugate(H, u, limits), 0)


def spectrum(H: SubgroupF, u: Word = IDENTITY, limits: Limits = DEFAULT_LIMITS) -> set[int]:
    """The set of orders of all elements of the ambient group relative to ``Hu``."""
    counter = _TrailCounter(limits.max_trails)
    in_h = membership(H, u)
    out: set[int] = set()
    for k in range(1, spectrum_bound(H, u) + 1):
        if in_h:
            if k in out:
                continue
            found = bool(_subgroup_order_k(H, k, limits, counter, first_only=True))
            if found:
                out.update(divisors(k))
        elif _coset_order_k(H, k, u, limits, counter, first_only=True):
            out.add(k)
    if has_order_zero(H, u):
        out.add(0)
    return out


# --- purity --------------------------------------------------------------------


def _relevant_exponents(S: Iterable[int] | None, bound: int) -> list[int]:
    """Orders d in [2, bound] that divide some member of S (all d when S is None)."""
    if S is None:
        return list(range(2, bound + 1))
    S = set(S)
    if any(s < 1 for s in S):
        raise ValueError("S must consist of positive integers")
    return [d for d in range(2, bound + 1) if any(s % d == 0 for s in S)]


def is_S_pure(H: SubgroupF, S: Iterable[int] | None = None, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True when no element outside H has an S-th power in H (S=None: all exponents)."""
    counter = _TrailCounter(limits.max_trails)
    for d in _relevant_exponents(S, len(H.restricted_vertices)):
        if _subgroup_order_k(H, d, limits, counter, first_only=True):
            return False
    return True


def _closure_step(H: SubgroupF, S, limits) -> SubgroupF | None:
    roots = []
    for d in _relevant_exponents(S, len(H.restricted_vertices)):
        for part in elements_of_order(H, d, limits=limits).parts:
            roots.append(part.representative)
    if not roots:
        return None
    return H.join(roots)


def pure_closure(
    H: SubgroupF,
    S: Iterable[int] | None = None,
    limits: Limits = DEFAULT_LIMITS,
    trace: list[SubgroupF] | None = None,
) -> SubgroupF:
    """Smallest S-pure subgroup containing H; ``trace`` collects each round."""
    S = None if S is None else frozenset(S)
    current = H
    while True:
        nxt = _closure_step(current, S, limits)
        if nxt is None:
            return current
        current = nxt
        if trace is not None:
            trace.append(current)


# --- realizing spectra -----------------------------------------------------------


def build_K_O(O: Iterable[int]) -> SubgroupF:
    """The subgroup of F_2 generated by ``b^-n a^n b^n`` for nonzero n in O.

    Its spectrum is exactly O, for any finite divisor-closed O containing 0, 1.
    """
    O = set(O)
    if 0 not in O or 1 not in O:
        raise ValueError("O must contain 0 and 1")
    if any(n < 0 for n in O):
        raise ValueError("O must consist of naturals")
    for n in O - {0}:
        if any(d not in O for d in divisors(n)):
            raise ValueError(f"O is not closed under divisors of {n}")
    a, b = Word((1,)), Word((2,))
    gens = [(a**n).conjugate(b**n) for n in sorted(O - {0})]
    return build_stallings(gens, 2)
