"""Brute-force ground truth: balls of elements and orders from the definition.

Nothing here uses trails, roots or covering constructions.  Orders are found
by testing ``g, g^2, ...`` for membership up to a caller-supplied bound, and
decompositions are checked element by element against those orders.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, TypeVar

from . import fta as _fta
from . import free_orders
from .automata import DEFAULT_LIMITS, Limits, SubgroupF, membership
from .lattices import member
from .words import IDENTITY, Ambient, FtaElement, Word, format_element, format_word, invert, multiply

__all__ = ["Ball", "Report", "ball_free", "ball_fta", "oracle_order", "verify_decomposition"]

G = TypeVar("G", Word, FtaElement)


@dataclass(frozen=True)
class Ball:
    free_radius: int
    abelian_box: int = 0


def ball_free(n: int, radius: int) -> Iterator[Word]:
    """Every reduced word of length at most ``radius``, in shortlex order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    letters = sorted([i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)], key=lambda x: (abs(x), x < 0))
    layer: list[tuple[int, ...]] = [()]
    yield IDENTITY
    for _ in range(radius):
        layer = [w + (x,) for w in layer for x in letters if not w or w[-1] != -x]
        for w in layer:
            yield Word._trusted(w)


def ball_fta(ambient: Ambient, ball: Ball) -> Iterator[FtaElement]:
    c = ball.abelian_box
    vectors = list(itertools.product(range(-c, c + 1), repeat=ambient.abelian_rank))
    for w in ball_free(ambient.free_rank, ball.free_radius):
        for a in vectors:
            yield FtaElement(w, a)


def oracle_order(member: Callable[[G], bool], g: G, bound: int) -> int:
    """Least ``k`` in ``[1, bound]`` with ``g^k`` a member, else 0."""
    for k in range(1, bound + 1):
        if member(g**k):
            return k
    return 0


@dataclass
class Report:
    k: int
    checked: int = 0
    counterexamples: list[str] = field(default_factory=list)
    inconclusive: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def __str__(self):
        head = "pass" if self.passed else "fail"
        lines = [f"{head}: k={self.k}, {self.checked} elements, "
                 f"{len(self.counterexamples)} counterexamples, {len(self.inconclusive)} inconclusive"]
        lines += [f"counterexample: {c}" for c in self.counterexamples]
        lines += [f"inconclusive: {c}" for c in self.inconclusive]
        return "\n".join(lines)


def verify_decomposition(
    H: SubgroupF | _fta.FtaSubgroupBasis,
    k: int,
    ball: Ball,
    conjugator_radius: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
    description=None,
) -> Report:
    """Compare the computed order-k description with brute-force orders on a ball.

    An element the description claims but whose order differs is a
    counterexample.  An element of order k that no conjugator within
    ``conjugator_radius`` (default: the ball radius) moves into a part is
    reported as inconclusive.
    """
    radius = ball.free_radius if conjugator_radius is None else conjugator_radius
    if isinstance(H, SubgroupF):
        return _verify_free(H, k, ball, radius, limits, description)
    return _verify_fta(H, k, ball, radius, limits, description)


def _verify_free(H, k, ball, radius, limits, description) -> Report:
    desc = description if description is not None else free_orders.elements_of_order(H, k, limits=limits)
    bound = free_orders.spectrum_bound(H)
    conjugators = [c for c in ball_free(H.rank, radius) if membership(H, c)]
    report = Report(k)
    for part in desc.parts:
        got = oracle_order(lambda w: membership(H, w), part.representative, bound)
        if got != k:
            report.counterexamples.append(f"representative {format_word(part.representative)} has order {got}")
    for g in ball_free(H.rank, ball.free_radius):
        report.checked += 1
        order = oracle_order(lambda w: membership(H, w), g, bound)
        covered = desc.covers(g, conjugators)
        if covered and order != k:
            report.counterexamples.append(f"{format_word(g)} is described but has order {order}")
        elif order == k and not covered:
            report.inconclusive.append(format_word(g))
    return report


def _verify_fta(H, k, ball, radius, limits, description) -> Report:
    desc = description if description is not None else _fta.fta_elements_of_order(H, k, limits)
    bound = _fta.fta_order_bound(H)
    ambient = H.ambient
    L = H.lattice
    conjugators = [c for c in ball_free(ambient.free_rank, radius) if c in H.free_part]
    vectors = list(itertools.product(range(-ball.abelian_box, ball.abelian_box + 1), repeat=ambient.abelian_rank))
    report = Report(k)
    for part in desc.parts:
        got = oracle_order(lambda g: _fta.fta_membership(H, g), part.representative, bound)
        if got != k:
            report.counterexamples.append(f"representative {format_element(part.representative)} has order {got}")
    for u in ball_free(ambient.free_rank, ball.free_radius):
        # powers u^i landing in the free projection, with one completion vector each
        powers = []
        for i in range(1, bound + 1):
            c = _fta.completion(H, u**i)
            if c is not None:
                powers.append((i, c.representative))
        # cosets of vectors a for which some conjugate of u t^a lies in a part
        targets = []
        for c in conjugators:
            conj = multiply(c, multiply(u, invert(c)))
            for part in desc.parts:
                x = multiply(conj, invert(part.representative.free_part))
                comp = _fta.completion(part.subgroup, x)
                if comp is not None:
                    shift = tuple(p + q for p, q in zip(comp.representative, part.representative.abelian_part))
                    targets.append((shift, part.subgroup.lattice))
        for a in vectors:
            report.checked += 1
            order = next(
                (i for i, vec in powers if member(L, tuple(i * x - y for x, y in zip(a, vec)))), 0
            )
            covered = any(member(lat, tuple(x - y for x, y in zip(a, s))) for s, lat in targets)
            g = FtaElement(u, a)
            if covered and order != k:
                report.counterexamples.append(f"{format_element(g)} is described but has order {order}")
            elif order == k and not covered:
                report.inconclusive.append(format_element(g))
    return report
