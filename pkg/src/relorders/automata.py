"""Involutive deterministic automata over a free alphabet and Stallings graphs.

Each vertex carries a map from signed letters to targets, so an arc
``p --x--> q`` is stored as ``delta[p][x] = q`` together with
``delta[q][-x] = p``.  Vertices are dense integers, renumbered canonically
(breadth-first from the basepoint, letters in the order a, a^-1, b, ...)
after every fold or core pass.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .words import IDENTITY, Word, format_word, invert, letter_key, multiply

__all__ = [
    "Automaton",
    "SubgroupF",
    "Limits",
    "ResourceGuardError",
    "fold",
    "core",
    "build_stallings",
    "coset_automaton",
    "membership",
    "express",
    "pullback_language",
    "coset_intersection",
    "index",
    "shortest_word",
    "to_dot",
]


class ResourceGuardError(RuntimeError):
    """A configured search limit was exceeded; no answer is given."""


@dataclass(frozen=True)
class Limits:
    max_trails: int = 10**6
    max_product_vertices: int = 10**6


DEFAULT_LIMITS = Limits()


def _sorted_letters(d: dict[int, int]) -> list[int]:
    return sorted(d, key=letter_key)


class Automaton:
    """A deterministic involutive automaton with a basepoint and terminals."""

    def __init__(
        self,
        rank: int,
        delta: list[dict[int, int]],
        basepoint: int = 0,
        terminals: Iterable[int] | None = None,
    ):
        self.rank = rank
        self.delta = delta
        self.basepoint = basepoint
        self.terminals = frozenset(terminals) if terminals is not None else frozenset({basepoint})

    @property
    def num_vertices(self) -> int:
        return len(self.delta)

    def arcs(self) -> list[tuple[int, int, int]]:
        """Positive arcs as ``(source, letter, target)``, sorted."""
        return sorted((p, x, q) for p, d in enumerate(self.delta) for x, q in d.items() if x > 0)

    def read(self, v: int, word: Iterable[int]) -> int | None:
        delta = self.delta
        for x in word:
            v = delta[v].get(x)
            if v is None:
                return None
        return v

    def degree(self, v: int) -> int:
        return len(self.delta[v])

    def is_saturated(self) -> bool:
        full = 2 * self.rank
        return all(len(d) == full for d in self.delta)

    def key(self) -> tuple:
        return (self.rank, self.num_vertices, self.basepoint, tuple(sorted(self.terminals)), tuple(self.arcs()))

    def __repr__(self):
        return f"Automaton(vertices={self.num_vertices}, arcs={len(self.arcs())}, basepoint={self.basepoint})"


def renumber(aut: Automaton, start: int | None = None) -> tuple[Automaton, dict[int, int]]:
    """Canonical BFS renumbering from ``start``; unreachable vertices are dropped."""
    if start is None:
        start = aut.basepoint
    new_id = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        d = aut.delta[v]
        for x in _sorted_letters(d):
            q = d[x]
            if q not in new_id:
                new_id[q] = len(order)
                order.append(q)
                queue.append(q)
    delta = [{x: new_id[q] for x, q in aut.delta[v].items()} for v in order]
    terminals = [new_id[t] for t in aut.terminals if t in new_id]
    return Automaton(aut.rank, delta, 0, terminals), new_id


def fold(
    rank: int,
    num_vertices: int,
    arcs: Sequence[tuple[int, int, int]],
    basepoint: int = 0,
    terminals: Iterable[int] = (),
    rng: random.Random | None = None,
) -> tuple[Automaton, dict[int, int]]:
    """Fold an arbitrary involutive graph into a deterministic automaton.

    Returns the folded automaton (canonically renumbered from the basepoint)
    and a map from original vertices to new ids (reachable ones only).
    """
    parent = list(range(num_vertices))
    adj: list[dict[int, int]] = [dict() for _ in range(num_vertices)]
    pending: list[tuple[int, int]] = []

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def link(p: int, x: int, q: int) -> None:
        for src, letter, dst in ((p, x, q), (q, -x, p)):
            old = adj[src].get(letter)
            if old is None:
                adj[src][letter] = dst
            else:
                old = find(old)
                if old != dst:
                    pending.append((old, dst))

    def drain() -> None:
        while pending:
            i = rng.randrange(len(pending)) if rng else len(pending) - 1
            pending[i], pending[-1] = pending[-1], pending[i]
            a, b = pending.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if len(adj[a]) < len(adj[b]):
                a, b = b, a
            parent[b] = a
            moved, adj[b] = adj[b], {}
            for letter, target in moved.items():
                link(a, letter, find(target))

    order = list(arcs)
    if rng is not None:
        rng.shuffle(order)
    for p, x, q in order:
        if x < 0:
            p, x, q = q, -x, p
        link(find(p), x, find(q))
        drain()

    roots = sorted({find(v) for v in range(num_vertices)})
    dense = {r: i for i, r in enumerate(roots)}
    delta = [{x: dense[find(q)] for x, q in adj[r].items()} for r in roots]
    raw = Automaton(rank, delta, dense[find(basepoint)], {dense[find(t)] for t in terminals} | {dense[find(basepoint)]})
    aut, new_id = renumber(raw)
    mapping = {v: new_id[dense[find(v)]] for v in range(num_vertices) if dense[find(v)] in new_id}
    return aut, mapping


def core(aut: Automaton, keep: Iterable[int] | None = None) -> tuple[Automaton, dict[int, int]]:
    """Prune hanging trees, never removing vertices in ``keep``.

    The default keeps the basepoint and all terminals.  The result is
    renumbered canonically from the basepoint.
    """
    if keep is None:
        keep = aut.terminals | {aut.basepoint}
    keep = set(keep)
    delta = [dict(d) for d in aut.delta]
    alive = [True] * len(delta)
    stack = [v for v in range(len(delta)) if v not in keep and len(delta[v]) <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for x, q in delta[v].items():
            if q != v:
                delta[q].pop(-x, None)
                if q not in keep and alive[q] and len(delta[q]) <= 1:
                    stack.append(q)
        delta[v] = {}
    pruned = Automaton(aut.rank, delta, aut.basepoint, [t for t in aut.terminals if alive[t]])
    return renumber(pruned)


def restricted_vertices(aut: Automaton) -> frozenset[int]:
    """Vertices left after stripping every hanging tree, basepoint included.

    The one-vertex automaton of the trivial subgroup keeps its single vertex.
    """
    delta = [dict(d) for d in aut.delta]
    alive = [True] * len(delta)
    stack = [v for v in range(len(delta)) if len(delta[v]) <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for x, q in delta[v].items():
            if q != v:
                delta[q].pop(-x, None)
                if alive[q] and len(delta[q]) <= 1:
                    stack.append(q)
        delta[v] = {}
    left = frozenset(v for v in range(len(delta)) if alive[v])
    return left or frozenset({aut.basepoint})


def shortest_word(aut: Automaton, s: int, t: int) -> Word | None:
    if s == t:
        return IDENTITY
    back: dict[int, tuple[int, int]] = {s: (-1, 0)}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        d = aut.delta[v]
        for x in _sorted_letters(d):
            q = d[x]
            if q in back:
                continue
            back[q] = (v, x)
            if q == t:
                letters = []
                while q != s:
                    q, x = back[q]
                    letters.append(x)
                return Word._trusted(tuple(reversed(letters)))
            queue.append(q)
    return None


class SubgroupF:
    """A finitely generated subgroup of F_n held by its Stallings automaton."""

    def __init__(self, automaton: Automaton):
        self.automaton = automaton
        self.rank = automaton.rank
        bp = automaton.basepoint
        prefix = {bp: IDENTITY}
        tree: set[tuple[int, int, int]] = set()
        queue = deque([bp])
        delta = automaton.delta
        while queue:
            v = queue.popleft()
            for x in _sorted_letters(delta[v]):
                q = delta[v][x]
                if q not in prefix:
                    prefix[q] = Word._trusted(prefix[v].letters + (x,))
                    tree.add((v, x, q) if x > 0 else (q, -x, v))
                    queue.append(q)
        self.tree = frozenset(tree)
        self._prefix = prefix
        self.arc_index: dict[tuple[int, int], int] = {}
        basis = []
        for p, x, q in automaton.arcs():
            if (p, x, q) in self.tree:
                continue
            self.arc_index[(p, x)] = len(basis)
            basis.append(multiply(prefix[p], multiply(Word._trusted((x,)), invert(prefix[q]))))
        self.basis: list[Word] = basis

    @cached_property
    def restricted_vertices(self) -> frozenset[int]:
        return restricted_vertices(self.automaton)

    @property
    def num_vertices(self) -> int:
        return self.automaton.num_vertices

    @property
    def free_rank(self) -> int:
        """Rank of the subgroup itself (size of its free basis)."""
        return len(self.basis)

    def label_to(self, v: int) -> Word:
        """Tree label from the basepoint to ``v``."""
        return self._prefix[v]

    def key(self) -> tuple:
        return self.automaton.key()

    def __eq__(self, other):
        return isinstance(other, SubgroupF) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __contains__(self, w: Word) -> bool:
        return membership(self, w)

    def __repr__(self):
        gens = ", ".join(format_word(w) for w in self.basis)
        return f"SubgroupF<{gens}>"

    def contains_subgroup(self, other: "SubgroupF") -> bool:
        return all(w in self for w in other.basis)

    def conjugate(self, v: Word) -> "SubgroupF":
        """The subgroup ``v^-1 H v``."""
        return build_stallings([w.conjugate(v) for w in self.basis], self.rank)

    def join(self, words: Iterable[Word]) -> "SubgroupF":
        return build_stallings(list(self.basis) + list(words), self.rank)

    @classmethod
    def from_automaton(cls, aut: Automaton, base: int | None = None) -> "SubgroupF":
        """Subgroup of labels of closed walks at ``base`` (default: basepoint)."""
        if base is None:
            base = aut.basepoint
        rebased = Automaton(aut.rank, aut.delta, base, {base})
        return cls(core(rebased, {base})[0])


def build_stallings(
    gens: Iterable[Word], rank: int, rng: random.Random | None = None
) -> SubgroupF:
    """Fold the flower of ``gens`` into the Stallings automaton."""
    arcs: list[tuple[int, int, int]] = []
    count = 1
    for w in gens:
        if not w:
            continue
        letters = w.letters
        prev = 0
        for i, x in enumerate(letters):
            if abs(x) > rank:
                raise ValueError(f"letter {x} out of range for rank {rank}")
            nxt = 0 if i == len(letters) - 1 else count
            if nxt:
                count += 1
            arcs.append((prev, x, nxt))
            prev = nxt
    aut, _ = fold(rank, count, arcs, 0, (), rng)
    aut, _ = core(aut, {0})
    return SubgroupF(aut)


def membership(H: SubgroupF, w: Word, u: Word = IDENTITY) -> bool:
    """Decide ``w in H u``."""
    target = multiply(w, invert(u)) if u else w
    aut = H.automaton
    return aut.read(aut.basepoint, target.letters) == aut.basepoint


def express(H: SubgroupF, w: Word) -> Word | None:
    """Write ``w`` over the free basis of H (letter j+1 is ``H.basis[j]``)."""
    delta = H.automaton.delta
    index = H.arc_index
    p = H.automaton.basepoint
    out = []
    for x in w.letters:
        q = delta[p].get(x)
        if q is None:
            return None
        if x > 0:
            j = index.get((p, x))
            if j is not None:
                out.append(j + 1)
        else:
            j = index.get((q, -x))
            if j is not None:
                out.append(-(j + 1))
        p = q
    if p != H.automaton.basepoint:
        return None
    return Word(out)


def coset_automaton(H: SubgroupF, u: Word) -> tuple[Automaton, int]:
    """Core automaton of the coset Hu; returns it with the vertex of Hu."""
    delta = [dict(d) for d in H.automaton.delta]
    v = H.automaton.basepoint
    for x in u.letters:
        q = delta[v].get(x)
        if q is None:
            q = len(delta)
            delta.append({})
            delta[v][x] = q
            delta[q][-x] = v
        v = q
    aut = Automaton(H.rank, delta, H.automaton.basepoint, {v})
    pruned, mapping = core(aut, {aut.basepoint, v})
    return pruned, mapping[v]


def product_component(
    auts: Sequence[Automaton],
    start: tuple[int, ...],
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[list[tuple[int, ...]], dict[tuple[int, ...], int], list[dict[int, int]]]:
    """Connected component of ``start`` in the product of ``auts``."""
    ids = {start: 0}
    tuples = [start]
    delta: list[dict[int, int]] = [{}]
    queue = deque([start])
    deltas = [a.delta for a in auts]
    letters = [x for i in range(1, auts[0].rank + 1) for x in (i, -i)]
    while queue:
        cur = queue.popleft()
        cid = ids[cur]
        for x in letters:
            nxt = []
            for d, v in zip(deltas, cur):
                q = d[v].get(x)
                if q is None:
                    break
                nxt.append(q)
            else:
                nt = tuple(nxt)
                nid = ids.get(nt)
                if nid is None:
                    nid = len(tuples)
                    if nid >= limits.max_product_vertices:
                        raise ResourceGuardError(
                            f"product automaton exceeds {limits.max_product_vertices} vertices"
                        )
                    ids[nt] = nid
                    tuples.append(nt)
                    delta.append({})
                    queue.append(nt)
                delta[cid][x] = nid
    return tuples, ids, delta


def pullback_language(
    A: Automaton,
    s: int,
    t: int,
    B: Automaton,
    s2: int,
    t2: int,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[Automaton, int, int | None]:
    """Product automaton whose S -> T language is L_A(s->t) meet L_B(s2->t2).

    Returns ``(automaton, S, T)``; ``T`` is None when the pair (t, t2) is not
    reachable from (s, s2), i.e. the intersection is empty.
    """
    tuples, ids, delta = product_component([A, B], (s, s2), limits)
    target = ids.get((t, t2))
    keep = {0} if target is None else {0, target}
    aut = Automaton(A.rank, delta, 0, keep)
    pruned, mapping = core(aut, keep)
    return pruned, 0, (None if target is None else mapping[target])


def coset_intersection(
    items: Sequence[tuple[SubgroupF, Word]], limits: Limits = DEFAULT_LIMITS
) -> tuple[SubgroupF, Word] | None:
    """Intersect the cosets ``H_i u_i``; returns ``(K, w)`` with the meet ``K w``."""
    if not items:
        raise ValueError("need at least one coset")
    H, u = items[0]
    current, target = coset_automaton(H, u)
    start = current.basepoint
    for H2, u2 in items[1:]:
        aut2, target2 = coset_automaton(H2, u2)
        current, start, target = pullback_language(
            current, start, target, aut2, aut2.basepoint, target2, limits
        )
        if target is None:
            return None
    rep = shortest_word(current, start, target)
    return SubgroupF.from_automaton(current, start), rep


def index(H: SubgroupF) -> float | int:
    """Index of H in the ambient free group (``math.inf`` when infinite)."""
    aut = H.automaton
    return aut.num_vertices if aut.is_saturated() else math.inf


def to_dot(aut: Automaton, name: str = "automaton") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in range(aut.num_vertices):
        attrs = []
        if v == aut.basepoint:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=circle")
        if v in aut.terminals and v != aut.basepoint:
            attrs.append("style=filled")
            attrs.append('fillcolor="lightgray"')
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for p, x, q in aut.arcs():
        lines.append(f'  {p} -> {q} [label="{format_word(Word._trusted((x,)), aut.rank)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
