"""Subgroups of F_n x Z^m: bases, completions, orders, roots and spectra.

A finitely generated subgroup H is held as

* the free projection ``Hpi`` with its Stallings automaton and free basis
  ``y_1 .. y_s``,
* the lattice ``L = H meet Z^m``,
* a completion matrix ``C`` whose row ``c_j`` satisfies ``y_j t^{c_j} in H``.

Then ``W(y) t^a`` lies in H exactly when ``a - ab(W) C`` lies in L, where
``ab`` is the exponent-sum vector over the y-basis.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import free_orders
from .automata import DEFAULT_LIMITS, Automaton, Limits, SubgroupF, build_stallings, express, index
from .lattices import (
    Lattice,
    LatticeCoset,
    QuotientMachine,
    divisors,
    format_matrix,
    format_vector,
    k_root,
    k_root_coset,
    lattice_order,
    lattice_spectrum,
    member,
    quotient_machine,
    solve_completion_matrix,
    vecmat,
)
from .words import IDENTITY, Ambient, FtaElement, Word, abelianize, format_element, format_word, invert, multiply

__all__ = [
    "FtaSubgroupBasis",
    "FtaPart",
    "RootDecomposition",
    "PreorderDecomposition",
    "fta_basis",
    "completion",
    "fta_membership",
    "fta_order",
    "fta_order_bound",
    "has_order_zero_fta",
    "fta_index_finite",
    "m_k",
    "fta_k_roots",
    "fta_elements_of_order",
    "fta_spectrum",
    "order_profile",
    "fta_smp",
    "fta_is_S_pure",
    "fta_pure_closure",
]


class FtaSubgroupBasis:
    def __init__(self, ambient: Ambient, lattice: Lattice, free_part: SubgroupF, completion_matrix):
        self.ambient = ambient
        self.lattice = lattice
        self.free_part = free_part
        self.completion_matrix = [tuple(r) for r in completion_matrix]

    @property
    def m(self) -> int:
        return self.ambient.abelian_rank

    def generators(self) -> list[FtaElement]:
        gens = [FtaElement(y, c) for y, c in zip(self.free_part.basis, self.completion_matrix)]
        gens += [FtaElement(IDENTITY, row) for row in self.lattice.rows]
        return gens

    def completion(self, w: Word) -> LatticeCoset | None:
        return completion(self, w)

    def __contains__(self, g: FtaElement) -> bool:
        return fta_membership(self, g)

    def serialize(self) -> str:
        n = self.ambient.free_rank
        lines = [f"L={format_matrix(self.lattice.rows)}"]
        for j, (y, c) in enumerate(zip(self.free_part.basis, self.completion_matrix), 1):
            lines.append(f"basis: y{j}={format_word(y, n)} c{j}={format_vector(c)}")
        return "\n".join(lines)

    __str__ = serialize

    def __repr__(self):
        gens = ", ".join(format_element(g) for g in self.generators())
        return f"FtaSubgroupBasis<{gens}>"

    def same_subgroup(self, other: "FtaSubgroupBasis") -> bool:
        return all(g in other for g in self.generators()) and all(g in self for g in other.generators())


def _vector_sum(vectors: Iterable[Sequence[int]], m: int) -> tuple[int, ...]:
    out = [0] * m
    for v in vectors:
        for i, x in enumerate(v):
            out[i] += x
    return tuple(out)


def _scale(v: Sequence[int], k: int) -> tuple[int, ...]:
    return tuple(k * x for x in v)


def _sub(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(u, v))


def _integer_left_kernel(U: Sequence[Sequence[int]], cols: int) -> list[list[int]]:
    """A basis of ``{x in Z^p : x U = 0}``."""
    from .lattices import smith

    p = len(U)
    if p == 0:
        return []
    P, D, _ = smith(U, cols)
    rank = sum(1 for i in range(min(p, cols)) if D[i][i])
    return [P[i] for i in range(rank, p)]


def fta_basis(gens: Iterable[FtaElement], ambient: Ambient) -> FtaSubgroupBasis:
    """Compute a basis ``(L; y_j t^{c_j})`` of the subgroup generated by ``gens``."""
    gens = list(gens)
    n, m = ambient.free_rank, ambient.abelian_rank
    for g in gens:
        if len(g.abelian_part) != m:
            raise ValueError("generator vector has the wrong length")
    free = build_stallings([g.free_part for g in gens], n)
    s = free.free_rank
    U = []
    for g in gens:
        word = express(free, g.free_part)
        assert word is not None
        U.append(list(abelianize(word, s)))
    A = [list(g.abelian_part) for g in gens]
    kernel = _integer_left_kernel(U, s) if s else [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
    lattice = Lattice([vecmat(x, A, m) for x in kernel], m)
    C = solve_completion_matrix(U, A, lattice) if s else []
    H = FtaSubgroupBasis(ambient, lattice, free, C)
    for g in gens:
        assert fta_membership(H, g), "generator fails membership in its own basis"
    return H


def _free_vector(H: FtaSubgroupBasis, w: Word) -> tuple[int, ...] | None:
    """``ab(express(w)) C``: a completion vector of ``w``, or None if w is not in Hpi."""
    word = express(H.free_part, w)
    if word is None:
        return None
    return vecmat(abelianize(word, H.free_part.free_rank), H.completion_matrix, H.m)


def completion(H: FtaSubgroupBasis, w: Word) -> LatticeCoset | None:
    """All ``a`` with ``w t^a`` in H, as a coset of L (None when w is not in Hpi)."""
    vec = _free_vector(H, w)
    if vec is None:
        return None
    return LatticeCoset(vec, H.lattice)


def fta_membership(H: FtaSubgroupBasis, g: FtaElement) -> bool:
    vec = _free_vector(H, g.free_part)
    return vec is not None and member(H.lattice, _sub(g.abelian_part, vec))


def fta_order_bound(H: FtaSubgroupBasis) -> int:
    L = H.lattice
    top = L.snf.divisors[-1] if L.rank else 1
    return free_orders.spectrum_bound(H.free_part) * top


def fta_order(H: FtaSubgroupBasis, g: FtaElement) -> int:
    for i in range(1, fta_order_bound(H) + 1):
        if fta_membership(H, g**i):
            return i
    return 0


def fta_index_finite(H: FtaSubgroupBasis) -> bool:
    return index(H.free_part) != float("inf") and H.lattice.rank == H.m


def has_order_zero_fta(H: FtaSubgroupBasis) -> bool:
    return not fta_index_finite(H)


# --- M_k and coverings ---------------------------------------------------------


def _covering(sub: SubgroupF, contributions: Sequence[Sequence[int]], machine: QuotientMachine) -> SubgroupF:
    """Elements of ``sub`` whose summed contributions vanish in the quotient.

    Non-tree arc j of St(sub) adds ``contributions[j]``; tree arcs add nothing.
    """
    aut = sub.automaton
    arc_index = sub.arc_index
    start = (aut.basepoint, machine.zero())
    ids = {start: 0}
    order = [start]
    delta: list[dict[int, int]] = [{}]
    queue = deque([start])
    while queue:
        v, q = queue.popleft()
        cid = ids[(v, q)]
        for x, v2 in aut.delta[v].items():
            if x > 0:
                j = arc_index.get((v, x))
                q2 = q if j is None else machine.add(q, contributions[j])
            else:
                j = arc_index.get((v2, -x))
                q2 = q if j is None else machine.add(q, machine.neg(contributions[j]))
            nxt = (v2, q2)
            nid = ids.get(nxt)
            if nid is None:
                nid = len(order)
                ids[nxt] = nid
                order.append(nxt)
                delta.append({})
                queue.append(nxt)
            delta[cid][x] = nid
    return SubgroupF.from_automaton(Automaton(aut.rank, delta, 0, {0}), 0)


def m_k(H: FtaSubgroupBasis, k: int) -> SubgroupF:
    """Free parts ``w`` of Hpi having a completion vector divisible by k."""
    if k < 1:
        raise ValueError("k must be positive")
    machine = quotient_machine(H.lattice, k)
    return _covering(H.free_part, H.completion_matrix, machine)


# --- roots and preorders ---------------------------------------------------------


@dataclass(frozen=True)
class FtaPart:
    subgroup: FtaSubgroupBasis
    representative: FtaElement

    def __contains__(self, g: FtaElement) -> bool:
        return fta_membership(self.subgroup, g * ~self.representative)


@dataclass
class _Decomposition:
    k: int
    parts: list[FtaPart]
    conjugator: FtaSubgroupBasis

    def __bool__(self):
        return bool(self.parts)

    def __len__(self):
        return len(self.parts)

    def covers(self, g: FtaElement, conjugators: Iterable[Word]) -> bool:
        """Search ``c g c^-1`` over the given free conjugators (central t's act trivially)."""
        for c in conjugators:
            h = FtaElement(multiply(c, multiply(g.free_part, invert(c))), g.abelian_part)
            if any(h in part for part in self.parts):
                return True
        return False

    def serialize(self) -> str:
        n = self.conjugator.ambient.free_rank
        lines = []
        for part in self.parts:
            gens = ", ".join(format_element(g, n) for g in part.subgroup.generators())
            lines.append(f"part: subgroup-basis=[{gens}] rep={format_element(part.representative, n)}")
        gens = ", ".join(format_element(g, n) for g in self.conjugator.generators())
        lines.append(f"conjugator=[{gens}]")
        lines.append(f"label={self.k}")
        return "\n".join(lines)

    __str__ = serialize


class RootDecomposition(_Decomposition):
    """All k-roots of H: the parts' union, conjugated by H."""


class PreorderDecomposition(_Decomposition):
    """All elements of order exactly k relative to H."""


@dataclass
class _RootData:
    witness: Word
    shift: tuple[int, ...]  # a_w
    kernel: SubgroupF  # N_w
    b_rows: list[tuple[int, ...]]  # b_{v_i}
    part: FtaSubgroupBasis = field(repr=False)


def _root_data(H: FtaSubgroupBasis, k: int, limits: Limits) -> list[_RootData]:
    m = H.m
    L = H.lattice
    M = m_k(H, k)
    frac = k_root(L, k)
    out = []
    for piece in free_orders.k_roots(M, k, limits).parts:
        w = piece.representative
        top = completion(H, w**k)
        assert top is not None
        a = k_root_coset(top, k)
        assert a is not None, "the k-th power of a witness has no completion divisible by k"
        N = piece.subgroup
        b_rows = []
        for v in N.basis:
            total = []
            for j in range(k):
                conj = v.conjugate(w**-j)
                c = completion(H, conj)
                assert c is not None
                root = k_root_coset(c, k)
                assert root is not None
                total.append(root.representative)
            b_rows.append(_vector_sum(total, m))
        gens = [FtaElement(v, b) for v, b in zip(N.basis, b_rows)]
        gens += [FtaElement(IDENTITY, row) for row in frac.rows]
        out.append(_RootData(w, a.representative, N, b_rows, fta_basis(gens, H.ambient)))
    return out


def fta_k_roots(H: FtaSubgroupBasis, k: int, limits: Limits = DEFAULT_LIMITS) -> RootDecomposition:
    """Every ``g`` with ``g^k`` in H lies in some ``(H_w w t^{a_w})`` conjugated by H."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return RootDecomposition(1, [FtaPart(H, FtaElement.identity(H.m))], H)
    parts = [
        FtaPart(d.part, FtaElement(d.witness, d.shift)) for d in _root_data(H, k, limits)
    ]
    return RootDecomposition(k, parts, H)


def _minimal_power_in(sub: SubgroupF, w: Word, k: int) -> int:
    for r in divisors(k):
        if (w**r) in sub:
            return r
    raise AssertionError("w^k should lie in the free projection")


def fta_elements_of_order(H: FtaSubgroupBasis, k: int, limits: Limits = DEFAULT_LIMITS) -> PreorderDecomposition:
    """Split each k-root part into cosets of constant order and keep order k."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return PreorderDecomposition(1, [FtaPart(H, FtaElement.identity(H.m))], H)
    m = H.m
    L = H.lattice
    r_L = L.rank
    frac = k_root(L, k)
    parts: list[FtaPart] = []
    for data in _root_data(H, k, limits):
        w, N = data.witness, data.kernel
        r0 = _minimal_power_in(H.free_part, w, k)
        gamma = completion(H, w**r0).representative
        b_prime = []
        for v in N.basis:
            reps = [completion(H, v.conjugate(w**-j)).representative for j in range(k)]
            b_prime.append(_vector_sum(reps, m))
        D = [_sub(_scale(b, k), bp) for b, bp in zip(data.b_rows, b_prime)]
        e = _sub(_scale(data.shift, k), _scale(gamma, k // r0))
        for row in D:
            if not member(L, row):
                raise AssertionError(f"row {row} of D is not in L={L}")
        if not member(L, e):
            raise AssertionError(f"vector e={e} is not in L={L}")

        # phi: v t^{b_v + c} -> vbar D + k c  (mod kL), in coordinates of L
        D_coords = [L.coordinates(row) for row in D]
        frac_coords = [L.coordinates(_scale(row, k)) for row in frac.rows]
        image_mod = QuotientMachine(Lattice.scaled_full(r_L, k)) if r_L else None

        # kernel free part: vbar D must lie in k((1/k)L), a full-rank lattice in L-coordinates
        if r_L:
            sub_machine = QuotientMachine(Lattice(frac_coords, r_L))
            kernel_free = _covering(N, D_coords, sub_machine)
        else:
            kernel_free = N
        kernel_gens = []
        for v in kernel_free.basis:
            vbar = abelianize(express(N, v), N.free_rank)
            vd = vecmat(vbar, D, m)
            assert all(x % k == 0 for x in vd)
            b_v = vecmat(vbar, data.b_rows, m)
            kernel_gens.append(FtaElement(v, _sub(b_v, tuple(x // k for x in vd))))
        kernel_gens += [FtaElement(IDENTITY, row) for row in L.rows]
        kernel = fta_basis(kernel_gens, H.ambient)

        # one preimage per element of the image of phi
        reps: dict[tuple[int, ...], tuple[Word, tuple[int, ...], tuple[int, ...]]] = {}
        zero = (0,) * r_L
        reps[zero] = (IDENTITY, (0,) * N.free_rank, (0,) * m)
        queue = deque([zero])
        moves = []
        for i, coords in enumerate(D_coords):
            unit = tuple(int(j == i) for j in range(N.free_rank))
            moves.append((coords, N.basis[i], unit, (0,) * m))
        for coords, row in zip(frac_coords, frac.rows):
            moves.append((coords, IDENTITY, (0,) * N.free_rank, tuple(row)))
        while queue and r_L:
            cur = queue.popleft()
            v, vbar, c = reps[cur]
            for coords, dv, dbar, dc in moves:
                nxt = image_mod.add(cur, coords)
                if nxt not in reps:
                    reps[nxt] = (
                        multiply(v, dv),
                        tuple(x + y for x, y in zip(vbar, dbar)),
                        tuple(x + y for x, y in zip(c, dc)),
                    )
                    queue.append(nxt)

        for v, vbar, c in reps.values():
            x = _vector_sum([vecmat(vbar, D, m), e, _scale(c, k)], m)
            label = next(
                r for r in divisors(k) if r % r0 == 0 and member(L.scaled(k // r), x)
            )
            if label != k:
                continue
            vec = _vector_sum([vecmat(vbar, data.b_rows, m), c, data.shift], m)
            rep = FtaElement(multiply(v, w), vec)
            direct = fta_order(H, rep)
            if direct != k:
                raise AssertionError(f"representative {format_element(rep)} has order {direct}, expected {k}")
            parts.append(FtaPart(kernel, rep))
    return PreorderDecomposition(k, parts, H)


# --- spectra and purity ----------------------------------------------------------


def _candidate_orders(H: FtaSubgroupBasis, limits: Limits) -> list[int]:
    free = free_orders.spectrum(H.free_part, limits=limits) - {0}
    lat = lattice_spectrum(H.lattice) - {0}
    return sorted({r * s for r in free for s in lat})


def _torsion_classes(L: Lattice) -> list[tuple[int, ...]]:
    """Canonical representatives of the finite group sat(L)/L."""
    m = L.ambient_rank
    zero = (0,) * m
    if not L.rank:
        return [zero]
    gens = k_root(L, L.snf.divisors[-1]).rows
    seen = {zero}
    queue = deque([zero])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = L.reduce(tuple(x + y for x, y in zip(cur, g)))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return sorted(seen)


def order_profile(H: FtaSubgroupBasis, limits: Limits = DEFAULT_LIMITS) -> set[int]:
    """Nonzero orders, computed part by part over the free preorders of Hpi.

    ``u t^a`` with ``Ord(u) = r > 0`` has order ``r * s`` where ``s`` is the
    lattice order of ``r a - gamma(u^r)``.  Over a part ``K w`` the vectors
    ``gamma((x w)^r)`` sweep ``gamma(w^r) + psi(K)`` with ``psi`` additive, so
    only finitely many torsion classes need checking.
    """
    m, L = H.m, H.lattice
    torsion = _torsion_classes(L)
    out: set[int] = set()
    for r in sorted(free_orders.spectrum(H.free_part, limits=limits) - {0}):
        for part in free_orders.elements_of_order(H.free_part, r, limits=limits).parts:
            w, K = part.representative, part.subgroup
            gamma = completion(H, w**r).representative
            rows = list(L.rows) + [tuple(r * int(i == j) for j in range(m)) for i in range(m)]
            for x in K.basis:
                pieces = []
                for i in range(r):
                    c = completion(H, x.conjugate(w**-i))
                    assert c is not None, "conjugate of a part generator left the free projection"
                    pieces.append(c.representative)
                rows.append(_vector_sum(pieces, m))
            sweep = Lattice(rows, m)
            for y in torsion:
                if member(sweep, tuple(p + q for p, q in zip(y, gamma))):
                    out.add(r * lattice_order(L, y))
    return out


def fta_spectrum(H: FtaSubgroupBasis, limits: Limits = DEFAULT_LIMITS, method: str = "profile") -> set[int]:
    """All orders relative to H.

    ``method="decomposition"`` instead tests every candidate ``k`` through
    :func:`fta_elements_of_order`; it is slower and kept as a cross-check.
    """
    if method == "profile":
        out = order_profile(H, limits)
    elif method == "decomposition":
        out = {1}
        for k in _candidate_orders(H, limits):
            if k not in out and k >= 2 and fta_elements_of_order(H, k, limits):
                out.update(divisors(k))
    else:
        raise ValueError(f"unknown method {method!r}")
    if has_order_zero_fta(H):
        out.add(0)
    return out


def fta_smp(H: FtaSubgroupBasis, k: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Decide whether some element has order exactly k relative to H."""
    if k == 0:
        return has_order_zero_fta(H)
    if k == 1:
        return True
    return k in order_profile(H, limits)


def _relevant(orderset: set[int], S) -> list[int]:
    return sorted(d for d in orderset if d >= 2 and (S is None or any(s % d == 0 for s in S)))


def fta_is_S_pure(H: FtaSubgroupBasis, S: Iterable[int] | None = None, limits: Limits = DEFAULT_LIMITS) -> bool:
    S = None if S is None else frozenset(S)
    return not _relevant(order_profile(H, limits), S)


def fta_pure_closure(
    H: FtaSubgroupBasis,
    S: Iterable[int] | None = None,
    limits: Limits = DEFAULT_LIMITS,
    trace: list[FtaSubgroupBasis] | None = None,
) -> FtaSubgroupBasis:
    """Smallest S-pure subgroup containing H (S=None: all exponents).

    Each round adjoins the elements of prime order: any relevant order d has
    a prime divisor p that is itself a relevant order.
    """
    S = None if S is None else frozenset(S)
    while True:
        primes = [d for d in _relevant(order_profile(H, limits), S) if divisors(d) == [1, d]]
        if not primes:
            return H
        extra: list[FtaElement] = []
        for p in primes:
            for part in fta_elements_of_order(H, p, limits).parts:
                extra.extend(part.subgroup.generators())
                extra.append(part.representative)
        assert extra, "a prime order in the spectrum produced no elements"
        H = fta_basis(H.generators() + extra, H.ambient)
        if trace is not None:
            trace.append(H)
