"""Acceptance criteria, one check per criterion.

Each check prints ``criterion N: PASS|FAIL (...)``.  Run directly with
``python tests/test_acceptance.py`` or through pytest (lines are repeated in
the terminal summary).
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import free_corpus, fta_corpus, random_generators, random_word  # noqa: E402
from lattice_fixtures import FIXTURES  # noqa: E402
from relorders.automata import build_stallings, membership  # noqa: E402
from relorders.free_orders import (  # noqa: E402
    build_K_O,
    elements_of_order,
    is_S_pure,
    order,
    pure_closure,
    spectrum,
    spectrum_bound,
)
from relorders.fta import (  # noqa: E402
    fta_basis,
    fta_elements_of_order,
    fta_order,
    fta_spectrum,
)
from relorders.lattices import Lattice, determinant, divisors, lattice_order, lattice_spectrum, matmul, member, smith  # noqa: E402
from relorders.oracle import Ball, ball_free, oracle_order, verify_decomposition  # noqa: E402
from relorders.words import Ambient, FtaElement, parse_element, parse_word  # noqa: E402

W = parse_word


def _sub(*texts):
    return build_stallings([W(t) for t in texts], 2)


def criterion_1():
    details = []
    ok = True
    for O in [{0, 1}, {0, 1, 2}, {0, 1, 2, 3, 6}, {0, 1, 5}, {0, 1, 2, 4}]:
        K = build_K_O(O)
        orderset = spectrum(K)
        good = orderset == O and K.free_rank == len(O - {0})
        ok &= good
        details.append(f"{sorted(O)}->{sorted(orderset)} rank {K.free_rank}")
    return ok, "; ".join(details), 5


def criterion_2():
    H = _sub("a^2", "a b^2")
    radius, conj_radius = 7, 4
    conj = [h for h in ball_free(2, conj_radius) if h in H]
    desc = elements_of_order(H, 2)
    ball = list(ball_free(2, radius))
    described = {g for g in ball if desc.covers(g, conj)}
    odd_conjugates = set()
    for h in conj:
        for j in range(-radius - 2 * conj_radius, radius + 2 * conj_radius + 1, 2):
            w = h * (W("a") ** j) * ~h
            if len(w) <= radius:
                odd_conjugates.add(w)
    report2 = verify_decomposition(H, 2, Ball(radius), conj_radius, description=desc)
    report3 = verify_decomposition(H, 3, Ball(radius), conj_radius)
    empty3 = not elements_of_order(H, 3)
    ok = (
        described == odd_conjugates
        and report2.passed
        and not report2.inconclusive
        and report3.passed
        and not report3.inconclusive
        and empty3
    )
    detail = (
        f"{len(described)} described = {len(odd_conjugates)} odd a-power conjugates; "
        f"k=2 {len(report2.counterexamples)} counterexamples/{len(report2.inconclusive)} inconclusive; "
        f"k=3 empty={empty3}"
    )
    return ok, detail, 10


def criterion_3():
    H = _sub("a^2", "b")
    orders = [order(H, W("a").conjugate(W("b") ** n)) for n in range(11)]
    return all(k == 2 for k in orders), f"orders {orders}", 1


def criterion_4():
    violations = 0
    checked = 0
    for idx, gens in enumerate(free_corpus(count=50)):
        H = build_stallings(gens, 2)
        bound = spectrum_bound(H)
        rng = random.Random(idx)
        for _ in range(200):
            g = random_word(rng, 2, 8)
            k = order(H, g)
            checked += 1
            if not (k == 0 or k <= len(H.restricted_vertices)):
                violations += 1
            if k != oracle_order(lambda w: membership(H, w), g, bound):
                violations += 1
            # beyond the bound nothing new may appear
            if k == 0 and oracle_order(lambda w: membership(H, w), g, 2 * bound + 4) != 0:
                violations += 1
    return violations == 0, f"{checked} (subgroup, word) pairs, {violations} violations", 60


def criterion_5():
    violations = 0
    checked = 0
    for idx, gens in enumerate(free_corpus(count=50)):
        H = build_stallings(gens, 2)
        orderset = spectrum(H)
        if 1 not in orderset or any(not set(divisors(k)) <= orderset for k in orderset - {0}):
            violations += 1
        conj = [h for h in ball_free(2, 2) if h in H][:5]
        rng = random.Random(10_000 + idx)
        for _ in range(40):
            g = random_word(rng, 2, 8)
            k = order(H, g)
            checked += 1
            if k not in orderset:
                violations += 1
            for d in range(1, 5):
                if order(H, g**d) != (k // math.gcd(k, d) if k else 0):
                    violations += 1
            for h in conj:
                if order(H, h * g * ~h) != k:
                    violations += 1
    return violations == 0, f"{checked} elements over 50 subgroups, {violations} violations", 60


def criterion_6():
    H = _sub("a^2", "a b^2")
    trace = []
    C = pure_closure(H, {2}, trace=trace)
    first = trace[0] if trace else None
    expected_first = _sub("a", "b^2")
    mutual = first is not None and first.contains_subgroup(expected_first) and expected_first.contains_subgroup(first)
    whole = _sub("a", "b")
    ok = mutual and C.contains_subgroup(whole) and is_S_pure(C, {2})
    return ok, f"rounds {len(trace)}, first round = <a, b^2>: {mutual}, result = F2: {C == whole}", 5


def criterion_7():
    violations = 0
    for rows, m in FIXTURES:
        L = Lattice(rows, m)
        P, D, Q = smith(rows, m)
        if matmul(matmul(P, rows), Q) != D or abs(determinant(P)) != 1 or abs(determinant(Q)) != 1:
            violations += 1
        for a in itertools.product(range(-8, 9), repeat=m):
            brute = next((k for k in range(1, 65) if member(L, tuple(k * x for x in a))), 0)
            if lattice_order(L, a) != brute:
                violations += 1
    spec_ok = lattice_spectrum(Lattice([[2, 0], [0, 4]], 2)) == {1, 2, 4}
    return violations == 0 and spec_ok, f"{len(FIXTURES)} lattices, {violations} violations, spectrum example {spec_ok}", 20


def criterion_8():
    amb = Ambient(2, 1)
    H = fta_basis([parse_element("a | (2)", amb), parse_element("1 | (4)", amb)], amb)
    basis_ok = H.lattice == Lattice([[4]], 1) and H.completion_matrix == [(2,)]
    orders = tuple(fta_order(H, parse_element(t, amb)) for t in ("a", "1 | (1)", "a | (1)", "b"))
    orderset = fta_spectrum(H)
    desc = fta_elements_of_order(H, 2)
    report = verify_decomposition(H, 2, Ball(4, 6), description=desc)
    conj = [c for c in ball_free(2, 4) if c in H.free_part]
    mismatches = 0
    for w in ball_free(2, 4):
        for c in range(-6, 7):
            g = FtaElement(w, (c,))
            described = desc.covers(g, conj)
            j = w.letters.count(1) - w.letters.count(-1)
            expected = all(abs(x) == 1 for x in w.letters) and (c - 2 * j - 2) % 4 == 0
            mismatches += described != expected
    ok = basis_ok and orders == (2, 4, 4, 0) and orderset == {0, 1, 2, 4} and report.passed and not mismatches
    return ok, f"basis {basis_ok}, orders {orders}, spectrum {sorted(orderset)}, {mismatches} mismatches, {report.checked} checked", 20


def criterion_9():
    bad_labels = 0
    failed = 0
    inconclusive = 0
    assertions = 0
    parts = 0
    for amb, gens in fta_corpus(count=20):
        H = fta_basis(gens, amb)
        for k in (2, 3, 4):
            try:
                desc = fta_elements_of_order(H, k)
            except AssertionError:
                assertions += 1
                continue
            parts += len(desc)
            bad_labels += sum(fta_order(H, p.representative) != k for p in desc.parts)
            report = verify_decomposition(H, k, Ball(3, 4), description=desc)
            failed += not report.passed
            inconclusive += len(report.inconclusive)
    ok = not (bad_labels or failed or assertions)
    return ok, (
        f"60 decompositions, {parts} parts, {bad_labels} bad labels, {failed} failed reports, "
        f"{assertions} internal assertions, {inconclusive} inconclusive"
    ), 300


def criterion_10():
    bad = 0
    rng = random.Random(31337)
    for i in range(100):
        gens = random_generators(rng, n=rng.choice([2, 3]), max_gens=4, max_len=7)
        n = max(max(w.max_letter for w in gens), 2)
        first = build_stallings(gens, n, rng=random.Random(i)).automaton.key()
        second = build_stallings(gens, n, rng=random.Random(10_000 + i))
        bad += first != second.automaton.key()
        bad += not all(membership(second, g) for g in gens)
    return bad == 0, f"100 generator sets, {bad} mismatches", 10


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def evaluate(check) -> tuple[bool, str]:
    number = check.__name__.split("_")[1]
    start = time.perf_counter()
    ok, detail, budget = check()
    elapsed = time.perf_counter() - start
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {number}: {status} ({detail}; {elapsed:.2f}s of {budget}s)"
    print(line)
    return ok and within, line


@pytest.mark.parametrize("check", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(check):
    from conftest import ACCEPTANCE_LINES

    ok, line = evaluate(check)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
