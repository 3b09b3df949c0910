"""End-to-end acceptance checks.

One test per criterion, each enforcing its stated exactness requirement
and wall-clock budget.  `pytest -v` prints one pass/fail line per
criterion.
"""

import io
import json
import math
import random
import time
from fractions import Fraction

from conftest import DENSE_FAMILY
from densitylab.cli import main
from densitylab.densities import density
from densitylab.dominance import implication_chain_report, suppes_sen_compare
from densitylab.gadgets import (
    block_set,
    build_threshold_gadget,
    compare_threshold_gadgets,
    compare_thresholds,
    factorial_ratio_inequality,
    factorial_ratio_terms,
    tail_density_certificate,
    threshold_gadget_from_indices,
    verify_density_one_step,
)
from densitylab.indexsets import NAT, Compl, FactorialPoints, count
from densitylab.streams import apply_permutation, eval_at, prefix
from densitylab.verdicts import Status
from densitylab.verification import (
    brute_force_grading,
    check_cesaro_properties,
    membership_mask,
    random_chain_pair,
    random_decidable_set,
    random_window_pair,
)

FACTS = FactorialPoints(NAT)


def test_criterion_1_counting_oracle_equivalence():
    # 200 random sets, structural counting vs the vectorized membership
    # oracle at 6!, 7!, 8!; exact match, under 60 seconds.
    started = time.perf_counter()
    rng = random.Random(20260809)
    checkpoints = (math.factorial(6), math.factorial(7), math.factorial(8))
    for _ in range(200):
        s = random_decidable_set(rng)
        for n in checkpoints:
            assert count(s, n) == int(membership_mask(s, n).sum())
    assert time.perf_counter() - started < 60


def test_criterion_2_reference_densities_exact():
    started = time.perf_counter()
    d = density(FACTS)
    assert d.exact and d.lower == Fraction(0) and d.upper == Fraction(0)
    d = density(Compl(FACTS))
    assert d.exact and d.lower == Fraction(1) and d.upper == Fraction(1)
    d = density(DENSE_FAMILY)
    assert d.exact and d.lower == Fraction(0) and d.upper == Fraction(1)
    assert time.perf_counter() - started < 1


def test_criterion_3_dominance_chain_monotone():
    # 500 random pairs with decidable strict sets: the pattern of holding
    # predicates never skips a level, with zero violations, under 120 s.
    started = time.perf_counter()
    rng = random.Random(31337)
    for _ in range(500):
        x, y = random_chain_pair(rng)
        report = implication_chain_report(x, y, 5040)
        assert report.violations == ()
        for _, verdict in report.entries:
            assert verdict.status in (Status.HOLDS, Status.FAILS)
    assert time.perf_counter() - started < 120


def test_criterion_4_cesaro_anonymity_and_sensitivity():
    # 100 random finite permutations leave the value exactly fixed; 100
    # random density-one improvements raise it strictly; under 60 s.
    started = time.perf_counter()
    result = check_cesaro_properties(random.Random(777), trials=100)
    assert result.passed, result.details
    assert time.perf_counter() - started < 60


def test_criterion_5_threshold_construction_reproduced():
    started = time.perf_counter()
    horizon = math.factorial(7)

    g = build_threshold_gadget(Fraction(1, 3), horizon=horizon)
    step = verify_density_one_step(g, horizon)
    assert step.holds
    assert step.witness_density.exact and step.witness_density.lower == Fraction(1)

    cmp_res = compare_thresholds(Fraction(1, 3), Fraction(2, 3), horizon=horizon)
    assert cmp_res.case == "a" and cmp_res.all_hold
    assert cmp_res.certificate.exact and cmp_res.certificate.lower == Fraction(1)

    cmp_b = compare_thresholds(Fraction(1, 4), Fraction(2, 5), horizon=horizon)
    assert cmp_b.case == "b" and cmp_b.all_hold and cmp_b.permutation is not None

    g_r = threshold_gadget_from_indices((1, 2, 3, 4, 7))
    g_s = threshold_gadget_from_indices((1, 2, 7))
    assert prefix(g_r.lower_stream, 7) == [1, 1, 2, 3, 4, 1, 5]
    assert prefix(g_r.upper_stream, 7) == [2, 1, 3, 4, 5, 1, 6]
    assert prefix(g_s.lower_stream, 7) == [1, 1, 2, 3, 4, 5, 6]
    ref = compare_threshold_gadgets(g_r, g_s, horizon=horizon)
    assert ref.case == "b" and ref.u1 == 6 and ref.u2 == 24 and ref.all_hold
    rearranged = apply_permutation(g_r.upper_stream, ref.permutation)
    assert prefix(rearranged, 23) == prefix(g_s.lower_stream, 23)
    assert eval_at(g_s.lower_stream, 24) == 23 and eval_at(rearranged, 24) == 1

    assert time.perf_counter() - started < 30


def test_criterion_6_ratio_inequality_sweep():
    # every strictly increasing prefix drawn from 1..12, m in {2, 3, 4},
    # main inequality and per-group positivity, exact integers, under 60 s.
    import itertools

    started = time.perf_counter()
    checked = 0
    for m in (2, 3, 4):
        for combo in itertools.combinations(range(1, 13), 2 * m + 2):
            assert factorial_ratio_inequality(combo, m) is True
            assert all(term > 0 for term in factorial_ratio_terms(combo, m))
            checked += 1
    assert checked == (
        math.comb(12, 6) + math.comb(12, 8) + math.comb(12, 10)
    )
    assert time.perf_counter() - started < 60


def test_criterion_7_block_count_certificates():
    # 20 random increasing prefixes: the closed-form block mass equals the
    # brute-force count at every feasible factorial checkpoint, under 60 s.
    started = time.perf_counter()
    rng = random.Random(4242)
    brute_cap = math.factorial(10)
    prefixes_with_rows = 0
    for _ in range(20):
        head = sorted(rng.sample(range(1, 9), 3))
        tail = sorted(rng.sample(range(head[-1] + 1, 13), rng.randint(0, 3)))
        seq = tuple(head + tail)
        u = block_set(seq)
        rows = [row for row in tail_density_certificate(seq).rows if row[1] <= brute_cap]
        assert rows, seq
        prefixes_with_rows += 1
        for m, checkpoint, counted, bound in rows:
            assert counted == int(membership_mask(u, checkpoint).sum())
            assert Fraction(counted, checkpoint) >= bound
    assert prefixes_with_rows == 20
    assert time.perf_counter() - started < 60


def test_criterion_8_grading_windows_against_brute_force():
    started = time.perf_counter()
    from densitylab.indexsets import ArithProg
    from densitylab.streams import Piecewise

    x = Piecewise(0, ((ArithProg(1, 2), Fraction(1)),))
    y = Piecewise(0, ((ArithProg(2, 2), Fraction(1)),))
    assert suppes_sen_compare(x, y).status is Status.INCOMPARABLE

    rng = random.Random(808)
    sizes = set()
    for _ in range(100):
        x, y, window = random_window_pair(rng, max_window=8)
        sizes.add(len(window))
        verdict = suppes_sen_compare(x, y)
        assert verdict.holds == brute_force_grading(x, y, window)
    assert 8 in sizes
    assert time.perf_counter() - started < 60


def test_criterion_9_verify_reports_are_byte_identical():
    argv = [
        "verify", "--seed", "77", "--density-sets", "25", "--chain-pairs", "25",
        "--cesaro-trials", "10", "--grading-pairs", "10", "--block-prefixes", "4",
        "--ratio-max", "7",
    ]
    runs = []
    for _ in range(2):
        out = io.StringIO()
        code = main(argv, stdout=out, stderr=io.StringIO())
        assert code == 0
        runs.append(out.getvalue().encode())
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["results"]["ok"] is True
