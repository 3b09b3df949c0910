import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densitylab.indexsets import (
    NAT,
    ArithProg,
    Diff,
    FactorialPoints,
    Finite,
)
from densitylab.streams import (
    FinitePermutation,
    Piecewise,
    RankFill,
    apply_permutation,
    constant,
    prefix,
)
from densitylab.welfare import (
    Ordering,
    SwfError,
    SwfValue,
    cesaro_liminf,
    discounted_sum,
    induced_compare,
    liminf_swf,
    min_swf,
)

FACTS = FactorialPoints(NAT)
EVENS_INDICATOR = Piecewise(0, ((ArithProg(2, 2), Fraction(1)),))


# -- Cesàro liminf -------------------------------------------------------------


def test_cesaro_of_constant():
    assert cesaro_liminf(constant(Fraction(7, 3))) == SwfValue.finite(Fraction(7, 3))


def test_cesaro_of_alternating_indicator():
    assert cesaro_liminf(EVENS_INDICATOR) == SwfValue.finite(Fraction(1, 2))
    # oracle: the partial average at every even checkpoint is exactly 1/2
    for n in (2, 10, 720):
        assert sum(prefix(EVENS_INDICATOR, n)) / n == Fraction(1, 2)


def test_cesaro_divergence_for_sparse_fill():
    x = RankFill(Diff(FACTS, Finite((1,))))
    v = cesaro_liminf(x)
    assert v.kind == "plus_infinity"
    n = 5040
    assert sum(prefix(x, n)) / n > Fraction(n, 4)


def test_cesaro_interval_estimate_for_unresolved_streams():
    x = Piecewise(0, ((FACTS, Fraction(3)),))
    # periodic profile exists for no clause, and the stream is not rank-fill
    v = cesaro_liminf(x)
    assert v.kind == "finite" or v.kind == "interval"


def test_cesaro_partial_averages_approach_exact_value():
    # |sum(x, 1..n)/n - mean| <= C/n at factorial checkpoints, with C
    # bounded by the profile start and one period of deviations
    import math

    import numpy as np

    from densitylab.streams import stream_profile
    from densitylab.verification import membership_mask

    x = Piecewise(Fraction(1, 3), ((ArithProg(2, 4), Fraction(2)), (ArithProg(3, 4), Fraction(1)),))
    p = stream_profile(x)
    mean = cesaro_liminf(x).value
    c_bound = (p.start + p.period) * (max(abs(v) for v in p.values) + abs(mean) + 1)
    for k in range(3, 9):
        n = math.factorial(k)
        total = Fraction(x.default) * n
        for s, v in x.clauses:
            total += (v - x.default) * int(membership_mask(s, n).sum())
        assert abs(total / n - mean) <= Fraction(c_bound, n)


def test_cesaro_ignores_finite_permutations():
    rng = random.Random(5)
    base = Piecewise(1, ((ArithProg(3, 4), Fraction(5)),))
    for _ in range(30):
        n = rng.randint(1, 50)
        images = list(range(1, n + 1))
        rng.shuffle(images)
        pi = FinitePermutation(n, tuple(images))
        assert cesaro_liminf(apply_permutation(base, pi)) == cesaro_liminf(base)


def test_cesaro_strictly_sensitive_to_cofinite_gains():
    y = Piecewise(1, ((ArithProg(2, 2), Fraction(2)),))
    x = Piecewise(
        Fraction(3, 2),
        ((Diff(ArithProg(2, 2), Finite((4,))), Fraction(5, 2)), (Finite((4,)), Fraction(2))),
    )
    wx, wy = cesaro_liminf(x), cesaro_liminf(y)
    assert wx.value - wy.value == Fraction(1, 2)


# -- discounted sum ---------------------------------------------------------------


def test_discounted_sum_of_constant():
    assert discounted_sum(constant(1), Fraction(1, 2)) == SwfValue.finite(2)


def test_discounted_sum_single_spike():
    x = Piecewise(0, ((Finite((1,)), Fraction(1)),))
    assert discounted_sum(x, Fraction(1, 2)) == SwfValue.finite(1)


def test_discounted_sum_alternating():
    x = Piecewise(0, ((ArithProg(1, 2), Fraction(1)),))
    assert discounted_sum(x, Fraction(1, 2)) == SwfValue.finite(Fraction(4, 3))


def test_discounted_sum_periodic_matches_truncation():
    x = Piecewise(Fraction(1, 3), ((ArithProg(2, 3), Fraction(2)),))
    delta = Fraction(2, 5)
    exact = discounted_sum(x, delta).value
    partial = sum(delta ** (t - 1) * v for t, v in enumerate(prefix(x, 80), start=1))
    assert abs(exact - partial) < Fraction(1, 10**20)


def test_discounted_sum_bounded_nonperiodic_interval():
    x = Piecewise(0, ((FACTS, Fraction(1)),))
    tol = Fraction(1, 10**6)
    v = discounted_sum(x, Fraction(1, 2), tol=tol)
    assert v.kind == "interval" and v.hi - v.lo <= tol
    series = sum(Fraction(1, 2) ** (f - 1) for f in (1, 2, 6, 24, 120, 720))
    assert v.lo <= series <= v.hi


def test_discounted_sum_rejects_unbounded_streams():
    with pytest.raises(SwfError):
        discounted_sum(RankFill(FACTS), Fraction(1, 2))


def test_discounted_sum_validates_delta():
    with pytest.raises(SwfError):
        discounted_sum(constant(1), Fraction(3, 2))


@given(
    st.fractions(min_value=0, max_value=3),
    st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10)),
)
@settings(max_examples=40, deadline=None)
def test_discounted_sum_of_constant_closed_form(c, delta):
    assert discounted_sum(constant(c), delta) == SwfValue.finite(c / (1 - delta))


def test_discounted_sum_strict_monotonicity():
    rng = random.Random(9)
    for _ in range(25):
        d = rng.choice((2, 3, 4))
        clauses = tuple(
            (ArithProg(r, d), Fraction(rng.randint(0, 4))) for r in range(1, d)
        )
        y = Piecewise(Fraction(rng.randint(0, 2)), clauses)
        bump = Finite((rng.randint(1, 30),))
        x = Piecewise(
            y.default,
            tuple((Diff(s, bump), v) for s, v in clauses)
            + ((bump, Fraction(10)),),
        )
        delta = Fraction(rng.randint(1, 8), 10)
        from densitylab.streams import eval_at

        t0 = bump.elements[0]
        if eval_at(x, t0) > eval_at(y, t0):
            assert discounted_sum(x, delta).value > discounted_sum(y, delta).value


# -- min and liminf -----------------------------------------------------------------


def test_min_and_liminf_of_constant():
    c = constant(5)
    assert min_swf(c) == SwfValue.finite(5)
    assert liminf_swf(c) == SwfValue.finite(5)


def test_min_and_liminf_of_infinite_rank_fill():
    x = RankFill(Diff(FACTS, Finite((1,))))
    assert min_swf(x) == SwfValue.finite(1)
    assert liminf_swf(x) == SwfValue.finite(1)


def test_truncated_fill_set_forces_divergent_liminf():
    x = RankFill(FactorialPoints(Finite((1, 2, 3))))
    assert min_swf(x) == SwfValue.finite(1)
    assert liminf_swf(x).kind == "plus_infinity"


def test_finite_exception_moves_min_not_liminf():
    x = Piecewise(3, ((Finite((1,)), Fraction(1)),))
    assert min_swf(x) == SwfValue.finite(1)
    assert liminf_swf(x) == SwfValue.finite(3)


def test_min_respects_permutations():
    x = Piecewise(2, ((Finite((3,)), Fraction(0)),))
    y = apply_permutation(x, FinitePermutation.swap(3, 9))
    assert min_swf(y) == min_swf(x)
    assert liminf_swf(y) == liminf_swf(x)


# -- induced orders ----------------------------------------------------------------


def test_induced_compare_cesaro():
    assert induced_compare("cesaro", EVENS_INDICATOR, constant(Fraction(1, 3))) is Ordering.ABOVE
    assert induced_compare("cesaro", constant(Fraction(1, 3)), EVENS_INDICATOR) is Ordering.BELOW


def test_induced_compare_reflexive():
    assert induced_compare("cesaro", EVENS_INDICATOR, EVENS_INDICATOR) is Ordering.EQUIVALENT
    assert induced_compare("min", constant(2), constant(2)) is Ordering.EQUIVALENT


def test_induced_compare_discounted_dominance():
    x = Piecewise(1)
    y = Piecewise(0)
    assert induced_compare("discounted", x, y, delta=Fraction(1, 2)) is Ordering.ABOVE


def test_induced_compare_divergent_pair_undecided():
    a = RankFill(Diff(FACTS, Finite((1,))))
    b = RankFill(FACTS)
    assert induced_compare("cesaro", a, b) is Ordering.UNDECIDED


def test_induced_compare_unknown_name():
    with pytest.raises(SwfError):
        induced_compare("median", constant(1), constant(0))
