import random

from densitylab.indexsets import member
from densitylab.verification import (
    CHECK_NAMES,
    check_specs,
    membership_mask,
    random_chain_pair,
    random_decidable_set,
    random_periodic_set,
    run_check,
    run_verification,
)


def test_membership_mask_matches_member():
    rng = random.Random(17)
    for _ in range(25):
        s = random_decidable_set(rng)
        mask = membership_mask(s, 300)
        for t in (1, 2, 50, 144, 299, 300):
            assert bool(mask[t - 1]) == member(s, t)


def test_periodic_generator_is_profiled():
    from densitylab.indexsets import periodic_profile

    rng = random.Random(23)
    for _ in range(40):
        assert periodic_profile(random_periodic_set(rng)) is not None


def test_chain_pairs_weakly_dominate():
    from densitylab.streams import eval_at

    rng = random.Random(29)
    for _ in range(20):
        x, y = random_chain_pair(rng)
        for t in range(1, 120):
            assert eval_at(x, t) >= eval_at(y, t)


def test_specs_cover_all_checks():
    specs = check_specs(seed=3)
    assert [name for name, _, _ in specs] == list(CHECK_NAMES)


def test_run_check_deterministic():
    spec = check_specs(seed=5, density_sets=10)[0]
    assert run_check(spec) == run_check(spec)


def test_injected_failure_appended():
    results = run_verification(
        seed=1, density_sets=4, chain_pairs=4, cesaro_trials=2, grading_pairs=2,
        block_prefixes=2, ratio_max=6, inject_failure=True,
    )
    assert results[-1].name == "injected_failure" and not results[-1].passed
    assert all(r.passed for r in results[:-1])
