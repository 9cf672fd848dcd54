"""Exact tuple-enumeration means and the mean comparisons built on them."""

import math
from itertools import permutations, product

import numpy as np
import pytest

from amgmlab.amgm import (
    MatrixFamily,
    amgm_gap,
    enumerate_tuples,
    equiv_form_check,
    maclaurin_gap,
    recht_gap,
    wor_mean,
    wr_mean,
)
from amgmlab.densecore import random_psd
from amgmlab.norms import CATALOG, OPERATOR, TRACE, ui_norm
from amgmlab.rng import Rng, derive
from amgmlab.sweeps import draw_psd


def _family(rng, n, d, kind="wishart"):
    return MatrixFamily([random_psd(rng, d, kind) for _ in range(n)])


def test_enumerate_tuples_counts_and_order():
    wr = list(enumerate_tuples(3, 2, distinct=False))
    assert len(wr) == 9
    assert wr == sorted(wr)  # lexicographic
    wor = list(enumerate_tuples(3, 2, distinct=True))
    assert len(wor) == 6
    assert all(len(set(t)) == len(t) for t in wor)
    assert wor == sorted(wor)


def test_means_hand_example():
    # A1 = diag(1,0), A2 = diag(0,1), operator norm, m = 2:
    # products with a repeat have norm 1, mixed products are 0.
    F = MatrixFamily([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert abs(wr_mean(F, 2, OPERATOR) - 0.5) < 1e-15
    assert abs(wor_mean(F, 2, OPERATOR) - 0.0) < 1e-15
    rep = amgm_gap(F, 2, OPERATOR)
    assert rep.passed and abs(rep.gap - 0.5) < 1e-15


def test_means_match_naive_enumeration():
    for t in range(10):
        rng = derive(51, t)
        n, d, m = 3 + rng.randint(2), 2 + rng.randint(2), 2 + rng.randint(2)
        spec = CATALOG[t % len(CATALOG)]
        F = _family(rng, n, d)
        def chain(tup):
            P = F.members[tup[0]]
            for j in tup[1:]:
                P = P @ F.members[j]
            return P

        naive_wr = np.mean([ui_norm(spec, chain(tup))
                            for tup in product(range(n), repeat=m)])
        naive_wor = np.mean([ui_norm(spec, chain(tup))
                             for tup in permutations(range(n), m)])
        assert abs(wr_mean(F, m, spec) - naive_wr) < 1e-10 * max(1.0, naive_wr)
        assert abs(wor_mean(F, m, spec) - naive_wor) < 1e-10 * max(1.0, naive_wor)


def test_means_accept_plain_lists():
    rng = Rng(52)
    members = [random_psd(rng, 2, "wishart") for _ in range(3)]
    assert wr_mean(members, 2, TRACE) == wr_mean(MatrixFamily(members), 2, TRACE)


def test_scalar_reduction_matches_maclaurin():
    for t in range(50):
        rng = derive(53, t)
        n = 2 + rng.randint(7)
        m = 1 + rng.randint(min(n, 4))
        xs = [rng.uniform(0.1, 3.0) for _ in range(n)]
        F = MatrixFamily([np.array([[x]]) for x in xs])
        mg = maclaurin_gap(xs, m)
        assert abs(wr_mean(F, m, OPERATOR) - mg.lhs) < 1e-12 * max(1.0, mg.lhs)
        assert abs(wor_mean(F, m, OPERATOR) - mg.rhs) < 1e-12 * max(1.0, mg.rhs)


def test_maclaurin_hand_example():
    # xs = (1, 2), m = 2: lhs = (3/2)^2 = 9/4, rhs = 1*2 = 2.
    rep = maclaurin_gap([1.0, 2.0], 2)
    assert abs(rep.lhs - 2.25) < 1e-15
    assert abs(rep.rhs - 2.0) < 1e-15
    assert rep.passed


def test_maclaurin_validation():
    with pytest.raises(ValueError):
        maclaurin_gap([1.0, -1.0], 1)
    with pytest.raises(ValueError):
        maclaurin_gap([1.0, 2.0], 3)


def test_amgm_gap_proved_regime_passes():
    for t in range(30):
        rng = derive(54, t)
        n = 3 + rng.randint(3)
        d = 2 + rng.randint(3)
        F = MatrixFamily([draw_psd(rng, d) for _ in range(n)])
        for m in (1, 2, 3):
            rep = amgm_gap(F, m, CATALOG[t % len(CATALOG)])
            assert rep.passed, rep
            assert rep.params["regime"] == "proved"


def test_amgm_gap_m4_labeled_conjecture():
    rng = Rng(55)
    F = _family(rng, 4, 2)
    rep = amgm_gap(F, 4, TRACE)
    assert rep.params["regime"] == "conjecture"


def test_homogeneity_of_means():
    rng = Rng(56)
    F = _family(rng, 3, 3)
    base = wr_mean(F, 3, TRACE)
    scaled = wr_mean(MatrixFamily([2.0 * M for M in F.members]), 3, TRACE)
    assert abs(scaled - 8.0 * base) < 1e-9 * max(1.0, abs(scaled))


def test_permutation_invariance_of_means():
    rng = Rng(57)
    F = _family(rng, 4, 2)
    shuffled = MatrixFamily([F.members[i] for i in (2, 0, 3, 1)])
    for spec in CATALOG:
        assert abs(wr_mean(F, 3, spec) - wr_mean(shuffled, 3, spec)) < 1e-12
        assert abs(wor_mean(F, 3, spec) - wor_mean(shuffled, 3, spec)) < 1e-12


def test_monte_carlo_consistent_with_enumeration():
    rng = Rng(58)
    F = _family(rng, 4, 3)
    spec = TRACE
    exact = wr_mean(F, 3, spec)
    draws = 20000
    samples = np.empty(draws)
    for i in range(draws):
        P = F.members[rng.randint(4)]
        for _ in range(2):
            P = P @ F.members[rng.randint(4)]
        samples[i] = ui_norm(spec, P)
    se = samples.std(ddof=1) / math.sqrt(draws)
    assert abs(samples.mean() - exact) < 4.0 * se


def test_equiv_form_factor_and_sign():
    for t in range(15):
        rng = derive(59, t)
        n = 3 + rng.randint(3)
        F = _family(rng, n, 2 + rng.randint(2))
        main, rearranged = equiv_form_check(F, CATALOG[t % len(CATALOG)])
        assert main.passed and rearranged.passed
        factor = n ** 3 * (n - 1) * (n - 2)
        assert rearranged.params["factor"] == factor
        assert rearranged.params["cross_dev"] <= 1e-8


def test_equiv_form_needs_three_members():
    rng = Rng(60)
    with pytest.raises(ValueError):
        equiv_form_check(_family(rng, 2, 2), TRACE)


def test_recht_gap_proved_regime():
    for t in range(20):
        rng = derive(61, t)
        n = 3 + rng.randint(3)
        d = 2 + rng.randint(3)
        F = MatrixFamily([draw_psd(rng, d) for _ in range(n)])
        for m in (1, 2):
            rep = recht_gap(F, m)
            assert rep.passed, rep
            assert rep.params["regime"] == "proved"


def test_wor_mean_requires_enough_members():
    rng = Rng(62)
    with pytest.raises(ValueError):
        wor_mean(_family(rng, 2, 2), 3, TRACE)


def test_enumeration_guard():
    rng = Rng(63)
    F = _family(rng, 30, 1)
    with pytest.raises(ValueError):
        wr_mean(F, 5, TRACE)  # 30^5 = 2.43e7 tuples > guard


def test_family_validation():
    with pytest.raises(ValueError):
        MatrixFamily([])
    with pytest.raises(ValueError):
        MatrixFamily([np.eye(2), np.eye(3)])
    F = MatrixFamily([np.eye(2), np.diag([1.0, -1.0])])
    with pytest.raises(ValueError):
        F.validate_psd()
