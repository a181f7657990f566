import math

import numpy as np
import pytest

from lgfm.errors import DegenerateInput, DimensionMismatch, LengthMismatch
from lgfm.evaluate import (
    RegressionParams,
    ScoreRecord,
    evaluate_dataset,
    fit_logistic,
    krocc,
    logistic_map,
    pu_psnr,
    rmse,
    srocc,
)


# --------------------------------------------------------------------------
# brute-force oracles

def midranks(x):
    order = sorted(range(len(x)), key=lambda i: x[i])
    ranks = [0.0] * len(x)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman_oracle(a, b):
    ra, rb = midranks(list(a)), midranks(list(b))
    ma = sum(ra) / len(ra)
    mb = sum(rb) / len(rb)
    num = sum((x - ma) * (y - mb) for x, y in zip(ra, rb))
    da = math.sqrt(sum((x - ma) ** 2 for x in ra))
    db = math.sqrt(sum((y - mb) ** 2 for y in rb))
    return num / (da * db)


def kendall_oracle(a, b):
    n = len(a)
    concordant = discordant = ties_a = ties_b = 0
    for i in range(n):
        for j in range(i + 1, n):
            da, db = a[i] - a[j], b[i] - b[j]
            if da == 0 and db == 0:
                ties_a += 1
                ties_b += 1
            elif da == 0:
                ties_a += 1
            elif db == 0:
                ties_b += 1
            elif da * db > 0:
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    return (concordant - discordant) / math.sqrt(
        (n0 - ties_a) * (n0 - ties_b)
    )


def make_records(q, mos):
    return [ScoreRecord(str(i), qi, mi) for i, (qi, mi) in enumerate(zip(q, mos))]


# --------------------------------------------------------------------------

class TestLogisticMap:
    def test_sigmoid_vanishes_at_center(self):
        g = RegressionParams(2.0, 3.0, 1.5, 0.7, -0.2)
        assert logistic_map(1.5, g) == pytest.approx(0.7 * 1.5 - 0.2, abs=1e-12)

    def test_degenerate_linear_case(self):
        g = RegressionParams(0.0, 1.0, 0.0, 1.0, 0.0)
        for q in (-3.0, 0.0, 2.5):
            assert logistic_map(q, g) == pytest.approx(q, abs=1e-12)

    def test_odd_sigmoid_at_center(self):
        g = RegressionParams(2.0, 1.0, 0.0, 0.0, 0.0)
        assert logistic_map(0.0, g) == pytest.approx(0.0, abs=1e-12)

    def test_saturates_instead_of_overflowing(self):
        g = RegressionParams(1.0, 50.0, 0.0, 0.0, 0.0)
        assert logistic_map(1e6, g) == pytest.approx(0.5)
        assert logistic_map(-1e6, g) == pytest.approx(-0.5)


class TestFitLogistic:
    def test_recovers_noise_free_model(self):
        rng = np.random.default_rng(40)
        q = rng.uniform(0, 1, 40)
        truth = RegressionParams(60.0, 8.0, 0.5, 10.0, 20.0)
        mos = logistic_map(q, truth)
        g = fit_logistic(make_records(q, mos))
        resid = logistic_map(q, g) - mos
        assert np.sqrt(np.mean(resid**2)) <= 1e-6

    def test_linear_data(self):
        q = np.linspace(0, 10, 20)
        mos = 2 * q + 3
        g = fit_logistic(make_records(q, mos))
        resid = logistic_map(q, g) - mos
        assert np.sqrt(np.mean(resid**2)) <= 1e-8

    def test_constant_q_rejected(self):
        with pytest.raises(DegenerateInput):
            fit_logistic(make_records(np.ones(10), np.arange(10.0)))

    def test_too_few_records(self):
        with pytest.raises(DegenerateInput):
            fit_logistic(make_records([1, 2, 3], [1, 2, 3]))

    def test_objective_monotone_within_each_run(self):
        rng = np.random.default_rng(41)
        q = rng.uniform(0, 5, 30)
        mos = logistic_map(q, RegressionParams(4, 1, 2.5, 0.2, 1.0))
        mos = mos + rng.normal(0, 0.05, len(q))
        trace: list = []
        fit_logistic(make_records(q, mos), trace=trace)
        assert len(trace) == 3
        for run in trace:
            assert all(b <= a + 1e-12 for a, b in zip(run, run[1:]))


class TestRankCorrelations:
    def test_perfect_monotone(self):
        a = [1.0, 2.0, 5.0, 9.0]
        b = [0.1, 0.4, 0.5, 3.0]
        assert srocc(a, b) == pytest.approx(1.0)
        assert krocc(a, b) == pytest.approx(1.0)

    def test_reversed(self):
        a = [1.0, 2.0, 3.0, 4.0]
        assert srocc(a, a[::-1]) == pytest.approx(-1.0)
        assert krocc(a, a[::-1]) == pytest.approx(-1.0)

    def test_hand_examples(self):
        a = [1, 2, 3, 4]
        b = [1, 3, 2, 4]
        assert srocc(a, b) == pytest.approx(0.8, abs=1e-12)
        assert krocc(a, b) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_match_brute_force_with_ties(self):
        rng = np.random.default_rng(42)
        for trial in range(100):
            n = int(rng.integers(3, 51))
            # coarse grid forces ties
            a = rng.integers(0, max(2, n // 2), n).astype(float)
            b = rng.integers(0, max(2, n // 2), n).astype(float)
            if np.all(a == a[0]) or np.all(b == b[0]):
                continue
            assert srocc(a, b) == pytest.approx(spearman_oracle(a, b), abs=1e-12)
            assert krocc(a, b) == pytest.approx(kendall_oracle(a, b), abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(43)
        a = rng.uniform(-5, 5, 30)
        b = rng.uniform(-5, 5, 30)
        f = lambda x: x**3 + x
        assert srocc(f(a), b) == pytest.approx(srocc(a, b), abs=1e-12)
        assert krocc(a, f(b)) == pytest.approx(krocc(a, b), abs=1e-12)

    def test_all_ties_rejected(self):
        with pytest.raises(DegenerateInput):
            krocc([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])
        with pytest.raises(DegenerateInput):
            srocc([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            srocc([1, 2, 3], [1, 2])


class TestRmse:
    def test_zero_for_identical(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_value(self):
        assert rmse([3.0, 4.0], [0.0, 0.0]) == pytest.approx(math.sqrt(12.5))

    def test_order_invariant(self):
        a = [1.0, 5.0, 2.0]
        b = [2.0, 4.0, 0.0]
        assert rmse(a, b) == rmse(a[::-1], b[::-1])


class TestPuPsnr:
    def test_identical_capped(self):
        m = np.ones((8, 8))
        assert pu_psnr(m, m, 255.0) == 99.0

    def test_zero_db(self):
        ref = np.zeros((8, 8))
        dist = np.full((8, 8), 255.0)
        assert pu_psnr(ref, dist, 255.0) == pytest.approx(0.0, abs=1e-12)

    def test_hand_value(self):
        ref = np.zeros((8, 8))
        dist = np.full((8, 8), 5.0)  # MSE 25
        assert pu_psnr(ref, dist, 255.0) == pytest.approx(
            10 * math.log10(255.0**2 / 25.0), abs=1e-9
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pu_psnr(np.ones((4, 4)), np.ones((4, 5)), 255.0)


class TestEvaluateDataset:
    def test_self_consistent_report(self):
        rng = np.random.default_rng(44)
        q = rng.uniform(0, 1, 25)
        mos = 80 * q + 5 + rng.normal(0, 1.0, 25)
        report = evaluate_dataset(make_records(q, mos))
        assert report["srocc"] > 0.9
        assert report["krocc"] > 0.8
        assert report["rmse"] < 3.0
        assert len(report["gamma"]) == 5
