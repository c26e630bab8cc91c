import io
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import mannwhitneyu

from groupcoop.empirics import (
    SYNTHETIC_SEED,
    DataFormatError,
    DecisionDataset,
    _exact_p,
    _normal_p,
    brute_force_p,
    exact_u_distribution,
    midranks,
    rank_sum,
    read_decisions,
    summarize,
    summary_rows,
    synthetic_decisions,
)


class TestSummarize:
    def test_hand_computed_fixture(self):
        s = summarize(DecisionDataset("S", "pgg", [0, 0, 10, 10, 5, 5, 5, 5]))
        assert s.mean == 5.0
        assert s.sem == pytest.approx(1.336, abs=1e-3)
        assert s.pct_free_riders == 25.0 and s.pct_full_contributors == 25.0

    def test_npd_half(self):
        s = summarize(DecisionDataset("S", "npd", [1, 1, 0, 0]))
        assert s.pct_cooperators == 50.0

    def test_all_free_riders(self):
        s = summarize(DecisionDataset("S", "pgg", [0, 0, 0]))
        assert (s.pct_free_riders, s.mean, s.sem) == (100.0, 0.0, 0.0)

    def test_empty_dataset(self):
        with pytest.raises(DataFormatError):
            DecisionDataset("S", "pgg", [])

    def test_summary_rows_shapes(self):
        pgg = summarize(DecisionDataset("S", "pgg", [0, 10]))
        npd = summarize(DecisionDataset("S", "npd", [0, 1]))
        assert summary_rows([npd])[0] == ["Condition", "N", "% cooperators", "SEM"]
        assert len(summary_rows([pgg])[0]) == 6


class TestRankSum:
    def test_small_exact(self):
        res = rank_sum([1, 2], [3, 4])
        assert res.u == 0 and res.method == "exact"
        assert res.p_value == pytest.approx(1 / 3)

    def test_identical_samples(self):
        assert rank_sum([1, 2, 3], [1, 2, 3]).p_value == 1.0

    def test_midranks(self):
        assert list(midranks([3, 1, 3, 2])) == [3.5, 1.0, 3.5, 2.0]

    def test_empty_sample(self):
        with pytest.raises(ValueError):
            rank_sum([], [1.0])

    def test_exact_requires_no_ties(self):
        with pytest.raises(ValueError):
            rank_sum([1, 1], [2, 3], method="exact")

    @pytest.mark.parametrize("n1, n2", [(1, 1), (2, 5), (4, 4), (8, 8), (3, 7)])
    def test_distribution_counts(self, n1, n2):
        from math import comb

        dist = exact_u_distribution(n1, n2)
        assert dist.sum() == comb(n1 + n2, n1)
        assert np.array_equal(dist, dist[::-1])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.randoms(use_true_random=False))
    def test_exact_matches_brute_force(self, n1, n2, rnd):
        pool = rnd.sample(range(100), n1 + n2)
        a, b = pool[:n1], pool[n1:]
        assert rank_sum(a, b).p_value == pytest.approx(brute_force_p(a, b), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(0, 10), min_size=1, max_size=15), st.lists(st.integers(0, 10), min_size=1, max_size=15))
    def test_label_symmetry(self, a, b):
        ab, ba = rank_sum(a, b), rank_sum(b, a)
        assert ab.p_value == pytest.approx(ba.p_value, abs=1e-12)
        assert ab.u + ba.u == pytest.approx(len(a) * len(b))

    def test_normal_matches_scipy(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            a = rng.integers(0, 11, rng.integers(9, 40))
            b = rng.integers(0, 11, rng.integers(9, 40))
            ours = rank_sum(a.tolist(), b.tolist())
            ref = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
            assert ours.method == "normal"
            assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)

    def test_exact_vs_approx_agreement_exhaustive(self):
        # Both p-values depend only on (n1, n2, U) for tie-free data, so every
        # case can be enumerated.  Below nine pooled values the continuity-
        # corrected normal curve drifts up to 0.0375 from the exact p (at 3 vs 3).
        worst_small, worst_large = 0.0, 0.0
        for n1 in range(3, 9):
            for n2 in range(3, 9):
                a, b = list(range(n1)), list(range(n1, n1 + n2))  # tie-free pool for the variance
                for u in range(n1 * n2 + 1):
                    gap = abs(_exact_p(u, n1, n2) - _normal_p(u, a, b))
                    if n1 + n2 >= 9:
                        worst_large = max(worst_large, gap)
                    else:
                        worst_small = max(worst_small, gap)
        assert worst_large < 0.03
        assert worst_small == pytest.approx(0.0375, abs=1e-4)

    def test_exact_vs_approx_agreement_random(self):
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 500:
            n1, n2 = rng.integers(3, 9, size=2)
            if n1 + n2 < 9:
                continue
            pool = rng.permutation(1000)[: n1 + n2].tolist()
            a, b = pool[:n1], pool[n1:]
            assert abs(rank_sum(a, b, "exact").p_value - rank_sum(a, b, "normal").p_value) < 0.03
            checked += 1

    def test_large_synthetic_difference(self):
        rng = np.random.default_rng(1)
        a = np.clip(rng.normal(3.92, 4, 62), 0, 10).round()
        b = np.clip(rng.normal(6.91, 4, 66), 0, 10).round()
        assert rank_sum(a.tolist(), b.tolist()).p_value < 0.01


class TestReadDecisions:
    def test_basic(self):
        text = "condition,variant,decision\nS,pgg,3\nS,pgg,10\nL,npd,C\nL,npd,d\n"
        data = read_decisions(io.StringIO(text))
        assert data["S"].decisions == (3.0, 10.0)
        assert data["L"].decisions == (1.0, 0.0)

    def test_tabs_and_metadata(self):
        text = "Condition\tVariant\tDecision\tage\nS\tpgg\t0\t21\n"
        data = read_decisions(io.StringIO(text))
        assert data["S"].metadata == ({"age": "21"},)

    def test_endowment_column(self):
        text = "condition,variant,decision,endowment\nS,pgg,15,20\n"
        assert read_decisions(io.StringIO(text))["S"].endowment == 20.0

    @pytest.mark.parametrize(
        "text, match",
        [
            ("", "empty"),
            ("condition,variant,decision\n", "no records"),
            ("condition,decision\nS,1\n", "missing column"),
            ("condition,variant,decision\nS,pgg,11\n", "line 2"),
            ("condition,variant,decision\nS,pgg,x\n", "not a number"),
            ("condition,variant,decision\nS,npd,maybe\n", "C or D"),
            ("condition,variant,decision\nS,chess,1\n", "unknown variant"),
            ("condition,variant,decision\nS,pgg,1\nS,npd,C\n", "mixes"),
        ],
    )
    def test_errors(self, text, match):
        with pytest.raises(DataFormatError, match=match):
            read_decisions(io.StringIO(text))


class TestSyntheticFixture:
    def test_bundled_file_regenerates(self):
        bundled = resources.files("groupcoop").joinpath("data/synthetic_decisions.csv").read_text()
        assert synthetic_decisions(SYNTHETIC_SEED) == bundled

    def test_shape(self):
        data = read_decisions(io.StringIO(synthetic_decisions()))
        assert {k: len(v.decisions) for k, v in data.items()} == {"PGG-S": 62, "PGG-L": 66, "NPD-S": 75, "NPD-L": 78}
        assert summarize(data["NPD-S"]).pct_cooperators == pytest.approx(41.33, abs=0.01)
        assert summarize(data["PGG-L"]).pct_full_contributors == pytest.approx(60.6, abs=0.1)

    def test_seed_changes_order_only(self):
        a = read_decisions(io.StringIO(synthetic_decisions(1)))
        b = read_decisions(io.StringIO(synthetic_decisions(2)))
        assert sorted(a["NPD-L"].decisions) == sorted(b["NPD-L"].decisions)
