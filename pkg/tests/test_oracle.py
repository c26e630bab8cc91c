import math

import numpy as np
import pytest

from groupcoop import oracle
from groupcoop.coopeq import CoalitionStructure, forecast, solve, v_npd, v_pgg
from groupcoop.games import NPD, PGG, Bertrand, GeneralPGG
from groupcoop.oracle import (
    GridSearchConfig,
    TooManyPlayers,
    best_response,
    binomial_identity_checks,
    closed_form_equivalence,
    generic_forecast,
    proposition_scan,
    random_games,
    run_suites,
    verify_equilibrium,
)

COOP = CoalitionStructure.FULLY_COOPERATIVE


class TestBestResponse:
    def test_pgg_dominance(self):
        assert best_response(PGG(4, 0.5), 1.0) == 0.0

    def test_npd_dominance(self):
        assert best_response(NPD(3, 0.3, 0.1), 0.7) == 0.0

    def test_bertrand_undercut(self):
        br = best_response(Bertrand(2, 1, 10), 6.0)
        assert 5.9 < br < 6.0


class TestGenericForecast:
    def test_pgg_four(self):
        assert generic_forecast(PGG(4, 0.5), COOP).forecast == pytest.approx(v_pgg(0.5, 4), abs=1e-6)

    def test_npd_selfish_exact_zero(self):
        assert generic_forecast(NPD(2, 0.3, 0.1), "selfish").forecast == 0.0

    def test_npd_five(self):
        assert generic_forecast(NPD(5, 0.3, 0.1), COOP).forecast == pytest.approx(v_npd(0.3, 0.1, 5), abs=1e-6)

    @pytest.mark.parametrize("spec", [Bertrand(2, 1, 10), Bertrand(3, 0.5, 5), GeneralPGG(5, 2.5)])
    def test_agrees_with_two_event_collapse(self, spec):
        for s in CoalitionStructure:
            assert generic_forecast(spec, s).forecast == pytest.approx(forecast(spec, s).forecast, abs=1e-6)

    def test_too_many_players(self):
        with pytest.raises(TooManyPlayers):
            generic_forecast(PGG(13, 0.5), COOP)

    def test_subset_weights_sum_to_one(self):
        m = 6
        w = oracle._subset_weights(0.3, m)
        assert sum(math.comb(m, k) * wk for k, wk in enumerate(w)) == pytest.approx(1.0)


class TestVerifyEquilibrium:
    def test_pgg_forty(self):
        res = verify_equilibrium(PGG(40, 0.5), solve(PGG(40, 0.5)))
        assert res.verdict
        assert res.residual < 1e-6

    @pytest.mark.parametrize("n", [2, 11])
    def test_npd(self, n):
        assert verify_equilibrium(NPD(n, 0.3, 0.1), solve(NPD(n, 0.3, 0.1))).verdict

    def test_wrong_prediction_fails(self):
        spec = PGG(40, 0.5)
        good = solve(spec)
        bad = type(good)(spec, good.winning_structure, good.equilibrium + 0.05, good.equilibrium_payoff, good.reports)
        res = verify_equilibrium(spec, bad)
        assert not res.verdict
        assert res.residual > 1e-3

    def test_report_json(self):
        res = verify_equilibrium(NPD(2, 0.3, 0.1), solve(NPD(2, 0.3, 0.1)))
        assert res.to_dict()["verdict"] == "pass"
        report = oracle.VerificationReport(seed=1, checks=[res])
        assert '"passed": true' in report.to_json()


def test_random_games_reproducible():
    assert random_games(20, seed=4) == random_games(20, seed=4)
    games = random_games(40, seed=1)
    assert {type(g) for g in games} == {PGG, NPD, Bertrand, GeneralPGG}
    assert max(g.n for g in games) <= 12


def test_closed_form_equivalence_sample():
    for g in random_games(24, seed=9):
        checks = closed_form_equivalence(g)
        assert all(c.verdict for c in checks), [c for c in checks if not c.verdict]


def test_binomial_identity():
    checks = binomial_identity_checks(max_n=30, points=101)
    assert all(c.verdict and c.residual < 1e-10 for c in checks)


class TestPropositionScans:
    def test_unknown_claim(self):
        with pytest.raises(ValueError):
            proposition_scan("fs_bertrand")

    @pytest.mark.parametrize("claim", ["fs_npd", "fs_pgg", "cr1_npd", "cr1_pgg"])
    def test_no_counterexamples(self, claim):
        res = proposition_scan(claim)
        assert res.passed, res

    def test_seeded_scan_reproducible(self):
        assert proposition_scan("fs_npd") == proposition_scan("fs_npd")


@pytest.mark.parametrize("suite", ["binomial", "monotonicity", "bertrand", "propositions", "thresholds"])
def test_suites_pass(suite):
    assert run_suites([suite], seed=0).passed


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(["nope"])


def test_refined_grid_is_denser():
    cfg = GridSearchConfig()
    assert cfg.refined().grid_points > cfg.grid_points
    assert np.isclose(cfg.refined().tolerance, cfg.tolerance)
