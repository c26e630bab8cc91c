import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcoop.coopeq import (
    CoalitionStructure,
    bertrand_price,
    capped_benefit,
    check_prediction,
    forecast,
    npd_cooperation,
    pgg_contribution,
    solve,
    sweep,
    tau,
    v_npd,
    v_pgg,
)
from groupcoop.games import NPD, PGG, Bertrand, GeneralPGG

COOP = CoalitionStructure.FULLY_COOPERATIVE
SELFISH = CoalitionStructure.SELFISH


class TestForecast:
    def test_pgg_four_players(self):
        r = forecast(PGG(4, 0.5), COOP)
        assert (r.incentive, r.disincentive) == pytest.approx((0.5, 1.0))
        assert r.tau_pair == pytest.approx(1 / 3)
        assert (r.e_nobody, r.e_deviation) == pytest.approx((2.0, 0.5))
        assert r.forecast == pytest.approx(2 * (2 / 3) ** 3 + 0.5 * (1 - (2 / 3) ** 3))

    def test_npd_two_players(self):
        r = forecast(NPD(2, 0.3, 0.1), COOP)
        assert (r.incentive, r.disincentive, r.tau_pair) == pytest.approx((0.1, 0.2, 1 / 3))
        assert r.forecast == pytest.approx(0.1)

    @pytest.mark.parametrize("spec", [PGG(4, 0.5), NPD(2, 0.3, 0.1), Bertrand(3, 1, 10), GeneralPGG(5, 2)])
    def test_selfish_is_nash_payoff(self, spec):
        r = forecast(spec, SELFISH)
        assert r.incentive == 0 and r.tau_pair == 0 and r.tau_nobody == 1
        assert r.forecast == r.e_nobody

    def test_selfish_values(self):
        assert forecast(PGG(4, 0.5), "selfish").forecast == 1.0
        assert forecast(NPD(2, 0.3, 0.1), "selfish").forecast == 0.0
        assert forecast(Bertrand(4, 2, 10), "selfish").forecast == 0.5

    def test_tau_zero_zero(self):
        assert tau(0.0, 0.0) == 0.0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 200), st.floats(0.01, 0.99))
    def test_forecast_matches_closed_forms(self, n, frac):
        gamma = 1 / n + frac * (1 - 1 / n)
        if not 1 / n < gamma < 1:
            return
        assert forecast(PGG(n, gamma), COOP).forecast == pytest.approx(v_pgg(gamma, n), rel=1e-12, abs=1e-12)
        b, c = 1.0, frac
        assert forecast(NPD(n, b, c), COOP).forecast == pytest.approx(v_npd(b, c, n), abs=1e-12)

    def test_endowment_scales_reports(self):
        a = forecast(PGG(40, 0.5), COOP)
        b = forecast(PGG(40, 0.5, 10.0), COOP)
        for field in ("incentive", "disincentive", "e_nobody", "e_deviation", "forecast"):
            assert getattr(b, field) == pytest.approx(10 * getattr(a, field))
        assert b.tau_pair == a.tau_pair


class TestClosedForms:
    def test_v_pgg_examples(self):
        assert v_pgg(0.5, 4) == pytest.approx(0.944444, abs=1e-6)
        assert v_pgg(0.5, 40) == pytest.approx(7.5807, abs=1e-4)

    def test_v_npd_negative(self):
        r = (2 / 3) ** 10
        assert v_npd(0.3, 0.1, 11) == pytest.approx(0.2 * r - 0.1 * (1 - r))
        assert v_npd(0.3, 0.1, 11) == pytest.approx(-0.09480, abs=1e-5)

    def test_degenerate_gamma_near_one_over_n(self):
        n = 50
        values = [pgg_contribution(1 / n + eps, n) for eps in (1e-3, 1e-6, 1e-9, 1e-12)]
        assert all(math.isfinite(v) and v == 0.0 for v in values)

    def test_bertrand_examples(self):
        assert bertrand_price(1, 10, 2) == pytest.approx(10 * 10 / 18)
        assert bertrand_price(1, 10, 4) == 1.0

    def test_bertrand_cap(self):
        # below n/(n-1) no unit undercut is profitable; the price stays at H
        assert bertrand_price(0, 1.5, 2) == 1.5


class TestSolve:
    def test_table_four(self):
        assert solve(PGG(4, 0.5)).equilibrium == 0.0
        assert solve(PGG(40, 0.5)).equilibrium == pytest.approx(0.3464, abs=5e-4)
        assert solve(PGG(40, 0.5, 10.0)).equilibrium * 10 == pytest.approx(3.46, abs=5e-3)

    def test_table_five(self):
        assert abs(solve(NPD(2, 0.3, 0.1)).equilibrium - 0.5) < 1e-9
        assert solve(NPD(11, 0.3, 0.1)).equilibrium == 0.0

    def test_bertrand(self):
        assert solve(Bertrand(2, 1, 10)).equilibrium == pytest.approx(5.5556, abs=1e-4)
        assert solve(Bertrand(4, 1, 10)).equilibrium == 1.0

    def test_matches_closed_forms(self):
        assert solve(PGG(17, 0.3)).equilibrium == pytest.approx(pgg_contribution(0.3, 17))
        assert solve(NPD(5, 0.4, 0.1)).equilibrium == pytest.approx(npd_cooperation(0.4, 0.1, 5))
        g = GeneralPGG(10, 4.0)
        assert solve(g).equilibrium == pytest.approx(pgg_contribution(0.4, 10))

    def test_ties_go_to_cooperation(self):
        # with H < n/(n-1) both forecasts are positive but selfish < coop
        pred = solve(Bertrand(2, 0, 1.5))
        assert pred.winning_structure is COOP

    def test_fallback_to_nash(self):
        pred = solve(NPD(11, 0.3, 0.1))
        assert pred.winning_structure is SELFISH
        assert check_prediction(pred) == []

    @pytest.mark.parametrize("spec", [PGG(40, 0.5), NPD(3, 0.3, 0.1), Bertrand(3, 1, 20), GeneralPGG(6, 3)])
    def test_prediction_invariants(self, spec):
        pred = solve(spec)
        assert check_prediction(pred) == []
        assert set(pred.forecasts) == {SELFISH, COOP}


class TestSweep:
    def test_npd_decreasing_then_zero(self):
        lam = [p.equilibrium for p in sweep(NPD(2, 0.3, 0.1), "n", range(2, 13))]
        positive = [x for x in lam if x > 0]
        assert all(a > b for a, b in zip(positive, positive[1:]))
        assert lam[len(positive):] == [0.0] * (len(lam) - len(positive))

    def test_pgg_non_decreasing(self):
        x = [p.equilibrium for p in sweep(PGG(3, 0.5), "n", range(3, 41))]
        assert np.all(np.diff(x) >= 0)

    def test_gamma_statics(self):
        x = [p.equilibrium for p in sweep(PGG(10, 0.3), "gamma", np.linspace(0.3, 0.9, 13))]
        assert np.all(np.diff(x) >= 0)

    def test_capped_benefit_peak(self):
        ns = list(range(3, 81))
        preds = sweep(GeneralPGG(3, 1.5), "n", ns, {"b_n": capped_benefit(0.5, 20)})
        x = [p.equilibrium for p in preds]
        peak = ns[int(np.argmax(x))]
        assert peak == 20
        assert x[0] < max(x) and x[-1] < max(x)

    def test_invalid_point_names_value(self):
        with pytest.raises(ValueError, match="n=2"):
            sweep(PGG(4, 0.5), "n", [4, 3, 2])

    def test_unknown_parameter(self):
        with pytest.raises(ValueError, match="no parameter"):
            sweep(PGG(4, 0.5), "b", [1])
