"""Cooperative equilibrium of highly symmetric social dilemmas.

Each player forecasts the payoff of two coalition structures -- everyone
selfish, or everyone in one grand coalition -- by weighting what happens if
nobody abandons the structure against the worst case if somebody does.  The
best forecast becomes a payoff floor every player must receive, and the
cooperative equilibrium is the Nash equilibrium of the game restricted to
profiles meeting that floor.

For the games here the worst case does not depend on *who* abandons, so
the forecast collapses to two events::

    v = e_nobody * (1 - tau)^(N-1) + e_deviation * (1 - (1 - tau)^(N-1))

with ``tau = I / (I + D)``, the incentive and disincentive to abandon.
All values are computed with the endowment normalized to 1 and rescaled to
money at the end.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Mapping

from .games import (
    ATOL,
    NPD,
    PGG,
    Bertrand,
    GameSpec,
    GeneralPGG,
    expected_symmetric_payoff,
    nash_action,
    validate,
    welfare_action,
)


class CoalitionStructure(str, Enum):
    SELFISH = "selfish"
    FULLY_COOPERATIVE = "fully_cooperative"


@dataclass(frozen=True)
class ForecastReport:
    structure: CoalitionStructure
    reference_profile: float
    incentive: float
    disincentive: float
    tau_pair: float
    tau_nobody: float
    e_nobody: float
    e_deviation: float
    forecast: float


@dataclass(frozen=True)
class Prediction:
    game: GameSpec
    winning_structure: CoalitionStructure
    equilibrium: float
    equilibrium_payoff: float
    reports: tuple[ForecastReport, ForecastReport]

    @property
    def forecasts(self) -> dict[CoalitionStructure, float]:
        return {r.structure: r.forecast for r in self.reports}

    def report(self, structure: CoalitionStructure) -> ForecastReport:
        return next(r for r in self.reports if r.structure is CoalitionStructure(structure))


def tau(incentive: float, disincentive: float) -> float:
    """Probability that a given co-player abandons the structure; 0 when I = D = 0."""
    total = incentive + disincentive
    return 0.0 if total == 0 else incentive / total


def _scale(spec: GameSpec) -> float:
    return spec.endowment if isinstance(spec, PGG) else 1.0


def _collapse(structure, reference, incentive, disincentive, e_nobody, e_dev, n, scale=1.0):
    t = tau(incentive, disincentive)
    nobody = (1.0 - t) ** (n - 1)
    v = e_nobody * nobody + e_dev * (1.0 - nobody)
    return ForecastReport(
        structure,
        reference,
        incentive * scale,
        disincentive * scale,
        t,
        nobody,
        e_nobody * scale,
        e_dev * scale,
        v * scale,
    )


def _bertrand_undercut(spec: Bertrand) -> float:
    return max(float(spec.low), spec.high - spec.tick)


def forecast(spec: GameSpec, structure: CoalitionStructure | str) -> ForecastReport:
    """Incentive, disincentive, abandonment probabilities and forecast for one structure."""
    validate(spec)
    structure = CoalitionStructure(structure)
    n = spec.n

    if structure is CoalitionStructure.SELFISH:
        # a Nash profile offers no incentive to deviate
        ref = nash_action(spec)
        nash_payoff = expected_symmetric_payoff(spec, ref) / _scale(spec)
        return _collapse(structure, ref, 0.0, 0.0, nash_payoff, nash_payoff, n, _scale(spec))

    ref = welfare_action(spec)
    if isinstance(spec, (PGG, GeneralPGG)):
        g = spec.marginal_return
        return _collapse(structure, ref, 1.0 - g, g * n - 1.0, g * n, g, n, _scale(spec))
    if isinstance(spec, NPD):
        b, c = spec.b, spec.c
        return _collapse(structure, ref, c, b - c, b - c, -c, n)
    if isinstance(spec, Bertrand):
        # Everyone at the reservation value H shares H/N.  The best unilateral
        # deviation undercuts by one tick; the worst case is being undercut in
        # turn (payoff 0), or tying at the floor when the undercut is the floor.
        h = float(spec.high)
        share = h / n
        q = _bertrand_undercut(spec)
        incentive = max(0.0, q - share)
        worst = q / n if q <= spec.low else 0.0
        return _collapse(structure, ref, incentive, share - worst, share, 0.0, n)
    raise TypeError(f"unsupported game type {type(spec).__name__}")


def v_pgg(gamma: float, n: int) -> float:
    """Cooperative forecast of PGG(n, gamma) with unit endowment."""
    validate(PGG(n, gamma))
    r = math.exp((n - 1) * math.log((gamma * n - 1) / (gamma * (n - 1))))
    return gamma * n * r + gamma * (1 - r)


def v_npd(b: float, c: float, n: int) -> float:
    """Cooperative forecast of the N-person Prisoner's Dilemma."""
    validate(NPD(n, b, c))
    r = (1 - c / b) ** (n - 1)
    return (b - c) * r - c * (1 - r)


def pgg_contribution(gamma: float, n: int) -> float:
    """Closed-form CE contribution (fraction of endowment) in PGG(n, gamma)."""
    return max(0.0, (v_pgg(gamma, n) - 1) / (gamma * n - 1))


def npd_cooperation(b: float, c: float, n: int) -> float:
    """Closed-form CE cooperation probability in NPD(n, b, c)."""
    return max(0.0, v_npd(b, c, n) / (b - c))


def bertrand_price(low: float, high: float, n: int) -> float:
    """Closed-form CE price, capped at the reservation value ``high``.

    The cap only binds when ``high < n / (n - 1)``, where no profitable
    one-unit undercut of ``high`` exists.
    """
    validate(Bertrand(n, low, high))
    price = high * (high / ((high - 1) * n)) ** (n - 1)
    return min(float(high), max(float(low), price))


def _symmetric_action_for(spec: GameSpec, floor: float) -> float:
    """Lowest symmetric action whose payoff reaches the forecast floor (normalized units)."""
    n = spec.n
    if isinstance(spec, (PGG, GeneralPGG)):
        g = spec.marginal_return
        # 1 - x + g n x = floor
        return max(0.0, (floor - 1.0) / (g * n - 1.0))
    if isinstance(spec, NPD):
        return max(0.0, floor / (spec.b - spec.c))
    if isinstance(spec, Bertrand):
        return min(float(spec.high), max(float(spec.low), floor * n))
    raise TypeError(f"unsupported game type {type(spec).__name__}")


def solve(spec: GameSpec) -> Prediction:
    """Cooperative equilibrium of ``spec``.

    Ties between the two forecasts go to the fully cooperative structure.
    """
    validate(spec)
    selfish = forecast(spec, CoalitionStructure.SELFISH)
    coop = forecast(spec, CoalitionStructure.FULLY_COOPERATIVE)
    best = coop if coop.forecast >= selfish.forecast else selfish
    action = _symmetric_action_for(spec, best.forecast / _scale(spec))
    return Prediction(
        spec,
        best.structure,
        action,
        expected_symmetric_payoff(spec, action),
        (selfish, coop),
    )


def sweep(
    template: GameSpec,
    vary: str,
    values: Iterable[Any],
    derived: Mapping[str, Callable[[Any], Any]] | None = None,
) -> list[Prediction]:
    """Solve a family of games differing in one parameter.

    ``derived`` maps other parameter names to functions of the varied value,
    e.g. ``{"b_n": lambda n: min(0.5 * n, 10)}`` for a capped benefit.
    """
    if vary not in {f.name for f in dataclasses.fields(template)}:
        raise ValueError(f"{type(template).__name__} has no parameter {vary!r}")
    out = []
    for value in values:
        changes = {vary: value}
        for name, fn in (derived or {}).items():
            changes[name] = fn(value)
        try:
            spec = dataclasses.replace(template, **changes)
        except ValueError as exc:
            raise ValueError(f"invalid {vary}={value!r}: {exc}") from exc
        out.append(solve(spec))
    return out


def capped_benefit(gamma: float, n0: int) -> Callable[[int], float]:
    """Benefit sequence ``b_N = gamma * min(N, n0)``: linear growth saturating at ``n0``."""
    return lambda n: gamma * min(n, n0)


def check_prediction(pred: Prediction, tol: float = ATOL) -> list[str]:
    """Names of violated Prediction invariants (empty when consistent)."""
    problems = []
    expected = expected_symmetric_payoff(pred.game, pred.equilibrium)
    if abs(pred.equilibrium_payoff - expected) > tol:
        problems.append("payoff_consistency")
    if pred.equilibrium_payoff < max(r.forecast for r in pred.reports) - tol:
        problems.append("forecast_floor")
    return problems

