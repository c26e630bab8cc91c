"""Highly symmetric social dilemmas: parameter sets and monetary payoffs.

Four families are supported:

* ``PGG`` -- linear Public Goods Game with marginal return ``gamma``.
* ``NPD`` -- N-person Prisoner's Dilemma, cost ``c`` buys benefit ``b``
  shared among the other ``n - 1`` players.
* ``Bertrand`` -- price competition on ``[low, high]``, lowest price sells.
* ``GeneralPGG`` -- Public Goods Game whose pot multiplier is a benefit
  value ``b_n`` chosen per group size.

Actions are plain floats.  PGG contributions passed to :func:`payoff` are in
money (``0 <= x <= endowment``); everywhere else a PGG action is the fraction
of the endowment.  NPD actions are cooperation indicators or probabilities.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Sequence, Union

import numpy as np

ATOL = 1e-9


class ParameterOutOfRange(ValueError):
    """A game parameter or action lies outside its admissible range."""


class Variant(str, Enum):
    PGG = "pgg"
    NPD = "npd"
    BERTRAND = "bertrand"
    GENERAL_PGG = "general_pgg"


@dataclass(frozen=True)
class PGG:
    n: int
    gamma: float
    endowment: float = 1.0
    variant: ClassVar[Variant] = Variant.PGG

    def __post_init__(self):
        validate(self)

    @property
    def marginal_return(self) -> float:
        return self.gamma


@dataclass(frozen=True)
class NPD:
    n: int
    b: float
    c: float
    variant: ClassVar[Variant] = Variant.NPD

    def __post_init__(self):
        validate(self)


@dataclass(frozen=True)
class Bertrand:
    """Bertrand competition with prices measured in units of the price tick.

    ``tick`` is the smallest price step a firm can undercut by; the
    cooperative-equilibrium price formula assumes the default of 1.
    """

    n: int
    low: float
    high: float
    tick: float = 1.0
    variant: ClassVar[Variant] = Variant.BERTRAND

    def __post_init__(self):
        validate(self)


@dataclass(frozen=True)
class GeneralPGG:
    n: int
    b_n: float
    variant: ClassVar[Variant] = Variant.GENERAL_PGG

    def __post_init__(self):
        validate(self)

    @property
    def marginal_return(self) -> float:
        return self.b_n / self.n


GameSpec = Union[PGG, NPD, Bertrand, GeneralPGG]

_CLASSES = {
    Variant.PGG: PGG,
    Variant.NPD: NPD,
    Variant.BERTRAND: Bertrand,
    Variant.GENERAL_PGG: GeneralPGG,
}


def make_game(variant: Variant | str, **params) -> GameSpec:
    """Build a game from a variant name and keyword parameters."""
    return _CLASSES[Variant(variant)](**params)


def game_params(spec: GameSpec) -> dict:
    """Parameters of ``spec`` as a plain dict (inverse of :func:`make_game`)."""
    return {f.name: getattr(spec, f.name) for f in dataclasses.fields(spec)}


def validate(spec: GameSpec) -> GameSpec:
    """Return ``spec`` unchanged, or raise ParameterOutOfRange naming the bound."""
    n = spec.n
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise ParameterOutOfRange(f"n must be an integer >= 2, got {n!r}")
    if isinstance(spec, PGG):
        if not 1.0 / n < spec.gamma < 1.0:
            raise ParameterOutOfRange(
                f"gamma must lie in (1/n, 1) = ({1.0 / n:g}, 1), got {spec.gamma!r}"
            )
        if not spec.endowment > 0:
            raise ParameterOutOfRange(f"endowment must be > 0, got {spec.endowment!r}")
    elif isinstance(spec, NPD):
        if not 0 < spec.c:
            raise ParameterOutOfRange(f"cost c must be > 0, got {spec.c!r}")
        if not spec.c < spec.b:
            raise ParameterOutOfRange(f"benefit b must exceed c = {spec.c!r}, got {spec.b!r}")
    elif isinstance(spec, Bertrand):
        if not 0 <= spec.low < spec.high:
            raise ParameterOutOfRange(
                f"need 0 <= low < high, got low={spec.low!r}, high={spec.high!r}"
            )
        if not spec.high > 1:
            raise ParameterOutOfRange(f"high must be > 1, got {spec.high!r}")
        if not spec.tick > 0:
            raise ParameterOutOfRange(f"tick must be > 0, got {spec.tick!r}")
    elif isinstance(spec, GeneralPGG):
        if not 1 < spec.b_n < n:
            raise ParameterOutOfRange(f"b_n must lie in (1, n) = (1, {n}), got {spec.b_n!r}")
    else:
        raise TypeError(f"unsupported game type {type(spec).__name__}")
    return spec


def action_bounds(spec: GameSpec) -> tuple[float, float]:
    """Closed interval of symmetric actions (fraction, probability or price)."""
    if isinstance(spec, Bertrand):
        return float(spec.low), float(spec.high)
    return 0.0, 1.0


def check_action(spec: GameSpec, value: float) -> float:
    lo, hi = action_bounds(spec)
    if not lo - ATOL <= value <= hi + ATOL:
        raise ParameterOutOfRange(f"action {value!r} outside [{lo:g}, {hi:g}]")
    return float(value)


def nash_action(spec: GameSpec) -> float:
    """The unique symmetric Nash action (defection, zero contribution, price floor)."""
    return float(spec.low) if isinstance(spec, Bertrand) else 0.0


def welfare_action(spec: GameSpec) -> float:
    """The symmetric action maximizing total welfare."""
    return float(spec.high) if isinstance(spec, Bertrand) else 1.0


def payoff(spec: GameSpec, own: float, others: Sequence[float]) -> float:
    """Monetary payoff of a focal player choosing ``own`` against ``others``.

    NPD actions may be probabilities of cooperating, in which case the result
    is the expected payoff (the payoff is linear in every player's action).
    """
    if len(others) != spec.n - 1:
        raise ValueError(f"expected {spec.n - 1} opponent actions, got {len(others)}")
    if isinstance(spec, PGG):
        for x in (own, *others):
            if not -ATOL <= x <= spec.endowment + ATOL:
                raise ParameterOutOfRange(
                    f"contribution {x!r} outside [0, {spec.endowment:g}]"
                )
        return spec.endowment - own + spec.gamma * (own + math.fsum(others))
    for x in (own, *others):
        check_action(spec, x)
    if isinstance(spec, GeneralPGG):
        return 1.0 - own + spec.b_n / spec.n * (own + math.fsum(others))
    if isinstance(spec, NPD):
        return spec.b * math.fsum(others) / (spec.n - 1) - spec.c * own
    # Bertrand: exact ties split the sale.
    lowest = min(own, *others)
    if own != lowest:
        return 0.0
    k = 1 + sum(1 for p in others if p == lowest)
    return own / k


def payoff_vector(spec: GameSpec, profile: Sequence[float]) -> np.ndarray:
    """Payoffs of every player for a full action profile."""
    if len(profile) != spec.n:
        raise ValueError(f"expected a profile of length {spec.n}, got {len(profile)}")
    x = np.asarray(profile, dtype=float)
    if isinstance(spec, Bertrand):
        profile = list(profile)
        return np.array(
            [payoff(spec, profile[i], profile[:i] + profile[i + 1:]) for i in range(spec.n)]
        )
    hi = spec.endowment if isinstance(spec, PGG) else 1.0
    if x.min() < -ATOL or x.max() > hi + ATOL:
        raise ParameterOutOfRange(f"profile entries must lie in [0, {hi:g}]")
    total = math.fsum(x)
    if isinstance(spec, PGG):
        return spec.endowment - x + spec.gamma * total
    if isinstance(spec, GeneralPGG):
        return 1.0 - x + spec.b_n / spec.n * total
    return spec.b * (total - x) / (spec.n - 1) - spec.c * x


def expected_symmetric_payoff(spec: GameSpec, action: float) -> float:
    """Expected payoff when every player independently plays ``action``.

    For the NPD the expectation is the explicit binomial sum over the number
    ``k`` of co-players who defect; PGG values are in money (scaled by the
    endowment).
    """
    x = check_action(spec, action)
    n = spec.n
    if isinstance(spec, PGG):
        return spec.endowment * (1.0 - x + spec.gamma * n * x)
    if isinstance(spec, GeneralPGG):
        return 1.0 - x + spec.b_n * x
    if isinstance(spec, Bertrand):
        return x / n
    lam = x
    total = 0.0
    for k in range(n):
        weight = lam ** (n - 1 - k) * (1.0 - lam) ** k * math.comb(n - 1, k)
        share = spec.b * (n - 1 - k) / (n - 1)
        total += weight * (lam * (share - spec.c) + (1.0 - lam) * share)
    return total
