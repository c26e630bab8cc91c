"""Brute-force checks of the closed forms.

Nothing here uses the closed-form incentive/disincentive values.  Forecasts
are rebuilt from the payoff function alone: grid maxima for incentives, grid
minima over co-player profiles for disincentives and worst cases, and an
explicit sum over every subset of co-players for the forecast itself.
Co-player profiles are enumerated as multisets, which the game's symmetry
makes sufficient.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import coopeq, preference_models as pm
from .coopeq import CoalitionStructure, ForecastReport, Prediction
from .games import (
    ATOL,
    NPD,
    PGG,
    Bertrand,
    GameSpec,
    GeneralPGG,
    game_params,
    payoff,
    validate,
)


@dataclass(frozen=True)
class GridSearchConfig:
    grid_points: int = 1001
    tolerance: float = 1e-6
    max_players_exhaustive: int = 12
    profile_points: int = 3  # co-player action values per profile (affine games)
    price_points: int = 6  # same, for Bertrand prices

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")

    def refined(self) -> "GridSearchConfig":
        return GridSearchConfig(
            (self.grid_points - 1) * 10 + 1,
            self.tolerance,
            self.max_players_exhaustive,
            self.profile_points,
            self.price_points,
        )


class TooManyPlayers(ValueError):
    pass


# -- grids and payoffs -----------------------------------------------------


def _money(spec: GameSpec, a: float) -> float:
    return a * spec.endowment if isinstance(spec, PGG) else a


def u(spec: GameSpec, own: float, others: Sequence[float]) -> float:
    """Payoff with PGG actions given as endowment fractions."""
    return payoff(spec, _money(spec, own), [_money(spec, o) for o in others])


def u_symmetric(spec: GameSpec, a: float) -> float:
    return u(spec, a, [a] * (spec.n - 1))


def action_grid(spec: GameSpec, cfg: GridSearchConfig) -> np.ndarray:
    if isinstance(spec, Bertrand):
        return np.linspace(spec.low, spec.high, cfg.grid_points)
    return np.linspace(0.0, 1.0, cfg.grid_points)


def tick_grid(spec: Bertrand) -> np.ndarray:
    """Prices reachable from the reservation value in whole ticks, plus the floor."""
    steps = int(math.floor((spec.high - spec.low) / spec.tick + 1e-9))
    prices = {float(spec.high - k * spec.tick) for k in range(steps + 1)}
    prices.add(float(spec.low))
    return np.array(sorted(p for p in prices if p >= spec.low))


def _strategy_grid(spec: GameSpec, cfg: GridSearchConfig) -> np.ndarray:
    """Own-deviation grid for incentives (Bertrand moves in whole ticks)."""
    return tick_grid(spec) if isinstance(spec, Bertrand) else action_grid(spec, cfg)


def _profile_values(spec: GameSpec, cfg: GridSearchConfig) -> list[float]:
    """Pure co-player actions used when searching for worst cases.

    Payoffs are affine in every co-player's action (PGG, NPD), so extreme
    values are attained at pure actions and a coarse grid containing the
    endpoints is exact.
    """
    if isinstance(spec, NPD):
        return [0.0, 1.0]
    if isinstance(spec, Bertrand):
        grid = tick_grid(spec)
        if len(grid) <= cfg.price_points:
            return [float(p) for p in grid]
        idx = np.unique(
            np.r_[np.linspace(0, len(grid) - 1, cfg.price_points - 1).round().astype(int), len(grid) - 2]
        )
        return [float(grid[i]) for i in idx]
    return [float(x) for x in np.linspace(0.0, 1.0, cfg.profile_points)]


def best_response(spec: GameSpec, others_action: float, cfg: GridSearchConfig | None = None) -> float:
    """Grid best reply to co-players all playing ``others_action`` (lowest on ties)."""
    cfg = cfg or GridSearchConfig()
    validate(spec)
    others = [others_action] * (spec.n - 1)
    grid = action_grid(spec, cfg)
    values = np.array([u(spec, a, others) for a in grid])
    return float(grid[int(np.argmax(values))])


# -- generic forecast ------------------------------------------------------


def _reference(spec: GameSpec, structure: CoalitionStructure, grid: np.ndarray) -> float:
    n = spec.n
    if structure is CoalitionStructure.FULLY_COOPERATIVE:
        welfare = [n * u_symmetric(spec, a) for a in grid]
        return float(grid[int(np.argmax(welfare))])
    for a in grid:  # lowest symmetric grid Nash profile
        others = [a] * (n - 1)
        stay = u(spec, a, others)
        if all(u(spec, d, others) <= stay + 1e-12 for d in grid):
            return float(a)
    raise RuntimeError(f"no symmetric Nash profile on the grid for {spec}")


def _subset_weights(t: float, m: int) -> list[float]:
    """P(exactly the members of J abandon), by |J|, from P(all of K abandon) = t^|K|.

    Inclusion-exclusion over supersets; summed over all subsets these weights
    total one.
    """
    weights = []
    for k in range(m + 1):
        rest = m - k
        weights.append(sum(math.comb(rest, j) * (-1) ** j * t ** (k + j) for j in range(rest + 1)))
    return weights


def generic_forecast(
    spec: GameSpec,
    structure: CoalitionStructure | str,
    cfg: GridSearchConfig | None = None,
) -> ForecastReport:
    cfg = cfg or GridSearchConfig()
    validate(spec)
    structure = CoalitionStructure(structure)
    n = spec.n
    if n > cfg.max_players_exhaustive:
        raise TooManyPlayers(f"n={n} exceeds max_players_exhaustive={cfg.max_players_exhaustive}")
    grid = _strategy_grid(spec, cfg)
    ref = _reference(spec, structure, grid)
    ref_others = [ref] * (n - 1)
    stay = u(spec, ref, ref_others)

    gains = np.array([u(spec, a, ref_others) for a in grid]) - stay
    incentive = max(0.0, float(gains.max()))
    best_moves = [float(a) for a, g in zip(grid, gains) if g >= gains.max() - 1e-12]

    candidates = sorted(set(_profile_values(spec, cfg)) | {ref} | set(best_moves[:3]))
    profiles = list(itertools.combinations_with_replacement(candidates, n - 1))

    # widest reading of the disincentive: any co-player profile at all
    disincentive = max(
        stay - min(u(spec, move, list(prof)) for prof in profiles) for move in best_moves
    )
    disincentive = max(0.0, disincentive)

    deviations = {a for a in candidates if a != ref and u(spec, a, ref_others) >= stay - 1e-12}
    worst = [u(spec, ref, list(p)) for p in profiles if any(a in deviations for a in p)]
    e_dev = min(worst) if worst else stay

    total = incentive + disincentive
    t = incentive / total if total > 0 else 0.0
    m = n - 1
    weights = _subset_weights(t, m)
    v = 0.0
    for k in range(m + 1):
        e = stay if k == 0 else e_dev
        for _ in itertools.combinations(range(m), k):
            v += e * weights[k]
    return ForecastReport(structure, ref, incentive, disincentive, t, weights[0], stay, e_dev, v)


# -- reports ---------------------------------------------------------------


@dataclass
class CheckResult:
    check: str
    params: dict
    residual: float
    verdict: bool
    detail: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = "pass" if self.verdict else "fail"
        return d


@dataclass
class VerificationReport:
    seed: int | None
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.verdict]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _describe(spec: GameSpec) -> dict:
    return {"variant": spec.variant.value, **game_params(spec)}


# -- equilibrium verification ----------------------------------------------


def _verify_once(spec: GameSpec, pred: Prediction, cfg: GridSearchConfig, floor: float):
    n = spec.n
    x = pred.equilibrium
    residual_floor = floor - u_symmetric(spec, x)

    grid = action_grid(spec, cfg)
    step = float(grid[1] - grid[0])
    admissible = [a for a in grid if u_symmetric(spec, a) >= floor - ATOL]
    if not admissible:
        return residual_floor, math.inf, math.inf
    lowest = float(admissible[0])
    residual_point = max(0.0, abs(lowest - x) - step)

    # no unilateral grid move that keeps everyone above the floor pays off
    others = [x] * (n - 1)
    base = u(spec, x, others)
    gain = 0.0
    for a in grid:
        mine = u(spec, a, others)
        if mine <= base:
            continue
        theirs = u(spec, x, [a] + [x] * (n - 2))
        if min(mine, theirs) >= floor - ATOL:
            gain = max(gain, mine - base)
    return residual_floor, residual_point, gain


def verify_equilibrium(
    spec: GameSpec,
    pred: Prediction,
    cfg: GridSearchConfig | None = None,
    floor: float | None = None,
) -> CheckResult:
    """Check a predicted CE against a grid search of the induced game.

    The payoff floor defaults to the oracle's own best forecast (generic
    enumeration when ``n`` is small enough, otherwise the prediction's reports).
    """
    cfg = cfg or GridSearchConfig()
    if floor is not None:
        pass
    elif spec.n <= cfg.max_players_exhaustive:
        floor = max(generic_forecast(spec, s, cfg).forecast for s in CoalitionStructure)
    else:
        floor = max(r.forecast for r in pred.reports)

    for attempt in (cfg, cfg.refined()):
        r_floor, r_point, r_gain = _verify_once(spec, pred, attempt, floor)
        residual = max(r_floor, r_point, r_gain)
        ok = residual <= cfg.tolerance
        if ok:
            break
    return CheckResult(
        "verify_equilibrium",
        {**_describe(spec), "equilibrium": pred.equilibrium, "grid_points": attempt.grid_points},
        float(residual),
        ok,
        f"floor={r_floor:.3g} point={r_point:.3g} gain={r_gain:.3g}",
    )


# -- random instances and suites -------------------------------------------


def random_games(count: int, seed: int, max_n: int = 12) -> list[GameSpec]:
    """Valid games of every variant, cycling PGG, NPD, Bertrand, GeneralPGG."""
    rng = np.random.default_rng(seed)
    games: list[GameSpec] = []
    while len(games) < count:
        kind = len(games) % 4
        if kind == 0:
            n = int(rng.integers(2, max_n + 1))
            gamma = rng.uniform(1.0 / n, 1.0)
            if not 1.0 / n < gamma < 1.0:
                continue
            games.append(PGG(n, float(gamma), float(rng.uniform(0.5, 20.0))))
        elif kind == 1:
            n = int(rng.integers(2, max_n + 1))
            c = float(rng.uniform(0.01, 1.0))
            games.append(NPD(n, float(c * rng.uniform(1.05, 10.0)), c))
        elif kind == 2:
            n = int(rng.integers(2, min(max_n, 6) + 1))
            high = float(rng.uniform(2.0, 20.0))
            games.append(Bertrand(n, float(rng.uniform(0.0, high - 1.0)), high))
        else:
            n = int(rng.integers(3, max_n + 1))
            games.append(GeneralPGG(n, float(rng.uniform(1.0, n))))
    return games


def closed_form_equivalence(
    spec: GameSpec, cfg: GridSearchConfig | None = None
) -> list[CheckResult]:
    cfg = cfg or GridSearchConfig()
    out = []
    forecasts = []
    for s in CoalitionStructure:
        closed = coopeq.forecast(spec, s)
        generic = generic_forecast(spec, s, cfg)
        residual = abs(closed.forecast - generic.forecast)
        if residual > cfg.tolerance:
            generic = generic_forecast(spec, s, cfg.refined())
            residual = abs(closed.forecast - generic.forecast)
        forecasts.append(generic.forecast)
        out.append(
            CheckResult(
                f"forecast_equivalence[{s.value}]",
                _describe(spec),
                residual,
                residual <= cfg.tolerance,
                f"I={generic.incentive:.6g}/{closed.incentive:.6g} "
                f"D={generic.disincentive:.6g}/{closed.disincentive:.6g}",
            )
        )
    out.append(verify_equilibrium(spec, coopeq.solve(spec), cfg, floor=max(forecasts)))
    return out


def binomial_identity_checks(max_n: int = 30, points: int = 101) -> list[CheckResult]:
    """sum_k lam^(N-1-k) (1-lam)^k C(N-1,k) k == (1-lam)(N-1)."""
    worst, where = 0.0, None
    for n in range(2, max_n + 1):
        for lam in np.linspace(0.0, 1.0, points):
            lhs = sum(
                lam ** (n - 1 - k) * (1 - lam) ** k * math.comb(n - 1, k) * k for k in range(n)
            )
            r = abs(lhs - (1 - lam) * (n - 1))
            if r > worst:
                worst, where = r, (n, float(lam))
    return [
        CheckResult(
            "binomial_identity",
            {"max_n": max_n, "points": points, "worst_at": where},
            worst,
            worst < 1e-10,
        )
    ]


def _monotone(values: Sequence[float], direction: str, strict: bool = False, tol: float = 0.0):
    """Indices i where values[i] -> values[i+1] breaks the claimed direction."""
    bad = []
    for i, (a, b) in enumerate(zip(values, values[1:])):
        step = b - a if direction == "up" else a - b
        if step < -tol or (strict and step <= 0):
            bad.append(i)
    return bad


def monotonicity_checks() -> list[CheckResult]:
    """Group-size and comparative-statics claims for the CE closed forms."""
    out = []

    worst = 0
    examples = []
    for gamma in np.round(np.arange(0.2, 0.91, 0.1), 10):
        ns = [n for n in range(3, 10_001) if gamma * n > 1]
        vals = [coopeq.pgg_contribution(float(gamma), n) for n in ns]
        bad = _monotone(vals, "up")
        worst += len(bad)
        examples += [(float(gamma), ns[i]) for i in bad[:3]]
    out.append(CheckResult("pgg_contribution_nondecreasing_in_n", {"n_max": 10_000}, float(worst), worst == 0, str(examples)))

    bad_total, examples = 0, []
    for b in (0.2, 0.3, 0.5, 1.0, 3.0):
        for c in (0.05, 0.1, 0.15):
            if not c < b:
                continue
            vals = [coopeq.npd_cooperation(b, c, n) for n in range(2, 201)]
            bad = _monotone(vals, "down")
            positive = [v for v in vals if v > 0]
            bad += _monotone(positive, "down", strict=True)
            bad_total += len(bad)
            examples += [(b, c, i + 2) for i in bad[:3]]
    out.append(CheckResult("npd_cooperation_nonincreasing_in_n", {"n_max": 200}, float(bad_total), bad_total == 0, str(examples)))

    bad_total = 0
    for n in (2, 3, 5, 11):
        for c in (0.05, 0.1, 0.2):
            bs = np.linspace(c * 1.01, 2.0, 60)
            bad_total += len(_monotone([coopeq.npd_cooperation(float(b), c, n) for b in bs], "up"))
            cs = np.linspace(0.001, 0.29, 60)
            bad_total += len(_monotone([coopeq.npd_cooperation(0.3, float(x), n) for x in cs], "down"))
    out.append(CheckResult("npd_benefit_cost_statics", {}, float(bad_total), bad_total == 0))

    bad_total = 0
    for n in (3, 4, 10, 40, 100):
        gs = [g for g in np.linspace(0.01, 0.99, 99) if g * n > 1]
        bad_total += len(_monotone([coopeq.pgg_contribution(float(g), n) for g in gs], "up"))
    out.append(CheckResult("pgg_gamma_statics", {}, float(bad_total), bad_total == 0))

    bad_total, unreached = 0, []
    for high in (1.5, 2.0, 5.0, 10.0, 100.0, 1000.0):
        for low in (0.0, 0.5, 1.0):
            if not low < high:
                continue
            prices = [coopeq.solve(Bertrand(n, low, high)).equilibrium for n in range(2, 400)]
            bad_total += len(_monotone(prices, "down"))
            if prices[-1] != low:
                unreached.append((low, high))
    out.append(
        CheckResult(
            "bertrand_nonincreasing_reaches_floor",
            {"n_max": 399},
            float(bad_total + len(unreached)),
            bad_total == 0 and not unreached,
            str(unreached),
        )
    )
    return out


def bertrand_pipeline_checks(cfg: GridSearchConfig | None = None) -> list[CheckResult]:
    """Closed-form price against the oracle's own forecast pipeline."""
    cfg = cfg or GridSearchConfig()
    out = []
    for high in (2.0, 5.0, 10.0, 100.0):
        for n in range(2, 7):
            spec = Bertrand(n, 0.5, high)
            floor = max(generic_forecast(spec, s, cfg).forecast for s in CoalitionStructure)
            price = min(spec.high, max(spec.low, floor * n))
            closed = coopeq.bertrand_price(spec.low, high, n)
            residual = abs(price - closed)
            out.append(CheckResult("bertrand_eq9_vs_pipeline", _describe(spec), residual, residual <= cfg.tolerance))
    return out


# -- preference-model scans ------------------------------------------------


@dataclass
class ScanResult:
    name: str
    claim: str
    thresholds: list[float]
    fractions: list[float]
    counterexamples: list[int]

    @property
    def passed(self) -> bool:
        return not self.counterexamples


SCAN_CLAIMS = ("fs_npd", "fs_pgg", "cr1_npd", "cr1_pgg")


def proposition_scan(
    claim_id: str,
    ns: Iterable[int] | None = None,
    b: float = 0.3,
    c: float = 0.1,
    gamma: float = 0.5,
    population: pm.PopulationSpec | None = None,
) -> ScanResult:
    """Evaluate thresholds and cooperating shares across group sizes.

    ``fs_npd``: FS threshold strictly increasing, share non-increasing.
    ``fs_pgg``: FS threshold identical for all N.
    ``cr1_npd``: CR1 threshold identical for all N.
    ``cr1_pgg``: CR1 threshold strictly increasing towards 1, share non-decreasing.

    Reported counterexamples are the group sizes where the claim breaks.
    """
    if claim_id not in SCAN_CLAIMS:
        raise ValueError(f"claim must be one of {', '.join(SCAN_CLAIMS)}")
    model = pm.Model.FS if claim_id.startswith("fs") else pm.Model.CR1
    npd_game = claim_id.endswith("npd")
    if ns is None:
        ns = range(2, 101) if npd_game else range(3, 1001)
    ns = [n for n in ns if npd_game or gamma * n > 1]
    games = [NPD(n, b, c) if npd_game else PGG(n, gamma) for n in ns]

    if population is None:
        dist = {"beta": pm.Uniform(0.0, 3.0)} if model is pm.Model.FS else {"alpha": pm.Uniform(0.0, 1.0)}
        population = pm.PopulationSpec(model, dist, sample_count=5_000, seed=1)
    theta = pm.sample_parameters(population)
    thresholds = [pm.cooperation_threshold(model, g).value for g in games]
    fractions = [pm.mu_fraction(population, g, theta=theta).fraction for g in games]

    bad: list[int] = []
    if claim_id == "fs_npd":
        claim = "beta* strictly increasing, mu non-increasing in N"
        bad = _monotone(thresholds, "up", strict=True) + _monotone(fractions, "down")
    elif claim_id in ("fs_pgg", "cr1_npd"):
        claim = "threshold and mu independent of N"
        bad = [i for i, t in enumerate(thresholds) if t != thresholds[0]]
        bad += [i for i, f in enumerate(fractions) if f != fractions[0]]
    else:
        claim = "alpha* strictly increasing to 1, mu non-decreasing in N"
        bad = _monotone(thresholds, "up", strict=True) + _monotone(fractions, "up")
        if thresholds and not 0 < 1 - thresholds[-1] < 0.01 * (1 - thresholds[0]):
            bad.append(len(thresholds) - 1)
    return ScanResult(
        f"preference_scan[{claim_id}]",
        claim,
        thresholds,
        fractions,
        sorted({ns[min(i + 1, len(ns) - 1)] for i in bad}),
    )


def threshold_agreement(points: int = 50) -> list[CheckResult]:
    """Closed-form predicates against direct utility comparison on parameter x N grids."""
    out = []
    grid = np.linspace(0.0, 1.0, points)
    for model in (pm.Model.FS, pm.Model.CR1):
        for family in ("npd", "pgg"):
            ns = np.unique(np.linspace(2 if family == "npd" else 3, 60, points).astype(int))
            mismatches = 0
            for n in ns:
                g = NPD(int(n), 0.3, 0.1) if family == "npd" else PGG(int(n), 0.5)
                thr = pm.cooperation_threshold(model, g)
                for x in grid:
                    p = pm.PreferenceParams(model, alpha=float(x) if model is pm.Model.CR1 else 1.0,
                                            beta=float(x) if model is pm.Model.FS else 0.0)
                    mismatches += thr.predicate(p) != pm.cooperates(p, g)
            out.append(CheckResult(f"threshold_agreement[{model.name}/{family}]", {"points": points},
                                   float(mismatches), mismatches == 0))
    return out


def proposition_checks() -> list[CheckResult]:
    out = []
    for claim_id in SCAN_CLAIMS:
        scan = proposition_scan(claim_id)
        out.append(CheckResult(scan.name, {"claim": scan.claim}, float(len(scan.counterexamples)),
                               scan.passed, str(scan.counterexamples[:10])))
    return out


SUITES: dict[str, Callable[..., list[CheckResult]]] = {}


def _suite_closed_form(seed: int, count: int = 200) -> list[CheckResult]:
    out = []
    for g in random_games(count, seed):
        out += closed_form_equivalence(g)
    return out


SUITES.update(
    {
        "closed-form": _suite_closed_form,
        "binomial": lambda seed, **_: binomial_identity_checks(),
        "monotonicity": lambda seed, **_: monotonicity_checks(),
        "bertrand": lambda seed, **_: bertrand_pipeline_checks(),
        "propositions": lambda seed, **_: proposition_checks(),
        "thresholds": lambda seed, **_: threshold_agreement(),
    }
)


def run_suites(names: Sequence[str] = ("all",), seed: int = 0, count: int = 200) -> VerificationReport:
    """Run the named suites; ``count`` sets the number of random closed-form games."""
    if "all" in names:
        names = list(SUITES)
    report = VerificationReport(seed)
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
        report.checks.extend(SUITES[name](seed, count=count))
    return report
