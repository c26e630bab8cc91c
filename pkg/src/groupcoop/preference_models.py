"""Social-preference utilities and the cooperation fractions they imply.

Three utility transforms of a monetary payoff vector ``u``:

* Fehr-Schmidt (FS): ``u_i - a/(N-1) sum max(u_j - u_i, 0) - b/(N-1) sum max(u_i - u_j, 0)``
* one-parameter Charness-Rabin (CR1): ``a u_i + (1 - a) sum_j u_j``
* two-parameter Charness-Rabin (CR2): ``(1 - a) u_i + a (d min(u) + (1 - d) sum(u))``

A player "cooperates" when unilaterally defecting from full cooperation
does not raise their utility (ties count as cooperation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import integrate

from .games import ATOL, NPD, PGG, GameSpec, GeneralPGG, payoff_vector


class Model(str, Enum):
    FS = "fs"
    CR1 = "cr1"
    CR2 = "cr2"


class UnsupportedModel(ValueError):
    """No closed form exists for the requested (model, game) pair."""


FREE_PARAMETERS = {"FS": "two", "CR1": "one", "CR2": "two", "CE": "none"}


@dataclass(frozen=True)
class PreferenceParams:
    model: Model
    alpha: float
    beta: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.model is Model.FS:
            if not 0 <= self.beta <= self.alpha:
                raise ValueError(
                    f"FS requires 0 <= beta <= alpha, got alpha={self.alpha}, beta={self.beta}"
                )
        else:
            if not 0 <= self.alpha <= 1:
                raise ValueError(f"{self.model.name} requires alpha in [0, 1], got {self.alpha}")
            if self.model is Model.CR2 and not 0 <= self.delta <= 1:
                raise ValueError(f"CR2 requires delta in [0, 1], got {self.delta}")


def _check_vector(payoffs, focal: int) -> np.ndarray:
    u = np.asarray(payoffs, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("payoff vector must be a non-empty 1-d sequence")
    if not 0 <= focal < u.size:
        raise IndexError(f"focal index {focal} out of range for {u.size} players")
    return u


def fs_utility(params: PreferenceParams, payoffs: Sequence[float], focal: int) -> float:
    u = _check_vector(payoffs, focal)
    if u.size < 2:
        raise ValueError("Fehr-Schmidt utility needs at least two players")
    envy, guilt = _inequity_terms(u, focal)
    return float(u[focal] - params.alpha * envy - params.beta * guilt)


def _inequity_terms(u: np.ndarray, focal: int) -> tuple[float, float]:
    """Average disadvantageous and advantageous inequity felt by ``focal``."""
    diff = np.delete(u, focal) - u[focal]
    m = u.size - 1
    return float(np.maximum(diff, 0).sum() / m), float(np.maximum(-diff, 0).sum() / m)


def cr_utility(
    params: PreferenceParams,
    payoffs: Sequence[float],
    focal: int,
    include_self: bool = True,
) -> float:
    """Charness-Rabin utility (CR1 or CR2, chosen by ``params.model``).

    ``include_self=False`` drops the focal player's own payoff from the CR1
    welfare sum; CR2 always uses the full sum and minimum.
    """
    u = _check_vector(payoffs, focal)
    if params.model is Model.CR1:
        welfare = u.sum() if include_self else u.sum() - u[focal]
        return float(params.alpha * u[focal] + (1 - params.alpha) * welfare)
    if params.model is Model.CR2:
        a, d = params.alpha, params.delta
        return float((1 - a) * u[focal] + a * (d * u.min() + (1 - d) * u.sum()))
    raise UnsupportedModel(f"cr_utility does not handle {params.model.name}")


def utility(params: PreferenceParams, payoffs: Sequence[float], focal: int, **kw) -> float:
    if params.model is Model.FS:
        return fs_utility(params, payoffs, focal)
    return cr_utility(params, payoffs, focal, **kw)


# -- unilateral deviation comparison ---------------------------------------


def _profiles(spec: GameSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(full cooperation, focal-only defection, full defection) payoff vectors, focal = 0."""
    if not isinstance(spec, (PGG, NPD, GeneralPGG)):
        raise UnsupportedModel(f"preference models are defined for PGG and NPD, not {spec.variant.value}")
    unit = spec.endowment if isinstance(spec, PGG) else 1.0
    n = spec.n
    coop = payoff_vector(spec, [unit] * n)
    dev = payoff_vector(spec, [0.0] + [unit] * (n - 1))
    nash = payoff_vector(spec, [0.0] * n)
    return coop, dev, nash


def cooperates(
    params: PreferenceParams,
    spec: GameSpec,
    reference: str = "cooperate",
    include_self: bool = True,
) -> bool:
    """Direct utility comparison: is defecting alone from full cooperation no better?

    ``reference="defect"`` compares the unilateral deviation against full
    defection instead of full cooperation.
    """
    coop, dev, nash = _profiles(spec)
    kw = {} if params.model is Model.FS else {"include_self": include_self}
    base = coop if reference == "cooperate" else nash
    return utility(params, dev, 0, **kw) <= utility(params, base, 0, **kw) + ATOL


@dataclass(frozen=True)
class Threshold:
    """A cutoff on one preference parameter separating cooperators from defectors."""

    parameter: str
    value: float
    direction: str  # ">=" : cooperate iff parameter >= value; "<=" : iff parameter <= value
    formula: str

    def admits(self, x: float) -> bool:
        if self.direction == ">=":
            return x >= self.value - ATOL
        return x <= self.value + ATOL

    def predicate(self, params: PreferenceParams) -> bool:
        return self.admits(getattr(params, self.parameter))


def cooperation_threshold(
    model: Model | str, spec: GameSpec, include_self: bool = True
) -> Threshold:
    """Closed-form cooperation threshold for FS and CR1 in the PGG and NPD.

    FS:  NPD  beta >= c(N-1) / (b + c(N-1))        PGG  beta >= 1 - gamma
    CR1: NPD  alpha <= 1 - c/b                     PGG  alpha <= (gamma N - 1) / (gamma (N-1))

    With ``include_self=False`` (welfare over the others only) the CR1 cutoffs
    become ``b / (b + c)`` and ``gamma (N-1) / (1 + gamma (N-2))``.
    """
    model = Model(model)
    n = spec.n
    if model is Model.CR2:
        raise UnsupportedModel("CR2 has no single-parameter threshold")
    if isinstance(spec, NPD):
        b, c = spec.b, spec.c
        if model is Model.FS:
            return Threshold("beta", c * (n - 1) / (b + c * (n - 1)), ">=", "c(N-1)/(b+c(N-1))")
        if include_self:
            return Threshold("alpha", 1 - c / b, "<=", "1-c/b")
        return Threshold("alpha", b / (b + c), "<=", "b/(b+c)")
    if isinstance(spec, (PGG, GeneralPGG)):
        g = spec.marginal_return
        if model is Model.FS:
            return Threshold("beta", 1 - g, ">=", "1-gamma")
        if include_self:
            return Threshold("alpha", (g * n - 1) / (g * (n - 1)), "<=", "(gamma N-1)/(gamma(N-1))")
        return Threshold("alpha", g * (n - 1) / (1 + g * (n - 2)), "<=", "gamma(N-1)/(1+gamma(N-2))")
    raise UnsupportedModel(f"no threshold for {model.name} in {spec.variant.value}")


def cr2_alpha_threshold(spec: GameSpec, delta):
    """CR2 cooperates iff alpha >= the returned cutoff (vectorized in ``delta``)."""
    d = np.asarray(delta, dtype=float)
    n = spec.n
    if isinstance(spec, NPD):
        b, c = spec.b, spec.c
        gain = d * b / (n - 1) + (1 - d) * (b - c)
        return c / (c + gain)
    if isinstance(spec, (PGG, GeneralPGG)):
        g = spec.marginal_return
        return (1 - g) / (1 - g + d * g + (1 - d) * (g * n - 1))
    raise UnsupportedModel(f"no CR2 threshold for {spec.variant.value}")


# -- populations -----------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def tail(self, t: float) -> float:
        """P(X >= t)."""
        if self.high == self.low:
            return float(self.low >= t)
        return float(np.clip((self.high - t) / (self.high - self.low), 0.0, 1.0))


@dataclass(frozen=True)
class Scaled:
    """``base * U[low, high]`` -- e.g. beta drawn as a fraction of alpha."""

    base: str
    low: float = 0.0
    high: float = 1.0


Distribution = Uniform | Scaled


def default_distributions(model: Model) -> dict[str, Distribution]:
    if model is Model.FS:
        return {"alpha": Uniform(0.0, 2.0), "beta": Scaled("alpha", 0.0, 1.0)}
    if model is Model.CR1:
        return {"alpha": Uniform(0.0, 1.0)}
    return {"alpha": Uniform(0.0, 1.0), "delta": Uniform(0.0, 1.0)}


@dataclass(frozen=True)
class PopulationSpec:
    """A sampled (or explicitly listed) population of preference types.

    FS populations missing ``alpha`` use ``alpha = beta``; independently drawn
    betas above alpha are truncated to alpha.
    """

    model: Model
    distributions: Mapping[str, Distribution] = field(default_factory=dict)
    sample_count: int = 10_000
    seed: int = 0
    members: tuple[PreferenceParams, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if not self.members and not self.distributions:
            object.__setattr__(self, "distributions", default_distributions(self.model))
        if not self.members and self.sample_count < 1:
            raise ValueError("sample_count must be positive")

    @property
    def size(self) -> int:
        return len(self.members) if self.members else self.sample_count


def population_from_config(cfg: Mapping) -> PopulationSpec:
    """Build a population from a JSON-style mapping.

    Schema::

        {"model": "fs" | "cr1" | "cr2",
         "sample_count": 10000, "seed": 0,
         "distributions": {"alpha": {"uniform": [0, 2]},
                           "beta": {"scaled": "alpha", "range": [0, 1]}},
         "members": [{"alpha": 1.0, "beta": 0.5}, ...]}   # optional, replaces sampling
    """
    model = Model(cfg["model"])
    dists = {}
    for name, d in cfg.get("distributions", {}).items():
        if "uniform" in d:
            dists[name] = Uniform(*map(float, d["uniform"]))
        elif "scaled" in d:
            lo, hi = d.get("range", (0.0, 1.0))
            dists[name] = Scaled(d["scaled"], float(lo), float(hi))
        else:
            raise ValueError(f"unknown distribution for {name!r}: {d!r}")
    members = tuple(PreferenceParams(model, **m) for m in cfg.get("members", ()))
    return PopulationSpec(
        model,
        dists,
        sample_count=int(cfg.get("sample_count", 10_000)),
        seed=int(cfg.get("seed", 0)),
        members=members,
    )


def sample_parameters(pop: PopulationSpec) -> dict[str, np.ndarray]:
    """Parameter arrays for every member; sampling is reproducible from ``pop.seed``."""
    if pop.members:
        keys = ("alpha", "beta", "delta")
        return {k: np.array([getattr(m, k) for m in pop.members]) for k in keys}
    rng = np.random.default_rng(pop.seed)
    n = pop.sample_count
    out: dict[str, np.ndarray] = {}
    # draw plain uniforms first so scaled parameters can reference them
    for name in sorted(pop.distributions, key=lambda k: isinstance(pop.distributions[k], Scaled)):
        d = pop.distributions[name]
        if isinstance(d, Uniform):
            out[name] = rng.uniform(d.low, d.high, n)
        else:
            out[name] = out[d.base] * rng.uniform(d.low, d.high, n)
    if pop.model is Model.FS:
        if "alpha" not in out:
            out["alpha"] = out["beta"].copy()
        out["beta"] = np.minimum(out["beta"], out["alpha"])
    out.setdefault("beta", np.zeros(n))
    out.setdefault("delta", np.zeros(n))
    return out


def _cooperating_mask(
    model: Model,
    theta: Mapping[str, np.ndarray],
    spec: GameSpec,
    reference: str,
    include_self: bool,
) -> np.ndarray:
    """Direct utility comparison for a whole population at once.

    Each utility is affine in the preference parameters, so the terms of the
    two payoff vectors are computed once and combined per member.
    """
    coop, dev, nash = _profiles(spec)
    base = coop if reference == "cooperate" else nash
    a = theta["alpha"]

    def util(u):
        if model is Model.FS:
            envy, guilt = _inequity_terms(u, 0)
            return u[0] - a * envy - theta["beta"] * guilt
        if model is Model.CR1:
            welfare = u.sum() if include_self else u.sum() - u[0]
            return a * u[0] + (1 - a) * welfare
        d = theta["delta"]
        return (1 - a) * u[0] + a * (d * u.min() + (1 - d) * u.sum())

    return util(dev) <= util(base) + ATOL


def _analytic_mass(pop: PopulationSpec, spec: GameSpec, include_self: bool) -> float:
    """Population share on the cooperative side of the closed-form threshold."""
    if pop.members:
        if pop.model is Model.CR2:
            cut = cr2_alpha_threshold(spec, [m.delta for m in pop.members])
            hits = [m.alpha >= t - ATOL for m, t in zip(pop.members, np.atleast_1d(cut))]
        else:
            thr = cooperation_threshold(pop.model, spec, include_self)
            hits = [thr.predicate(m) for m in pop.members]
        return sum(hits) / len(hits)

    dists = pop.distributions
    if pop.model is Model.CR1:
        thr = cooperation_threshold(Model.CR1, spec, include_self)
        return 1.0 - dists["alpha"].tail(thr.value)
    if pop.model is Model.CR2:
        a, d = dists["alpha"], dists["delta"]
        if d.high == d.low:
            return a.tail(float(cr2_alpha_threshold(spec, d.low)))
        val, _ = integrate.quad(
            lambda x: a.tail(float(cr2_alpha_threshold(spec, x))), d.low, d.high, limit=200
        )
        return val / (d.high - d.low)

    t = cooperation_threshold(Model.FS, spec).value
    beta = dists.get("beta", dists.get("alpha"))
    alpha = dists.get("alpha", beta)
    if isinstance(beta, Uniform):
        if "alpha" in dists and "beta" in dists:
            # beta truncated at an independent alpha: min(alpha, beta) >= t
            return alpha.tail(t) * beta.tail(t)
        return beta.tail(t)
    base = dists[beta.base]
    if t <= 0:
        return 1.0

    def cond(x):
        if x <= 0:
            return 0.0
        return Uniform(beta.low, beta.high).tail(t / x)

    kinks = [k for k in (t, t / beta.high if beta.high > 0 else None) if k and base.low < k < base.high]
    val, _ = integrate.quad(cond, base.low, base.high, points=kinks or None, limit=200)
    return val / (base.high - base.low)


@dataclass(frozen=True)
class MuEstimate:
    """Fraction of a population that cooperates, computed two ways."""

    monte_carlo: float
    analytic: float | None
    sample_count: int
    seed: int

    @property
    def fraction(self) -> float:
        return self.monte_carlo

    @property
    def tolerance(self) -> float:
        return 2.0 / math.sqrt(self.sample_count)

    @property
    def agrees(self) -> bool:
        return self.analytic is None or abs(self.monte_carlo - self.analytic) <= self.tolerance


def mu_fraction(
    pop: PopulationSpec,
    spec: GameSpec,
    reference: str = "cooperate",
    include_self: bool = True,
    theta: Mapping[str, np.ndarray] | None = None,
) -> MuEstimate:
    """Share of ``pop`` for which cooperating is utility-preferred in ``spec``.

    The Monte Carlo count applies the direct utility comparison to every
    sampled member; the analytic value integrates the closed-form threshold
    against the parameter distribution.  Pass pre-drawn ``theta`` to evaluate
    the same sample across many games.
    """
    if pop.size == 0:
        raise ValueError("population has no members")
    if theta is None:
        theta = sample_parameters(pop)
    mask = _cooperating_mask(pop.model, theta, spec, reference, include_self)
    analytic = _analytic_mass(pop, spec, include_self) if reference == "cooperate" else None
    return MuEstimate(float(mask.mean()), analytic, pop.size, pop.seed)


# -- model comparison ------------------------------------------------------


def effect_sign(values: Sequence[float], tol: float = 1e-12) -> str:
    """Classify a sequence as 'none', 'positive', 'negative' or 'mixed'."""
    steps = np.diff(np.asarray(values, dtype=float))
    up = bool((steps > tol).any())
    down = bool((steps < -tol).any())
    if up and down:
        return "mixed"
    if up:
        return "positive"
    if down:
        return "negative"
    return "none"


@dataclass(frozen=True)
class ComparisonRow:
    model: str
    pgg: str
    npd: str
    free_parameters: str


def default_sweeps() -> tuple[list[PGG], list[NPD]]:
    pgg = [PGG(n, 0.5) for n in range(3, 41)]
    npd = [NPD(n, 0.3, 0.1) for n in range(2, 13)]
    return pgg, npd


def model_comparison(
    pgg_sweep: Sequence[GameSpec] | None = None,
    npd_sweep: Sequence[GameSpec] | None = None,
    models: Iterable[str] = ("FS", "CR1", "CR2", "CE"),
    populations: Mapping[str, PopulationSpec] | None = None,
    seed: int = 0,
    sample_count: int = 10_000,
) -> list[ComparisonRow]:
    """Sign of the group-size effect on each model's cooperation measure.

    Social-preference models are scored by the cooperating share of one fixed
    sampled population; CE by its equilibrium contribution or cooperation
    probability.
    """
    from .coopeq import solve

    default_pgg, default_npd = default_sweeps()
    pgg_sweep = list(pgg_sweep or default_pgg)
    npd_sweep = list(npd_sweep or default_npd)
    for name, sweep in (("PGG", pgg_sweep), ("NPD", npd_sweep)):
        if len({g.n for g in sweep}) < 2:
            raise ValueError(f"{name} sweep must vary n over at least two values")
    populations = dict(populations or {})

    rows = []
    for name in models:
        name = name.upper()
        if name == "CE":
            measures = [[solve(g).equilibrium for g in sw] for sw in (pgg_sweep, npd_sweep)]
        else:
            pop = populations.get(name) or PopulationSpec(
                Model(name.lower()), sample_count=sample_count, seed=seed
            )
            theta = sample_parameters(pop)
            measures = [
                [mu_fraction(pop, g, theta=theta).fraction for g in sw]
                for sw in (pgg_sweep, npd_sweep)
            ]
        rows.append(
            ComparisonRow(name, effect_sign(measures[0]), effect_sign(measures[1]), FREE_PARAMETERS[name])
        )
    return rows
