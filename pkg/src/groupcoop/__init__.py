"""Cooperative-equilibrium and social-preference predictions for symmetric social dilemmas."""

from .coopeq import CoalitionStructure, ForecastReport, Prediction, forecast, solve, sweep
from .empirics import DecisionDataset, rank_sum, read_decisions, summarize
from .games import NPD, PGG, Bertrand, GeneralPGG, ParameterOutOfRange, Variant, make_game, payoff
from .oracle import generic_forecast, run_suites, verify_equilibrium
from .preference_models import Model, PopulationSpec, PreferenceParams, cooperation_threshold, model_comparison, mu_fraction

__version__ = "0.1.0"

__all__ = [
    "Bertrand",
    "CoalitionStructure",
    "DecisionDataset",
    "ForecastReport",
    "GeneralPGG",
    "Model",
    "NPD",
    "PGG",
    "ParameterOutOfRange",
    "PopulationSpec",
    "Prediction",
    "PreferenceParams",
    "Variant",
    "cooperation_threshold",
    "forecast",
    "generic_forecast",
    "make_game",
    "model_comparison",
    "mu_fraction",
    "payoff",
    "rank_sum",
    "read_decisions",
    "run_suites",
    "solve",
    "summarize",
    "sweep",
    "verify_equilibrium",
]
