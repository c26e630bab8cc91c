"""Command-line front end.

Subcommands: ``predict``, ``sweep``, ``compare``, ``verify``, ``tables`` and
``analyze``.  Every command builds an :class:`OutputRecord` and renders it as
aligned text (default), CSV or JSON.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from . import coopeq, empirics, oracle, preference_models
from .games import NPD, PGG, Bertrand, GameSpec, GeneralPGG, ParameterOutOfRange, game_params
from .records import OutputRecord, from_json

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

# Observed means reported for the two group-size experiments (S = 4 players,
# L = 40 players in the PGG; S = 2, L = 11 in the NPD).
OBSERVED_PGG = {"S": (4, 3.92), "L": (40, 6.91)}
OBSERVED_NPD = {"S": (2, 41.33), "L": (11, 25.64)}
TABLE_PGG_GAMMA, TABLE_PGG_ENDOWMENT = 0.5, 10.0
TABLE_NPD_B, TABLE_NPD_C = 0.3, 0.1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- game flags ------------------------------------------------------------

_GAME_CHOICES = ("pgg", "npd", "bertrand", "general-pgg")


def _add_game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("game", choices=_GAME_CHOICES)
    p.add_argument("--n", type=int, help="number of players")
    p.add_argument("--gamma", type=float, help="PGG marginal return")
    p.add_argument("--endowment", type=float, default=1.0, help="PGG endowment (currency units)")
    p.add_argument("--b", type=float, help="NPD benefit")
    p.add_argument("--c", type=float, help="NPD cost")
    p.add_argument("--low", type=float, help="Bertrand lowest price")
    p.add_argument("--high", type=float, help="Bertrand reservation value")
    p.add_argument("--tick", type=float, default=1.0, help="Bertrand price step")
    p.add_argument("--b-n", dest="b_n", type=float, help="general PGG benefit")


_REQUIRED = {
    "pgg": ("n", "gamma"),
    "npd": ("n", "b", "c"),
    "bertrand": ("n", "low", "high"),
    "general-pgg": ("n", "b_n"),
}


def _game_from_args(args, overrides: dict | None = None) -> GameSpec:
    """Build the game from flags; ``overrides`` supplies or replaces parameters."""
    values = {k: getattr(args, k) for k in ("n", "gamma", "endowment", "b", "c", "low", "high", "tick", "b_n")}
    values.update(overrides or {})
    missing = [k for k in _REQUIRED[args.game] if values[k] is None]
    if missing:
        raise UsageError(f"{args.game} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))
    v = values
    if args.game == "pgg":
        return PGG(v["n"], v["gamma"], v["endowment"])
    if args.game == "npd":
        return NPD(v["n"], v["b"], v["c"])
    if args.game == "bertrand":
        return Bertrand(v["n"], v["low"], v["high"], v["tick"])
    return GeneralPGG(v["n"], v["b_n"])


def _game_params(spec: GameSpec) -> dict:
    return {"variant": spec.variant.value, **game_params(spec)}


def _user_action(spec: GameSpec, action: float) -> float:
    """Equilibrium in user units: PGG contributions in currency, others as-is."""
    return action * spec.endowment if isinstance(spec, PGG) else action


def _action_label(spec: GameSpec) -> str:
    if isinstance(spec, (PGG, GeneralPGG)):
        return "contribution"
    if isinstance(spec, NPD):
        return "cooperation probability"
    return "price"


# -- commands --------------------------------------------------------------


def cmd_predict(args) -> OutputRecord:
    spec = _game_from_args(args)
    pred = coopeq.solve(spec)
    columns = ["structure", "reference", "I", "D", "tau", "P(nobody abandons)", "e_nobody", "e_deviation", "forecast"]
    rows = [
        [r.structure.value, _user_action(spec, r.reference_profile), r.incentive, r.disincentive,
         r.tau_pair, r.tau_nobody, r.e_nobody, r.e_deviation, r.forecast]
        for r in pred.reports
    ]
    summary = {
        "winning structure": pred.winning_structure.value,
        _action_label(spec): _user_action(spec, pred.equilibrium),
        "equilibrium payoff": pred.equilibrium_payoff,
    }
    if isinstance(spec, PGG):
        summary["contribution fraction"] = pred.equilibrium
    return OutputRecord("predict", _game_params(spec), columns, rows, summary)


def _parse_values(args) -> list:
    if args.values and args.range:
        raise UsageError("give either --values or --range, not both")
    if args.values:
        raw = [v.strip() for v in args.values.split(",") if v.strip()]
    elif args.range:
        start, stop, step = args.range
        values = np.arange(start, stop + step / 2, step)
        raw = [repr(float(v)) for v in values]
    else:
        raise UsageError("sweep needs --values or --range")
    if args.vary == "n":
        try:
            return [int(float(v)) for v in raw]
        except ValueError:
            raise UsageError(f"--values for n must be integers: {args.values}") from None
    try:
        return [float(v) for v in raw]
    except ValueError:
        raise UsageError(f"--values must be numbers: {args.values}") from None


def cmd_sweep(args) -> OutputRecord:
    values = _parse_values(args)
    if args.vary not in _REQUIRED[args.game] + ("endowment", "tick"):
        raise UsageError(f"{args.game} has no parameter {args.vary!r}")
    overrides = {args.vary: values[0]}
    derived = None
    if args.capped_benefit is not None:
        if args.game != "general-pgg" or args.vary != "n":
            raise UsageError("--capped-benefit applies to general-pgg with --vary n")
        rate, cap = args.capped_benefit
        derived = {"b_n": lambda n: min(rate * n, cap)}
        overrides["b_n"] = derived["b_n"](values[0])
    template = _game_from_args(args, overrides)
    preds = coopeq.sweep(template, args.vary, values, derived)
    rows = []
    for value, pred in zip(values, preds):
        rows.append([
            value,
            _user_action(pred.game, pred.equilibrium),
            pred.equilibrium_payoff,
            pred.report("selfish").forecast,
            pred.report("fully_cooperative").forecast,
        ])
    params = _game_params(template)
    params.pop(args.vary, None)
    params.update({"vary": args.vary, "values": values})
    if args.capped_benefit is not None:
        params.pop("b_n", None)
        params["capped_benefit"] = list(args.capped_benefit)
    return OutputRecord("sweep", params, [args.vary, "equilibrium", "payoff", "v_s", "v_c"], rows)


def _seed(args) -> int:
    return args.seed if args.seed is not None else secrets.randbelow(2**31)


def cmd_compare(args) -> OutputRecord:
    seed = _seed(args)
    models = [m.strip().upper() for m in args.models.split(",") if m.strip()]
    unknown = [m for m in models if m not in preference_models.FREE_PARAMETERS]
    if unknown:
        raise UsageError(f"unknown model(s): {', '.join(unknown)}")
    populations = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read --config: {exc}") from None
        for entry in cfg if isinstance(cfg, list) else [cfg]:
            pop = preference_models.population_from_config(entry)
            populations[pop.model.value.upper()] = pop
    lo, hi = args.pgg_n
    pgg = [PGG(n, args.gamma) for n in range(lo, hi + 1)]
    lo, hi = args.npd_n
    npd = [NPD(n, args.b, args.c) for n in range(lo, hi + 1)]
    rows = preference_models.model_comparison(pgg, npd, models, populations, seed, args.samples)
    params = {
        "models": models,
        "gamma": args.gamma,
        "pgg_n": list(args.pgg_n),
        "b": args.b,
        "c": args.c,
        "npd_n": list(args.npd_n),
        "samples": args.samples,
        "config": args.config,
    }
    return OutputRecord(
        "compare",
        params,
        ["model", "PGG group-size effect", "NPD group-size effect", "free parameters"],
        [[r.model, r.pgg, r.npd, r.free_parameters] for r in rows],
        seed=seed,
    )


def cmd_verify(args) -> OutputRecord:
    seed = _seed(args)
    suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    try:
        report = oracle.run_suites(suites, seed, args.games)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    failures = report.failures()
    rows = [[c.check, json.dumps(c.params, sort_keys=True), c.residual, "pass" if c.verdict else "fail"] for c in failures]
    summary = {
        "suites": ",".join(suites),
        "checks": len(report.checks),
        "failed": len(failures),
        "status": "pass" if report.passed else "fail",
    }
    return OutputRecord("verify", {"suite": suites, "games": args.games}, ["check", "params", "residual", "verdict"], rows, summary, seed)


def table_rows(table: int, seed: int = 0, samples: int = 10_000) -> tuple[list[str], list[list]]:
    """Columns and rows of prediction table ``table`` (3, 4 or 5)."""
    if table == 3:
        rows = preference_models.model_comparison(seed=seed, sample_count=samples)
        return (
            ["model", "PGG group-size effect", "NPD group-size effect", "free parameters"],
            [[r.model, r.pgg, r.npd, r.free_parameters] for r in rows],
        )
    if table == 4:
        out = []
        for label, (n, observed) in OBSERVED_PGG.items():
            pred = coopeq.solve(PGG(n, TABLE_PGG_GAMMA, TABLE_PGG_ENDOWMENT))
            out.append([label, n, observed, pred.equilibrium * TABLE_PGG_ENDOWMENT])
        return ["condition", "n", "observed mean contribution", "CE prediction"], out
    if table == 5:
        out = []
        for label, (n, observed) in OBSERVED_NPD.items():
            pred = coopeq.solve(NPD(n, TABLE_NPD_B, TABLE_NPD_C))
            out.append([label, n, observed, 100.0 * pred.equilibrium])
        return ["condition", "n", "observed % cooperators", "CE prediction (%)"], out
    raise UsageError(f"unknown table {table}; choose 3, 4 or 5")


def cmd_tables(args) -> OutputRecord:
    seed = None
    if args.table == 3:
        seed = _seed(args)
    columns, rows = table_rows(args.table, seed or 0, args.samples)
    return OutputRecord("tables", {"table": args.table}, columns, rows, seed=seed)


def bundled_fixture() -> str:
    return resources.files("groupcoop").joinpath("data/synthetic_decisions.csv").read_text()


def cmd_analyze(args) -> OutputRecord:
    source = bundled_fixture().splitlines(keepends=True) if args.input == "-" else args.input
    if args.input != "-" and not Path(args.input).is_file():
        raise UsageError(f"no such input file: {args.input}")
    datasets = empirics.read_decisions(source, endowment=args.endowment)
    columns = ["condition", "variant", "N", "% free-riders", "% full contributors", "% cooperators", "mean", "SEM"]
    rows = []
    for d in datasets.values():
        s = empirics.summarize(d)
        rows.append([s.condition, s.variant, s.n_subjects, s.pct_free_riders,
                     s.pct_full_contributors, s.pct_cooperators, s.mean, s.sem])
    summary = {}
    by_variant: dict[str, list] = {}
    for d in datasets.values():
        by_variant.setdefault(d.variant.value, []).append(d)
    for variant, group in by_variant.items():
        if len(group) == 2:
            a, b = group
            res = empirics.rank_sum(a.decisions, b.decisions)
            summary[f"rank-sum p ({a.condition} vs {b.condition})"] = res.p_value
            summary[f"rank-sum method ({a.condition} vs {b.condition})"] = res.method
    return OutputRecord("analyze", {"input": args.input, "endowment": args.endowment}, columns, rows, summary)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--precision", type=int, default=4, help="decimals for floats (default 4)")
    common.add_argument("--out", help="write output to this path instead of stdout")

    parser = _Parser(prog="groupcoop", description="Cooperative-equilibrium predictions for symmetric social dilemmas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", parents=[common], help="solve one game")
    _add_game_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sweep", parents=[common], help="solve a family of games")
    _add_game_flags(p)
    p.add_argument("--vary", required=True, help="parameter to vary, e.g. n or gamma")
    p.add_argument("--values", help="comma-separated values")
    p.add_argument("--range", nargs=3, type=float, metavar=("START", "STOP", "STEP"), help="inclusive range")
    p.add_argument("--capped-benefit", nargs=2, type=float, metavar=("RATE", "CAP"),
                   help="general-pgg only: b_n = min(RATE * n, CAP)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common], help="group-size effect by preference model")
    p.add_argument("--models", default="FS,CR1,CR2,CE")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--pgg-n", nargs=2, type=int, default=(3, 40), metavar=("LO", "HI"))
    p.add_argument("--b", type=float, default=0.3)
    p.add_argument("--c", type=float, default=0.1)
    p.add_argument("--npd-n", nargs=2, type=int, default=(2, 12), metavar=("LO", "HI"))
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, help="population seed (generated and printed if omitted)")
    p.add_argument("--config", help="JSON population file (one object or a list)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", parents=[common], help="run oracle suites")
    p.add_argument("--suite", default="all", help=f"comma-separated from {', '.join(oracle.SUITES)} or all")
    p.add_argument("--seed", type=int, help="random-game seed (generated and printed if omitted)")
    p.add_argument("--games", type=int, default=200, help="random games in the closed-form suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", parents=[common], help="prediction tables")
    p.add_argument("--table", type=int, choices=(3, 4, 5), required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, help="population seed for table 3")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("analyze", parents=[common], help="summarize decision data")
    p.add_argument("--input", required=True, help="delimited decision file, or - for the bundled synthetic data")
    p.add_argument("--endowment", type=float, default=10.0)
    p.set_defaults(func=cmd_analyze)
    return parser


def read_record(text: str) -> OutputRecord:
    """Parse JSON output of any command back into an OutputRecord."""
    return from_json(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record = args.func(args)
    except (UsageError, ParameterOutOfRange, empirics.DataFormatError, ValueError) as exc:
        print(f"groupcoop {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = record.render(args.format, args.precision)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and record.summary["status"] != "pass":
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
