"""One-shot decision data: condition summaries and the Mann-Whitney rank-sum test."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import norm

from .games import Variant

EXACT_MAX_SIZE = 8


class DataFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DecisionDataset:
    """Decisions of one condition.

    PGG decisions are contributions in ``[0, endowment]``; NPD decisions are
    1.0 (cooperate) or 0.0 (defect).
    """

    condition: str
    variant: Variant
    decisions: tuple[float, ...]
    endowment: float = 10.0
    metadata: tuple[dict, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "decisions", tuple(float(d) for d in self.decisions))
        if not self.decisions:
            raise DataFormatError(f"condition {self.condition!r} has no decisions")
        hi = self.endowment if self.variant is Variant.PGG else 1.0
        for d in self.decisions:
            if not 0.0 <= d <= hi:
                raise DataFormatError(f"decision {d} outside [0, {hi:g}]")
            if self.variant is Variant.NPD and d not in (0.0, 1.0):
                raise DataFormatError(f"NPD decision must be 0 or 1, got {d}")


@dataclass(frozen=True)
class ConditionSummary:
    condition: str
    variant: str
    n_subjects: int
    mean: float
    sem: float
    pct_free_riders: float | None = None
    pct_full_contributors: float | None = None
    pct_cooperators: float | None = None


def summarize(data: DecisionDataset) -> ConditionSummary:
    """Percentages, mean and standard error (n - 1 standard deviation).

    For NPD data the mean and SEM are expressed in percentage points.
    """
    x = np.asarray(data.decisions, dtype=float)
    n = x.size
    sem = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    if data.variant is Variant.NPD:
        pct = 100.0 * float(x.mean())
        return ConditionSummary(data.condition, data.variant.value, n, pct, 100.0 * sem, pct_cooperators=pct)
    return ConditionSummary(
        data.condition,
        data.variant.value,
        n,
        float(x.mean()),
        sem,
        pct_free_riders=100.0 * float(np.mean(x == 0.0)),
        pct_full_contributors=100.0 * float(np.mean(x == data.endowment)),
    )


# -- rank-sum test ---------------------------------------------------------


@dataclass(frozen=True)
class RankSumResult:
    u: float  # statistic of the first sample
    p_value: float
    method: str  # "exact" or "normal"


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties sharing the average rank."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(v.size)
    sorted_v = v[order]
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def u_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    ranks = midranks(list(a) + list(b))
    n1 = len(a)
    return float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)


def exact_u_distribution(n1: int, n2: int) -> np.ndarray:
    """Number of rank splits giving each U = 0..n1*n2 (no ties).

    Counts subsets of size n1 of {1..n1+n2} by rank sum, by dynamic programming.
    """
    m = n1 * n2
    # counts[k][s]: ways to pick k of the ranks seen so far with U contribution s
    counts = np.zeros((n1 + 1, m + 1), dtype=object)
    counts[0][0] = 1
    for r in range(n1 + n2):
        for k in range(min(n1, r + 1), 0, -1):
            # rank r (0-based) placed k-th in the first sample adds r - (k - 1) to U
            shift = r - (k - 1)
            if shift > m or shift < 0:
                continue
            counts[k, shift:] = counts[k, shift:] + counts[k - 1, : m + 1 - shift]
    return counts[n1].astype(np.int64)


def _exact_p(u: float, n1: int, n2: int) -> float:
    dist = exact_u_distribution(n1, n2)
    total = dist.sum()
    k = int(round(u))
    lower = dist[: k + 1].sum() / total
    upper = dist[k:].sum() / total
    return float(min(1.0, 2.0 * min(lower, upper)))


def _normal_p(u: float, a: Sequence[float], b: Sequence[float]) -> float:
    n1, n2 = len(a), len(b)
    n = n1 + n2
    _, counts = np.unique(np.asarray(list(a) + list(b), dtype=float), return_counts=True)
    tie_term = float((counts**3 - counts).sum())
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1))) if n > 1 else 0.0
    if var <= 0:
        return 1.0
    z = max(0.0, abs(u - n1 * n2 / 2.0) - 0.5) / math.sqrt(var)
    return float(min(1.0, 2.0 * norm.sf(z)))


def rank_sum(a: Sequence[float], b: Sequence[float], method: str = "auto") -> RankSumResult:
    """Two-sided Mann-Whitney U test.

    ``auto`` enumerates exactly when both samples have at most eight values and
    no ties, and otherwise uses the tie-corrected normal approximation with
    continuity correction.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be non-empty")
    u = u_statistic(a, b)
    has_ties = len(set(a) | set(b)) < len(a) + len(b)
    if method == "auto":
        small = len(a) <= EXACT_MAX_SIZE and len(b) <= EXACT_MAX_SIZE
        method = "exact" if small and not has_ties else "normal"
    if method == "exact":
        if has_ties:
            raise ValueError("exact enumeration requires tie-free samples")
        return RankSumResult(u, _exact_p(u, len(a), len(b)), "exact")
    return RankSumResult(u, _normal_p(u, a, b), "normal")


def brute_force_p(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided exact p by listing every split of the pooled ranks."""
    n1, n = len(a), len(a) + len(b)
    u_obs = u_statistic(a, b)
    us = [sum(split) - n1 * (n1 + 1) / 2.0 for split in itertools.combinations(range(1, n + 1), n1)]
    lower = sum(x <= u_obs for x in us) / len(us)
    upper = sum(x >= u_obs for x in us) / len(us)
    return min(1.0, 2.0 * min(lower, upper))


# -- file I/O --------------------------------------------------------------

COLUMNS = ("condition", "variant", "decision")
_TRUE = {"c", "cooperate", "1", "true", "yes"}
_FALSE = {"d", "defect", "0", "false", "no"}


def read_decisions(source: str | Path | Iterable[str], endowment: float = 10.0) -> dict[str, DecisionDataset]:
    """Parse delimited decision records into datasets keyed by condition.

    Required columns: ``condition``, ``variant`` (pgg | npd), ``decision``.
    An optional ``endowment`` column overrides the default per row; any
    other columns are kept as metadata.  Commas, tabs and semicolons are
    accepted as delimiters.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = "".join(source)
    if not text.strip():
        raise DataFormatError("input is empty")
    try:
        dialect = csv.Sniffer().sniff(text.splitlines()[0], delimiters=",\t;")
    except csv.Error:
        dialect = csv.excel
    reader = csv.DictReader(io.StringIO(text), dialect=dialect)
    header = [h.strip().lower() for h in (reader.fieldnames or [])]
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise DataFormatError(f"missing column(s): {', '.join(missing)}")
    reader.fieldnames = header

    groups: dict[str, dict] = {}
    for lineno, row in enumerate(reader, start=2):
        row = {k: (v or "").strip() for k, v in row.items() if k is not None}
        try:
            variant = Variant(row["variant"].lower())
        except ValueError:
            raise DataFormatError(f"line {lineno}: unknown variant {row['variant']!r}") from None
        cap = float(row.get("endowment") or endowment)
        raw = row["decision"].lower()
        if variant is Variant.NPD:
            if raw in _TRUE:
                value = 1.0
            elif raw in _FALSE:
                value = 0.0
            else:
                raise DataFormatError(f"line {lineno}: NPD decision must be C or D, got {raw!r}")
        elif variant is Variant.PGG:
            try:
                value = float(raw)
            except ValueError:
                raise DataFormatError(f"line {lineno}: contribution {raw!r} is not a number") from None
            if not 0.0 <= value <= cap:
                raise DataFormatError(f"line {lineno}: contribution {value:g} outside [0, {cap:g}]")
        else:
            raise DataFormatError(f"line {lineno}: variant {variant.value} has no decision data")
        g = groups.setdefault(row["condition"], {"variant": variant, "endowment": cap, "x": [], "meta": []})
        if g["variant"] is not variant:
            raise DataFormatError(f"line {lineno}: condition {row['condition']!r} mixes variants")
        g["x"].append(value)
        g["meta"].append({k: v for k, v in row.items() if k not in COLUMNS and k != "endowment"})
    if not groups:
        raise DataFormatError("input has a header but no records")
    return {
        name: DecisionDataset(name, g["variant"], tuple(g["x"]), g["endowment"], tuple(g["meta"]))
        for name, g in groups.items()
    }


def summary_rows(summaries: Sequence[ConditionSummary]) -> tuple[list[str], list[list]]:
    """Header and rows shaped like the descriptive-statistics tables."""
    if all(s.variant == Variant.NPD.value for s in summaries):
        header = ["Condition", "N", "% cooperators", "SEM"]
        rows = [[s.condition, s.n_subjects, s.pct_cooperators, s.sem] for s in summaries]
    else:
        header = ["Condition", "N", "% free-riders", "% contributors", "Mean contribution", "SEM"]
        rows = [
            [s.condition, s.n_subjects, s.pct_free_riders, s.pct_full_contributors, s.mean, s.sem]
            for s in summaries
        ]
    return header, rows


# -- synthetic fixture -----------------------------------------------------

SYNTHETIC_SEED = 2015

# (condition, variant, subjects, P(decision = 0), P(decision = max))
_SYNTHETIC_DESIGN = (
    ("PGG-S", Variant.PGG, 62, 0.4838, 0.3064),
    ("PGG-L", Variant.PGG, 66, 0.2121, 0.6060),
    ("NPD-S", Variant.NPD, 75, 1 - 0.4133, 0.4133),
    ("NPD-L", Variant.NPD, 78, 1 - 0.2564, 0.2564),
)


def synthetic_decisions(seed: int = SYNTHETIC_SEED) -> str:
    """CSV text of made-up decisions shaped like the two group-size studies.

    Each condition has a fixed composition (the given shares of zero and
    maximal decisions, rounded to whole subjects); PGG partial contributors
    give a uniform amount from 1 to 9.  The seed shuffles the order and
    draws the partial amounts and ages.  Not real data.
    """
    rng = np.random.default_rng(seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["condition", "variant", "decision", "age"])
    for name, variant, size, p_zero, p_max in _SYNTHETIC_DESIGN:
        n_max = round(p_max * size)
        n_zero = size - n_max if variant is Variant.NPD else round(p_zero * size)
        if variant is Variant.NPD:
            decisions = ["C"] * n_max + ["D"] * n_zero
        else:
            partial = rng.integers(1, 10, size=size - n_zero - n_max)
            decisions = ["0"] * n_zero + ["10"] * n_max + [str(int(x)) for x in partial]
        for decision in rng.permutation(decisions):
            writer.writerow([name, variant.value, str(decision), int(rng.integers(18, 66))])
    return buf.getvalue()
