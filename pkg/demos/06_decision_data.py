"""Summarizing one-shot decision data and testing a group-size difference.

The package bundles a synthetic data set (not real subjects) shaped like the
two group-size studies: a PGG with 4 vs 40 players and an NPD with 2 vs 11.
Any file with columns condition, variant, decision works the same way.
"""

import io

from groupcoop import rank_sum, read_decisions, summarize
from groupcoop.cli import bundled_fixture
from groupcoop.empirics import SYNTHETIC_SEED

data = read_decisions(io.StringIO(bundled_fixture()))
print(f"Synthetic fixture (generated with seed {SYNTHETIC_SEED}):")
for name, d in data.items():
    s = summarize(d)
    if s.variant == "pgg":
        print(f"  {name}: n={s.n_subjects}, {s.pct_free_riders:.1f}% free-riders, "
              f"{s.pct_full_contributors:.1f}% give everything, mean {s.mean:.2f} (SEM {s.sem:.2f})")
    else:
        print(f"  {name}: n={s.n_subjects}, {s.pct_cooperators:.1f}% cooperate (SEM {s.sem:.2f})")

for a, b in (("PGG-S", "PGG-L"), ("NPD-S", "NPD-L")):
    res = rank_sum(data[a].decisions, data[b].decisions)
    print(f"\nRank-sum {a} vs {b}: U={res.u:g}, two-sided p={res.p_value:.4f} ({res.method})")

print("\nSmall tie-free samples get an exact p by enumerating every split of the ranks:")
res = rank_sum([1.2, 2.5, 3.1], [4.0, 5.5, 6.7, 7.9])
print(f"  U={res.u:g}, p={res.p_value:.4f} ({res.method})")
