"""A benefit that stops growing produces a sweet spot in group size.

When every new member adds to the public good only up to some cap, the
marginal return falls once the cap is reached.  Growth first helps (more
players make cooperation worth forecasting) and then hurts (each player's
return shrinks).  Here b_N = min(0.5 N, 10), capped at N = 20.
"""

import numpy as np

from groupcoop import GeneralPGG, sweep
from groupcoop.coopeq import capped_benefit

ns = list(range(3, 81))
preds = sweep(GeneralPGG(3, 1.5), "n", ns, {"b_n": capped_benefit(0.5, 20)})
x = np.array([p.equilibrium for p in preds])

for n, value in zip(ns, x):
    if n % 4 == 0 or n == 20:
        print(f"N={n:>2}  contribution {value:.3f}  {'#' * round(60 * value)}")

peak = ns[int(np.argmax(x))]
print(f"\nHighest predicted contribution: {x.max():.3f} of the endowment at N={peak}.")
