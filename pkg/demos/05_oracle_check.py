"""Checking the closed forms against a brute-force evaluation.

The oracle ignores every shortcut: it finds incentives and disincentives by
grid search over actual payoffs, sums the forecast over all 2^(N-1) sets of
co-players who might abandon cooperation, and then grid-searches the game
restricted to profiles that meet the forecast.
"""

from groupcoop import NPD, PGG, Bertrand, CoalitionStructure, forecast, generic_forecast, solve, verify_equilibrium

COOP = CoalitionStructure.FULLY_COOPERATIVE

for spec in (PGG(4, 0.5), PGG(9, 0.3), NPD(5, 0.3, 0.1), Bertrand(3, 1, 10)):
    fast = forecast(spec, COOP)
    slow = generic_forecast(spec, COOP)
    check = verify_equilibrium(spec, solve(spec))
    print(
        f"{str(spec):<44} forecast {fast.forecast:9.6f} vs brute force {slow.forecast:9.6f}; "
        f"equilibrium check {'pass' if check.verdict else 'FAIL'} (residual {check.residual:.1e})"
    )

print("\nThe full suites (200 random games, monotonicity up to N=10000, the")
print("preference-model scans) run with:  groupcoop verify --suite all --seed 0")
