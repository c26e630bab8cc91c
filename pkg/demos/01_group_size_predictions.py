"""How group size moves the cooperative equilibrium in the two classic dilemmas.

In a Public Goods Game bigger groups raise the share of the endowment
players are predicted to give; in the N-person Prisoner's Dilemma bigger
groups lower the predicted probability of cooperating.  This walks through
both, showing the forecasts that drive each prediction.
"""

from groupcoop import NPD, PGG, CoalitionStructure, solve

ENDOWMENT = 10.0  # cents

print("Public Goods Game, marginal return 0.5, endowment 10 cents")
for n in (4, 40):
    pred = solve(PGG(n, 0.5, ENDOWMENT))
    coop = pred.report(CoalitionStructure.FULLY_COOPERATIVE)
    print(
        f"  n={n:>2}: abandon probability per co-player {coop.tau_pair:.4f}, "
        f"cooperative forecast {coop.forecast:6.2f} vs selfish {pred.report('selfish').forecast:5.2f} "
        f"-> contribute {pred.equilibrium * ENDOWMENT:.2f} cents"
    )

print("\nWith four players the forecast of full cooperation (9.44) is below the")
print("selfish payoff (10), so nobody contributes.  With forty players the")
print("pot is large enough that the forecast wins and players give about 35%.\n")

print("N-person Prisoner's Dilemma, benefit 0.30, cost 0.10")
for n in range(2, 13):
    pred = solve(NPD(n, 0.3, 0.1))
    bar = "#" * round(40 * pred.equilibrium)
    print(f"  n={n:>2}: cooperate with probability {pred.equilibrium:.4f} {bar}")

print("\nEach extra co-player is one more person who might defect, so the")
print("forecast of cooperation decays geometrically until it hits zero.")
