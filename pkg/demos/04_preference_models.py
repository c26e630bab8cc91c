"""What social-preference models say about group size, next to the cooperative equilibrium.

Inequity aversion (Fehr-Schmidt) and welfare concern (Charness-Rabin) each
give a threshold on a preference parameter above or below which a player
prefers to keep cooperating.  The share of a population past the threshold
is the model's prediction.  Tracking that share across group sizes gives
the sign of each model's group-size effect.
"""

from groupcoop import NPD, PGG, PopulationSpec, cooperation_threshold, model_comparison, mu_fraction

print("Thresholds for staying cooperative:")
for spec in (PGG(4, 0.5), PGG(40, 0.5), NPD(2, 0.3, 0.1), NPD(11, 0.3, 0.1)):
    fs = cooperation_threshold("fs", spec)
    cr = cooperation_threshold("cr1", spec)
    print(f"  {spec}:  FS beta {fs.direction} {fs.value:.4f}   CR alpha {cr.direction} {cr.value:.4f}")

pop = PopulationSpec("fs", sample_count=20_000, seed=1)
print("\nFehr-Schmidt population (alpha ~ U[0,2], beta = alpha * U[0,1]):")
for n in (2, 4, 8, 12):
    est = mu_fraction(pop, NPD(n, 0.3, 0.1))
    print(f"  NPD n={n:>2}: {est.monte_carlo:.3f} cooperate (analytic {est.analytic:.3f})")

print("\nSign of the group-size effect (seed 0):")
print(f"  {'model':<5} {'PGG':<9} {'NPD':<9} free parameters")
for row in model_comparison(seed=0):
    print(f"  {row.model:<5} {row.pgg:<9} {row.npd:<9} {row.free_parameters}")
print("\nOnly the cooperative equilibrium matches both observed directions")
print("(more giving in big PGGs, less cooperation in big NPDs) with no free parameter.")
