"""Price competition: how many firms it takes before collusion collapses.

Firms choose prices between a floor L and the buyers' reservation value H
on a grid of whole price units; the cheapest firm sells.  The cooperative
equilibrium starts near H for two firms and falls faster than
exponentially with the number of competitors until it reaches L.
"""

from groupcoop import Bertrand, solve
from groupcoop.coopeq import bertrand_price

LOW = 1.0
for high in (10.0, 100.0):
    print(f"Reservation value H={high:g}, floor L={LOW:g}")
    for n in range(2, 9):
        pred = solve(Bertrand(n, LOW, high))
        print(f"  {n} firms: price {pred.equilibrium:8.3f}   (closed form {bertrand_price(LOW, high, n):8.3f})")
        if pred.equilibrium == LOW:
            print("  ...and every larger market also sits at the floor.")
            break
    print()

print("The forecast behind these prices: a firm can gain by undercutting")
print("the shared price H by one unit, and loses its whole share if another")
print("firm does it first.  The more rivals, the likelier someone undercuts.")
