"""Harrod-Domar growth, first without memory and then with fading memory.

With investment equal to saving the classical economy grows at the warranted
rate s*T/v every period. Giving the economy power-law memory changes the
picture: each new unit of investment is discounted by how long ago earlier
investment happened, so output still rises but no longer geometrically.

Run:  python3 demos/01_growth_with_and_without_memory.py
"""

import numpy as np

from memkick import Closure, MapParams, Scenario, run_scenario, warranted_growth_rate

S, V, T = 0.2, 2.0, 1.0
HORIZON = 30

print(f"warranted growth rate s*T/v = {warranted_growth_rate(S, V, T):.3f}\n")

runs = {}
for alpha in (1.0, 0.9, 0.7, 0.5):
    scenario = Scenario(MapParams(alpha, s=S, v=V, T=T), Closure.harrod_domar(), HORIZON, y0=100.0, k0=200.0)
    runs[alpha] = run_scenario(scenario)

header = "   n " + "".join(f"  Y(alpha={a:<3})" for a in runs)
print(header)
for n in range(0, HORIZON + 1, 5):
    print(f"{n:4d} " + "".join(f"  {runs[a]['Y'][n]:13.4f}" for a in runs))

print("\nper-period growth of output over the last five periods:")
for alpha, tr in runs.items():
    g = tr["Y"][-5:] / tr["Y"][-6:-1] - 1.0
    print(f"  alpha={alpha:<3}  " + "  ".join(f"{x:.4f}" for x in g))

# The memory economy never out-accumulates the memoryless one.
classic_k = runs[1.0]["K"]
for alpha in (0.9, 0.7, 0.5):
    assert np.all(runs[alpha]["K"] <= classic_k * (1 + 1e-14))
print("\ncapital with memory stays at or below the classical path for every period")
