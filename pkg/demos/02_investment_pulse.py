"""How long does a one-off investment programme keep moving output?

Investment is 10 for periods 4 to 12 and zero otherwise. Without memory,
output climbs while the programme runs and then stays put. With memory the
past programme keeps acting on later periods through the kernel V, whose
weights are negative for orders below one: once investment stops, output
drifts back part of the way it came.

The chart is written to out/investment_pulse.svg.

Run:  python3 demos/02_investment_pulse.py
"""

from pathlib import Path

import numpy as np

from memkick import Closure, MapParams, Scenario, run_scenario
from memkick.svgplot import line_chart

HORIZON = 60
pulse = np.zeros(HORIZON)
pulse[3:12] = 10.0  # series slot n-1 holds period n

outputs = {}
for alpha in (1.0, 0.8, 0.5, 0.3):
    params = MapParams(alpha, s=0.2, v=3.0, T=1.0)
    tr = run_scenario(Scenario(params, Closure.exogenous_investment(pulse), HORIZON, y0=50.0, k0=150.0))
    outputs[f"alpha={alpha}"] = tr["Y"]

print(" period " + "".join(f"{name:>12}" for name in outputs))
for n in (0, 4, 8, 12, 13, 20, 30, 45, 60):
    print(f"{n:7d} " + "".join(f"{y[n]:12.4f}" for y in outputs.values()))

print("\noutput at the end relative to its peak:")
for name, y in outputs.items():
    print(f"  {name:<10} {y[-1] / y.max():.4f}")

out = Path(__file__).resolve().parent.parent / "out" / "investment_pulse.svg"
out.parent.mkdir(exist_ok=True)
out.write_text(line_chart(np.arange(HORIZON + 1.0), outputs, title="output after an investment pulse"))
print(f"\nchart written to {out}")
