"""
Buy or sell?  A small cyclic decision graph
===========================================

Two mutually attacking options, Buy and Sell, each backed by some evidence.
Nothing here is acyclic, so strengths come from integrating the ODE.
Run with ``python notebooks/01_stock_example.py``; the SVG lands in
``notebooks/output``.
"""
# %%
from pathlib import Path

import numpy as np

from wbag import SolverConfig, fixture, integrate, topological_order
from wbag.export import render_svg

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

bag = fixture("stock")
print(bag.names)
print("attacks:", [(bag.names[a], bag.names[b]) for a, b in bag.attacks])
print("supports:", [(bag.names[a], bag.names[b]) for a, b in bag.supports])
print("cycle:", [bag.names[i] for i in topological_order(bag).cycle])

# %% [markdown]
# Default settings: RK4, step 0.01, stop once no strength moves faster than 1e-4.

# %%
result = integrate("quad", bag, SolverConfig(record_every=1))
print(result.status, "after", result.steps_taken, "steps, t =", round(result.final_time, 2))
for name, w, s in zip(bag.names, bag.weights, result.final_state):
    print(f"{name:>4}  {w:.2f} -> {s:.3f}")

# %% [markdown]
# Sell first gains from its supporter, then Buy grows strong enough to push
# it back down.  The peak is the interesting bit.

# %%
times, states = result.trajectory_arrays()
sell = states[:, bag.index("Sell")]
peak = int(np.argmax(sell))
print(f"Sell peaks at {sell[peak]:.4f} (t={times[peak]:.2f}) and ends at {sell[-1]:.4f}")

svg = render_svg(list(bag.names), times, states, title="stock example, quadratic energy")
(OUT / "stock.svg").write_text(svg)
print("wrote", OUT / "stock.svg")
