"""
Comparing semantics, then timing a small benchmark
==================================================

Same random graphs, four update rules.  Then a desk-sized benchmark tree
(sizes 100 to 300) to get a feel for how solve time grows.
"""
# %%
import tempfile
from pathlib import Path

import numpy as np

from wbag import GenSpec, SolverConfig, generate_benchmark, integrate, random_bag
from wbag.bench import run_benchmark
from wbag.semantics import MODELS

config = SolverConfig()
graphs = [random_bag(GenSpec(nodes=40, edges=160, seed=s)) for s in range(10)]
finals = {}
for key in sorted(MODELS):
    runs = [integrate(key, g, config, record=False) for g in graphs]
    finals[key] = np.concatenate([r.final_state for r in runs])
    steps = [r.steps_taken for r in runs]
    print(f"{key:<8} converged {sum(r.converged for r in runs)}/10, "
          f"median steps {int(np.median(steps))}, mean strength {finals[key].mean():.3f}")

# %% [markdown]
# How far apart do the models end up?  Pairwise mean absolute difference.

# %%
keys = sorted(finals)
for i, a in enumerate(keys):
    print(a.ljust(8), " ".join(f"{np.mean(np.abs(finals[a] - finals[b])):.3f}" for b in keys))

# %%
with tempfile.TemporaryDirectory() as tmp:
    tree = Path(tmp) / "tree"
    generate_benchmark(tree, base_size=100, increments=3, trials=3, edge_ratio=10, seed=1)
    res = run_benchmark(tree, "quad", config, algo="ode")
for s in res.stats:
    print(f"n={s.size}: mean {s.mean_ms:.1f} ms (min {s.min_ms:.1f}, max {s.max_ms:.1f})")
print(f"{res.converged_fraction():.0%} converged")
