"""
Cycle(k): slow, damped oscillation
==================================

``A`` supports k arguments ``B``, each of which supports every ``C``, and the
``C`` arguments attack ``A`` back.  Larger k means longer swings before things
settle.
"""
# %%
from pathlib import Path

from wbag import SolverConfig, cycle_k, integrate
from wbag.export import render_svg

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

config = SolverConfig(record_every=5)
for k in (1, 3, 10, 30):
    bag = cycle_k(k)
    r = integrate("quad", bag, config)
    a = bag.index("A")
    print(f"k={k:<3} {r.status:<10} t={r.final_time:7.2f}  "
          f"A ends at {r.final_state[a]:.4f}, {r.report.sign_changes[a]} sign changes")

# %%
bag = cycle_k(10)
r = integrate("quad", bag, config)
times, states = r.trajectory_arrays()
keep = [bag.index(n) for n in ("A", "B1", "C1")]
svg = render_svg(["A", "B1", "C1"], times, states[:, keep], title="Cycle(10)")
(OUT / "cycle10.svg").write_text(svg)
print("wrote", OUT / "cycle10.svg")
