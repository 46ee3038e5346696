"""
E-democracy: exact strengths on an acyclic graph
================================================

When the graph has no cycles every argument can be settled once its parents
are, in topological order.  No integration needed.
"""
# %%
import numpy as np

from wbag import acyclic_equilibrium, fixture, integrate, topological_order
from wbag.semantics import MODELS, get_model

bag = fixture("edemocracy")
order = topological_order(bag)
print("order:", " ".join(bag.names[i] for i in order.order))

# %%
exact = acyclic_equilibrium("quad", bag)
for name, s in zip(bag.names, exact):
    print(f"{name:>3}  {s:.4f}")

# %% [markdown]
# The ODE should land on the same point.  Compare for every model.

# %%
for key in sorted(MODELS):
    model = get_model(key)
    ode = integrate(model, bag, record=False)
    gap = np.max(np.abs(ode.final_state - acyclic_equilibrium(model, bag)))
    print(f"{model.name:<18} steps={ode.steps_taken:5d}  max gap {gap:.1e}")
