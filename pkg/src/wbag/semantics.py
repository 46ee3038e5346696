"""Gradual semantics as (discrete update, derivative field) pairs.

Every model is defined by a local update rule ``f(w, attackers, supporters)``
giving an argument's new strength from its initial weight and the current
strengths of its parents.  The continuous version of the model is the ODE
``ds/dt = f(...) - s``, so all models share the same shape and the solvers
and the acyclic pass never need to know which one they are running.

States are plain 1-D float arrays indexed by argument id.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bag import Bag

__all__ = [
    "MODELS",
    "SemanticsModel",
    "check_state",
    "df_quad_derivative",
    "df_quad_update",
    "energies",
    "energy",
    "euler_based_derivative",
    "euler_based_update",
    "geometric_energies",
    "geometric_energy",
    "get_model",
    "impact",
    "qe_derivative",
    "qe_update",
    "squared_df_quad_derivative",
    "squared_df_quad_update",
    "squared_geometric_energies",
]

STATE_TOLERANCE = 1e-9


def check_state(bag: Bag, s) -> np.ndarray:
    """Return ``s`` as a float array after checking length and range."""
    s = np.asarray(s, dtype=float)
    if s.shape != (len(bag),):
        raise ValueError(f"state has shape {s.shape}, expected ({len(bag)},)")
    if not np.all(np.isfinite(s)):
        raise ValueError("state contains non-finite values")
    if s.size and (s.min() < -STATE_TOLERANCE or s.max() > 1 + STATE_TOLERANCE):
        raise ValueError("state component outside [0,1]")
    return s


# ---------------------------------------------------------------------------
# Aggregates
# ---------------------------------------------------------------------------

def impact(x):
    """Saturating impact ``max(x,0)^2 / (1 + max(x,0)^2)``; works on scalars
    and arrays."""
    p = np.maximum(x, 0.0)
    p2 = p * p
    out = p2 / (1.0 + p2)
    return float(out) if np.ndim(out) == 0 else out


def energies(bag: Bag, s: np.ndarray) -> np.ndarray:
    """Linear energy of every argument: supporter strengths minus attacker
    strengths."""
    n = len(bag)
    a_src, a_tgt = bag.attack_arrays
    s_src, s_tgt = bag.support_arrays
    return (np.bincount(s_tgt, weights=s[s_src], minlength=n)
            - np.bincount(a_tgt, weights=s[a_src], minlength=n))


def energy(bag: Bag, s, j: int) -> float:
    return (math.fsum(s[i] for i in bag.supporters[j])
            - math.fsum(s[i] for i in bag.attackers[j]))


def _products(n: int, src: np.ndarray, tgt: np.ndarray, factors: np.ndarray) -> np.ndarray:
    out = np.ones(n)
    np.multiply.at(out, tgt, factors[src])
    return out


def geometric_energies(bag: Bag, s: np.ndarray) -> np.ndarray:
    """``prod_{Att}(1 - s) - prod_{Sup}(1 - s)`` per argument (empty product 1)."""
    comp = 1.0 - s
    return (_products(len(bag), *bag.attack_arrays, comp)
            - _products(len(bag), *bag.support_arrays, comp))


def squared_geometric_energies(bag: Bag, s: np.ndarray) -> np.ndarray:
    comp = 1.0 - s * s
    return (_products(len(bag), *bag.attack_arrays, comp)
            - _products(len(bag), *bag.support_arrays, comp))


def geometric_energy(bag: Bag, s, j: int) -> float:
    return (math.prod(1.0 - s[i] for i in bag.attackers[j])
            - math.prod(1.0 - s[i] for i in bag.supporters[j]))


# ---------------------------------------------------------------------------
# Update functions (vectorised) and their local scalar forms
# ---------------------------------------------------------------------------

def _qe_combine(w, e):
    return w + (1.0 - w) * impact(e) - w * impact(-e)


def _euler_combine(w, e):
    # exp overflow only drives the fraction to 0, i.e. the update to its limit 1
    with np.errstate(over="ignore"):
        return 1.0 - (1.0 - w * w) / (1.0 + w * np.exp(e))


def _dfquad_combine(w, ge):
    return w + w * np.minimum(ge, 0.0) + (1.0 - w) * np.maximum(ge, 0.0)


def qe_update(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return _qe_combine(bag.weights, energies(bag, s))


def euler_based_update(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return _euler_combine(bag.weights, energies(bag, s))


def df_quad_update(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return _dfquad_combine(bag.weights, geometric_energies(bag, s))


def squared_df_quad_update(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return _dfquad_combine(bag.weights, squared_geometric_energies(bag, s))


def _local_qe(w: float, att: Sequence[float], sup: Sequence[float]) -> float:
    e = math.fsum(sup) - math.fsum(att)
    return float(_qe_combine(w, e))


def _local_euler(w: float, att: Sequence[float], sup: Sequence[float]) -> float:
    e = math.fsum(sup) - math.fsum(att)
    try:
        growth = w * math.exp(e)
    except OverflowError:
        return 1.0
    return 1.0 - (1.0 - w * w) / (1.0 + growth)


def _local_dfquad(w: float, att: Sequence[float], sup: Sequence[float]) -> float:
    ge = math.prod(1.0 - x for x in att) - math.prod(1.0 - x for x in sup)
    return w + w * min(ge, 0.0) + (1.0 - w) * max(ge, 0.0)


def _local_sdfquad(w: float, att: Sequence[float], sup: Sequence[float]) -> float:
    sge = math.prod(1.0 - x * x for x in att) - math.prod(1.0 - x * x for x in sup)
    return w + w * min(sge, 0.0) + (1.0 - w) * max(sge, 0.0)


def qe_derivative(bag: Bag, s) -> np.ndarray:
    """Quadratic energy field ``w - s + (1-w) h(E) - w h(-E)``."""
    s = np.asarray(s, dtype=float)
    return qe_update(bag, s) - s


def euler_based_derivative(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return euler_based_update(bag, s) - s


def df_quad_derivative(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return df_quad_update(bag, s) - s


def squared_df_quad_derivative(bag: Bag, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return squared_df_quad_update(bag, s) - s


# ---------------------------------------------------------------------------
# Model registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemanticsModel:
    """A gradual semantics.

    Attributes
    ----------
    name : str
        Long name, e.g. ``"quadratic_energy"``.
    key : str
        Short identifier used on the command line, e.g. ``"quad"``.
    update : callable
        ``update(bag, s) -> array``, the simultaneous discrete update.
    local : callable
        ``local(w, attacker_strengths, supporter_strengths) -> float``, the
        same rule for a single argument.
    """

    name: str
    key: str
    update: Callable[[Bag, np.ndarray], np.ndarray]
    local: Callable[[float, Sequence[float], Sequence[float]], float]

    def derivative(self, bag: Bag, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return self.update(bag, s) - s

    def update_one(self, bag: Bag, s, i: int) -> float:
        """Evaluate the local rule at argument ``i`` only."""
        return self.local(
            float(bag.weights[i]),
            [s[j] for j in bag.attackers[i]],
            [s[j] for j in bag.supporters[i]],
        )

    def __str__(self) -> str:
        return self.name


QUADRATIC_ENERGY = SemanticsModel("quadratic_energy", "quad", qe_update, _local_qe)
EULER_BASED = SemanticsModel("euler_based", "euler", euler_based_update, _local_euler)
DF_QUAD = SemanticsModel("df_quad", "dfquad", df_quad_update, _local_dfquad)
SQUARED_DF_QUAD = SemanticsModel("squared_df_quad", "sdfquad", squared_df_quad_update, _local_sdfquad)

MODELS: dict[str, SemanticsModel] = {
    m.key: m for m in (QUADRATIC_ENERGY, EULER_BASED, DF_QUAD, SQUARED_DF_QUAD)
}


def get_model(name: str | SemanticsModel) -> SemanticsModel:
    """Look up a model by short key (``quad``) or long name
    (``quadratic_energy``)."""
    if isinstance(name, SemanticsModel):
        return name
    if name in MODELS:
        return MODELS[name]
    for m in MODELS.values():
        if m.name == name:
            return m
    raise KeyError(f"unknown model {name!r}; choose from {sorted(MODELS)}")
