"""Exact equilibria for acyclic graphs in one topological pass.

When the graph has no directed cycle, every argument's final strength is its
model's local update applied to the already final strengths of its parents,
so one sweep in topological order gives the equilibrium in
O(|arguments| + |attacks| + |supports|).
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bag import Bag
from .semantics import SemanticsModel, get_model

__all__ = ["CyclicBagError", "TopologicalOrder", "acyclic_equilibrium", "topological_order"]


class CyclicBagError(ValueError):
    def __init__(self, witness: tuple[int, ...], names: tuple[str, ...] = ()):
        label = ", ".join(names[i] for i in witness) if names else str(witness)
        super().__init__(f"graph is cyclic; witness: {label}")
        self.witness = witness


@dataclass(frozen=True)
class TopologicalOrder:
    """Result of ordering a graph.

    Exactly one of ``order`` (a permutation of ids with every edge source
    before its target) and ``cycle`` (ids of one directed cycle, starting
    at its lowest id) is set.
    """

    order: Optional[tuple[int, ...]]
    cycle: Optional[tuple[int, ...]] = None

    @property
    def acyclic(self) -> bool:
        return self.order is not None


def topological_order(bag: Bag) -> TopologicalOrder:
    """Kahn elimination, always releasing the lowest ready id first."""
    n = len(bag)
    children = bag.children
    indegree = [0] * n
    for kids in children:
        for c in kids:
            indegree[c] += 1

    ready = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for c in children[i]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, c)

    if len(order) == n:
        return TopologicalOrder(tuple(order))
    remaining = {i for i in range(n) if indegree[i] > 0}
    return TopologicalOrder(None, _find_cycle(children, remaining))


def _find_cycle(children, remaining: set[int]) -> tuple[int, ...]:
    for i in sorted(remaining):
        if i in children[i]:
            return (i,)
    # BFS for the shortest path from a leftover node back to itself
    for start in sorted(remaining):
        prev = {start: None}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in children[u]:
                if v not in remaining:
                    continue
                if v == start:
                    path = [u]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return tuple(reversed(path))
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
    raise AssertionError("cycle detection failed on a graph Kahn could not order")


def acyclic_equilibrium(model: SemanticsModel | str, bag: Bag,
                        order: Optional[TopologicalOrder] = None) -> np.ndarray:
    """Equilibrium of ``model`` on an acyclic ``bag``.

    Each argument's local update is evaluated exactly once.  A precomputed
    ``order`` may be passed; it must be valid for ``bag``.

    Raises
    ------
    CyclicBagError
        If ``bag`` contains a directed cycle (including self-loops).
    """
    model = get_model(model)
    if order is None:
        order = topological_order(bag)
    if not order.acyclic:
        raise CyclicBagError(order.cycle, bag.names)

    s = np.array(bag.weights, dtype=float)
    weights = bag.weights
    attackers, supporters = bag.attackers, bag.supporters
    local = model.local
    for i in order.order:
        s[i] = local(
            float(weights[i]),
            [s[j] for j in attackers[i]],
            [s[j] for j in supporters[i]],
        )
    return s
