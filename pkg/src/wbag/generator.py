"""Random and structured graph generators, and benchmark corpora on disk.

Random graphs pick ``m`` distinct ordered pairs uniformly (self-loops
optional), make each pair an attack with probability ``attack_probability``
and a support otherwise, and draw weights uniformly from [0, 1].  All
randomness comes from numpy's PCG64 generator, so a seed fully determines
the output.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .bag import Bag, serialize_bag

__all__ = ["GenSpec", "cycle_k", "derive_seed", "generate_benchmark", "random_bag"]

PRNG_NAME = f"numpy-{np.__version__}/PCG64"


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a random graph.

    ``weight`` of ``None`` draws weights uniformly; a float fixes every weight.
    """

    nodes: int
    edges: int
    seed: int
    attack_probability: float = 0.5
    weight: Optional[float] = None
    self_loops: bool = True

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError("nodes must be positive")
        if self.edges < 0:
            raise ValueError("edges must be non-negative")
        if self.edges > self.pair_count:
            raise ValueError(
                f"{self.edges} edges requested but only {self.pair_count} ordered pairs exist"
            )
        if not 0.0 <= self.attack_probability <= 1.0:
            raise ValueError("attack_probability must lie in [0,1]")
        if self.weight is not None and not 0.0 <= self.weight <= 1.0:
            raise ValueError("constant weight must lie in [0,1]")

    @property
    def pair_count(self) -> int:
        n = self.nodes
        return n * n if self.self_loops else n * (n - 1)

    def describe(self) -> str:
        weights = "uniform" if self.weight is None else f"constant({self.weight:g})"
        return (
            f"nodes={self.nodes} edges={self.edges} p_attack={self.attack_probability:g} "
            f"weights={weights} self_loops={self.self_loops} seed={self.seed} prng={PRNG_NAME}"
        )


def random_bag(spec: GenSpec) -> Bag:
    """Draw a random graph with arguments named ``a0 .. a{n-1}``."""
    rng = np.random.default_rng(spec.seed)
    n = spec.nodes
    flat = rng.choice(spec.pair_count, size=spec.edges, replace=False)
    flat.sort()
    if spec.self_loops:
        src, tgt = np.divmod(flat, n)
    else:
        # index pairs (i, j) with j != i: skip the diagonal slot of each row
        src, off = np.divmod(flat, n - 1)
        tgt = off + (off >= src)
    is_attack = rng.random(spec.edges) < spec.attack_probability
    if spec.weight is None:
        weights = rng.random(n)
    else:
        weights = np.full(n, spec.weight)

    pairs = list(zip(src.tolist(), tgt.tolist()))
    attacks = [p for p, a in zip(pairs, is_attack) if a]
    supports = [p for p, a in zip(pairs, is_attack) if not a]
    return Bag([f"a{i}" for i in range(n)], weights, attacks, supports)


def cycle_k(k: int) -> Bag:
    """The oscillating family Cycle(k).

    ``A`` (weight 1) supports every ``B_i``, every ``B_i`` supports every
    ``C_j``, and every ``C_j`` attacks ``A``; all ``B`` and ``C`` start at 0.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    bs = [f"B{i}" for i in range(1, k + 1)]
    cs = [f"C{i}" for i in range(1, k + 1)]
    weights = {"A": 1.0, **{b: 0.0 for b in bs}, **{c: 0.0 for c in cs}}
    supports = [("A", b) for b in bs] + [(b, c) for b in bs for c in cs]
    attacks = [(c, "A") for c in cs]
    return Bag.from_mapping(weights, attacks, supports)


def derive_seed(seed: int, size: int, index: int) -> int:
    """Per-file seed, a pure function of the batch seed, size and index."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, size, index])
    return int(ss.generate_state(2, dtype=np.uint64)[0])


def generate_benchmark(
    directory: Union[str, os.PathLike],
    base_size: int = 100,
    increments: int = 30,
    trials: int = 100,
    edge_ratio: float = 10.0,
    seed: int = 0,
    attack_probability: float = 0.5,
) -> list[Path]:
    """Write ``trials`` random graphs for each size ``base_size * i``,
    ``i = 1..increments``, into ``directory/<size>/bag_<index>.bag``.

    Each graph has ``floor(edge_ratio * size)`` edges.  Returns the written
    paths in creation order.
    """
    for name, v in (("base_size", base_size), ("increments", increments), ("trials", trials)):
        if v < 1:
            raise ValueError(f"{name} must be positive")
    if edge_ratio < 0:
        raise ValueError("edge_ratio must be non-negative")

    root = Path(directory)
    written = []
    for i in range(1, increments + 1):
        size = base_size * i
        sub = root / str(size)
        sub.mkdir(parents=True, exist_ok=True)
        for index in range(trials):
            spec = GenSpec(
                nodes=size,
                edges=math.floor(edge_ratio * size),
                seed=derive_seed(seed, size, index),
                attack_probability=attack_probability,
            )
            path = sub / f"bag_{index}.bag"
            path.write_text(
                serialize_bag(random_bag(spec), header=[f"generator: {spec.describe()}"]),
                encoding="utf-8",
            )
            written.append(path)
    return written
