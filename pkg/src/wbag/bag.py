"""Weighted bipolar argumentation graphs: data model, text format, fixtures.

A graph is a set of named arguments with initial weights in [0, 1] and two
independent edge relations, attack and support.  Arguments are addressed by
dense integer ids ``0..n-1`` in declaration order.

The text format is line oriented::

    // comment
    arg(a, 0.7).  arg(b).
    att(a, b).
    sup(b, a)

Each statement is ``arg(name)``, ``arg(name, weight)``, ``att(src, tgt)`` or
``sup(src, tgt)`` with an optional trailing period.  Arguments declared
without a weight get weight 0.5, which also makes plain ConArg files
(``arg(a). att(a,b).``) loadable.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Argument",
    "Bag",
    "BagError",
    "BagParseError",
    "DEFAULT_WEIGHT",
    "FIXTURES",
    "fixture",
    "load_bag",
    "parse_bag",
    "serialize_bag",
    "structurally_equal",
    "weight_from_counts",
]

DEFAULT_WEIGHT = 0.5

_NAME_RE = re.compile(r"[^\s,()]+")


class BagError(ValueError):
    """Raised when a graph violates one of its structural invariants."""


class BagParseError(BagError):
    """Syntax or semantic error in a graph document, with 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Argument:
    id: int
    name: str
    weight: float


class Bag:
    """Immutable weighted bipolar argumentation graph.

    Parameters
    ----------
    names : sequence of str
        Argument labels; position in the sequence is the argument id.
    weights : sequence of float
        Initial weight of each argument, each in [0, 1].
    attacks, supports : iterable of (int, int)
        Directed ``(source, target)`` id pairs.  Duplicates within one
        relation are rejected; the same pair may appear in both relations.
    """

    def __init__(
        self,
        names: Sequence[str],
        weights: Sequence[float],
        attacks: Iterable[tuple[int, int]] = (),
        supports: Iterable[tuple[int, int]] = (),
    ):
        names = tuple(str(n) for n in names)
        w = np.array(weights, dtype=float).reshape(-1)
        if len(names) != w.size:
            raise BagError(f"{len(names)} names but {w.size} weights")
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if not _NAME_RE.fullmatch(name) or "//" in name:
                raise BagError(f"invalid argument name {name!r}")
            if name in index:
                raise BagError(f"duplicate argument name {name!r}")
            index[name] = i
        bad = ~np.isfinite(w) | (w < 0.0) | (w > 1.0)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise BagError(f"weight of {names[i]!r} outside [0,1]: {w[i]}")
        w.setflags(write=False)

        self._names = names
        self._weights = w
        self._index = index
        self._attacks = _check_edges(attacks, len(names), "attack")
        self._supports = _check_edges(supports, len(names), "support")

    @classmethod
    def from_mapping(
        cls,
        weights: Mapping[str, float],
        attacks: Iterable[tuple[str, str]] = (),
        supports: Iterable[tuple[str, str]] = (),
    ) -> "Bag":
        """Build a graph from ``{name: weight}`` and name-based edge lists."""
        names = list(weights)
        index = {n: i for i, n in enumerate(names)}

        def resolve(edges, kind):
            out = []
            for src, tgt in edges:
                for end in (src, tgt):
                    if end not in index:
                        raise BagError(f"{kind} endpoint {end!r} is not declared")
                out.append((index[src], index[tgt]))
            return out

        return cls(
            names,
            [weights[n] for n in names],
            resolve(attacks, "attack"),
            resolve(supports, "support"),
        )

    # -- basic accessors ---------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def weights(self) -> np.ndarray:
        """Read-only array of initial weights, indexed by argument id."""
        return self._weights

    @property
    def attacks(self) -> tuple[tuple[int, int], ...]:
        return self._attacks

    @property
    def supports(self) -> tuple[tuple[int, int], ...]:
        return self._supports

    @property
    def arguments(self) -> tuple[Argument, ...]:
        return tuple(
            Argument(i, n, float(w)) for i, (n, w) in enumerate(zip(self._names, self._weights))
        )

    def __len__(self) -> int:
        return len(self._names)

    def index(self, name: str) -> int:
        return self._index[name]

    def __repr__(self) -> str:
        return (
            f"Bag({len(self)} arguments, {len(self._attacks)} attacks, "
            f"{len(self._supports)} supports)"
        )

    # -- derived views, computed once ---------------------------------------

    @cached_property
    def attack_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(sources, targets)`` int arrays of the attack relation."""
        return _edge_arrays(self._attacks)

    @cached_property
    def support_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return _edge_arrays(self._supports)

    @cached_property
    def attackers(self) -> tuple[tuple[int, ...], ...]:
        """``attackers[j]`` lists the ids attacking ``j`` (Att_j)."""
        return _parents(self._attacks, len(self))

    @cached_property
    def supporters(self) -> tuple[tuple[int, ...], ...]:
        """``supporters[j]`` lists the ids supporting ``j`` (Sup_j)."""
        return _parents(self._supports, len(self))

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        """Out-neighbours over both relations, without repetition."""
        out: list[list[int]] = [[] for _ in range(len(self))]
        seen = set()
        for src, tgt in self._attacks + self._supports:
            if (src, tgt) not in seen:
                seen.add((src, tgt))
                out[src].append(tgt)
        return tuple(tuple(c) for c in out)

    def has_parents(self) -> np.ndarray:
        """Boolean mask of arguments with at least one attacker or supporter."""
        mask = np.zeros(len(self), dtype=bool)
        mask[self.attack_arrays[1]] = True
        mask[self.support_arrays[1]] = True
        return mask


def _check_edges(edges, n: int, kind: str) -> tuple[tuple[int, int], ...]:
    out = []
    seen = set()
    for edge in edges:
        src, tgt = (int(e) for e in edge)
        if not (0 <= src < n and 0 <= tgt < n):
            raise BagError(f"{kind} ({src}, {tgt}) references an unknown argument id")
        if (src, tgt) in seen:
            raise BagError(f"duplicate {kind} ({src}, {tgt})")
        seen.add((src, tgt))
        out.append((src, tgt))
    return tuple(out)


def _edge_arrays(edges) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array(edges, dtype=np.intp).reshape(-1, 2)
    src, tgt = arr[:, 0].copy(), arr[:, 1].copy()
    src.setflags(write=False)
    tgt.setflags(write=False)
    return src, tgt


def _parents(edges, n: int) -> tuple[tuple[int, ...], ...]:
    out: list[list[int]] = [[] for _ in range(n)]
    for src, tgt in edges:
        out[tgt].append(src)
    return tuple(tuple(p) for p in out)


def structurally_equal(a: Bag, b: Bag, digits: int = 6) -> bool:
    """Same names in the same order, weights equal to ``digits`` significant
    digits, and equal attack and support sets."""
    if a.names != b.names:
        return False
    for x, y in zip(a.weights, b.weights):
        if f"{x:.{digits}g}" != f"{y:.{digits}g}":
            return False
    return set(a.attacks) == set(b.attacks) and set(a.supports) == set(b.supports)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_STATEMENT_RE = re.compile(
    r"""
    (?P<kw>arg|att|sup) \s* \( \s*
    (?P<first>[^\s,()]+) \s*
    (?: , \s* (?P<second>[^\s,()]+) \s* )?
    \) \s* \.?
    """,
    re.VERBOSE,
)
_WS_RE = re.compile(r"\s*")


def parse_bag(text: str) -> Bag:
    """Parse a graph document.

    Arguments keep their first-declaration order.  Edges may reference
    arguments declared later in the document.

    Raises
    ------
    BagParseError
        On malformed statements, duplicate names or edges, weights outside
        [0, 1], or edge endpoints that are never declared.
    """
    names: list[str] = []
    weights: list[float] = []
    index: dict[str, int] = {}
    pending: dict[str, list[tuple[str, str, int, int]]] = {"att": [], "sup": []}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        pos = _WS_RE.match(line).end()
        while pos < len(line):
            m = _STATEMENT_RE.match(line, pos)
            if m is None:
                raise BagParseError(f"cannot parse statement near {line[pos:pos + 20]!r}", lineno, pos + 1)
            col = pos + 1
            kw, first, second = m.group("kw", "first", "second")
            if kw == "arg":
                if first in index:
                    raise BagParseError(f"duplicate argument {first!r}", lineno, col)
                if second is None:
                    weight = DEFAULT_WEIGHT
                else:
                    try:
                        weight = float(second)
                    except ValueError:
                        raise BagParseError(f"invalid weight {second!r}", lineno, m.start("second") + 1) from None
                    if not (math.isfinite(weight) and 0.0 <= weight <= 1.0):
                        raise BagParseError(f"weight {second} outside [0,1]", lineno, m.start("second") + 1)
                index[first] = len(names)
                names.append(first)
                weights.append(weight)
            else:
                if second is None:
                    raise BagParseError(f"{kw} needs a source and a target", lineno, col)
                pending[kw].append((first, second, lineno, col))
            pos = _WS_RE.match(line, m.end()).end()

    relations = {}
    for kw, kind in (("att", "attack"), ("sup", "support")):
        seen = set()
        edges = []
        for src, tgt, lineno, col in pending[kw]:
            for end in (src, tgt):
                if end not in index:
                    raise BagParseError(f"{kind} endpoint {end!r} is not declared", lineno, col)
            pair = (index[src], index[tgt])
            if pair in seen:
                raise BagParseError(f"duplicate {kind} {src} -> {tgt}", lineno, col)
            seen.add(pair)
            edges.append(pair)
        relations[kw] = edges

    return Bag(names, weights, relations["att"], relations["sup"])


def load_bag(path) -> Bag:
    with open(path, encoding="utf-8") as fh:
        return parse_bag(fh.read())


def serialize_bag(bag: Bag, header: Sequence[str] = ()) -> str:
    """Render ``bag`` in the text format, one statement per line.

    Weights are always written explicitly with 6 significant digits.
    ``header`` lines are emitted first as ``//`` comments.
    """
    lines = [f"// {h}" for h in header]
    names = bag.names
    lines += [f"arg({n},{w:.6g})." for n, w in zip(names, bag.weights)]
    lines += [f"att({names[s]},{names[t]})." for s, t in bag.attacks]
    lines += [f"sup({names[s]},{names[t]})." for s, t in bag.supports]
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Weights and fixtures
# ---------------------------------------------------------------------------

def weight_from_counts(t: int, f: int, t_bias: int = 1, f_bias: int = 1) -> float:
    """Initial weight from a track record of ``t`` true and ``f`` false
    assessments, smoothed by pseudocounts ``t_bias`` and ``f_bias``."""
    for v in (t, f, t_bias, f_bias):
        if v < 0:
            raise ValueError("counts must be non-negative")
    total = t + t_bias + f + f_bias
    if total == 0:
        raise ValueError("at least one count or pseudocount must be positive")
    return (t + t_bias) / total


def _stock() -> Bag:
    return Bag.from_mapping(
        {"Buy": 0.5, "Sell": 0.5, "1": 0.8, "2": 0.7, "3": 0.3, "4": 0.9, "5": 0.9},
        attacks=[("Buy", "Sell"), ("Sell", "Buy"), ("2", "1"), ("3", "2"), ("4", "3"), ("5", "1")],
        supports=[("1", "Sell"), ("2", "Buy"), ("4", "2"), ("5", "Buy")],
    )


def _edemocracy() -> Bag:
    return Bag.from_mapping(
        {
            "A1": 0.5, "A2": 0.5,
            "P1": 0.7, "P2": 0.5, "P3": 0.9,
            "C1": 0.2, "C2": 0.2, "C3": 0.6, "C4": 0.5,
        },
        attacks=[("C1", "A2"), ("C2", "P2"), ("C3", "P2"), ("C4", "P2")],
        supports=[("P1", "A1"), ("P2", "A1"), ("P3", "A2")],
    )


FIXTURES = {"stock": _stock, "edemocracy": _edemocracy}


def fixture(name: str) -> Bag:
    """Example graphs: ``"stock"`` (cyclic stock-trading decision, 7
    arguments) and ``"edemocracy"`` (acyclic council budget debate, 9
    arguments)."""
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
