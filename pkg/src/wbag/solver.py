"""Fixed-step integration of semantics models until equilibrium.

The integrator starts at the initial weights and advances with explicit
Euler or classical RK4 steps until the max-norm of the derivative drops to
``epsilon``, the simulated time reaches ``max_time`` or the wall-clock budget
runs out.  Along the way it keeps per-argument bounds and counts derivative
sign flips so that oscillating arguments can be diagnosed after a capped run.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .acyclic import acyclic_equilibrium, topological_order
from .bag import Bag
from .semantics import STATE_TOLERANCE, SemanticsModel, get_model

__all__ = [
    "ConvergenceReport",
    "RefinementResult",
    "SolverConfig",
    "SolverError",
    "SolverResult",
    "StateRangeError",
    "euler_step",
    "fixed_point_residual",
    "integrate",
    "integrate_with_refinement",
    "Solution",
    "rk4_step",
    "solve",
]

CONVERGED = "converged"
TIME_CAP = "time_cap_reached"
WALL_CLOCK_CAP = "wall_clock_cap_reached"


class SolverError(RuntimeError):
    """Integration produced an invalid state."""


class StateRangeError(SolverError):
    """A state component left [0, 1]; the step size is too large."""


@dataclass(frozen=True)
class SolverConfig:
    """Integration parameters.

    ``wall_clock_limit`` is in seconds; ``None`` disables it.
    ``record_every`` is the trajectory sampling stride in steps.
    """

    step: float = 0.01
    epsilon: float = 1e-4
    max_time: float = 1000.0
    wall_clock_limit: Optional[float] = 30.0
    method: str = "rk4"
    record_every: int = 10

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step}")
        if not (self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.max_time >= self.step):
            raise ValueError(f"max_time ({self.max_time}) must be at least step ({self.step})")
        if self.wall_clock_limit is not None and not (self.wall_clock_limit > 0):
            raise ValueError("wall_clock_limit must be positive or None")
        if self.method not in _STEPPERS:
            raise ValueError(f"method must be one of {sorted(_STEPPERS)}, got {self.method!r}")
        if not (isinstance(self.record_every, int) and self.record_every >= 1):
            raise ValueError("record_every must be a positive integer")

    @property
    def max_steps(self) -> int:
        return int(math.floor(self.max_time / self.step + 1e-9))


@dataclass
class ConvergenceReport:
    """Per-argument diagnostics of one run; all arrays are indexed by id."""

    names: tuple
    final: np.ndarray
    derivative: np.ndarray
    converged: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sign_changes: np.ndarray

    def rows(self):
        for i, name in enumerate(self.names):
            yield (name, bool(self.converged[i]), float(self.final[i]),
                   float(self.lower[i]), float(self.upper[i]), int(self.sign_changes[i]))

    def unconverged(self) -> list[str]:
        return [n for n, ok in zip(self.names, self.converged) if not ok]


@dataclass
class SolverResult:
    status: str
    final_state: np.ndarray
    steps_taken: int
    final_time: float
    report: ConvergenceReport
    trajectory: Optional[list] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def trajectory_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample times and a ``(samples, n)`` matrix of states."""
        if self.trajectory is None:
            raise ValueError("run was made without trajectory recording")
        times = np.array([t for t, _ in self.trajectory])
        states = np.array([s for _, s in self.trajectory]).reshape(len(times), -1)
        return times, states


# ---------------------------------------------------------------------------
# Single steps
# ---------------------------------------------------------------------------

def _checked(s_new: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(s_new)):
        raise SolverError("non-finite strength value encountered")
    if s_new.size and (s_new.min() < -STATE_TOLERANCE or s_new.max() > 1 + STATE_TOLERANCE):
        i = int(np.argmax(np.maximum(-s_new, s_new - 1)))
        raise StateRangeError(
            f"strength of argument {i} left [0,1] ({s_new[i]!r}); reduce the step size"
        )
    return s_new


def euler_step(model: SemanticsModel, bag: Bag, s, step: float, k1=None) -> np.ndarray:
    """One explicit Euler step ``s + step * F(s)``.

    ``k1`` may carry an already evaluated ``F(s)``.
    """
    s = np.asarray(s, dtype=float)
    if k1 is None:
        k1 = model.derivative(bag, s)
    return _checked(s + step * k1)


def rk4_step(model: SemanticsModel, bag: Bag, s, step: float, k1=None) -> np.ndarray:
    """One classical Runge-Kutta step for the autonomous system ``F``."""
    s = np.asarray(s, dtype=float)
    f = model.derivative
    if k1 is None:
        k1 = f(bag, s)
    k2 = f(bag, s + 0.5 * step * k1)
    k3 = f(bag, s + 0.5 * step * k2)
    k4 = f(bag, s + step * k3)
    return _checked(s + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


_STEPPERS = {"euler": euler_step, "rk4": rk4_step}


# ---------------------------------------------------------------------------
# Full runs
# ---------------------------------------------------------------------------

def fixed_point_residual(model: SemanticsModel, bag: Bag, s) -> float:
    """``max |update(s) - s|``; zero exactly at a fixed point of the update."""
    s = np.asarray(s, dtype=float)
    if s.size == 0:
        return 0.0
    return float(np.max(np.abs(get_model(model).update(bag, s) - s)))


def integrate(
    model: SemanticsModel | str,
    bag: Bag,
    config: SolverConfig = SolverConfig(),
    record: bool = True,
) -> SolverResult:
    """Integrate ``model`` on ``bag`` starting from the initial weights.

    The convergence test uses the derivative at the current state, which for
    RK4 is also the first stage of the next step, so it costs nothing extra.
    Trajectory samples are taken every ``config.record_every`` steps and at
    the final state when ``record`` is true.

    Raises
    ------
    StateRangeError
        A step pushed a strength outside [0, 1].
    SolverError
        A non-finite value appeared.
    """
    model = get_model(model)
    stepper = _STEPPERS[config.method]
    eps = config.epsilon
    max_steps = config.max_steps
    limit = config.wall_clock_limit

    s = np.array(bag.weights, dtype=float)
    n = s.size
    lower = s.copy()
    upper = s.copy()
    last_sign = np.zeros(n, dtype=np.int8)
    flips = np.zeros(n, dtype=np.int64)
    trajectory = [(0.0, s.copy())] if record else None

    k = 0
    started = time.perf_counter()
    while True:
        d = model.derivative(bag, s)
        if not np.all(np.isfinite(d)):
            raise SolverError("non-finite derivative encountered")

        # sign flips only count outside the dead band |d| <= eps
        sign = np.where(d > eps, 1, np.where(d < -eps, -1, 0)).astype(np.int8)
        flips += (sign != 0) & (last_sign != 0) & (sign != last_sign)
        last_sign = np.where(sign != 0, sign, last_sign)

        if n == 0 or np.max(np.abs(d)) <= eps:
            status = CONVERGED
            break
        if k >= max_steps:
            status = TIME_CAP
            break
        if limit is not None and time.perf_counter() - started > limit:
            status = WALL_CLOCK_CAP
            break

        s = stepper(model, bag, s, config.step, k1=d)
        k += 1
        np.minimum(lower, s, out=lower)
        np.maximum(upper, s, out=upper)
        if record and k % config.record_every == 0:
            trajectory.append((k * config.step, s.copy()))

    t_final = k * config.step
    if record and trajectory[-1][0] != t_final:
        trajectory.append((t_final, s.copy()))

    report = ConvergenceReport(
        names=bag.names,
        final=s.copy(),
        derivative=d,
        converged=np.abs(d) <= eps,
        lower=lower,
        upper=upper,
        sign_changes=flips,
    )
    return SolverResult(status, s, k, t_final, report, trajectory)


@dataclass
class RefinementResult:
    """Outcome of re-running at half the step size."""

    coarse: SolverResult
    fine: SolverResult
    difference: float
    stable: bool


def integrate_with_refinement(
    model: SemanticsModel | str,
    bag: Bag,
    config: SolverConfig = SolverConfig(),
    record: bool = False,
) -> RefinementResult:
    """Run at ``config.step`` and ``config.step / 2`` and compare final states.

    The result is stable when the max-norm difference is at most
    ``10 * epsilon``.
    """
    coarse = integrate(model, bag, config, record=record)
    fine = integrate(model, bag, replace(config, step=config.step / 2), record=record)
    if len(bag):
        diff = float(np.max(np.abs(coarse.final_state - fine.final_state)))
    else:
        diff = 0.0
    return RefinementResult(coarse, fine, diff, diff <= 10 * config.epsilon)


EXACT = "exact"


@dataclass
class Solution:
    """Answer of :func:`solve`, whichever algorithm produced it."""

    status: str
    state: np.ndarray
    algorithm: str
    steps: int = 0
    result: Optional[SolverResult] = None

    @property
    def ok(self) -> bool:
        return self.status in (CONVERGED, EXACT)


def solve(
    model: SemanticsModel | str,
    bag: Bag,
    config: SolverConfig = SolverConfig(),
    algo: str = "auto",
    record: bool = False,
) -> Solution:
    """Compute final strengths.

    ``algo`` is ``"ode"`` (integrate), ``"acyclic"`` (exact topological pass,
    fails on cyclic graphs) or ``"auto"`` (the exact pass when the graph is
    acyclic, integration otherwise).
    """
    if algo not in ("auto", "ode", "acyclic"):
        raise ValueError(f"algo must be auto, ode or acyclic, got {algo!r}")
    if algo != "ode":
        order = topological_order(bag)
        if order.acyclic or algo == "acyclic":
            return Solution(EXACT, acyclic_equilibrium(model, bag, order), "acyclic")
    res = integrate(model, bag, config, record=record)
    return Solution(res.status, res.final_state, "ode", res.steps_taken, res)
