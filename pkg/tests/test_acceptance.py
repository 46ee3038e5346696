"""Acceptance suite.  Each test prints one ``PASS``/``FAIL`` line with its
measured value and wall time, visible even under pytest's output capture."""
import contextlib
import csv
import io
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from wbag import (
    Bag,
    GenSpec,
    SolverConfig,
    acyclic_equilibrium,
    cycle_k,
    euler_step,
    fixed_point_residual,
    fixture,
    generate_benchmark,
    integrate,
    parse_bag,
    random_bag,
    serialize_bag,
    structurally_equal,
)
from wbag.bench import read_stats_csv, run_benchmark
from wbag.cli import main
from wbag.semantics import MODELS, get_model

from .conftest import bags

QUAD = get_model("quad")
STOCK_PUBLISHED = {"Buy": 0.82, "Sell": 0.36, "1": 0.20, "2": 0.80, "3": 0.16, "4": 0.90, "5": 0.90}


@pytest.fixture
def verdict(capsys):
    """Yields a dict; the test fills ``detail`` and the line is printed on exit."""

    @contextlib.contextmanager
    def run(label):
        info = {"detail": ""}
        start = time.perf_counter()
        ok = False
        try:
            yield info
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\n{'PASS' if ok else 'FAIL'} {label}: {info['detail']} "
                      f"[{elapsed:.3f} s]")

    return run


def _solve_table(*argv):
    out = io.StringIO()
    code = main(["solve", *argv], out=out)
    rows = {}
    for line in out.getvalue().splitlines():
        parts = line.split()
        if len(parts) == 4 and parts[0] != "name":
            rows[parts[0]] = float(parts[2])
    return code, rows


def test_c01_edemocracy_exact(verdict):
    with verdict("C1 e-democracy exact pass") as v:
        bag = fixture("edemocracy")
        start = time.perf_counter()
        s = acyclic_equilibrium(QUAD, bag)
        elapsed = time.perf_counter() - start
        got = {n: s[bag.index(n)] for n in ("P2", "A1", "A2")}
        v["detail"] = ", ".join(f"{k}={x:.4f}" for k, x in got.items()) + f", solve {elapsed * 1e3:.2f} ms"
        for name, want in (("P2", 0.186), ("A1", 0.719), ("A2", 0.664)):
            assert abs(got[name] - want) <= 0.005
        lonely = ~bag.has_parents()
        assert np.array_equal(s[lonely], bag.weights[lonely])
        assert elapsed < 0.010
        code, rows = _solve_table("fixture:edemocracy", "--algo", "acyclic", "--model", "quad")
        assert code == 0 and abs(rows["A1"] - 0.719) <= 0.005


def test_c02_edemocracy_ode_agreement(verdict):
    with verdict("C2 e-democracy ODE vs exact") as v:
        bag = fixture("edemocracy")
        start = time.perf_counter()
        r = integrate(QUAD, bag, SolverConfig(step=0.01, epsilon=1e-4, method="rk4"), record=False)
        elapsed = time.perf_counter() - start
        diff = np.max(np.abs(r.final_state - acyclic_equilibrium(QUAD, bag)))
        v["detail"] = f"{r.status}, max diff {diff:.2e}, {elapsed:.3f} s"
        assert r.converged and diff <= 1e-3 and elapsed < 1.0


def test_c03_stock_published_values(verdict):
    with verdict("C3 stock fixture vs published values") as v:
        bag = fixture("stock")
        start = time.perf_counter()
        r = integrate(QUAD, bag, record=False)
        elapsed = time.perf_counter() - start
        err = max(abs(r.final_state[bag.index(n)] - w) for n, w in STOCK_PUBLISHED.items())
        v["detail"] = f"{r.status} after {r.steps_taken} steps, max deviation {err:.4f}"
        assert r.converged and err <= 0.01 and elapsed < 1.0


@pytest.mark.parametrize("k", [3, 10])
def test_c04_cycle_convergence(verdict, k):
    with verdict(f"C4 Cycle({k}) damped oscillation") as v:
        bag = cycle_k(k)
        start = time.perf_counter()
        r = integrate(QUAD, bag, SolverConfig(epsilon=1e-4), record=False)
        elapsed = time.perf_counter() - start
        flips = r.report.sign_changes[bag.index("A")]
        v["detail"] = f"{r.status} at t={r.final_time:.2f}, A sign changes {flips}, {elapsed:.2f} s"
        assert r.converged and elapsed < 5.0
        if k == 10:
            assert flips >= 2


def _state_at(bag, step, horizon):
    n_steps = round(horizon / step)
    cfg = SolverConfig(step=step, epsilon=1e-12, max_time=horizon, wall_clock_limit=None,
                       method="rk4", record_every=n_steps)
    r = integrate(QUAD, bag, cfg, record=False)
    assert r.steps_taken == n_steps
    return r.final_state


def test_c05_rk4_order_on_stock(verdict):
    with verdict("C5 RK4 error ratio on stock, T=2, 0.04 -> 0.02") as v:
        bag = fixture("stock")
        start = time.perf_counter()
        ref = _state_at(bag, 0.0005, 2.0)
        e1 = np.max(np.abs(_state_at(bag, 0.04, 2.0) - ref))
        e2 = np.max(np.abs(_state_at(bag, 0.02, 2.0) - ref))
        elapsed = time.perf_counter() - start
        ratio = e1 / e2
        v["detail"] = f"errors {e1:.3e} -> {e2:.3e}, ratio {ratio:.2f} (need >= 8)"
        assert elapsed < 5.0
        assert ratio >= 8


def test_c06_converged_runs_are_fixed_points(verdict):
    with verdict("C6 converged state is a fixed point, 4 models x 50 graphs") as v:
        cfg = SolverConfig(epsilon=1e-4)
        counts = {}
        worst = 0.0
        for key in sorted(MODELS):
            model = get_model(key)
            converged = 0
            for seed in range(50):
                bag = random_bag(GenSpec(nodes=30, edges=90, seed=seed))
                r = integrate(model, bag, cfg, record=False)
                if not r.converged:
                    continue
                converged += 1
                res = fixed_point_residual(model, bag, r.final_state)
                worst = max(worst, res)
                assert res <= cfg.epsilon, (key, seed, res)
            counts[key] = converged
        v["detail"] = (", ".join(f"{k} {c}/50" for k, c in counts.items())
                       + f" converged; worst residual {worst:.2e}")


def _support_only(rng, n=15, m=40):
    pairs = rng.choice(n * n, m, replace=False)
    return Bag([f"v{i}" for i in range(n)], rng.random(n), supports=[divmod(int(p), n) for p in pairs])


def _attack_only(rng, n=15, m=40):
    pairs = rng.choice(n * n, m, replace=False)
    return Bag([f"v{i}" for i in range(n)], rng.random(n), attacks=[divmod(int(p), n) for p in pairs])


def test_c07_property_suite(verdict):
    with verdict("C7 property suite") as v:
        start = time.perf_counter()
        rng = np.random.default_rng(7)
        cfg = SolverConfig(max_time=50.0, record_every=1)
        parts = []

        # (a) range on fuzzed graphs with n=50
        for seed in range(100):
            bag = random_bag(GenSpec(nodes=50, edges=int(rng.integers(0, 500)), seed=seed))
            model = get_model(sorted(MODELS)[seed % 4])
            _, states = integrate(model, bag, cfg).trajectory_arrays()
            assert states.min() >= -1e-9 and states.max() <= 1 + 1e-9
        parts.append("range")

        # (b) support-only monotone, attack-only capped
        for _ in range(20):
            bag = _support_only(rng)
            _, states = integrate(QUAD, bag, cfg).trajectory_arrays()
            assert np.all(np.diff(states, axis=0) >= -1e-9)
            bag = _attack_only(rng)
            _, states = integrate(QUAD, bag, cfg).trajectory_arrays()
            assert np.all(states <= bag.weights + 1e-9)
        parts.append("monotone/cap")

        # (c) Euler-based model keeps weights 0 and 1 fixed
        euler = get_model("euler")
        for _ in range(50):
            n = 10
            w = rng.random(n)
            w[: n // 2] = rng.integers(0, 2, n // 2)
            bag = random_bag(GenSpec(nodes=n, edges=30, seed=int(rng.integers(1 << 31))))
            bag = Bag(bag.names, w, bag.attacks, bag.supports)
            s = rng.random(n)
            u = euler.update(bag, s)
            assert np.all(u[: n // 2] == w[: n // 2])
        parts.append("euler stationarity")

        # (d) an update only looks at parents
        for key in sorted(MODELS):
            model = get_model(key)
            for seed in range(20):
                bag = random_bag(GenSpec(nodes=12, edges=30, seed=seed))
                s = rng.random(12)
                u = model.update(bag, s)
                for i in range(12):
                    parents = set(bag.attackers[i]) | set(bag.supporters[i])
                    t = s.copy()
                    others = [j for j in range(12) if j not in parents]
                    t[others] = rng.random(len(others))
                    assert model.update(bag, t)[i] == u[i]
        parts.append("locality")

        # (e) one Euler step of size 1 is the discrete update
        for key in sorted(MODELS):
            model = get_model(key)
            for seed in range(20):
                bag = random_bag(GenSpec(nodes=20, edges=60, seed=seed))
                s = rng.random(20)
                assert np.allclose(euler_step(model, bag, s, 1.0), model.update(bag, s),
                                   atol=1e-15)
        parts.append("unit euler step")

        elapsed = time.perf_counter() - start
        v["detail"] = ", ".join(parts) + f" ok in {elapsed:.1f} s"
        assert elapsed < 60


@pytest.mark.parametrize("name", ["stock", "edemocracy"])
def test_c08_euler_vs_rk4(verdict, name):
    with verdict(f"C8 Euler vs RK4 on {name}") as v:
        bag = fixture(name)
        e = integrate(QUAD, bag, SolverConfig(step=0.001, method="euler"), record=False)
        r = integrate(QUAD, bag, SolverConfig(step=0.01, method="rk4"), record=False)
        diff = np.max(np.abs(e.final_state - r.final_state))
        v["detail"] = f"max diff {diff:.2e}"
        assert e.converged and r.converged and diff <= 1e-3


@pytest.mark.slow
def test_c09_desk_scale_benchmark(verdict, tmp_path):
    with verdict("C9 desk-scale benchmark, sizes 100..500") as v:
        start = time.perf_counter()
        generate_benchmark(tmp_path / "tree", base_size=100, increments=5, trials=5,
                           edge_ratio=10, seed=2018)
        stats_csv = tmp_path / "stats.csv"
        res = run_benchmark(tmp_path / "tree", "quad", algo="ode",
                            records_csv=tmp_path / "records.csv", stats_csv=stats_csv)
        elapsed = time.perf_counter() - start
        frac = res.converged_fraction()
        v["detail"] = f"{len(res.records)} runs, {frac:.0%} converged, {elapsed:.1f} s"
        assert len(res.records) == 25
        assert frac >= 0.95
        stats = read_stats_csv(stats_csv)
        assert [s.size for s in stats] == [100, 200, 300, 400, 500]
        with open(tmp_path / "records.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        for s in stats:
            ms = [float(r["wall_ms"]) for r in rows if int(r["size"]) == s.size]
            assert s.count == len(ms)
            assert s.min_ms <= s.mean_ms <= s.max_ms
            assert s.min_ms == pytest.approx(min(ms), rel=1e-6, abs=1e-3)
            assert s.max_ms == pytest.approx(max(ms), rel=1e-6, abs=1e-3)
        assert elapsed < 300


def test_c10_round_trip(verdict):
    with verdict("C10 serialize/parse round trip") as v:
        seen = []

        @settings(max_examples=200, deadline=None, database=None,
                  suppress_health_check=[HealthCheck.too_slow])
        @given(bags(max_nodes=12))
        def round_trip(bag):
            seen.append(len(bag))
            assert structurally_equal(bag, parse_bag(serialize_bag(bag)))

        round_trip()
        conarg = "arg(a1).\narg(a2).\narg(a3).\natt(a1,a2).\natt(a2,a3).\natt(a3,a1).\n"
        bag = parse_bag(conarg)
        assert np.all(bag.weights == 0.5) and len(bag.attacks) == 3
        v["detail"] = f"{len(seen)} fuzzed graphs, unweighted file gets 0.5 everywhere"
        assert len(seen) >= 200
