import numpy as np
import pytest

from wbag import GenSpec, cycle_k, generate_benchmark, parse_bag, random_bag, serialize_bag
from wbag.bag import structurally_equal
from wbag.generator import derive_seed


class TestRandomBag:
    def test_no_edges(self):
        bag = random_bag(GenSpec(nodes=5, edges=0, seed=7))
        assert len(bag) == 5 and not bag.attacks and not bag.supports
        assert bag.names == ("a0", "a1", "a2", "a3", "a4")

    def test_deterministic(self):
        spec = GenSpec(nodes=40, edges=200, seed=11)
        assert serialize_bag(random_bag(spec)) == serialize_bag(random_bag(spec))

    def test_seed_matters(self):
        a = random_bag(GenSpec(40, 200, seed=1))
        b = random_bag(GenSpec(40, 200, seed=2))
        assert not structurally_equal(a, b)

    def test_edge_count(self):
        bag = random_bag(GenSpec(nodes=100, edges=300, seed=1, attack_probability=0.5))
        assert len(bag.attacks) + len(bag.supports) == 300
        pairs = set(bag.attacks) | set(bag.supports)
        assert len(pairs) == 300  # pairs are distinct across relations too
        assert 100 <= len(bag.attacks) <= 200

    def test_all_pairs(self):
        bag = random_bag(GenSpec(nodes=4, edges=16, seed=0))
        assert set(bag.attacks) | set(bag.supports) == {(i, j) for i in range(4) for j in range(4)}

    def test_without_self_loops(self):
        bag = random_bag(GenSpec(nodes=4, edges=12, seed=0, self_loops=False))
        pairs = set(bag.attacks) | set(bag.supports)
        assert pairs == {(i, j) for i in range(4) for j in range(4) if i != j}

    def test_attack_probability_extremes(self):
        assert not random_bag(GenSpec(30, 100, seed=3, attack_probability=0.0)).attacks
        assert not random_bag(GenSpec(30, 100, seed=3, attack_probability=1.0)).supports

    def test_constant_weight(self):
        bag = random_bag(GenSpec(10, 10, seed=3, weight=0.25))
        assert np.all(bag.weights == 0.25)

    def test_uniform_weights_in_range(self):
        w = random_bag(GenSpec(2000, 0, seed=5)).weights
        assert w.min() >= 0 and w.max() <= 1
        assert abs(w.mean() - 0.5) < 0.05

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(nodes=3, edges=10, seed=0),
            dict(nodes=3, edges=7, seed=0, self_loops=False),
            dict(nodes=0, edges=0, seed=0),
            dict(nodes=3, edges=1, seed=0, attack_probability=1.5),
            dict(nodes=3, edges=-1, seed=0),
        ],
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ValueError):
            GenSpec(**kwargs)


class TestCycleK:
    def test_cycle3(self):
        bag = cycle_k(3)
        assert (len(bag), len(bag.supports), len(bag.attacks)) == (7, 12, 3)

    def test_cycle1(self):
        bag = cycle_k(1)
        edges = {(bag.names[s], bag.names[t]) for s, t in bag.supports}
        assert edges == {("A", "B1"), ("B1", "C1")}
        assert [(bag.names[s], bag.names[t]) for s, t in bag.attacks] == [("C1", "A")]

    def test_cycle10(self):
        bag = cycle_k(10)
        assert (len(bag), len(bag.supports), len(bag.attacks)) == (21, 110, 10)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_structure(self, k):
        bag = cycle_k(k)
        assert len(bag.supports) == k * k + k and len(bag.attacks) == k
        w = dict(zip(bag.names, bag.weights))
        assert w.pop("A") == 1.0 and all(v == 0.0 for v in w.values())

    def test_k0(self):
        with pytest.raises(ValueError):
            cycle_k(0)


class TestBenchmarkTree:
    def test_layout(self, tmp_path):
        paths = generate_benchmark(tmp_path, base_size=100, increments=3, trials=2, edge_ratio=2)
        assert sorted(p.name for p in tmp_path.iterdir()) == ["100", "200", "300"]
        for size in (100, 200, 300):
            files = sorted(p.name for p in (tmp_path / str(size)).iterdir())
            assert files == ["bag_0.bag", "bag_1.bag"]
        assert len(paths) == 6

    def test_files_round_trip_and_edge_count(self, tmp_path):
        generate_benchmark(tmp_path, base_size=20, increments=2, trials=2, edge_ratio=2.5, seed=4)
        for size in (20, 40):
            for f in (tmp_path / str(size)).iterdir():
                text = f.read_text()
                assert text.startswith("// generator: ")
                bag = parse_bag(text)
                assert len(bag) == size
                assert len(bag.attacks) + len(bag.supports) == int(2.5 * size)
                assert structurally_equal(bag, parse_bag(serialize_bag(bag)))

    def test_deterministic_bytes(self, tmp_path):
        generate_benchmark(tmp_path / "a", base_size=10, increments=2, trials=2, seed=9)
        generate_benchmark(tmp_path / "b", base_size=10, increments=2, trials=2, seed=9)
        for f in (tmp_path / "a").rglob("*.bag"):
            assert f.read_bytes() == (tmp_path / "b" / f.relative_to(tmp_path / "a")).read_bytes()

    def test_seed_derivation(self):
        assert derive_seed(1, 100, 0) == derive_seed(1, 100, 0)
        seeds = {derive_seed(1, s, i) for s in (100, 200) for i in range(50)}
        assert len(seeds) == 100

    def test_invalid(self, tmp_path):
        with pytest.raises(ValueError):
            generate_benchmark(tmp_path, trials=0)

    def test_unwritable(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(OSError):
            generate_benchmark(blocker / "sub", base_size=5, increments=1, trials=1)

    def test_full_shape(self, tmp_path, monkeypatch):
        # full 30 sizes x 100 trials layout; graph content stubbed to keep it fast
        import wbag.generator as gen
        from wbag import Bag

        monkeypatch.setattr(gen, "random_bag", lambda spec: Bag(["a"], [0.5]))
        paths = generate_benchmark(tmp_path, base_size=100, increments=30, trials=100)
        assert len(paths) == 3000
        sizes = sorted(int(p.name) for p in tmp_path.iterdir())
        assert sizes == [100 * i for i in range(1, 31)]
        assert all(len(list((tmp_path / str(s)).iterdir())) == 100 for s in sizes)
