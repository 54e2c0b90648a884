import numpy as np
import pytest

from s1mk import (
    ExperimentConfig,
    Grid,
    ParameterRangeError,
    eccentric_battery,
    gen_f,
    holder_proxy,
    random_convex_body,
    random_initial_body,
    run_diameter,
    run_maxprinciple,
    run_sandwich,
    run_uniqueness,
)
from s1mk.harness import write_csv


class TestGenF:
    def test_bounds_are_sharp(self, grid256):
        for kind in ("trig", "bump", "piecewise"):
            f = gen_f(kind, 2.0, 0, grid256)
            assert float(f.values.min()) == 0.5
            assert float(f.values.max()) == pytest.approx(2.0, rel=1e-15)
            assert np.all(f.values > 0.0)

    def test_lambda_one_collapses_to_constant(self, grid256):
        f = gen_f("trig", 1.0, 0, grid256)
        assert np.all(f.values == 1.0)

    def test_shape_independent_of_lambda(self, grid256):
        a = gen_f("trig", 2.0, 5, grid256).values
        b = gen_f("trig", 4.0, 5, grid256).values
        na = (a - a.min()) / (a.max() - a.min())
        nb = (b - b.min()) / (b.max() - b.min())
        assert np.allclose(na, nb, atol=1e-14)

    def test_deterministic_in_seed(self, grid256):
        a = gen_f("bump", 2.0, 9, grid256).values
        b = gen_f("bump", 2.0, 9, grid256).values
        c = gen_f("bump", 2.0, 10, grid256).values
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_rejects_bad_arguments(self, grid256):
        with pytest.raises(ValueError):
            gen_f("sawtooth", 2.0, 0, grid256)
        with pytest.raises(ValueError):
            gen_f("trig", 0.5, 0, grid256)


class TestBodyGenerators:
    def test_random_convex_body_margins(self, grid256):
        for seed in range(4):
            body = random_convex_body(np.random.default_rng(seed), grid256)
            assert float(body.values.min()) > 0.05
            assert float(body.curvature.values.min()) > 0.01

    def test_random_initial_body_is_valid(self, grid256):
        for seed in range(4):
            body = random_initial_body(np.random.default_rng(seed), grid256)
            assert float(body.values.min()) > 0.0

    def test_battery_contents(self):
        battery = eccentric_battery()
        assert [name for name, _ in battery] == [
            "ellipse-2", "ellipse-5", "ellipse-10", "ellipse-20",
            "ellipse-50", "ellipse-100"]
        for name, body in battery:
            aspect = int(name.split("-")[1])
            assert body.grid.n_points == 8192
            ratio = float(body.values.max() / body.values.min())
            assert ratio == pytest.approx(aspect, rel=1e-12)


class TestHolderProxy:
    def test_positively_homogeneous(self, grid256):
        dev = np.sin(3 * grid256.theta) + 0.2 * np.cos(grid256.theta)
        base = holder_proxy(dev, grid256)
        assert holder_proxy(2.5 * dev, grid256) == pytest.approx(2.5 * base,
                                                                 rel=1e-12)

    def test_zero_on_zero(self, grid256):
        assert holder_proxy(np.zeros(256), grid256) == 0.0

    def test_dominates_sup_norm(self, grid256):
        dev = np.cos(2 * grid256.theta)
        assert holder_proxy(dev, grid256) >= 1.0


class TestWriteCsv:
    def test_formatting(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, ["a", "b", "c", "d"],
                  [[1, 0.1, None, True], ["x", 2.5, False, -3]])
        data = path.read_bytes()
        lines = data.split(b"\r\n")
        assert lines[0] == b"a,b,c,d"
        assert lines[1] == b"1,0.10000000000000001,,true"
        assert lines[2] == b"x,2.5,false,-3"


class TestRunSandwich:
    def _cfg(self, out_dir, **kw):
        base = dict(kind="sandwich", p=0.5, q=2.0, n_samples=3, seed=0,
                    n_points=256, out_dir=str(out_dir))
        base.update(kw)
        return ExperimentConfig(**base)

    def test_rows_and_summary(self, tmp_path):
        out = run_sandwich(self._cfg(tmp_path))
        s = out["summary"]
        assert s["n_rows"] == 3 + 6  # samples plus the eccentric battery
        assert s["upper_violations"] == 0
        assert s["ratio_min"] > 0.0
        assert s["ratio_max"] <= s["c2"] + 1e-9
        assert s["containment_centroid_max"] <= 2.0 + 1e-9

    def test_csv_deterministic(self, tmp_path):
        a = run_sandwich(self._cfg(tmp_path / "a"))
        b = run_sandwich(self._cfg(tmp_path / "b"))
        bytes_a = open(a["csv"], "rb").read()
        bytes_b = open(b["csv"], "rb").read()
        assert bytes_a == bytes_b
        assert b"\r\n" in bytes_a

    def test_threaded_run_matches_serial(self, tmp_path, monkeypatch):
        a = run_sandwich(self._cfg(tmp_path / "serial"))
        monkeypatch.setenv("S1MK_THREADS", "2")
        b = run_sandwich(self._cfg(tmp_path / "threads"))
        assert open(a["csv"], "rb").read() == open(b["csv"], "rb").read()

    def test_parameter_validation(self, tmp_path):
        with pytest.raises(ParameterRangeError):
            run_sandwich(self._cfg(tmp_path, p=1.5))
        with pytest.raises(ParameterRangeError):
            run_sandwich(self._cfg(tmp_path, q=1.5))


class TestRunDiameter:
    def test_small_sweep(self, tmp_path):
        cfg = ExperimentConfig(kind="diameter", p=0.5, q=2.0, n_samples=3,
                               seed=0, n_points=256, out_dir=str(tmp_path))
        out = run_diameter(cfg)
        s = out["summary"]
        assert s["n_converged"] == 3
        assert s["baseline_max_h"] == 1.0  # data f == 1 solves exactly
        assert 0.0 < s["empirical_max_h"] < 10.0

    def test_parameter_validation(self, tmp_path):
        with pytest.raises(ParameterRangeError):
            run_diameter(ExperimentConfig(kind="diameter", p=1.0, q=2.0,
                                          out_dir=str(tmp_path)))


class TestRunUniqueness:
    def test_small_sweep_agrees(self, tmp_path):
        cfg = ExperimentConfig(kind="uniqueness", p=0.5, q=2.0, eps=0.05,
                               starts=4, n_samples=2, n_points=256,
                               seed=0, out_dir=str(tmp_path))
        out = run_uniqueness(cfg)
        s = out["summary"]
        blk = s["results"][0]
        assert blk["all_agree"]
        assert blk["max_pairwise_sup"] <= 1e-6
        assert blk["min_h"] > 0.5
        assert s["empirical_uniqueness_radius"] == 0.05

    def test_requires_q_two(self, tmp_path):
        with pytest.raises(ParameterRangeError):
            run_uniqueness(ExperimentConfig(kind="uniqueness", p=0.5, q=3.0,
                                            out_dir=str(tmp_path)))


class TestRunMaxPrinciple:
    def test_small_sweep(self, tmp_path):
        cfg = ExperimentConfig(kind="maxprinciple", p=3.0, q=2.0, lam=2.0,
                               n_samples=3, seed=0, n_points=128,
                               out_dir=str(tmp_path))
        out = run_maxprinciple(cfg)
        s = out["summary"]
        assert s["violations"] == 0
        assert s["worst_margin"] >= -1e-6
        assert s["constant_data_equality_gap"] <= 1e-8

    def test_requires_p_above_q(self, tmp_path):
        with pytest.raises(ParameterRangeError):
            run_maxprinciple(ExperimentConfig(kind="maxprinciple", p=0.5,
                                              q=2.0, out_dir=str(tmp_path)))


class TestConfigValidation:
    def test_sample_count(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="sandwich", p=0.5, q=2.0, n_samples=0)

    def test_lambda_bound(self):
        with pytest.raises(ValueError):
            ExperimentConfig(kind="sandwich", p=0.5, q=2.0, lam=0.5)
