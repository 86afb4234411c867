import numpy as np
import pytest

from wignerprobe import montecarlo as mc
from wignerprobe import photon_statistics as ps
from wignerprobe.detector import TmdConfig
from wignerprobe.scenarios import preset


def small(scn, **kw):
    """Shrink a scenario for fast module-level checks."""
    from dataclasses import replace
    defaults = dict(events_per_run=10**5, runs=4)
    defaults.update(kw)
    return replace(scn, **defaults)


class TestSampleClicks:
    def test_point_mass_is_exact(self):
        rng = np.random.default_rng(0)
        f = mc.sample_clicks(np.array([0.0, 1.0, 0.0]), 1000, rng)
        np.testing.assert_allclose(f, [0.0, 1.0, 0.0])

    def test_frequencies_sum_to_one(self):
        rng = np.random.default_rng(1)
        f = mc.sample_clicks(np.full(8, 0.125), 12345, rng)
        assert f.sum() == pytest.approx(1.0, abs=1e-12)

    def test_uniform_within_five_sigma(self):
        rng = np.random.default_rng(2)
        n = 10**6
        f = mc.sample_clicks(np.full(4, 0.25), n, rng)
        sigma = np.sqrt(0.25 * 0.75 / n)
        assert np.all(np.abs(f - 0.25) < 5 * sigma)

    def test_deterministic_for_fixed_stream(self):
        a = mc.sample_clicks(np.full(4, 0.25), 1000, mc.point_rng(7, 2, 1))
        b = mc.sample_clicks(np.full(4, 0.25), 1000, mc.point_rng(7, 2, 1))
        c = mc.sample_clicks(np.full(4, 0.25), 1000, mc.point_rng(7, 2, 2))
        np.testing.assert_array_equal(a, b)
        assert np.any(a != c)


class TestDetectedStats:
    def test_perfect_overlap_equals_effective_lossy_state(self):
        scn = preset("case1")
        got = mc.detected_photon_stats(scn, 1.0)
        eta = scn.eta_total
        want = ps.lossy_displaced_fock(1, np.sqrt(eta), eta, 48).probs
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_mismatch_path_matches_direct_construction(self):
        scn = preset("case4")
        alpha = 0.8
        got = mc.detected_photon_stats(scn, alpha)
        beta = alpha * np.sqrt(scn.eta1 * scn.T / (1 - scn.T))
        pre = np.zeros(49)
        pre[0], pre[1] = 1 - scn.eta1, scn.eta1
        want = ps.mismatch_distribution(
            ps.PhotonDistribution(pre), beta, scn.T, scn.overlap_M, 48
        ).probs
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_normalized(self):
        for name in ("case1", "case2a", "case3-fock2", "case4"):
            p = mc.detected_photon_stats(preset(name), 1.5)
            assert p.sum() == pytest.approx(1.0, abs=1e-8)


class TestOverflowMass:
    def test_grows_with_displacement(self):
        scn = preset("case1")
        vals = [mc.overflow_mass(scn, a) for a in (0.0, 0.5, 1.0, 1.5, 2.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_limit_crossing_for_one_photon_input(self):
        scn = preset("case1")
        assert mc.overflow_mass(scn, 1.6) <= scn.overflow_limit
        assert mc.overflow_mass(scn, 1.7) > scn.overflow_limit

    def test_negligible_at_origin(self):
        assert mc.overflow_mass(preset("case1"), 0.0) < 1e-6


class TestRunPoint:
    def test_origin_value_and_spread(self):
        scn = preset("case1")
        s = mc.run_point(scn, 0.0)
        se = s.W_reconstructed_std / np.sqrt(scn.runs)
        assert abs(s.W_reconstructed_mean + 2 / np.pi) < 4 * se
        assert s.W_reconstructed_std < 0.01
        assert s.reliability.reliable

    def test_degraded_value_is_damped_at_origin(self):
        s = mc.run_point(small(preset("case1")), 0.0)
        assert abs(s.W_degraded_mean) < abs(s.W_reconstructed_mean)

    def test_large_displacement_unreliable(self):
        s = mc.run_point(small(preset("case1")), 1.7)
        assert not s.reliability.reliable
        assert s.reliability.overflow_mass > s.reliability.overflow_limit

    def test_deterministic(self):
        scn = small(preset("case2a"))
        a = mc.run_point(scn, 0.5, point_index=5)
        b = mc.run_point(scn, 0.5, point_index=5)
        assert a.W_reconstructed_mean == b.W_reconstructed_mean
        assert a.W_degraded_std == b.W_degraded_std

    def test_coverage_of_true_value(self):
        # the +/- std/sqrt(runs) band should cover -2/pi at roughly the
        # one-sigma rate (68%) over many independent repetitions
        scn = small(preset("case1"), events_per_run=10**4, runs=5)
        from dataclasses import replace
        hits = 0
        reps = 100
        for seed in range(reps):
            s = mc.run_point(replace(scn, rng_seed=seed), 0.0)
            se = s.W_reconstructed_std / np.sqrt(scn.runs)
            if abs(s.W_reconstructed_mean + 2 / np.pi) <= se:
                hits += 1
        assert 0.55 <= hits / reps <= 0.80


class TestScan:
    def test_ideal_detector_reliable_through_unit_displacement(self):
        scn = mc.ExperimentScenario(
            input_fock_m=1, eta1=1.0, T=1.0, epsilon=1.0, overlap_M=1.0,
            tmd_generation=TmdConfig.balanced(4),
            tmd_reconstruction=TmdConfig.balanced(4),
            alpha_grid=tuple(np.round(np.arange(0.0, 1.21, 0.1), 10)),
            events_per_run=10**5, runs=4, rng_seed=3,
        )
        result = mc.scan(scn)
        assert all(s.reliability.reliable for s in result.samples)
        assert result.boundary == pytest.approx(1.2)

    def test_case1_boundary_neighborhood(self):
        result = mc.scan(preset("case1"))
        assert result.boundary in (1.4, 1.5, 1.6)

    def test_grid_must_ascend(self):
        from dataclasses import replace
        scn = replace(preset("case1"), alpha_grid=(0.2, 0.1))
        with pytest.raises(ValueError):
            mc.scan(scn)

    def test_boundary_rule_longest_run(self):
        from wignerprobe.reconstruction import ReliabilityReport

        def fake(alpha, ok):
            rep = ReliabilityReport(0.0, -0.001, 0.0, 0.025, ok)
            return mc.WignerSample(alpha, 0, 0, 0, 0, rep,
                                   np.zeros(1), np.zeros(1))

        flags = [False, True, True, True, False, True]
        samples = [fake(0.1 * i, ok) for i, ok in enumerate(flags)]
        assert mc._boundary(samples) == pytest.approx(0.3)
        assert mc._boundary([fake(0.0, False)]) is None


class TestScenarioValidation:
    def test_rejects_bad_fields(self):
        from dataclasses import replace
        scn = preset("case1")
        with pytest.raises(ValueError):
            replace(scn, input_fock_m=3)
        with pytest.raises(ValueError):
            replace(scn, runs=1)
        with pytest.raises(ValueError):
            replace(scn, events_per_run=0)
        with pytest.raises(ValueError):
            replace(scn, alpha_grid=(-0.1, 0.5))

    def test_mixed_bin_counts_rejected(self):
        from dataclasses import replace
        scn = replace(preset("case1"),
                      tmd_generation=TmdConfig.balanced(4))
        with pytest.raises(ValueError):
            mc.scan(scn)

    def test_eta_total(self):
        scn = preset("case3-fock1")
        assert scn.eta_total == pytest.approx(0.3, abs=1e-12)


class TestArtifacts:
    def test_scan_csv_byte_stable(self, tmp_path):
        scn = small(preset("case1"), alpha_grid=(0.0, 0.5, 1.0))
        blobs = []
        for tag in ("a", "b"):
            result = mc.scan(scn)
            path = tmp_path / f"scan_{tag}.csv"
            mc.write_scan_csv(path, result.samples)
            blobs.append(path.read_bytes())
        assert blobs[0] == blobs[1]

    def test_scan_csv_layout(self, tmp_path):
        scn = small(preset("case1"), alpha_grid=(0.0, 0.2))
        result = mc.scan(scn)
        path = tmp_path / "scan.csv"
        mc.write_scan_csv(path, result.samples)
        lines = path.read_text().strip().splitlines()
        assert lines[0].split(",") == [
            "alpha", "W_degraded_mean", "W_degraded_std",
            "W_reconstructed_mean", "W_reconstructed_std",
            "min_component", "overflow_mass", "reliable"]
        assert len(lines) == 3
        assert lines[1].split(",")[-1] in ("true", "false")

    def test_points_json(self, tmp_path):
        import json
        scn = small(preset("case1"), alpha_grid=(0.0, 0.4))
        result = mc.scan(scn)
        path = tmp_path / "points.json"
        mc.write_points_json(path, result.samples)
        doc = json.loads(path.read_text())
        assert len(doc) == 2
        assert set(doc[0]) == {"alpha", "degraded", "inverted"}
        assert len(doc[0]["inverted"]) == 9
