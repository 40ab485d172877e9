import numpy as np
import pytest

from qirc import channels, claims, resources, states
from qirc.claims import (CampaignConfig, check_convexity, check_conservation,
                         check_entropic_bounds, check_extremals,
                         check_monotonicity, check_qirc_ball,
                         normalize_claim_id, resolve_generator, run_check)
from qirc.resources import ProfileConfig
from qirc.states import Seed


def small(**kw):
    defaults = dict(seed=7, trials=12)
    defaults.update(kw)
    return CampaignConfig(**defaults)


class TestConfig:
    def test_claim_id_normalization(self):
        assert normalize_claim_id("t1") == "T1"
        assert normalize_claim_id("C3.monotonicity") == "C3"
        with pytest.raises(ValueError):
            normalize_claim_id("Z9")

    def test_generator_resolution(self):
        assert resolve_generator("default", 3).dim == 3
        assert np.allclose(resolve_generator("sigma-z", 2).h, np.diag([1, -1]))
        assert np.allclose(resolve_generator("diag:2,0,-2", 3).h,
                           np.diag([2.0, 0.0, -2.0]))
        with pytest.raises(ValueError):
            resolve_generator("sigma-z", 3)
        with pytest.raises(ValueError):
            resolve_generator("nope", 2)

    def test_tolerance_overrides(self):
        cfg = CampaignConfig(tolerances={"ball": 0.5})
        assert cfg.tolerance("ball") == 0.5
        assert cfg.tolerance("mi") == claims.DEFAULT_TOLERANCES["mi"]


class TestExtremals:
    def test_holds(self):
        report = check_extremals(small())
        assert report.verdict == "holds-within-tolerance"
        assert report.violations == 0
        assert report.trials == 10
        assert report.stats["max_deviation"] <= 1e-6

    def test_targets_cover_all_axes(self):
        report = check_extremals(small())
        targets = {tuple(a["target"]) for a in report.stats["anchors"]}
        assert targets == {(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)}

    def test_deterministic(self):
        a = check_extremals(small()).to_dict()
        b = check_extremals(small()).to_dict()
        assert a == b

    def test_forced_violation_with_zero_tolerance(self):
        report = check_extremals(small(tolerances={"extremal": -1.0}))
        assert report.verdict == "violated"
        assert report.worst_case is not None


class TestBallCampaign:
    def test_row_count_and_determinism(self):
        r1, cloud1 = check_qirc_ball(small(trials=30))
        r2, cloud2 = check_qirc_ball(small(trials=30))
        assert len(cloud1) == 30
        assert r1.to_dict() == r2.to_dict()
        assert cloud1 == cloud2

    def test_cloud_streams_reproduce_states(self):
        _, cloud = check_qirc_ball(small(trials=5))
        row = cloud[3]
        state = states.haar_pure((2, 2, 2), Seed(7, row["stream"]))
        prof = resources.profile(state)
        assert np.isclose(prof.norm, row["norm"])

    def test_werner_family_sweep_matches_closed_form(self):
        cfg = small(trials=11, sampler="named-family", family="werner")
        _, cloud = check_qirc_ball(cfg)
        for row in cloud:
            p = row["trial"] / 10
            expected = max(0.0, (3 * p - 1) / 2) ** 2
            assert abs(row["norm"] - expected) <= 1e-9

    def test_ghz_family_norm_zero(self):
        cfg = small(trials=3, sampler="named-family", family="ghz")
        report, cloud = check_qirc_ball(cfg)
        assert report.stats["max_norm"] <= 1e-9

    def test_violation_bookkeeping(self):
        # seed 7 at 200 haar-pure trials contains a genuine excursion past 1
        report, _ = check_qirc_ball(small(trials=200))
        assert report.verdict == "report-only"
        if report.violations:
            assert report.worst_case is not None
            assert report.worst_case["margin"] > 0
            assert report.stats["violation_trials"]

    def test_ginibre_sampler(self):
        report, cloud = check_qirc_ball(small(trials=5, sampler="ginibre-mixed",
                                              ginibre_rank=2))
        assert len(cloud) == 5


class TestConvexity:
    def test_endpoints_reproduce_exactly(self):
        report = check_convexity(small(trials=6))
        assert report.stats["endpoint_mismatches"] == 0
        assert report.verdict == "report-only"

    def test_anchor_mixture_inside_ball(self):
        report = check_convexity(small(trials=1, lambdas=(0.0, 0.5, 1.0)))
        assert report.stats["max_mixture_norm"] <= 1.0 + 1e-6
        assert report.violations == 0

    def test_deterministic(self):
        a = check_convexity(small(trials=4)).to_dict()
        b = check_convexity(small(trials=4)).to_dict()
        assert a == b


class TestMonotonicity:
    def test_bookkeeping_and_determinism(self):
        cfg = small(trials=6, channels_per_state=4)
        a = check_monotonicity(cfg)
        b = check_monotonicity(cfg)
        assert a.to_dict() == b.to_dict()
        assert a.trials == 24
        assert a.violations == a.stats["q1_increases"] + a.stats["q3_increases"]
        if a.violations:
            assert a.verdict == "violated"
            assert a.worst_case is not None
            assert "channel_stream" in a.worst_case

    def test_q1_never_increases(self):
        # empirical: Haar channels do not create teleportation advantage
        report = check_monotonicity(small(trials=15, channels_per_state=6))
        assert report.stats["q1_increases"] == 0

    def test_full_depolarization_kills_profile(self):
        rho = channels.apply(channels.depolarizing(2, 1.0),
                             states.bell_spectator(), 0)
        prof = resources.profile(rho)
        assert np.allclose(prof.coords(), (0, 0, 0), atol=1e-9)

    def test_full_dephasing_kills_q3(self):
        g = resolve_generator("sigma-z", 2)
        before = resources.profile(states.coherent_spectator(),
                                   ProfileConfig(generator=g))
        after = resources.profile(
            channels.apply(channels.dephasing(1.0, g),
                           states.coherent_spectator(), 0),
            ProfileConfig(generator=g))
        assert np.isclose(before.q3, 1.0, atol=1e-9)
        assert after.q3 <= 1e-9


class TestConservation:
    def test_local_family_invariance(self):
        report = check_conservation(small(trials=20))
        assert report.verdict == "holds-within-tolerance"
        assert report.violations == 0
        assert report.stats["local_max_coord_drift"] <= 1e-6
        assert report.stats["local_max_norm_drift"] <= 1e-6

    def test_global_drift_is_reported(self):
        report = check_conservation(small(trials=10))
        assert report.stats["global_trials"] == 10
        assert report.report_only_violations == report.stats["global_exceed_count"]
        # generic commutant elements shuffle resources between subsystems
        assert report.stats["global_max_drift"] > 1e-3
        assert report.worst_case is not None
        assert report.worst_case["family"] == "global"

    def test_deterministic(self):
        a = check_conservation(small(trials=5)).to_dict()
        b = check_conservation(small(trials=5)).to_dict()
        assert a == b


class TestEntropicBounds:
    def test_mutual_information_bound_holds(self):
        report = check_entropic_bounds(small(trials=60))
        assert report.verdict == "holds-within-tolerance"
        assert report.violations == 0

    def test_anchor_saturates(self):
        report = check_entropic_bounds(small(trials=3))
        assert report.stats["anchor_saturation_gap"] <= 1e-9

    def test_heuristic_counters_present(self):
        report = check_entropic_bounds(small(trials=40))
        stats = report.stats
        assert stats["q1q2_bound_violations"] >= 0
        assert stats["fisher_bound_violations"] >= 0
        assert report.report_only_violations == (stats["q1q2_bound_violations"]
                                                 + stats["fisher_bound_violations"])

    def test_deterministic(self):
        a = check_entropic_bounds(small(trials=8)).to_dict()
        b = check_entropic_bounds(small(trials=8)).to_dict()
        assert a == b


class TestDispatch:
    def test_run_check_returns_cloud_only_for_ball(self):
        report, cloud = run_check("T1", small(trials=3))
        assert cloud is not None and len(cloud) == 3
        report, cloud = run_check("C1", small())
        assert cloud is None

    def test_reports_are_serializable(self):
        import json
        from qirc import serialize
        for claim in ("C1", "T1", "C2"):
            report, _ = run_check(claim, small(trials=3))
            text = serialize.dumps(report.to_dict())
            assert json.loads(text)["claim_id"] == claims.CLAIM_IDS[claim]
