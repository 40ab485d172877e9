"""Falsification harness: each structural claim becomes a seeded, tolerance-
parameterized check that emits a ClaimReport.

Two verdict tiers keep mathematics and conjecture apart. Hard-assertion
checks (extremal anchors, q1/q3 monotonicity, the local conservation family,
the mutual-information bound) report ``holds-within-tolerance`` or
``violated``. Report-only checks (ball membership, convexity of mixtures,
norm contraction, global commutant drift, the heuristic entropy bounds)
always report ``report-only``; their violations are findings, not failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dynamics, families, resources, serialize, states
from .channels import KrausChannel, apply as apply_channel
from .generators import (CoherenceGenerator, default_generator,
                         diagonal_generator, sigma_z_generator)
from .resources import OptimizerSettings, ProfileConfig, ResourceProfile
from .states import DensityMatrix, Seed, _haar_unitary_from_rng
from .tolerances import (EPS_BALL, EPS_EXTREMAL, EPS_MI, EPS_Q1_MONO,
                         EPS_Q3_MONO, EPS_TRAJ)

CLAIM_IDS = {
    "T1": "T1.ball",
    "C1": "C1.extremal",
    "C2": "C2.convexity",
    "C3": "C3.monotonicity",
    "T2": "T2.conservation",
    "A2": "A2.entropic",
}
CHECK_ORDER = ("C1", "T1", "C2", "C3", "T2", "A2")

DEFAULT_TOLERANCES = {
    "extremal": EPS_EXTREMAL,
    "ball": EPS_BALL,
    "q1_mono": EPS_Q1_MONO,
    "q3_mono": EPS_Q3_MONO,
    "mono_report": 1e-6,
    "traj": EPS_TRAJ,
    "mi": EPS_MI,
}

DEFAULT_TRIALS = {
    "C1": 0,       # fixed anchor list, no sampling
    "T1": 1000,
    "C2": 100,     # state pairs
    "C3": 200,     # states (each hit by channels_per_state channels)
    "T2": 100,     # local trials; the global family reuses the count
    "A2": 1000,
}

# Stream layout: primary states sit at stream == trial index; derived draws
# (channels, unitaries, pair partners) live in disjoint offset blocks.
_STREAM_CHANNEL = 1_000_003
_STREAM_UA = 2_000_003
_STREAM_UB = 3_000_003
_STREAM_UC = 4_000_003
_STREAM_UG = 5_000_003
_STREAM_PAIR = 6_000_003


def resolve_generator(spec: str, d: int) -> CoherenceGenerator:
    """Generator spec strings: 'default', 'sigma-z', 'diag:v1,v2,...'."""
    if spec == "default":
        return default_generator(d)
    if spec == "sigma-z":
        if d != 2:
            raise ValueError(f"sigma-z generator needs d_A = 2, got {d}")
        return sigma_z_generator()
    if spec.startswith("diag:"):
        values = [float(x) for x in spec[len("diag:"):].split(",")]
        if len(values) != d:
            raise ValueError(f"diag generator has {len(values)} entries for d_A = {d}")
        return diagonal_generator(values)
    raise ValueError(f"unknown generator spec {spec!r}")


@dataclass
class CampaignConfig:
    """Sampling plan and tolerances for one check run."""

    sampler: str = "haar-pure"          # haar-pure | ginibre-mixed | named-family
    trials: int | None = None           # per-check default when None
    dims: tuple[int, ...] = (2, 2, 2)
    q2_mode: str = "transfer"
    generator: str = "default"
    seed: int = 7
    family: str | None = None           # named-family sampler target
    ginibre_rank: int | None = None
    channels_per_state: int = 20
    lambdas: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    tolerances: dict = field(default_factory=dict)
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)

    def tolerance(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def n_trials(self, check: str) -> int:
        n = DEFAULT_TRIALS[check] if self.trials is None else int(self.trials)
        if n < 1 and check != "C1":
            raise ValueError(f"trials must be >= 1, got {n}")
        return n

    def coherence_generator(self) -> CoherenceGenerator:
        return resolve_generator(self.generator, self.dims[0])

    def profile_config(self) -> ProfileConfig:
        return ProfileConfig(generator=self.coherence_generator(),
                             q2_mode=self.q2_mode, optimizer=self.optimizer)

    def to_dict(self) -> dict:
        return {
            "sampler": self.sampler,
            "trials": self.trials,
            "dims": list(self.dims),
            "q2_mode": self.q2_mode,
            "generator": self.generator,
            "seed": self.seed,
            "family": self.family,
            "ginibre_rank": self.ginibre_rank,
            "channels_per_state": self.channels_per_state,
            "lambdas": list(self.lambdas),
            "tolerances": dict(self.tolerances),
            "optimizer": {
                "starts": self.optimizer.starts,
                "tol": self.optimizer.tol,
                "max_iter": self.optimizer.max_iter,
                "seed": self.optimizer.seed,
                "method": self.optimizer.method,
            },
        }


@dataclass
class ClaimReport:
    claim_id: str
    verdict: str                 # holds-within-tolerance | violated | report-only
    trials: int
    violations: int
    report_only_violations: int
    tolerances: dict
    seed: int
    stats: dict
    worst_case: dict | None

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "verdict": self.verdict,
            "trials": self.trials,
            "violations": self.violations,
            "report_only_violations": self.report_only_violations,
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
            "stats": self.stats,
            "worst_case": self.worst_case,
        }


def _sample_state(cfg: CampaignConfig, trial: int, n_trials: int,
                  pure_only: bool = False) -> DensityMatrix:
    sampler = "haar-pure" if pure_only else cfg.sampler
    seed = Seed(cfg.seed, trial)
    if sampler == "haar-pure":
        return states.haar_pure(cfg.dims, seed)
    if sampler == "ginibre-mixed":
        d = int(np.prod(cfg.dims))
        rank = cfg.ginibre_rank or d
        return states.ginibre_mixed(d, rank, seed).reshaped(cfg.dims)
    if sampler == "named-family":
        if not cfg.family:
            raise ValueError("named-family sampler needs a family name")
        if cfg.family == "werner":
            p = trial / (n_trials - 1) if n_trials > 1 else 1.0
            return families.build(f"werner:{p}")
        return families.build(cfg.family)
    raise ValueError(f"unknown sampler {cfg.sampler!r}")


def _witness(state: DensityMatrix, prof: ResourceProfile | None,
             margin: float, **extra) -> dict:
    out = {"margin": float(margin)}
    out.update(extra)
    out["state"] = serialize.state_to_dict(state)
    if prof is not None:
        out["profile"] = prof.to_dict()
    return out


# ---------------------------------------------------------------------------
# C1: extremal anchors


def _spectators() -> list[tuple[str, DensityMatrix]]:
    return [
        ("pure", states.basis_state(2, 0)),
        ("mixed", DensityMatrix(np.diag([0.75, 0.25]).astype(complex), (2,))),
        ("maximally-mixed", states.maximally_mixed(2)),
    ]


def _extremal_anchors() -> list[tuple[str, DensityMatrix, tuple[float, float, float]]]:
    anchors = []
    for tag, spec in _spectators():
        anchors.append((f"bell-spectator/{tag}", states.bell_spectator(spec), (1.0, 0.0, 0.0)))
    anchors.append(("bell-ac/trivial-B", states.bell_ac(), (0.0, 1.0, 0.0)))
    for tag, spec in _spectators():
        anchors.append((f"bell-ac/{tag}", states.bell_ac(spec), (0.0, 1.0, 0.0)))
    bc_pure = states.compose_product(states.basis_state(2, 0), states.basis_state(2, 0))
    bc_mixed = states.compose_product(
        DensityMatrix(np.diag([0.75, 0.25]).astype(complex), (2,)),
        DensityMatrix(np.diag([0.6, 0.4]).astype(complex), (2,)))
    bc_max = states.maximally_mixed(4, dims=(2, 2))
    for tag, spec in [("pure", bc_pure), ("mixed", bc_mixed), ("maximally-mixed", bc_max)]:
        anchors.append((f"coherent-spectator/{tag}", states.coherent_spectator(spec),
                        (0.0, 0.0, 1.0)))
    return anchors


def check_extremals(cfg: CampaignConfig) -> ClaimReport:
    """The three axis points are reached by the named anchor families."""
    tol = cfg.tolerance("extremal")
    pc = cfg.profile_config()
    anchors = _extremal_anchors()
    rows = []
    violations = 0
    worst = None
    worst_margin = -1.0
    for name, state, target in anchors:
        prof = resources.profile(state, pc)
        dev = max(abs(prof.q1 - target[0]), abs(prof.q2 - target[1]),
                  abs(prof.q3 - target[2]))
        rows.append({"anchor": name, "target": list(target), "q1": prof.q1,
                     "q2": prof.q2, "q3": prof.q3, "norm": prof.norm,
                     "deviation": float(dev)})
        if dev > tol:
            violations += 1
        if dev > worst_margin:
            worst_margin = dev
            worst = _witness(state, prof, dev, anchor=name)
    return ClaimReport(
        claim_id=CLAIM_IDS["C1"],
        verdict="holds-within-tolerance" if violations == 0 else "violated",
        trials=len(anchors), violations=violations, report_only_violations=0,
        tolerances={"extremal": tol}, seed=cfg.seed,
        stats={"anchors": rows, "max_deviation": float(worst_margin)},
        worst_case=worst)


# ---------------------------------------------------------------------------
# T1: ball membership campaign


def check_qirc_ball(cfg: CampaignConfig) -> tuple[ClaimReport, list[dict]]:
    """Sample states and record where their profiles land relative to the
    unit ball. Report-only: excursions past 1 are findings."""
    tol = cfg.tolerance("ball")
    n = cfg.n_trials("T1")
    pc = cfg.profile_config()
    cloud = []
    violations = []
    max_norm = -1.0
    worst = None
    norm_sum = 0.0
    for i in range(n):
        state = _sample_state(cfg, i, n)
        prof = resources.profile(state, pc)
        b = prof.breakdown
        cloud.append({"trial": i, "stream": i, "q1": prof.q1, "q2": prof.q2,
                      "q3": prof.q3, "norm": prof.norm, "q1_raw": b.q1_raw,
                      "q2_raw": b.q2_raw, "f_max": b.f_max, "f_q": b.f_q})
        norm_sum += prof.norm
        if prof.norm > 1.0 + tol:
            violations.append(i)
        if prof.norm > max_norm:
            max_norm = prof.norm
            worst = _witness(state, prof, prof.norm - 1.0, trial=i, stream=i)
    report = ClaimReport(
        claim_id=CLAIM_IDS["T1"], verdict="report-only",
        trials=n, violations=len(violations), report_only_violations=len(violations),
        tolerances={"ball": tol}, seed=cfg.seed,
        stats={"max_norm": float(max_norm), "mean_norm": norm_sum / n,
               "violation_trials": violations},
        worst_case=worst)
    return report, cloud


# ---------------------------------------------------------------------------
# C2: convexity of mixtures


def check_convexity(cfg: CampaignConfig) -> ClaimReport:
    """Mixtures of in-ball endpoints stay in the ball; endpoint grid values
    reproduce the endpoint profiles exactly. The profile map itself is
    nonlinear, so deviation from the straight segment is informational."""
    tol = cfg.tolerance("ball")
    n_pairs = cfg.n_trials("C2")
    pc = cfg.profile_config()
    pairs: list[tuple[str, DensityMatrix, DensityMatrix]] = [
        ("anchor", states.bell_spectator(), states.coherent_spectator())]
    for i in range(n_pairs - 1):
        pairs.append((f"sampled[{i}]",
                      _sample_state(cfg, _STREAM_PAIR + 2 * i, n_pairs),
                      _sample_state(cfg, _STREAM_PAIR + 2 * i + 1, n_pairs)))
    endpoint_mismatches = 0
    ball_violations = 0
    max_mix_norm = -1.0
    max_segment_dev = 0.0
    worst = None
    evaluations = 0
    for name, rho, sig in pairs:
        prof_r = resources.profile(rho, pc)
        prof_s = resources.profile(sig, pc)
        inside = prof_r.norm <= 1.0 + tol and prof_s.norm <= 1.0 + tol
        for lam in cfg.lambdas:
            mix = DensityMatrix(lam * rho.matrix + (1.0 - lam) * sig.matrix, rho.dims)
            prof_m = resources.profile(mix, pc)
            evaluations += 1
            if lam in (0.0, 1.0):
                ref = prof_r if lam == 1.0 else prof_s
                if (prof_m.q1, prof_m.q2, prof_m.q3, prof_m.norm) != \
                        (ref.q1, ref.q2, ref.q3, ref.norm):
                    endpoint_mismatches += 1
                continue
            seg = [lam * a + (1.0 - lam) * b
                   for a, b in zip(prof_r.coords(), prof_s.coords())]
            dev = max(abs(m - s) for m, s in zip(prof_m.coords(), seg))
            max_segment_dev = max(max_segment_dev, dev)
            if prof_m.norm > max_mix_norm:
                max_mix_norm = prof_m.norm
                worst = _witness(mix, prof_m, prof_m.norm - 1.0, pair=name,
                                 mixing=float(lam))
            if inside and prof_m.norm > 1.0 + tol:
                ball_violations += 1
    verdict = "violated" if endpoint_mismatches else "report-only"
    return ClaimReport(
        claim_id=CLAIM_IDS["C2"], verdict=verdict,
        trials=evaluations, violations=ball_violations,
        report_only_violations=ball_violations,
        tolerances={"ball": tol}, seed=cfg.seed,
        stats={"pairs": len(pairs), "lambda_grid": list(cfg.lambdas),
               "endpoint_mismatches": endpoint_mismatches,
               "max_mixture_norm": float(max_mix_norm),
               "max_segment_deviation": float(max_segment_dev)},
        worst_case=worst)


# ---------------------------------------------------------------------------
# C3: monotonicity under channels on A


def _sample_channel(d: int, seed: Seed) -> tuple[KrausChannel, int]:
    """Haar-random channel with Kraus rank drawn uniformly from 1..d^2."""
    rng = seed.rng()
    rank = int(rng.integers(1, d * d + 1))
    u = _haar_unitary_from_rng(d * rank, rng)
    v = u[:, :d]
    kraus = tuple(v[k * d:(k + 1) * d, :] for k in range(rank))
    return KrausChannel(kraus, d_in=d, d_out=d), rank


def check_monotonicity(cfg: CampaignConfig) -> ClaimReport:
    """Coordinates under random channels on A: q3 and q1 increases are hard
    assertions; q2 and norm increases are recorded report-only."""
    tol_q1 = cfg.tolerance("q1_mono")
    tol_q3 = cfg.tolerance("q3_mono")
    tol_rep = cfg.tolerance("mono_report")
    n_states = cfg.n_trials("C3")
    n_ch = int(cfg.channels_per_state)
    pc = cfg.profile_config()
    d_a = cfg.dims[0]
    q1_inc = q3_inc = q2_inc = norm_inc = 0
    max_q1 = max_q3 = max_q2 = max_norm = 0.0
    worst = None
    worst_margin = -np.inf
    for i in range(n_states):
        state = _sample_state(cfg, i, n_states)
        before = resources.profile(state, pc)
        for j in range(n_ch):
            stream = _STREAM_CHANNEL + i * n_ch + j
            ch, rank = _sample_channel(d_a, Seed(cfg.seed, stream))
            after = resources.profile(apply_channel(ch, state, 0), pc)
            d_q1 = after.q1 - before.q1
            d_q3 = after.q3 - before.q3
            d_q2 = after.q2 - before.q2
            d_norm = after.norm - before.norm
            max_q1 = max(max_q1, d_q1)
            max_q3 = max(max_q3, d_q3)
            max_q2 = max(max_q2, d_q2)
            max_norm = max(max_norm, d_norm)
            hard = max(d_q1 - tol_q1, d_q3 - tol_q3)
            if d_q1 > tol_q1:
                q1_inc += 1
            if d_q3 > tol_q3:
                q3_inc += 1
            if d_q2 > tol_rep:
                q2_inc += 1
            if d_norm > tol_rep:
                norm_inc += 1
            margin = max(hard, d_norm - tol_rep)
            if margin > worst_margin:
                worst_margin = margin
                worst = _witness(
                    state, None, margin, trial=i, channel_index=j,
                    state_stream=i, channel_stream=stream, kraus_rank=rank,
                    q1_increase=float(d_q1), q3_increase=float(d_q3),
                    q2_increase=float(d_q2), norm_increase=float(d_norm),
                    profile_before=before.to_dict(), profile_after=after.to_dict())
    violations = q1_inc + q3_inc
    return ClaimReport(
        claim_id=CLAIM_IDS["C3"],
        verdict="holds-within-tolerance" if violations == 0 else "violated",
        trials=n_states * n_ch, violations=violations,
        report_only_violations=norm_inc,
        tolerances={"q1_mono": tol_q1, "q3_mono": tol_q3, "mono_report": tol_rep},
        seed=cfg.seed,
        stats={"states": n_states, "channels_per_state": n_ch,
               "q1_increases": q1_inc, "q3_increases": q3_inc,
               "q2_increases": q2_inc, "norm_increases": norm_inc,
               "max_q1_increase": float(max_q1), "max_q3_increase": float(max_q3),
               "max_q2_increase": float(max_q2), "max_norm_increase": float(max_norm)},
        worst_case=worst)


# ---------------------------------------------------------------------------
# T2: conservation under symmetry-preserving unitaries


def check_conservation(cfg: CampaignConfig) -> ClaimReport:
    """Two families: (a) local products u_A ⊗ u_B ⊗ u_C with u_A commuting
    with the generator (per-coordinate invariance asserted); (b) Haar
    elements of the global commutant of generator ⊗ I (drift reported)."""
    tol = cfg.tolerance("traj")
    n = cfg.n_trials("T2")
    pc = cfg.profile_config()
    g = cfg.coherence_generator()
    dims = cfg.dims
    local_viol = 0
    local_max_coord = 0.0
    local_max_norm = 0.0
    worst = None
    worst_margin = -np.inf

    for i in range(n):
        state = _sample_state(cfg, i, n)
        before = resources.profile(state, pc)
        u_a = dynamics.commuting_local_unitary(g, Seed(cfg.seed, _STREAM_UA + i))
        u_b = states.haar_unitary(dims[1], Seed(cfg.seed, _STREAM_UB + i))
        u_c = states.haar_unitary(dims[2], Seed(cfg.seed, _STREAM_UC + i))
        u = dynamics.local_product_unitary(u_a, u_b, u_c)
        after = resources.profile(dynamics.evolve(state, u), pc)
        drift = max(abs(after.q1 - before.q1), abs(after.q2 - before.q2),
                    abs(after.q3 - before.q3))
        norm_drift = abs(after.norm - before.norm)
        local_max_coord = max(local_max_coord, drift)
        local_max_norm = max(local_max_norm, norm_drift)
        if drift > tol:
            local_viol += 1
        if drift > worst_margin:
            worst_margin = drift
            worst = _witness(state, None, drift, family="local", trial=i,
                             profile_before=before.to_dict(),
                             profile_after=after.to_dict())

    global_exceed = 0
    global_max = 0.0
    drift_sum = 0.0
    global_worst = None
    for i in range(n):
        state = _sample_state(cfg, i, n)
        before = resources.profile(state, pc)
        u = dynamics.sample_commutant_unitary(g, dims, Seed(cfg.seed, _STREAM_UG + i))
        after = resources.profile(dynamics.evolve(state, u), pc)
        d_norm = abs(after.norm - before.norm)
        drift_sum += d_norm
        if d_norm > tol:
            global_exceed += 1
        if d_norm > global_max:
            global_max = d_norm
            global_worst = _witness(state, None, d_norm, family="global", trial=i,
                                    unitary_stream=_STREAM_UG + i,
                                    profile_before=before.to_dict(),
                                    profile_after=after.to_dict())
    if global_max > worst_margin:
        worst = global_worst
    return ClaimReport(
        claim_id=CLAIM_IDS["T2"],
        verdict="holds-within-tolerance" if local_viol == 0 else "violated",
        trials=2 * n, violations=local_viol, report_only_violations=global_exceed,
        tolerances={"traj": tol}, seed=cfg.seed,
        stats={"local_trials": n, "local_max_coord_drift": float(local_max_coord),
               "local_max_norm_drift": float(local_max_norm),
               "global_trials": n, "global_max_drift": float(global_max),
               "global_mean_abs_drift": drift_sum / n,
               "global_exceed_count": global_exceed},
        worst_case=worst)


# ---------------------------------------------------------------------------
# A2: entropic bounds


def check_entropic_bounds(cfg: CampaignConfig) -> ClaimReport:
    """I(A:B) + I(A:C) <= 2 S(A) for pure global states (hard; equality holds
    there) plus two heuristic entropy bounds, recorded report-only:
    q1 + q2 <= 2 S(A)/ln d_A and F_Q <= 4 Var (1 - S(A)/ln d_A)."""
    tol = cfg.tolerance("mi")
    n = cfg.n_trials("A2")
    pc = cfg.profile_config()
    g = cfg.coherence_generator()
    d_a = cfg.dims[0]
    log_d = float(np.log(d_a))

    mi_viol = 0
    h1_viol = 0
    h2_viol = 0
    max_gap = -np.inf
    h1_max = h2_max = -np.inf
    worst = None
    anchor_gap = None

    trial_states: list[tuple[str, DensityMatrix]] = [
        ("anchor", states.compose_product(states.bell_pair(), states.basis_state(2, 0)))]
    trial_states += [(f"{i}", _sample_state(cfg, i, n, pure_only=True))
                     for i in range(n)]
    for name, state in trial_states:
        rho_a = state.marginal([0])
        s_a = resources.von_neumann_entropy(rho_a)
        i_ab = resources.mutual_information(state.marginal([0, 1]))
        i_ac = resources.mutual_information(state.marginal([0, 2]))
        gap = i_ab + i_ac - 2.0 * s_a
        if name == "anchor":
            anchor_gap = abs(gap)
        if gap > tol:
            mi_viol += 1
        if gap > max_gap:
            max_gap = gap
            worst = _witness(state, None, gap, trial=name, s_a=float(s_a),
                             i_ab=float(i_ab), i_ac=float(i_ac))
        prof = resources.profile(state, pc)
        h1_excess = (prof.q1 + prof.q2) - 2.0 * s_a / log_d
        if h1_excess > tol:
            h1_viol += 1
        h1_max = max(h1_max, h1_excess)
        var = resources.variance(rho_a, g)
        h2_excess = prof.breakdown.f_q - 4.0 * var * (1.0 - s_a / log_d)
        if h2_excess > tol:
            h2_viol += 1
        h2_max = max(h2_max, h2_excess)
    return ClaimReport(
        claim_id=CLAIM_IDS["A2"],
        verdict="holds-within-tolerance" if mi_viol == 0 else "violated",
        trials=len(trial_states), violations=mi_viol,
        report_only_violations=h1_viol + h2_viol,
        tolerances={"mi": tol}, seed=cfg.seed,
        stats={"max_mi_gap": float(max_gap),
               "anchor_saturation_gap": float(anchor_gap),
               "q1q2_bound_violations": h1_viol,
               "q1q2_bound_max_excess": float(h1_max),
               "fisher_bound_violations": h2_viol,
               "fisher_bound_max_excess": float(h2_max)},
        worst_case=worst)


# ---------------------------------------------------------------------------
# Dispatch


def normalize_claim_id(claim: str) -> str:
    c = claim.strip()
    if c.upper() in CLAIM_IDS:
        return c.upper()
    for short, full in CLAIM_IDS.items():
        if c == full:
            return short
    raise ValueError(
        f"unknown claim {claim!r}; known: {', '.join(CLAIM_IDS.values())}")


def run_check(claim: str, cfg: CampaignConfig) -> tuple[ClaimReport, list[dict] | None]:
    """Run one check; the T1 campaign also returns its point cloud."""
    short = normalize_claim_id(claim)
    if short == "C1":
        return check_extremals(cfg), None
    if short == "T1":
        report, cloud = check_qirc_ball(cfg)
        return report, cloud
    if short == "C2":
        return check_convexity(cfg), None
    if short == "C3":
        return check_monotonicity(cfg), None
    if short == "T2":
        return check_conservation(cfg), None
    return check_entropic_bounds(cfg), None
