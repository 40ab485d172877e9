"""Command-line surface.

Subcommands: profile (one state -> JSON), sweep (family grid -> CSV),
check (claim campaigns -> JSON reports plus CSV point clouds), evolve
(state + schedule -> trajectory CSV).

Exit codes: 0 success, 1 hard-assertion or strict-mode violation,
2 input or usage error. Every artifact embeds the full run configuration
and reproduces byte for byte when rerun with the same configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, claims, dynamics, families, resources, serialize, states
from .channels import amplitude_damping, dephasing, depolarizing, random_channel
from .claims import CampaignConfig, resolve_generator
from .resources import OptimizerSettings, ProfileConfig

DEFAULT_SEED_ENV = "QIRC_SEED"


def _default_seed() -> int:
    raw = os.environ.get(DEFAULT_SEED_ENV, "7")
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"bad {DEFAULT_SEED_ENV} value {raw!r}") from exc


def _parse_tolerances(entries) -> dict:
    out = {}
    for entry in entries or []:
        name, _, value = entry.partition("=")
        if not value:
            raise ValueError(f"--tol expects NAME=VALUE, got {entry!r}")
        if name not in claims.DEFAULT_TOLERANCES:
            known = ", ".join(sorted(claims.DEFAULT_TOLERANCES))
            raise ValueError(f"unknown tolerance {name!r}; known: {known}")
        out[name] = float(value)
    return out


def _load_input_state(args) -> states.DensityMatrix:
    if getattr(args, "state", None):
        return serialize.load_state(args.state)
    if getattr(args, "family", None):
        return families.build(args.family)
    raise ValueError("provide --state FILE or --family NAME")


def _config_echo(args, subcommand: str, keys) -> dict:
    echo = {"tool": "qirc", "version": __version__, "subcommand": subcommand}
    for key in keys:
        echo[key] = getattr(args, key.replace("-", "_"))
    return echo


def _write_text(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _profile_config(args, d_a: int) -> ProfileConfig:
    gen = resolve_generator(args.generator, d_a)
    opt = OptimizerSettings(starts=args.starts)
    return ProfileConfig(generator=gen, q2_mode=args.q2_mode, optimizer=opt)


# ---------------------------------------------------------------------------
# profile


def cmd_profile(args) -> int:
    state = _load_input_state(args)
    prof = resources.profile(state, _profile_config(args, state.dims[0]))
    echo = _config_echo(args, "profile",
                        ["family", "state", "q2_mode", "generator", "starts", "seed"])
    doc = prof.to_dict()
    doc["generator"] = args.generator
    doc["config"] = echo
    _write_text(args.out, serialize.dumps(doc))
    return 0


# ---------------------------------------------------------------------------
# sweep

SWEEP_FAMILIES = ("werner", "depolarize-bell", "gibbs-beta")
SWEEP_HEADER = ("param", "q1", "q2", "q3", "norm", "q1_raw", "q2_raw",
                "f_max", "f_tele", "f_trans", "f_q", "f_q_max")


def _parse_grid(spec: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        grid = np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise ValueError(f"--grid expects START:STOP:COUNT, got {spec!r}") from exc
    if len(grid) < 2:
        raise ValueError("grid needs at least 2 points")
    return grid


def _sweep_state(family: str, value: float, coupling: float) -> states.DensityMatrix:
    if family == "werner":
        return families.build(f"werner:{value}")
    if family == "depolarize-bell":
        from .channels import apply as apply_channel
        return apply_channel(depolarizing(2, float(value)), states.bell_spectator(), 0)
    if family == "gibbs-beta":
        return families.build(f"gibbs:{value}:{coupling}")
    raise ValueError(f"unknown sweep family {family!r}; known: {', '.join(SWEEP_FAMILIES)}")


def cmd_sweep(args) -> int:
    grid = _parse_grid(args.grid)
    echo = _config_echo(args, "sweep",
                        ["family", "grid", "coupling", "q2_mode", "generator",
                         "starts", "seed"])
    rows = []
    for value in grid:
        state = _sweep_state(args.family, float(value), args.coupling)
        prof = resources.profile(state, _profile_config(args, state.dims[0]))
        b = prof.breakdown
        rows.append((float(value), prof.q1, prof.q2, prof.q3, prof.norm,
                     b.q1_raw, b.q2_raw, b.f_max, b.f_tele, b.f_trans,
                     b.f_q, b.f_q_max))
    lines = serialize.csv_lines(SWEEP_HEADER, rows,
                                comments=[f"config: {serialize.dumps_compact(echo)}"])
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# check

CLOUD_HEADER = ("trial", "stream", "q1", "q2", "q3", "norm", "q1_raw",
                "q2_raw", "f_max", "f_q")


def _campaign_config(args) -> CampaignConfig:
    dims = tuple(int(d) for d in args.dims.split(","))
    return CampaignConfig(
        sampler=args.sampler, trials=args.trials, dims=dims,
        q2_mode=args.q2_mode, generator=args.generator, seed=args.seed,
        family=args.family, ginibre_rank=args.rank,
        channels_per_state=args.channels,
        tolerances=_parse_tolerances(args.tol),
        optimizer=OptimizerSettings(starts=args.starts))


def cmd_check(args) -> int:
    requested = list(args.claims) or ["all"]
    if any(c.lower() == "all" for c in requested):
        shorts = list(claims.CHECK_ORDER)
    else:
        shorts = [claims.normalize_claim_id(c) for c in requested]
    cfg = _campaign_config(args)
    echo = _config_echo(args, "check",
                        ["claims", "sampler", "trials", "dims", "q2_mode",
                         "generator", "seed", "family", "rank", "channels",
                         "starts", "strict", "tol"])
    echo["campaign"] = cfg.to_dict()
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    docs = []
    exit_code = 0
    for short in shorts:
        report, cloud = claims.run_check(short, cfg)
        doc = report.to_dict()
        doc["config"] = echo
        docs.append(doc)
        summary = (f"{report.claim_id}: {report.verdict} "
                   f"(violations {report.violations}/{report.trials}, "
                   f"report-only {report.report_only_violations})")
        print(summary, file=sys.stderr)
        if out_dir:
            (out_dir / f"{report.claim_id}.json").write_text(
                serialize.dumps(doc), encoding="utf-8")
            if cloud is not None:
                rows = [tuple(r[k] for k in CLOUD_HEADER) for r in cloud]
                lines = serialize.csv_lines(
                    CLOUD_HEADER, rows,
                    comments=[f"config: {serialize.dumps_compact(echo)}"])
                (out_dir / f"{report.claim_id}.cloud.csv").write_text(
                    "\n".join(lines) + "\n", encoding="utf-8")
        if report.verdict == "violated":
            exit_code = 1
        if args.strict and (report.violations > 0 or report.report_only_violations > 0):
            exit_code = 1
    sys.stdout.write(serialize.dumps(docs))
    return exit_code


# ---------------------------------------------------------------------------
# evolve


def _schedule_step(entry: dict, index: int, rho_dims, generator, master: int):
    if not isinstance(entry, dict) or "type" not in entry:
        raise ValueError(f"schedule step {index} must be an object with a 'type'")
    kind = entry["type"]
    stream = int(entry.get("seed", 9_000_000 + index))
    seed = states.Seed(master, stream)
    if kind == "channel":
        name = entry.get("name")
        target = int(entry.get("target", 0))
        if name == "depolarizing":
            ch = depolarizing(int(rho_dims[target]), float(entry["p"]))
            label = f"depolarizing(p={entry['p']})@{target}"
        elif name == "dephasing":
            ch = dephasing(float(entry["lambda"]), generator)
            label = f"dephasing(lambda={entry['lambda']})@{target}"
        elif name == "amplitude-damping":
            ch = amplitude_damping(float(entry["gamma"]))
            label = f"amplitude-damping(gamma={entry['gamma']})@{target}"
        elif name == "random":
            rank = int(entry.get("kraus_rank", 2))
            d = int(rho_dims[target])
            ch = random_channel(d, d, rank, seed)
            label = f"random(rank={rank},seed={stream})@{target}"
        else:
            raise ValueError(f"schedule step {index}: unknown channel {name!r}")
        return label, (ch, target)
    if kind == "unitary":
        spec = entry.get("spec")
        dims = tuple(int(d) for d in rho_dims)
        if spec == "identity":
            u = dynamics.global_unitary(np.eye(int(np.prod(dims)), dtype=complex), dims)
            return "identity", u
        if spec == "commutant-random":
            u = dynamics.sample_commutant_unitary(generator, dims, seed)
            return f"commutant-random(seed={stream})", u
        if spec == "local-commutant-random":
            rng_seed = seed
            u_a = dynamics.commuting_local_unitary(generator, rng_seed)
            u_b = states.haar_unitary(dims[1], states.Seed(master, stream + 1))
            u_c = states.haar_unitary(dims[2], states.Seed(master, stream + 2))
            u = dynamics.local_product_unitary(u_a, u_b, u_c)
            return f"local-commutant-random(seed={stream})", u
        if spec == "local-random":
            u_a = states.haar_unitary(dims[0], seed)
            u_b = states.haar_unitary(dims[1], states.Seed(master, stream + 1))
            u_c = states.haar_unitary(dims[2], states.Seed(master, stream + 2))
            u = dynamics.local_product_unitary(u_a, u_b, u_c)
            return f"local-random(seed={stream})", u
        if spec == "haar-global":
            u = dynamics.global_unitary(
                states.haar_unitary(int(np.prod(dims)), seed), dims)
            return f"haar-global(seed={stream})", u
        raise ValueError(f"schedule step {index}: unknown unitary spec {spec!r}")
    raise ValueError(f"schedule step {index}: unknown type {kind!r}")


def cmd_evolve(args) -> int:
    state = _load_input_state(args)
    try:
        with open(args.schedule, "r", encoding="utf-8") as fp:
            entries = json.load(fp)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{args.schedule}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise ValueError(f"{args.schedule}: {exc}") from exc
    if not isinstance(entries, list):
        raise ValueError("schedule must be a JSON list of steps")
    cfg = _profile_config(args, state.dims[0])
    schedule = [_schedule_step(e, i, state.dims, cfg.generator, args.seed)
                for i, e in enumerate(entries)]
    traj = dynamics.trajectory(state, schedule, cfg)
    echo = _config_echo(args, "evolve",
                        ["family", "state", "schedule", "q2_mode", "generator",
                         "starts", "seed"])
    rows = [(k, label, p.q1, p.q2, p.q3, p.norm)
            for k, (label, p) in enumerate(traj.steps)]
    lines = serialize.csv_lines(
        ("step", "label", "q1", "q2", "q3", "norm"), rows,
        comments=[f"config: {serialize.dumps_compact(echo)}",
                  f"monotone: {serialize.dumps_compact(traj.monotone)}"])
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, seed: int) -> None:
    p.add_argument("--q2-mode", choices=["transfer", "uhlmann-marginal"],
                   default="transfer")
    p.add_argument("--generator", default="default",
                   help="default | sigma-z | diag:v1,v2,...")
    p.add_argument("--starts", type=int, default=OptimizerSettings.starts,
                   help="random restarts for the singlet-fraction search")
    p.add_argument("--seed", type=int, default=seed, help="master seed")
    p.add_argument("--out", default=None)


def build_parser(seed: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qirc",
        description="Resource coordinates (q1, q2, q3) for tripartite quantum "
                    "states, and claim falsification campaigns.")
    parser.add_argument("--version", action="version", version=f"qirc {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("profile", help="profile one state")
    p.add_argument("--family", default=None,
                   help=f"one of: {', '.join(families.FAMILY_NAMES)}")
    p.add_argument("--state", default=None, help="state JSON file")
    _add_common(p, seed)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("sweep", help="profile a one-parameter family over a grid")
    p.add_argument("family", choices=list(SWEEP_FAMILIES))
    p.add_argument("--grid", default="0:1:21", help="START:STOP:COUNT")
    p.add_argument("--coupling", type=float, default=1.0,
                   help="pair coupling for gibbs-beta")
    _add_common(p, seed)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="run claim checks")
    p.add_argument("claims", nargs="*", default=["all"],
                   help="claim ids (T1 C1 C2 C3 T2 A2 or full names) or 'all'")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--sampler", choices=["haar-pure", "ginibre-mixed", "named-family"],
                   default="haar-pure")
    p.add_argument("--family", default=None, help="family for the named-family sampler")
    p.add_argument("--dims", default="2,2,2")
    p.add_argument("--rank", type=int, default=None, help="ginibre sampler rank")
    p.add_argument("--channels", type=int, default=20,
                   help="channels per state in the monotonicity campaign")
    p.add_argument("--strict", action="store_true",
                   help="report-only findings also set exit code 1")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    _add_common(p, seed)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("evolve", help="run a schedule and emit the trajectory")
    p.add_argument("--family", default=None)
    p.add_argument("--state", default=None)
    p.add_argument("--schedule", required=True, help="schedule JSON file")
    _add_common(p, seed)
    p.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_seed())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
