"""Command-line front end.

Subcommands: ``pareto`` samples the energy-entanglement tradeoff of a spin
chain and emits the point cloud, Pareto front and temperature curve;
``toy`` sweeps the rank-constrained minimum of the paired toy chain;
``check`` runs named reference-value suites; ``scaling`` emits the
field-theory scaling curves.  All outputs are deterministic functions of the
configuration and seed.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import checks, closedform, models, oneshot, report, tradeoff
from .errors import ConvergenceError, InvalidInputError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3

SAMPLER_DEFAULTS = {
    "samples": 400,
    "rounds": 20,
    "chi_max": 24,
    "tau_min": 1e-3,
    "tau_max": 1.0,
    "epsilon_max": 0.5,
}


@dataclass
class RunConfig:
    """Merged file + flag configuration for a deterministic run."""

    model: str
    seed: int
    out: Path
    formats: tuple[str, ...]
    samples: int = SAMPLER_DEFAULTS["samples"]
    rounds: int = SAMPLER_DEFAULTS["rounds"]
    chi_max: int = SAMPLER_DEFAULTS["chi_max"]
    tau_min: float = SAMPLER_DEFAULTS["tau_min"]
    tau_max: float = SAMPLER_DEFAULTS["tau_max"]
    epsilon_max: float = SAMPLER_DEFAULTS["epsilon_max"]

    def __post_init__(self):
        if self.seed is None:
            raise InvalidInputError("a seed is required; there is no wall-clock default")
        bad = set(self.formats) - {"csv", "json", "svg"}
        if bad:
            raise InvalidInputError(f"unknown output formats: {sorted(bad)}")

    def sampler_config(self) -> tradeoff.SamplerConfig:
        return tradeoff.SamplerConfig(
            n_samples=self.samples,
            rounds_per_sample=self.rounds,
            chi_max=self.chi_max,
            seed=self.seed,
            tau_range=(self.tau_min, self.tau_max),
            epsilon_range=(0.0, self.epsilon_max),
        )


def _read_config_file(path: str | None) -> dict:
    """Flat key = value file with [run] and [sampler] sections."""
    values: dict = {}
    if path is None:
        return values
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise InvalidInputError(f"cannot read config file {path!r}")
    if parser.has_section("run"):
        run = parser["run"]
        values.update({k: run.get(k) for k in ("model", "out", "formats") if k in run})
        if "seed" in run:
            values["seed"] = run.getint("seed")
    if parser.has_section("sampler"):
        samp = parser["sampler"]
        for key in ("samples", "rounds", "chi_max"):
            if key in samp:
                values[key] = samp.getint(key)
        for key in ("tau_min", "tau_max", "epsilon_max"):
            if key in samp:
                values[key] = samp.getfloat(key)
    return values


def _build_config(args) -> RunConfig:
    file_values = _read_config_file(getattr(args, "config", None))

    def pick(name, default=None):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        return file_values.get(name, default)

    formats = pick("format", "csv,svg")
    return RunConfig(
        model=pick("model", ""),
        seed=pick("seed"),
        out=Path(pick("out", ".")),
        formats=tuple(f.strip() for f in str(formats).split(",") if f.strip()),
        samples=int(pick("samples", SAMPLER_DEFAULTS["samples"])),
        rounds=int(pick("rounds", SAMPLER_DEFAULTS["rounds"])),
        chi_max=int(pick("chi_max", SAMPLER_DEFAULTS["chi_max"])),
        tau_min=float(pick("tau_min", SAMPLER_DEFAULTS["tau_min"])),
        tau_max=float(pick("tau_max", SAMPLER_DEFAULTS["tau_max"])),
        epsilon_max=float(pick("epsilon_max", SAMPLER_DEFAULTS["epsilon_max"])),
    )


def _emit(cfg: RunConfig, stem: str, header: list[str], rows: list[tuple]) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    if "csv" in cfg.formats:
        report.write_csv(cfg.out / f"{stem}.csv", header, rows)
    if "json" in cfg.formats:
        report.write_json(cfg.out / f"{stem}.json", header, rows)


POINT_HEADER = ["sample", "move_seq_digest", "delta_s_bits", "delta_e", "t_ent"]


def _point_rows(points) -> list[tuple]:
    return [
        (p.sample, p.moves_digest, p.delta_s, p.delta_e, p.delta_e / p.delta_s)
        for p in points
    ]


def cmd_pareto(args) -> int:
    cfg = _build_config(args)
    h = models.parse_model(cfg.model)
    tradeoff.bond_hamiltonians(h)  # rejects models the gate sweeps cannot evolve
    try:
        ground, e0 = tradeoff.find_ground(
            h, cfg.chi_max, schedule=tradeoff.SAMPLING_GROUND_SCHEDULE, tol=1e-12, seed=cfg.seed)
    except ConvergenceError as exc:
        print(f"convergence failure during ground-state search: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    points = tradeoff.sample_tradeoff(h, ground, e0, cfg.sampler_config())
    front = tradeoff.pareto_front(points)
    temps = tradeoff.ent_temperature(front)
    _emit(cfg, "points", POINT_HEADER, _point_rows(points))
    _emit(cfg, "front", POINT_HEADER, _point_rows(front))
    _emit(cfg, "temperature", ["delta_s_bits", "t_ent"], [(s, t) for s, t in temps])
    if "svg" in cfg.formats:
        cfg.out.mkdir(parents=True, exist_ok=True)
        report.save_temperature_plot(cfg.out / "temperature.svg", points, temps,
                                     f"{cfg.model}  (ground energy {e0:.6f})")
    print(f"{cfg.model}: {len(points)} points, front of {len(front)}, e0 = {report.fmt(e0)}")
    return EXIT_OK


def cmd_toy(args) -> int:
    cfg = _build_config(args)
    model = cfg.model or f"toy:{args.n}"
    if not model.startswith("toy:"):
        raise InvalidInputError("the toy sweep only applies to toy:<n> models")
    h = models.parse_model(model)
    n = len(h.pair_layout)
    rows = []
    for chi in range(1, 2**n + 1):
        res = oneshot.min_energy_at_rank(h, chi, restarts=20, seed=cfg.seed)
        rows.append((chi, res.delta_s0_bits, res.delta_e))
    _emit(cfg, "toy", ["chi", "delta_s0_bits", "delta_e"], rows)
    if "svg" in cfg.formats:
        cfg.out.mkdir(parents=True, exist_ok=True)
        report.save_curve_plot(cfg.out / "toy.svg", [r[1] for r in rows], [r[2] for r in rows],
                               r"$\Delta S_0$ [bits]", r"$\Delta E$",
                               f"minimum extraction cost, {model}")
    print(f"{model}: swept chi = 1..{2**n}")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        result = checks.run_suite(args.suite)
    except KeyError:
        print(f"unknown check suite {args.suite!r}; known: "
              f"{', '.join(sorted(checks.SUITES))}, all", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(result, indent=2, default=report.fmt)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"check_{args.suite}.json").write_text(text + "\n", encoding="utf-8")
    return EXIT_OK if result["pass"] else 1


def cmd_scaling(args) -> int:
    params = closedform.QftScalingParams(
        dimension=args.dimension,
        central_charge=args.central_charge,
        prefactor=args.prefactor,
    )
    grid = np.linspace(args.smin, args.smax, args.points)
    de, t = closedform.qft_scaling_curve(params, grid)
    out = Path(args.out) if args.out else Path(".")
    formats = tuple(f.strip() for f in (args.format or "csv,svg").split(",") if f.strip())
    out.mkdir(parents=True, exist_ok=True)
    rows = [(float(s), float(e), float(ti)) for s, e, ti in zip(grid, de, t)]
    header = ["delta_s_bits", "delta_e", "t_ent"]
    if "csv" in formats:
        report.write_csv(out / "scaling.csv", header, rows)
    if "json" in formats:
        report.write_json(out / "scaling.json", header, rows)
    if "svg" in formats:
        report.save_curve_plot(out / "scaling.svg", grid, de, r"$\Delta S$ [bits]",
                               r"$\Delta E$", f"extraction cost scaling, d = {args.dimension}",
                               logy=args.dimension == 1)
    print(f"scaling curve d={args.dimension}: {len(rows)} rows")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enttemp",
        description="Energy cost of entanglement extraction: tradeoff sampling, "
                    "Pareto fronts and entanglement temperatures for 1D lattice models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_sampler=False):
        p.add_argument("--model", help="model name: toy:<n>, haf:<N>, tfi:<N>, fermion:<N>:<a>")
        p.add_argument("--seed", type=int, help="RNG seed (required; no wall-clock default)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", help="comma-separated outputs: csv,json,svg (default csv,svg)")
        p.add_argument("--config", help="key = value config file with [run]/[sampler] sections")
        if with_sampler:
            p.add_argument("--samples", type=int, help="number of random move sequences")
            p.add_argument("--rounds", type=int, help="moves per sequence")
            p.add_argument("--chi-max", dest="chi_max", type=int, help="bond dimension cap")

    p_pareto = sub.add_parser("pareto", help="sample the tradeoff and emit points/front/temperature")
    add_common(p_pareto, with_sampler=True)
    p_pareto.set_defaults(func=cmd_pareto)

    p_toy = sub.add_parser("toy", help="rank-constrained extraction-cost sweep of the toy chain")
    add_common(p_toy)
    p_toy.add_argument("--n", type=int, default=4, help="number of pairs when --model is omitted")
    p_toy.set_defaults(func=cmd_toy)

    p_check = sub.add_parser("check", help="run a named reference-value suite")
    p_check.add_argument("suite", help=f"one of: {', '.join(sorted(checks.SUITES))}, all")
    p_check.add_argument("--out", help="directory for the JSON report")
    p_check.set_defaults(func=cmd_check)

    p_scaling = sub.add_parser("scaling", help="field-theory scaling curves")
    p_scaling.add_argument("--dimension", "-d", type=int, required=True)
    p_scaling.add_argument("--central-charge", type=float, default=1.0)
    p_scaling.add_argument("--prefactor", type=float, default=1.0)
    p_scaling.add_argument("--smin", type=float, default=0.0)
    p_scaling.add_argument("--smax", type=float, default=4.0)
    p_scaling.add_argument("--points", type=int, default=81)
    p_scaling.add_argument("--out", help="output directory")
    p_scaling.add_argument("--format", help="comma-separated outputs")
    p_scaling.add_argument("--config", help="config file")
    p_scaling.set_defaults(func=cmd_scaling)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
