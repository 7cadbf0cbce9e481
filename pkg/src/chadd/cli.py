"""Command-line front end: ``chadd {color,synth,partition,simulate,bench}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ChaddError, InputError
from .graphcore import Coloring, ConnectivityGraph, chromatic_bounds, color_greedy
from .hadamard import ColorRowMap
from .hamsim.dense import residual_scaling
from .hamsim.experiment import fidelity_experiment, records_to_csv, worker_count
from .hamsim.hamiltonian import ErrorHamiltonian, random_hamiltonian
from .hamsim.oracle import first_order_average
from .schur import SchurPartition, partition, verify_partition
from .synth import VARIANTS, PulseSchedule, compute_metrics, synthesize

log = logging.getLogger("chadd")


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _write_outputs(out_dir: Path, files: dict[str, str], force: bool) -> None:
    """Write every file or none: existing targets abort unless ``force``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    clash = [name for name in files if (out_dir / name).exists()]
    if clash and not force:
        raise InputError(f"refusing to overwrite {', '.join(sorted(clash))} in {out_dir}; pass --force")
    for name, text in files.items():
        (out_dir / name).write_text(text)
        log.info("wrote %s", out_dir / name)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _load_graph(path: str) -> ConnectivityGraph:
    return ConnectivityGraph.from_json(_read_text(path))


def _load_coloring(path: str | None, graph: ConnectivityGraph) -> Coloring:
    if path is None:
        return color_greedy(graph)
    try:
        return Coloring.from_dict(json.loads(_read_text(path)))
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed coloring JSON at line {exc.lineno}: {exc.msg}") from exc


def cmd_color(args) -> None:
    graph = _load_graph(args.graph)
    coloring = color_greedy(graph)
    lower, upper = chromatic_bounds(graph)
    report = {"k": coloring.k, "bounds": [lower, upper]}
    _write_outputs(Path(args.out), {"coloring.json": _dump(coloring.to_dict())}, args.force)
    print(json.dumps(report, sort_keys=True))


def _synth_from_args(args, graph: ConnectivityGraph, variant: str) -> PulseSchedule:
    coloring = _load_coloring(args.coloring, graph)
    row_map = None
    if args.row_map:
        row_map = ColorRowMap.from_dict(json.loads(_read_text(args.row_map)))
    schur = None
    if args.partition:
        schur = SchurPartition.from_dict(json.loads(_read_text(args.partition)))
    return synthesize(variant, graph, coloring, row_map=row_map, schur=schur,
                      spectators=args.spectators, tau=args.tau)


def _metrics_csv(schedules: Sequence[PulseSchedule]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["variant", "chi", "depth", "pulses", "prr"], lineterminator="\n")
    w.writeheader()
    for s in schedules:
        w.writerow(compute_metrics(s).csv_row(s.variant, s.metadata.get("chi")))
    return buf.getvalue()


def cmd_synth(args) -> None:
    graph = _load_graph(args.graph)
    schedules = [_synth_from_args(args, graph, v) for v in args.variant]
    files = {f"{s.variant}.json": _dump(s.to_dict()) for s in schedules}
    files["metrics.csv"] = _metrics_csv(schedules)
    _write_outputs(Path(args.out), files, args.force)
    sys.stdout.write(files["metrics.csv"])


def cmd_partition(args) -> None:
    if args.nu < 2:
        raise InputError("nu must be >= 2")
    p = partition(args.nu)
    if not verify_partition(p):
        raise RuntimeError(f"internal error: partition for nu={args.nu} failed verification")
    _write_outputs(Path(args.out), {f"partition_nu{args.nu}.json": _dump(p.to_dict())}, args.force)
    print(json.dumps({"nu": p.nu, "count": len(p)}))


def cmd_simulate(args) -> None:
    schedule = PulseSchedule.from_json(_read_text(args.schedule))
    h = ErrorHamiltonian.from_json(_read_text(args.hamiltonian))
    avg = first_order_average(schedule, h)
    surviving = sorted(
        [{"pauli": s, "term": list(t), "multiplier": int(c)} for (s, t), c in avg.items()],
        key=lambda d: d["pauli"],
    )
    taus = args.tau_list or [schedule.tau * 10 ** (-k / 2) for k in range(4)]
    scan = residual_scaling(schedule, h, taus)
    report = {
        "slots": schedule.slots,
        "surviving_terms": surviving,
        "taus": list(scan.taus),
        "residuals": list(scan.residuals),
        "underflow": list(scan.underflow),
        "slope": scan.slope,
    }
    _write_outputs(Path(args.out), {"simulate.json": _dump(report)}, args.force)
    print(json.dumps({"slope": scan.slope, "surviving": len(surviving)}))


def _bench_schedules(cfg: dict, base: Path, args) -> dict[str, PulseSchedule]:
    graph = _load_graph(base / cfg["graph"]) if "graph" in cfg else None
    coloring_path = cfg.get("coloring")
    out = {}
    for entry in cfg.get("schedules", []):
        name = entry if entry in VARIANTS else Path(entry).stem
        if name in out:
            raise InputError(f"bench config names schedule {name!r} twice")
        if entry in VARIANTS:
            if graph is None:
                raise InputError(f"variant {entry!r} needs a 'graph' entry in the bench config")
            coloring = _load_coloring(None if coloring_path is None else base / coloring_path, graph)
            out[entry] = synthesize(entry, graph, coloring, spectators=cfg.get("spectators", ()), tau=args.tau)
        else:
            sched = PulseSchedule.from_json(_read_text(base / entry))
            out[name] = sched.with_tau(args.tau)
    if not out:
        raise InputError("bench config lists no schedules")
    return out


def bench_grid(schedules: dict[str, PulseSchedule], duration: float, tau: float, points: int) -> dict[str, list[int]]:
    """Repeat counts putting every schedule at the same ``points`` durations up to ``duration``."""
    total = round(duration / tau)
    if total <= 0 or not math.isclose(total * tau, duration, rel_tol=1e-9):
        raise InputError(f"duration {duration} is not a whole number of tau={tau} slots")
    if total % points:
        raise InputError(f"{total} slots cannot be split into {points} equal duration points")
    marks = [total * (i + 1) // points for i in range(points)]
    grid = {}
    for name, s in schedules.items():
        bad = [m for m in marks if m % s.slots]
        if bad:
            raise InputError(
                f"schedule {name!r} has {s.slots}-slot cycles and cannot reach duration {bad[0] * tau:g}; "
                f"choose a duration that is a multiple of {s.slots * points} slots"
            )
        grid[name] = [m // s.slots for m in marks]
    return grid


def cmd_bench(args) -> None:
    cfg, base = {}, Path.cwd()
    if args.config:
        cfg_path = Path(args.config)
        try:
            cfg = json.loads(_read_text(cfg_path))
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed bench config at line {exc.lineno}: {exc.msg}") from exc
        base = cfg_path.parent
    # command-line flags override the config file; paths given on the command line resolve from cwd
    if args.graph:
        cfg["graph"] = str(Path(args.graph).resolve())
    if args.variant:
        cfg["schedules"] = list(args.variant)
    schedules = _bench_schedules(cfg, base, args)
    ham_seed, shot_seed = np.random.SeedSequence(args.seed).spawn(2)
    if "hamiltonian" in cfg:
        h = ErrorHamiltonian.from_json(_read_text(base / cfg["hamiltonian"]))
    else:
        graph = _load_graph(base / cfg["graph"])
        h = random_hamiltonian(graph, np.random.default_rng(ham_seed), single_axes=("z",),
                               pair_axes=[("z", "z")], scale=float(cfg.get("scale", 1.0)))
    grid = bench_grid(schedules, args.duration, args.tau, args.points)
    records = fidelity_experiment(
        schedules, h, grid, shots=args.shots, gray_qubits=cfg.get("gray", ()),
        epsilon=float(cfg.get("epsilon", 0.0)), seed=int(shot_seed.generate_state(1)[0]),
        workers=worker_count(), metric=cfg.get("metric", "marginal"),
    )
    text = records_to_csv(records)
    _write_outputs(Path(args.out), {"results.csv": text}, args.force)
    sys.stdout.write(text)


def _spectators(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _taus(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chadd", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tau=True):
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--force", action="store_true", help="overwrite existing outputs")
        if tau:
            p.add_argument("--tau", type=float, default=1.0, help="free-evolution interval per slot")

    p = sub.add_parser("color", help="color a graph and report chromatic bounds")
    p.add_argument("--graph", required=True)
    common(p, tau=False)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("synth", help="synthesize pulse schedules")
    p.add_argument("--graph", required=True)
    p.add_argument("--variant", action="append", choices=VARIANTS, required=True,
                   help="repeatable; one schedule file per variant")
    p.add_argument("--coloring", help="coloring JSON (default: DSATUR)")
    p.add_argument("--row-map", help="row map JSON for single-axis variants")
    p.add_argument("--partition", help="Schur partition JSON for chadd-multi")
    p.add_argument("--spectators", type=_spectators, default=[], help="comma-separated colors kept on row 0")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("partition", help="maximum Schur partition of W_nu")
    p.add_argument("--nu", type=int, required=True)
    common(p, tau=False)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("simulate", help="first-order oracle and residual scaling for one schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--tau-list", type=_taus, help="comma-separated geometric tau values")
    common(p, tau=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="fidelity comparison at matched durations")
    p.add_argument("--config", help="bench config JSON")
    p.add_argument("--graph", help="graph JSON (overrides the config entry)")
    p.add_argument("--variant", action="append", choices=VARIANTS, help="repeatable; overrides the config schedules")
    p.add_argument("--duration", type=float, required=True, help="longest total evolution time")
    p.add_argument("--points", type=int, default=4, help="number of equally spaced durations")
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except ChaddError as exc:
        print(f"chadd: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
