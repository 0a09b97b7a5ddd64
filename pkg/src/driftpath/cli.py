"""Command line interface.

Every subcommand resolves its settings as built-in defaults, then a flat TOML
config file (``--config``), then a previous run manifest (``--manifest``),
then explicit flags.  The fully resolved settings are written to
``manifest.json`` in the output directory so the run can be repeated.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 computation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path as FsPath

import numpy as np

from . import __version__
from . import io as dio
from .analysis import sensitivity, travel_time_matrix
from .errors import ComputationError, ConfigError, DataError, DriftPathError
from .geo import GeoPoint
from .grid import make_index
from .ingest import load_trajectories
from .oracle import self_check, simulate_chain
from .pathing import DIRECTIONS, OBJECTIVES, PathGraph, expected_travel_time, one_to_all_times
from .transition import DEFAULT_BARRIERS, TransitionMatrix, estimate_matrix, remove_states
from .uncertainty import bootstrap_travel_times, pooled_standard_error, rotation_bootstrap_samples, rotation_ensemble

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("driftpath")

#: default station set, label -> (lon, lat)
DEFAULT_LOCATIONS = {
    "1": (9.0, -25.5),
    "2": (-25.0, -5.0),
    "3": (-45.0, -40.0),
    "4": (-69.0, 39.0),
    "5": (-42.5, 41.5),
    "6": (-42.0, 27.5),
    "7": (-93.2, 24.8),
}


@dataclass
class RunConfig:
    data: str | None = None
    matrix: str | None = None
    grid: str = "hexdggs"
    resolution: float | None = None
    cutoff_days: float = 5.0
    sample_interval: float = 6.0
    min_row_count: int = 0
    barriers: list = field(default_factory=lambda: [[p.lon, p.lat] for p in DEFAULT_BARRIERS])
    locations: dict = field(default_factory=lambda: {k: list(v) for k, v in DEFAULT_LOCATIONS.items()})
    pairs: list | None = None
    objective: str = "most_likely"
    anchor: str | None = None
    direction: str = "from_anchor"
    B: int = 100
    n_rot: int = 100
    seed: int = 0
    jobs: int = 1
    pooled_B: int = 0
    cutoffs: list = field(default_factory=lambda: [float(x) for x in range(1, 11)])
    reference_cutoff: float = 5.0
    out: str = "driftpath-out"
    geojson_cells: bool = True

    def index(self):
        return make_index(self.grid, self.resolution)

    def location_points(self) -> tuple[list[str], list[GeoPoint]]:
        labels = list(self.locations)
        return labels, [GeoPoint(*self.locations[k]) for k in labels]

    def barrier_points(self) -> list[GeoPoint]:
        return [GeoPoint(*b) for b in self.barriers]

    def validate(self) -> None:
        if self.objective not in OBJECTIVES:
            raise ConfigError(f"objective must be one of {', '.join(OBJECTIVES)}")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"direction must be one of {', '.join(DIRECTIONS)}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.cutoff_days <= 0 or self.sample_interval <= 0:
            raise ConfigError("cutoff_days and sample_interval must be positive")
        for k, v in self.locations.items():
            _point(v, f"location {k}")
        for b in self.barriers:
            _point(b, "barrier")
        self.index()


def _point(v, what) -> GeoPoint:
    try:
        lon, lat = (float(x) for x in v)
        return GeoPoint(lon, lat)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: expected (lon, lat), got {v!r}") from exc


def _parse_lonlat(s: str, what: str) -> list[float]:
    try:
        lon, lat = (float(x) for x in s.split(","))
    except ValueError:
        raise ConfigError(f"{what}: expected LON,LAT, got {s!r}") from None
    _point((lon, lat), what)
    return [lon, lat]


def _parse_location(s: str) -> tuple[str, list[float]]:
    if "=" not in s:
        raise ConfigError(f"location: expected LABEL=LON,LAT, got {s!r}")
    label, rest = s.split("=", 1)
    return label.strip(), _parse_lonlat(rest, f"location {label}")


_FIELDS = {f.name for f in fields(RunConfig)}


def _normalise(raw: dict, source: str) -> dict:
    """Coerce config/manifest values into RunConfig field types."""
    out = {}
    for k, v in raw.items():
        key = k.replace("-", "_")
        if key not in _FIELDS:
            raise ConfigError(f"{source}: unknown setting {k!r}")
        if key == "locations":
            if isinstance(v, dict):
                v = {str(a): [float(x) for x in b] for a, b in v.items()}
            else:
                v = dict(_parse_location(x) for x in v)
        elif key == "barriers":
            v = [_parse_lonlat(x, "barrier") if isinstance(x, str) else [float(c) for c in x] for x in v]
        elif key == "cutoffs":
            v = [float(x) for x in v]
        out[key] = v
    return out


def load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path}: {exc}") from exc
    for k, v in raw.items():
        if isinstance(v, dict) and k != "locations":
            raise ConfigError(f"config {path}: nested table {k!r} is not supported")
    return _normalise(raw, str(path))


def load_manifest(path) -> tuple[str, dict]:
    try:
        m = json.loads(FsPath(path).read_text(encoding="utf-8"))
        return m["command"], _normalise(m["config"], str(path))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc


def resolve_config(args: argparse.Namespace) -> RunConfig:
    settings = {}
    if getattr(args, "config", None):
        settings.update(load_config_file(args.config))
    if getattr(args, "manifest", None):
        command, cfg = load_manifest(args.manifest)
        if command != args.command:
            raise ConfigError(f"manifest was written by '{command}', not '{args.command}'")
        settings.update(cfg)
    flags = {k: v for k, v in vars(args).items() if k in _FIELDS and v is not None}
    if getattr(args, "no_barriers", False):
        flags["barriers"] = []
    settings.update(flags)
    cfg = RunConfig(**settings)
    cfg.validate()
    return cfg


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(cfg: RunConfig, command: str, outputs: list[str], extra: dict | None = None) -> FsPath:
    out = FsPath(cfg.out)
    inputs = {}
    for key in ("data",):
        p = getattr(cfg, key)
        if p and FsPath(p).is_file():
            inputs[key] = {"path": p, "sha256": _sha256(p)}
    manifest = {
        "command": command,
        "version": __version__,
        "config": asdict(cfg),
        "inputs": inputs,
        "outputs": sorted(outputs),
    }
    if extra:
        manifest.update(extra)
    dio.write_json(out / "manifest.json", manifest)
    return out / "manifest.json"


# -- pipeline pieces ----------------------------------------------------------


def _load_store(cfg: RunConfig):
    if not cfg.data:
        raise ConfigError("no trajectory data given (--data or 'data' in the config)")
    if not FsPath(cfg.data).is_file():
        raise DataError(f"data file {cfg.data} does not exist")
    s = load_trajectories(cfg.data, sample_interval=cfg.sample_interval)
    r = s.report
    log.info("data: %d rows, %d drifters, %d segments, %d dropped rows", r.rows, r.drifters, r.segments, r.dropped_rows)
    if len(s) == 0:
        raise DataError(f"{cfg.data} holds no trajectories")
    return s


def _matrix(cfg: RunConfig, idx) -> TransitionMatrix:
    """Saved matrix if given (barriers are applied again), otherwise estimated from the data."""
    if cfg.matrix:
        T = dio.load_matrix(cfg.matrix)
        want = idx.describe()
        if T.grid and (T.grid.get("kind"), float(T.grid.get("resolution"))) != (want["kind"], float(want["resolution"])):
            raise ConfigError(f"matrix {cfg.matrix} was built on grid {T.grid}, not {want}")
        if T.lagrangian_cutoff_days != cfg.cutoff_days:
            raise ConfigError(f"matrix {cfg.matrix} uses a cutoff of {T.lagrangian_cutoff_days:g} days, not {cfg.cutoff_days:g}")
    else:
        T = estimate_matrix(_load_store(cfg), idx, cfg.cutoff_days, min_row_count=cfg.min_row_count)
    return remove_states(T, cfg.barrier_points(), idx)


def _pairs(cfg: RunConfig) -> list[tuple[str, str]]:
    labels = list(cfg.locations)
    if not cfg.pairs:
        return [(a, b) for a in labels for b in labels if a != b]
    out = []
    for p in cfg.pairs:
        a, sep, b = str(p).partition(">")
        if not sep or a not in cfg.locations or b not in cfg.locations:
            raise ConfigError(f"pair {p!r}: expected ORIGIN>DESTINATION with known labels")
        out.append((a, b))
    return out


def _days(x: float) -> str:
    return "-" if math.isnan(x) else f"{x:.3f}"


def _years(x: float) -> str:
    return "-" if math.isnan(x) else f"{x / 365.25:.3f}"


def _safe(label: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in label)


# -- subcommands --------------------------------------------------------------


def cmd_estimate(cfg: RunConfig) -> int:
    idx = cfg.index()
    T = _matrix(cfg, idx)
    d = dio.save_matrix(T, FsPath(cfg.out) / "matrix")
    outputs = [f"matrix/{n}" for n in (dio.STATES_FILE, dio.TRANSITIONS_FILE, dio.METADATA_FILE)]
    write_manifest(cfg, "estimate", outputs)
    print(f"{T.n_states} states, {T.probabilities.nnz} entries, gap {T.gap_steps} samples; removed {len(T.removed)} barrier cells")
    print(f"matrix written to {d}")
    return 0


def cmd_pairwise(cfg: RunConfig) -> int:
    idx = cfg.index()
    T = _matrix(cfg, idx)
    labels, pts = cfg.location_points()
    ttm = travel_time_matrix(T, idx, pts, labels, cfg.objective)
    out = FsPath(cfg.out)
    (out / "paths").mkdir(parents=True, exist_ok=True)
    dio.write_travel_times(out / "travel_times.csv", ttm)
    dio.write_day_matrix(out / "travel_time_matrix.csv", ttm)
    outputs = ["travel_times.csv", "travel_time_matrix.csv"]
    for (a, b), path in sorted(ttm.paths.items()):
        if a == b:
            continue
        name = f"paths/path_{_safe(labels[a])}_{_safe(labels[b])}.geojson"
        est = expected_travel_time(T, path)
        fc = dio.path_feature_collection(idx, path, est, cfg.geojson_cells, {"origin_label": labels[a], "destination_label": labels[b]})
        dio.write_json(out / name, fc)
        outputs.append(name)
    write_manifest(cfg, "pairwise", outputs)
    n = len(labels)
    print(f"{ttm.attempted} ordered pairs; {T.n_states} states")
    print(f"{'from':>6} {'to':>6} {'status':>13} {'days':>10} {'years':>8}")
    for a in range(n):
        for b in range(n):
            if a != b:
                d = ttm.days[a, b]
                print(f"{labels[a]:>6} {labels[b]:>6} {ttm.status[a, b]:>13} {_days(d):>10} {_years(d):>8}")
    return 0


def _anchor_point(cfg: RunConfig) -> tuple[str, GeoPoint]:
    if cfg.anchor is None:
        raise ConfigError("map needs an anchor (--anchor LABEL or LON,LAT)")
    if cfg.anchor in cfg.locations:
        return cfg.anchor, GeoPoint(*cfg.locations[cfg.anchor])
    return cfg.anchor, GeoPoint(*_parse_lonlat(cfg.anchor, "anchor"))


def cmd_map(cfg: RunConfig) -> int:
    idx = cfg.index()
    T = _matrix(cfg, idx)
    label, p = _anchor_point(cfg)
    c = idx.cell_of(p)
    if c not in T:
        raise DataError(f"anchor {label} lies in cell {c:015x}, which holds no transitions")
    times = one_to_all_times(PathGraph(T), c, cfg.direction, cfg.objective)
    out = FsPath(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    dio.write_map(out / "map.csv", idx, times)
    props = {k: {"days": v.days, "steps": v.steps} for k, v in times.items()}
    dio.write_json(out / "map.geojson", dio.cells_feature_collection(idx, props))
    write_manifest(cfg, "map", ["map.csv", "map.geojson"], {"anchor_cell": f"{c:015x}"})
    reach = [v.days for k, v in times.items() if k != c]
    print(f"anchor {label} -> cell {c:015x}; {len(times) - 1} of {T.n_states - 1} other states reachable ({cfg.direction}, {cfg.objective})")
    if reach:
        print(f"days: min {min(reach):.3f}, median {float(np.median(reach)):.3f}, max {max(reach):.3f}")
    return 0


def _write_ensembles(cfg: RunConfig, results, pair_labels, kind: str) -> list[str]:
    out = FsPath(cfg.out)
    (out / "ensemble").mkdir(parents=True, exist_ok=True)
    outputs = []
    rows = []
    for (a, b), r in zip(pair_labels, results):
        stem = f"ensemble/{kind}_{_safe(a)}_{_safe(b)}"
        dio.write_ensemble(out / f"{stem}.csv", r)
        dio.write_json(out / f"{stem}.geojson", dio.path_bundle(r.paths))
        outputs += [f"{stem}.csv", f"{stem}.geojson"]
        rows.append((a, b, r.n_members, r.failure_count, r.zero_count, dio._fmt(r.mean), dio._fmt(r.sd)))
    dio.write_csv(out / f"{kind}_summary.csv", ("origin", "destination", "members", "failures", "zeros", "mean_days", "sd_days"), rows)
    outputs.append(f"{kind}_summary.csv")
    print(f"{'from':>6} {'to':>6} {'ok':>5} {'fail':>5} {'zero':>5} {'mean d':>10} {'sd d':>9} {'mean y':>8} {'sd y':>7}")
    for (a, b), r in zip(pair_labels, results):
        ok = r.n_members - r.failure_count
        print(f"{a:>6} {b:>6} {ok:>5} {r.failure_count:>5} {r.zero_count:>5} {_days(r.mean):>10} {_days(r.sd):>9} {_years(r.mean):>8} {_years(r.sd):>7}")
    return outputs


def _ensemble_inputs(cfg: RunConfig):
    idx = cfg.index()
    s = _load_store(cfg)
    pair_labels = _pairs(cfg)
    pts = {k: GeoPoint(*v) for k, v in cfg.locations.items()}
    return idx, s, pair_labels, [(pts[a], pts[b]) for a, b in pair_labels]


def cmd_bootstrap(cfg: RunConfig) -> int:
    idx, s, pair_labels, pairs = _ensemble_inputs(cfg)
    res = bootstrap_travel_times(
        s, idx, pairs, cfg.B, cfg.cutoff_days, cfg.barrier_points(), cfg.seed, cfg.objective, cfg.jobs
    )
    outputs = _write_ensembles(cfg, res, pair_labels, "bootstrap")
    write_manifest(cfg, "bootstrap", outputs)
    return 0


def cmd_rotate(cfg: RunConfig) -> int:
    idx, s, pair_labels, pairs = _ensemble_inputs(cfg)
    res = rotation_ensemble(
        s, idx, pairs, cfg.n_rot, cfg.cutoff_days, cfg.barrier_points(), cfg.seed, cfg.objective, cfg.jobs
    )
    outputs = _write_ensembles(cfg, res, pair_labels, "rotation")
    if cfg.pooled_B >= 2:
        tables = rotation_bootstrap_samples(
            s, idx, pairs, cfg.n_rot, cfg.pooled_B, cfg.cutoff_days, cfg.barrier_points(), cfg.seed, cfg.objective, cfg.jobs
        )
        rows = []
        for (a, b), t in zip(pair_labels, tables):
            vals = []
            for mode in ("pooled", "per_rotation_mean"):
                try:
                    vals.append(dio._fmt(pooled_standard_error(t, mode)))
                except DataError:
                    vals.append("")
            rows.append((a, b, int(np.isfinite(t).sum()), *vals))
        dio.write_csv(FsPath(cfg.out) / "pooled_se.csv", ("origin", "destination", "samples", "pooled_sd_days", "per_rotation_sd_days"), rows)
        outputs.append("pooled_se.csv")
    write_manifest(cfg, "rotate", outputs)
    return 0


def cmd_sensitivity(cfg: RunConfig) -> int:
    idx = cfg.index()
    s = _load_store(cfg)
    labels, pts = cfg.location_points()
    rows, tables = sensitivity(s, idx, pts, cfg.cutoffs, cfg.reference_cutoff, cfg.barrier_points(), cfg.objective, labels)
    out = FsPath(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    dio.write_csv(
        out / "sensitivity.csv",
        ("cutoff_days", "correlation", "pairs_used", "pairs_excluded"),
        ((repr(r.cutoff_days), dio._fmt(r.correlation), r.n_used, r.n_excluded) for r in rows),
    )
    outputs = ["sensitivity.csv"]
    for c, t in tables.items():
        name = f"travel_times_T{c:g}.csv"
        dio.write_travel_times(out / name, t)
        outputs.append(name)
    write_manifest(cfg, "sensitivity", outputs)
    print(f"reference cutoff {cfg.reference_cutoff:g} days")
    print(f"{'T_L':>6} {'spearman':>9} {'used':>5} {'excluded':>8}")
    for r in rows:
        rho = "undef" if math.isnan(r.correlation) else f"{r.correlation:.3f}"
        print(f"{r.cutoff_days:>6g} {rho:>9} {r.n_used:>5} {r.n_excluded:>8}")
    return 0


def cmd_validate(cfg: RunConfig, n_matrices: int = 200) -> int:
    results = self_check(cfg.seed, n_matrices)
    lines = [(r.name, r.passed, r.detail) for r in results]
    if cfg.matrix or cfg.data:
        idx = cfg.index()
        T = dio.load_matrix(cfg.matrix) if cfg.matrix else estimate_matrix(_load_store(cfg), idx, cfg.cutoff_days)
        if T.edited:
            lines.append(("row sums", True, "matrix is edited; stochasticity not checked"))
        else:
            try:
                dev = T.check_stochastic()
                lines.append(("row sums", True, f"max deviation {dev:.2e}"))
            except ComputationError as exc:
                lines.append(("row sums", False, str(exc)))
            lines.append(_chain_check(T, cfg.seed))
    ok = True
    for name, passed, detail in lines:
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return 0 if ok else 3


def _chain_check(T: TransitionMatrix, seed: int, n: int = 20_000):
    """Single-step frequencies of the busiest row against its probabilities."""
    rng = np.random.default_rng(seed)
    r = int(np.argmax(T.row_counts))
    start = int(T.states[r])
    row = T.row(start)
    hits = dict.fromkeys(row, 0)
    for _ in range(n):
        hits[simulate_chain(T, start, 1, rng).states[1]] += 1
    worst = max(abs(hits[c] / n - p) / max(math.sqrt(p * (1 - p) / n), 1e-12) for c, p in row.items())
    return ("chain single steps", worst < 5.0, f"row {start:015x}: worst deviation {worst:.2f} standard errors")


COMMANDS = {
    "estimate": cmd_estimate,
    "pairwise": cmd_pairwise,
    "map": cmd_map,
    "bootstrap": cmd_bootstrap,
    "rotate": cmd_rotate,
    "sensitivity": cmd_sensitivity,
    "validate": cmd_validate,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="driftpath", description="Most likely drift pathways and travel times from trajectory data.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, data=True):
        g = sp.add_argument_group("run settings")
        g.add_argument("--config", help="flat TOML file of settings")
        g.add_argument("--manifest", help="repeat a previous run from its manifest.json")
        g.add_argument("--out", help="output directory")
        if data:
            g.add_argument("--data", help="trajectory CSV (id,time,lon,lat)")
        g.add_argument("--grid", choices=("hexdggs", "lonlat"))
        g.add_argument("--resolution", type=float, help="hexdggs level (default 3) or lon-lat cell size in degrees")
        g.add_argument("--cutoff-days", dest="cutoff_days", type=float, help="Lagrangian cutoff in days (default 5)")
        g.add_argument("--sample-interval", dest="sample_interval", type=float, help="hours between fixes (default 6)")
        g.add_argument("--min-row-count", dest="min_row_count", type=int)
        g.add_argument("--barrier", dest="barriers", action="append", type=lambda s: _parse_lonlat(s, "barrier"), metavar="LON,LAT", help="replace the default barrier points (repeatable)")
        g.add_argument("--no-barriers", action="store_true", help="keep all cells")
        g.add_argument("--location", dest="locations", action="append", type=_parse_location, metavar="LABEL=LON,LAT", help="replace the default stations (repeatable)")
        g.add_argument("--objective", choices=OBJECTIVES)
        g.add_argument("--seed", type=int)
        g.add_argument("--jobs", type=int, help="worker processes for ensembles")
        return g

    def with_matrix(g):
        g.add_argument("--matrix", help="directory written by 'estimate' (instead of --data)")

    with_matrix(common(sub.add_parser("estimate", help="estimate and save the transition matrix")))
    with_matrix(common(sub.add_parser("pairwise", help="travel times between every pair of stations")))
    g = common(sub.add_parser("map", help="travel times between one anchor and every cell"))
    with_matrix(g)
    g.add_argument("--anchor", help="station label or LON,LAT")
    g.add_argument("--direction", choices=DIRECTIONS)
    g.add_argument("--no-cells", dest="geojson_cells", action="store_false", default=None)
    for name, what in (("bootstrap", "bootstrap ensemble over trajectory resamples"), ("rotate", "ensemble over random rotations of the sphere")):
        g = common(sub.add_parser(name, help=what))
        g.add_argument("--pair", dest="pairs", action="append", metavar="A>B", help="restrict to these station pairs")
        if name == "bootstrap":
            g.add_argument("-B", "--samples", dest="B", type=int, help="resamples (default 100)")
        else:
            g.add_argument("--n-rot", dest="n_rot", type=int, help="rotations (default 100)")
            g.add_argument("--pooled-B", dest="pooled_B", type=int, help="also run this many resamples per rotation and report pooled spreads")
    g = common(sub.add_parser("sensitivity", help="rank correlation of travel times across cutoffs"))
    g.add_argument("--cutoffs", type=lambda s: [float(x) for x in s.split(",")], help="comma-separated cutoffs in days (default 1..10)")
    g.add_argument("--reference", dest="reference_cutoff", type=float)
    g = common(sub.add_parser("validate", help="check the searches against brute-force oracles"))
    with_matrix(g)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except DriftPathError as exc:
        print(f"driftpath: error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    if args.locations is not None:
        args.locations = dict(args.locations)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except DriftPathError as exc:
        print(f"driftpath: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"driftpath: error: {exc}", file=sys.stderr)
        return DataError.exit_code


if __name__ == "__main__":
    sys.exit(main())
