"""Loading, rotating and resampling regularly sampled drifter trajectories."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DataError
from .geo import GeoPoint, Rotation, normalize_lon

log = logging.getLogger(__name__)

DEFAULT_SAMPLE_INTERVAL_HOURS = 6.0
REQUIRED_COLUMNS = ("id", "time", "lon", "lat")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One gap-free, regularly sampled drifter track.

    ``lon`` and ``lat`` are float arrays of equal length ``n >= 1``;
    ``segment`` numbers the pieces a drifter was split into at time gaps.
    """

    id: str
    start_time: datetime
    lon: np.ndarray
    lat: np.ndarray
    sample_interval: float = DEFAULT_SAMPLE_INTERVAL_HOURS
    segment: int = 0

    def __post_init__(self):
        lon = np.asarray(self.lon, dtype=float)
        lat = np.asarray(self.lat, dtype=float)
        if lon.ndim != 1 or lon.shape != lat.shape or lon.size == 0:
            raise ValueError("a trajectory needs matching, non-empty lon/lat arrays")
        lon.setflags(write=False)
        lat.setflags(write=False)
        object.__setattr__(self, "lon", lon)
        object.__setattr__(self, "lat", lat)

    def __len__(self) -> int:
        return self.lon.size

    @property
    def positions(self) -> list[GeoPoint]:
        return [GeoPoint(a, b) for a, b in zip(self.lon.tolist(), self.lat.tolist())]

    def equals(self, other: "Trajectory", atol: float = 0.0) -> bool:
        return (
            self.id == other.id
            and self.segment == other.segment
            and self.start_time == other.start_time
            and self.sample_interval == other.sample_interval
            and len(self) == len(other)
            and np.allclose(self.lat, other.lat, rtol=0, atol=atol)
            and np.allclose(_lon_diff(self.lon, other.lon), 0.0, rtol=0, atol=atol)
        )


def _lon_diff(a, b):
    d = np.mod(np.asarray(a) - np.asarray(b) + 180.0, 360.0) - 180.0
    return d


@dataclass(frozen=True)
class LoadReport:
    rows: int = 0
    drifters: int = 0
    segments: int = 0
    dropped_rows: int = 0


@dataclass(frozen=True, eq=False)
class TrajectoryStore:
    trajectories: tuple[Trajectory, ...]
    sample_interval: float = DEFAULT_SAMPLE_INTERVAL_HOURS
    report: LoadReport = field(default_factory=LoadReport)

    def __post_init__(self):
        object.__setattr__(self, "trajectories", tuple(self.trajectories))
        for t in self.trajectories:
            if t.sample_interval != self.sample_interval:
                raise ValueError("all trajectories in a store must share the sample interval")

    def __len__(self) -> int:
        return len(self.trajectories)

    def __iter__(self):
        return iter(self.trajectories)

    def __getitem__(self, i) -> Trajectory:
        return self.trajectories[i]

    @property
    def n_positions(self) -> int:
        return sum(len(t) for t in self.trajectories)

    @classmethod
    def from_arrays(cls, tracks, sample_interval=DEFAULT_SAMPLE_INTERVAL_HOURS, start=None):
        """Build a store from ``[(lon_array, lat_array), ...]``; handy for synthetic data."""
        start = start or datetime(2000, 1, 1, tzinfo=timezone.utc)
        trajs = [
            Trajectory(str(i), start, np.asarray(lo), np.asarray(la), sample_interval)
            for i, (lo, la) in enumerate(tracks)
        ]
        return cls(tuple(trajs), sample_interval)


def _parse_times(raw: pd.Series) -> np.ndarray:
    """Epoch seconds (int64) from integer seconds or ISO-8601 strings; NaN-safe."""
    numeric = pd.to_numeric(raw, errors="coerce")
    if numeric.notna().all():
        if not np.all(np.equal(np.mod(numeric.to_numpy(dtype=float), 1), 0)):
            bad = int(np.flatnonzero(np.mod(numeric.to_numpy(dtype=float), 1) != 0)[0])
            raise DataError(f"line {raw.index[bad] + 2}: epoch seconds must be integers")
        return numeric.to_numpy(dtype=np.int64)
    parsed = pd.to_datetime(raw, utc=True, errors="coerce", format="ISO8601")
    mixed = parsed.isna() & numeric.notna()
    if mixed.any():
        from_epoch = pd.to_datetime(numeric[mixed], unit="s", utc=True)
        parsed = parsed.where(~mixed, from_epoch)
    if parsed.isna().any():
        bad = int(np.flatnonzero(parsed.isna().to_numpy())[0])
        raise DataError(f"line {raw.index[bad] + 2}: cannot parse time {raw.iloc[bad]!r}")
    ns = parsed.to_numpy(dtype="datetime64[ns]").astype(np.int64)
    if np.any(ns % 1_000_000_000):
        bad = int(np.flatnonzero(ns % 1_000_000_000)[0])
        raise DataError(f"line {raw.index[bad] + 2}: sub-second timestamps are not supported")
    return ns // 1_000_000_000


def _check_field_counts(path: Path, rows, n_fields: int) -> None:
    # the C parser pads short rows with empty strings; tell them apart from genuinely empty cells
    wanted = set(int(r) + 1 for r in rows)
    last = max(wanted)
    with path.open(newline="", encoding="utf-8") as fh:
        for i, fields in enumerate(csv.reader(fh)):
            if i in wanted and len(fields) != n_fields:
                raise DataError(f"line {i + 1}: expected {n_fields} fields, found {len(fields)}")
            if i >= last:
                break


def load_trajectories(path, format: str = "csv", sample_interval: float = DEFAULT_SAMPLE_INTERVAL_HOURS) -> TrajectoryStore:
    """Read a trajectory CSV with header ``id,time,lon,lat``.

    Rows are grouped by ``id`` and sorted by time.  Consecutive fixes must be
    an integer multiple of ``sample_interval`` hours apart; any larger gap
    starts a new segment.  Rows with an empty longitude or latitude are
    dropped (and counted), which in turn splits the track at that point.

    Raises
    ------
    DataError
        On unparsable rows (with their line number), duplicate ``(id, time)``
        pairs, out-of-range coordinates, or spacings that are not multiples of
        the sample interval.
    """
    if format != "csv":
        raise DataError(f"unsupported trajectory format {format!r}")
    path = Path(path)
    if not path.exists():
        raise DataError(f"trajectory file {path} does not exist")
    if sample_interval <= 0:
        raise DataError("sample interval must be positive")
    step = round(sample_interval * 3600)
    if abs(step - sample_interval * 3600) > 1e-6:
        raise DataError("sample interval must be a whole number of seconds")

    with path.open(encoding="utf-8", errors="replace") as fh:
        if not fh.read(4096).strip():
            return TrajectoryStore((), sample_interval)
    try:
        df = pd.read_csv(
            path, dtype=str, keep_default_na=False, encoding="utf-8", skipinitialspace=True, skip_blank_lines=False
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from exc
    df.columns = [c.strip().lower() for c in df.columns]
    df = df[(df != "").any(axis=1)]
    missing = [c for c in REQUIRED_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"{path}: header must contain {','.join(REQUIRED_COLUMNS)}; missing {missing}")
    n_rows = len(df)
    if n_rows == 0:
        return TrajectoryStore((), sample_interval)

    ids = df["id"].str.strip()
    if (ids == "").any():
        bad = int(np.flatnonzero((ids == "").to_numpy())[0])
        raise DataError(f"line {df.index[bad] + 2}: empty id")
    times = _parse_times(df["time"].str.strip())

    coords = {}
    blank = np.zeros(n_rows, dtype=bool)
    for col in ("lon", "lat"):
        raw = df[col].str.strip()
        empty = raw.isin(["", "nan", "NaN", "NA"]).to_numpy()
        vals = pd.to_numeric(raw.where(~empty, "nan"), errors="coerce").to_numpy(dtype=float)
        malformed = np.isnan(vals) & ~empty
        if malformed.any():
            bad = int(np.flatnonzero(malformed)[0])
            raise DataError(f"line {df.index[bad] + 2}: cannot parse {col} {df[col].iloc[bad]!r}")
        blank |= empty
        coords[col] = vals
    if blank.any():
        _check_field_counts(path, df.index[blank], len(df.columns))
    lon, lat = coords["lon"], coords["lat"]
    out_of_range = ~blank & ((np.abs(lat) > 90) | (lon < -180) | (lon > 180) | ~np.isfinite(lon))
    if out_of_range.any():
        bad = int(np.flatnonzero(out_of_range)[0])
        raise DataError(f"line {df.index[bad] + 2}: position ({lon[bad]}, {lat[bad]}) out of range")

    frame = pd.DataFrame({"id": ids.to_numpy(), "t": times, "lon": lon, "lat": lat, "blank": blank}, index=df.index)
    frame = frame.sort_values(["id", "t"], kind="mergesort")
    dup = frame.duplicated(["id", "t"], keep=False).to_numpy()
    if dup.any():
        first = frame.index[np.flatnonzero(dup)[0]]
        raise DataError(f"line {first + 2}: duplicate time for id {frame.loc[first, 'id']!r}")

    trajectories = []
    n_drifters = 0
    for drifter, grp in frame.groupby("id", sort=True):
        n_drifters += 1
        t = grp["t"].to_numpy()
        dt = np.diff(t)
        off = np.flatnonzero(dt % step != 0)
        if off.size:
            line = grp.index[off[0] + 1] + 2
            raise DataError(
                f"line {line}: spacing of {dt[off[0]]} s for id {drifter!r} is not a multiple of "
                f"the {sample_interval:g} h sample interval"
            )
        keep = ~grp["blank"].to_numpy()
        t, glon, glat = t[keep], grp["lon"].to_numpy()[keep], grp["lat"].to_numpy()[keep]
        if t.size == 0:
            continue
        breaks = np.flatnonzero(np.diff(t) != step) + 1
        for seg, (a, b) in enumerate(zip(np.r_[0, breaks], np.r_[breaks, t.size])):
            trajectories.append(
                Trajectory(
                    id=str(drifter),
                    start_time=datetime.fromtimestamp(int(t[a]), tz=timezone.utc),
                    lon=normalize_lon(glon[a:b]),
                    lat=glat[a:b],
                    sample_interval=sample_interval,
                    segment=seg,
                )
            )
    report = LoadReport(n_rows, n_drifters, len(trajectories), int(blank.sum()))
    log.info("loaded %d rows: %d drifters, %d segments, %d rows dropped", *vars(report).values())
    return TrajectoryStore(tuple(trajectories), sample_interval, report)


def rotate_store(s: TrajectoryStore, r: Rotation) -> TrajectoryStore:
    """Apply ``r`` to every position; all other fields are kept."""
    if r.is_identity:
        return s
    out = []
    for t in s.trajectories:
        lon, lat = r.apply_lonlat(t.lon, t.lat)
        out.append(replace(t, lon=lon, lat=lat))
    return TrajectoryStore(tuple(out), s.sample_interval, s.report)


def resample_with_replacement(s: TrajectoryStore, rng: np.random.Generator) -> TrajectoryStore:
    """Bootstrap sample of whole trajectories, same size as ``s``."""
    n = len(s)
    if n == 0:
        raise DataError("cannot resample an empty trajectory store")
    picks = rng.integers(0, n, size=n)
    return TrajectoryStore(tuple(s.trajectories[i] for i in picks), s.sample_interval, s.report)


def write_trajectories(s: TrajectoryStore, path) -> None:
    """Write a store back to the canonical CSV layout (epoch-second times)."""
    step = round(s.sample_interval * 3600)
    rows = []
    for t in s.trajectories:
        t0 = int(t.start_time.timestamp())
        for i, (a, b) in enumerate(zip(t.lon.tolist(), t.lat.tolist())):
            rows.append((t.id, t0 + i * step, a, b))
    pd.DataFrame(rows, columns=list(REQUIRED_COLUMNS)).to_csv(path, index=False)
