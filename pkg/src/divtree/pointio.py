"""Point-file and record I/O.

Point files: one point per line, comma- or whitespace-separated decimal
coordinates; lines starting with '#' are headers/comments; ids are
assigned by data-line order. Floats are written with repr so a
write/read round trip reproduces the exact values.

Records: one experiment record per line as self-describing key=value
pairs (absent fields are skipped), plus CSV summaries. Byte-identical
for identical inputs; wall times are only ever serialized by the timing
runner.
"""

from __future__ import annotations

import ast
import csv
import json
import math
import statistics
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import FormatError
from .generators import GeneratedInstance
from .metric import MetricKind, MetricSpace, Point, PointSet


def ingest_points(path: str | Path, kind: MetricKind | str = MetricKind.EUCLIDEAN) -> PointSet:
    """Parse a point file into a PointSet of the given metric kind."""
    if isinstance(kind, str):
        kind = MetricKind(kind)
    rows: list[tuple[float, ...]] = []
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.replace(",", " ").split()
            try:
                values = tuple(float(t) for t in tokens)
            except ValueError:
                raise FormatError(f"unparseable coordinate in {tokens}", lineno) from None
            if any(not math.isfinite(v) for v in values):
                raise ValueError(f"line {lineno}: non-finite coordinate in {values}")
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise FormatError(
                    f"expected {dim} coordinates, found {len(values)}", lineno
                )
            rows.append(values)
    if dim is None:
        raise FormatError("no data lines in file", 1)
    pts = [Point(i, row) for i, row in enumerate(rows)]
    return PointSet(MetricSpace(kind, dim), pts)


def write_points(path: str | Path, ps: PointSet, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for p in ps:
            fh.write(" ".join(repr(c) for c in p.coords) + "\n")


def sidecar_path(points_path: str | Path) -> Path:
    p = Path(points_path)
    return p.with_suffix(p.suffix + ".meta.json")


def write_instance(path: str | Path, inst: GeneratedInstance) -> Path:
    """Write a generated instance: point file plus a JSON sidecar holding
    the known optimum and the prescribed insertion order."""
    write_points(path, inst.pool, header=inst.info.get("generator", "points"))
    meta = {
        "known_d_star": inst.known_d_star,
        "optimal_k": inst.optimal_k,
        "insertion_order": list(inst.insertion_order),
        "info": inst.info,
    }
    side = sidecar_path(path)
    with open(side, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return side


def read_instance(path: str | Path, kind: MetricKind | str = MetricKind.EUCLIDEAN) -> GeneratedInstance:
    """Re-ingest a point file; uses the sidecar when present, else natural order."""
    pool = ingest_points(path, kind)
    side = sidecar_path(path)
    if side.exists():
        with open(side, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        return GeneratedInstance(
            pool,
            tuple(meta["insertion_order"]),
            meta.get("known_d_star"),
            meta.get("optimal_k"),
            meta.get("info", {}),
        )
    return GeneratedInstance(pool, tuple(p.id for p in pool), None, None, {})


# ----------------------------------------------------------------------
# experiment records

@dataclass(frozen=True)
class ExperimentRecord:
    trial: int
    method: str
    k: int
    b: float
    n: int
    diversity: float
    seed: int | None = None
    d_star: float | None = None
    ratio: float | None = None
    ratio_vs_gmm: float | None = None
    bound_on_true_ratio: float | None = None
    termination_level: int | None = None
    time_ms: float | None = None


def record_to_line(rec: ExperimentRecord) -> str:
    parts = []
    for f in fields(ExperimentRecord):
        value = getattr(rec, f.name)
        if value is None:
            continue
        parts.append(f"{f.name}={value!r}")
    return " ".join(parts)


def record_from_line(line: str) -> ExperimentRecord:
    kwargs = {}
    for token in line.split():
        key, _, raw = token.partition("=")
        kwargs[key] = ast.literal_eval(raw)
    return ExperimentRecord(**kwargs)


def write_records(path: str | Path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(record_to_line(rec) + "\n")


def _aggregate(values):
    return {
        "count": len(values),
        "min": min(values),
        "median": statistics.median(values),
        "max": max(values),
    }


def write_summary_csv(path: str | Path, records) -> None:
    """Per (method, k) aggregates of the ratio (when known), the achieved
    diversity, and wall time (when measured)."""
    groups: dict[tuple[str, int], list[ExperimentRecord]] = {}
    for rec in records:
        groups.setdefault((rec.method, rec.k), []).append(rec)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "method", "k", "trials",
                "diversity_min", "diversity_median", "diversity_max",
                "ratio_min", "ratio_median", "ratio_max",
                "ratio_vs_gmm_median", "time_ms_median",
            ]
        )
        for (method, k) in sorted(groups):
            recs = groups[(method, k)]
            div = _aggregate([r.diversity for r in recs])
            ratios = [r.ratio for r in recs if r.ratio is not None]
            vs = [r.ratio_vs_gmm for r in recs if r.ratio_vs_gmm is not None]
            times = [r.time_ms for r in recs if r.time_ms is not None]
            writer.writerow(
                [
                    method, k, div["count"],
                    repr(div["min"]), repr(div["median"]), repr(div["max"]),
                    repr(min(ratios)) if ratios else "",
                    repr(statistics.median(ratios)) if ratios else "",
                    repr(max(ratios)) if ratios else "",
                    repr(statistics.median(vs)) if vs else "",
                    repr(statistics.median(times)) if times else "",
                ]
            )
