"""File formats: count histograms, dataset descriptors, certificates.

Histogram files are plain text. Comment lines start with ``#``; those of
the form ``# a.<key> = <value>`` or ``# b.<key> = <value>`` declare the
axis of party A (rows) and party B (columns). Recognised keys are
``label``, ``units``, ``bin_width``, ``offset`` (centre of bin 0),
``count`` and ``periodic``. Every other line is one row of comma-separated
non-negative integer counts::

    # eprcert-histogram 1
    # a.label = x_A
    # a.units = mm
    # a.bin_width = 0.25
    # a.offset = -0.125
    # a.count = 2
    # b.label = x_B
    # ...
    12,0
    3,9

Floats are written with ``repr`` so files round-trip bit-exactly.
"""
from dataclasses import dataclass, field
from datetime import datetime, timezone
import hashlib
import json
import math
import os
from pathlib import Path

import numpy as np

from . import __version__
from .entropy import AxisSpec, Direction, Estimator, from_histogram
from .errors import DomainError, ParseError, ShapeError
from .witness import ObservablePairSpec

HISTOGRAM_MAGIC = "eprcert-histogram 1"
DATASET_SCHEMA = "eprcert-dataset/1"
CERTIFICATE_SCHEMA = "eprcert-certificate/1"

_AXIS_KEYS = ("label", "units", "bin_width", "offset", "count", "periodic")


def _format_bool(v):
    return "true" if v else "false"


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def axis_to_dict(axis):
    return {"label": axis.label, "units": axis.units, "bin_width": axis.bin_width,
            "offset": axis.offset, "count": axis.count, "periodic": axis.periodic}


def axis_from_dict(d):
    return AxisSpec(str(d["label"]), float(d["bin_width"]), float(d.get("offset", 0.0)),
                    int(d["count"]), str(d.get("units", "")), bool(d.get("periodic", False)))


def write_histogram(path, counts, axis_a, axis_b, comments=()):
    counts = np.asarray(counts)
    if counts.shape != (axis_a.count, axis_b.count):
        raise ShapeError(f"counts shape {counts.shape} does not match axes")
    lines = [f"# {HISTOGRAM_MAGIC}"]
    lines += [f"# {c}" for c in comments]
    for side, axis in (("a", axis_a), ("b", axis_b)):
        d = axis_to_dict(axis)
        for key in _AXIS_KEYS:
            v = d[key]
            if isinstance(v, bool):
                v = _format_bool(v)
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"# {side}.{key} = {v}")
    for row in counts.astype(np.int64):
        lines.append(",".join(str(int(c)) for c in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _header_axis(meta, side, path):
    if not meta:
        return None
    missing = [k for k in ("label", "bin_width", "count") if k not in meta]
    if missing:
        raise ParseError(f"axis {side} header lacks {', '.join(missing)}", path)
    try:
        return AxisSpec(meta["label"], float(meta["bin_width"]), float(meta.get("offset", "0")),
                        int(meta["count"]), meta.get("units", ""),
                        _parse_bool(meta.get("periodic", "false")))
    except ValueError as exc:
        raise ParseError(f"bad axis {side} metadata: {exc}", path) from exc


def read_histogram(path, axis_a=None, axis_b=None):
    """Parse a histogram file into ``(counts, axis_a, axis_b)``.

    Explicit axes override the header; when both are present they must
    agree in bin count.
    """
    path = Path(path)
    meta = {"a": {}, "b": {}}
    rows = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body and body[:2] in ("a.", "b."):
                key, _, value = body.partition("=")
                side, _, name = key.strip().partition(".")
                if name not in _AXIS_KEYS:
                    raise ParseError(f"unknown axis key {name!r}", path, lineno)
                meta[side][name] = value.strip()
            continue
        row = []
        for col, cell in enumerate(line.split(","), start=1):
            cell = cell.strip()
            if not cell.isdigit():
                raise ParseError(f"cell {cell!r} is not a non-negative integer count",
                                 path, lineno, col)
            row.append(int(cell))
        if rows and len(row) != len(rows[0]):
            raise ShapeError(f"{path}: line {lineno} has {len(row)} cells, expected {len(rows[0])}")
        rows.append(row)
    head_a, head_b = _header_axis(meta["a"], "a", path), _header_axis(meta["b"], "b", path)
    axis_a = axis_a or head_a
    axis_b = axis_b or head_b
    if axis_a is None or axis_b is None:
        raise ParseError("axis metadata missing (no header and none supplied)", path)
    for given, head in ((axis_a, head_a), (axis_b, head_b)):
        if head is not None and given.count != head.count:
            raise ShapeError(f"{path}: axis {given.label!r} has {given.count} bins but the header says {head.count}")
    counts = np.array(rows, dtype=np.int64) if rows else np.zeros((0, 0), dtype=np.int64)
    if counts.shape != (axis_a.count, axis_b.count):
        raise ShapeError(
            f"{path}: table is {counts.shape[0]}x{counts.shape[1] if counts.ndim == 2 else 0}, "
            f"axes declare {axis_a.count}x{axis_b.count}")
    return counts, axis_a, axis_b


def ingest_histogram(path, axis_a=None, axis_b=None):
    """Read a histogram file and normalize it into a JointDistribution."""
    counts, axis_a, axis_b = read_histogram(path, axis_a, axis_b)
    for axis in (axis_a, axis_b):
        if axis.periodic and axis.units == "rad" and abs(axis.span - 2 * math.pi) > 1e-9:
            raise DomainError(f"{path}: periodic axis {axis.label!r} spans {axis.span}, not 2 pi")
    return from_histogram(counts, axis_a, axis_b)


def bin_samples(a, b, axis_a, axis_b):
    """Histogram paired samples onto two axes; periodic axes wrap around.

    Returns ``(counts, dropped)``.
    """
    from .kernels import bin_counts_2d
    return bin_counts_2d(a, b, axis_a.left_edge, axis_a.bin_width, axis_a.count,
                         axis_b.left_edge, axis_b.bin_width, axis_b.count,
                         axis_a.periodic, axis_b.periodic)


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class DofEntry:
    label: str
    pair: ObservablePairSpec
    first: Path
    second: Path
    directions: tuple = (Direction.A_GIVEN_B, Direction.B_GIVEN_A)
    axes: dict = field(default_factory=dict)


@dataclass
class DatasetDescriptor:
    dofs: list
    estimator: Estimator = Estimator.PLUGIN
    source: Path | None = None

    def input_paths(self):
        return [p for d in self.dofs for p in (d.first, d.second)]


def pair_to_dict(spec):
    return {"kind": spec.kind.value, "commutator_convention": spec.commutator_convention.value,
            "omega": spec.omega, "continuous_sides": list(spec.continuous_sides)}


def pair_from_dict(d):
    sides = d.get("continuous_sides")
    return ObservablePairSpec(d["kind"], d.get("commutator_convention", "unit"), d.get("omega"),
                              None if sides is None else tuple(sides))


def load_descriptor(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno, exc.colno) from exc
    if doc.get("schema") != DATASET_SCHEMA:
        raise ParseError(f"expected schema {DATASET_SCHEMA!r}, got {doc.get('schema')!r}", path)
    base = path.parent
    dofs = []
    for i, d in enumerate(doc.get("dofs", [])):
        try:
            dirs = tuple(Direction(x) for x in d.get("directions", ["A_given_B", "B_given_A"]))
            axes = {}
            for which, sides in d.get("axes", {}).items():
                axes[which] = {s: axis_from_dict(v) for s, v in sides.items()}
            dofs.append(DofEntry(d.get("label", f"dof{i}"), pair_from_dict(d["pair"]),
                                 base / d["first"], base / d["second"], dirs, axes))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"dof {i}: {exc}", path) from exc
    if not dofs:
        raise ParseError("descriptor lists no degrees of freedom", path)
    return DatasetDescriptor(dofs, Estimator(doc.get("estimator", "plugin")), path)


def save_descriptor(path, descriptor):
    path = Path(path)
    base = path.parent
    doc = {"schema": DATASET_SCHEMA, "estimator": descriptor.estimator.value, "dofs": []}
    for d in descriptor.dofs:
        entry = {"label": d.label, "pair": pair_to_dict(d.pair),
                 "first": os.path.relpath(d.first, base), "second": os.path.relpath(d.second, base),
                 "directions": [x.value for x in d.directions]}
        if d.axes:
            entry["axes"] = {w: {s: axis_to_dict(a) for s, a in sides.items()}
                             for w, sides in d.axes.items()}
        doc["dofs"].append(entry)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return now.isoformat(timespec="seconds")


@dataclass
class CertificateDocument:
    certificate: object
    dofs: list
    inputs: list = field(default_factory=list)
    estimator: str = "plugin"
    tool_version: str = __version__
    timestamp: str = field(default_factory=_timestamp)

    @property
    def inputs_digest(self):
        h = hashlib.sha256()
        for item in sorted(self.inputs, key=lambda x: x["sha256"]):
            h.update(item["sha256"].encode())
        return "sha256:" + h.hexdigest()

    def to_dict(self):
        return {
            "schema": CERTIFICATE_SCHEMA,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "inputs_digest": self.inputs_digest,
            "inputs": self.inputs,
            "estimator": self.estimator,
            "certificate": self.certificate.to_dict(),
            "dofs": self.dofs,
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def write(self, path):
        Path(path).write_text(self.dumps())


def load_certificate(path):
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != CERTIFICATE_SCHEMA:
        raise ParseError(f"expected schema {CERTIFICATE_SCHEMA!r}", path)
    return doc
