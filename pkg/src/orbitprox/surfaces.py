"""Grid surfaces and sampled curves, with their CSV/JSON serialisation.

Numbers are written in shortest round-trip form (``repr``), infinities as
``inf`` / ``-inf``, so every file re-parses to identical floats.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import Plane

AXIS_NAMES = {
    Plane.Q_OMEGA: ("q", "omega"),
    Plane.Q_E: ("q", "e"),
    Plane.Q_OMEGA_PRIME: ("q", "omega_prime"),
}


def fmt(v: float) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    return repr(v)


@dataclass
class Surface:
    plane: Plane
    axis1: np.ndarray
    axis2: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.plane = Plane(self.plane)
        self.axis1 = np.asarray(self.axis1, dtype=float)
        self.axis2 = np.asarray(self.axis2, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.axis1.size, self.axis2.size):
            raise ValueError(f"values shape {self.values.shape} does not match axes "
                             f"({self.axis1.size}, {self.axis2.size})")

    def to_csv(self, value_format=fmt) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        a1, a2 = AXIS_NAMES[self.plane]
        w.writerow([f"{a1}\\{a2}"] + [fmt(v) for v in self.axis2])
        for x, row in zip(self.axis1, self.values):
            w.writerow([fmt(x)] + [value_format(v) for v in row])
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {"plane": self.plane.value, "shape": list(self.values.shape),
                "version": __version__, **self.metadata}

    def write(self, path: str | Path, value_format=fmt) -> None:
        path = Path(path)
        path.write_text(self.to_csv(value_format))
        path.with_suffix(".json").write_text(json.dumps(self.sidecar(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def from_csv(cls, text: str, plane: Plane | str, metadata: dict | None = None) -> "Surface":
        rows = list(csv.reader(io.StringIO(text)))
        axis2 = [float(v) for v in rows[0][1:]]
        axis1 = [float(r[0]) for r in rows[1:]]
        values = [[float(v) for v in r[1:]] for r in rows[1:]]
        return cls(Plane(plane), np.array(axis1), np.array(axis2), np.array(values).reshape(len(axis1), len(axis2)),
                   dict(metadata or {}))

    @classmethod
    def read(cls, path: str | Path) -> "Surface":
        path = Path(path)
        meta = json.loads(path.with_suffix(".json").read_text())
        plane = meta.pop("plane")
        meta.pop("shape", None)
        meta.pop("version", None)
        return cls.from_csv(path.read_text(), plane, meta)


def curve_to_csv(points, names=("q", "omega")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(names))
    for x, y in points:
        w.writerow([fmt(x), fmt(y)])
    return buf.getvalue()


def curve_from_csv(text: str) -> list[tuple[float, float]]:
    rows = list(csv.reader(io.StringIO(text)))
    return [(float(a), float(b)) for a, b in rows[1:]]
