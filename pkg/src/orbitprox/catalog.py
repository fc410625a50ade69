"""Asteroid catalog ingestion and the (q, omega) distribution analysis.

The input is a plain CSV with header::

    designation,q_au,e,i_deg,node_deg,argperi_deg,H

Numbers use a dot decimal separator and are parsed with ``float`` (never
locale-aware).  Rows that fail validation are reported, not fatal.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

from .bounds import beta_curve_q
from .elements import HALF_PI, PI, CometaryElements, fold_angle, to_mutual
from .errors import MalformedHeader
from .regions import RegionLabel, classify_plane_point

HEADER = ("designation", "q_au", "e", "i_deg", "node_deg", "argperi_deg", "H")
DEFAULT_H_THRESHOLD = 22.0
DEFAULT_BAND = 0.05


@dataclass(frozen=True)
class CatalogEntry:
    designation: str
    q: float
    e: float
    i: float
    node: float
    argperi: float
    h_mag: float

    def cometary(self) -> CometaryElements:
        return CometaryElements(self.q, self.e, math.radians(self.i),
                                math.radians(self.node), math.radians(self.argperi))


@dataclass(frozen=True)
class Reject:
    line: int
    reason: str
    text: str


def _parse_row(row: list[str]) -> CatalogEntry:
    if len(row) != len(HEADER):
        raise ValueError(f"expected {len(HEADER)} fields, got {len(row)}")
    name = row[0].strip()
    if not name:
        raise ValueError("empty designation")
    vals = []
    for label, text in zip(HEADER[1:], row[1:]):
        try:
            v = float(text.strip())
        except ValueError:
            raise ValueError(f"{label} is not a number: {text.strip()!r}") from None
        if not math.isfinite(v):
            raise ValueError(f"{label} is not finite")
        vals.append(v)
    q, e = vals[0], vals[1]
    if not q > 0.0:
        raise ValueError("q ≤ 0")
    if e < 0.0:
        raise ValueError("e < 0")
    return CatalogEntry(name, *vals)


def parse_catalog(stream: TextIO | Iterable[str]) -> tuple[list[CatalogEntry], list[Reject]]:
    """Entries and rejects (1-based line numbers) from a catalog stream."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedHeader("empty input: missing header") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise MalformedHeader(f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}")
    entries: list[CatalogEntry] = []
    rejects: list[Reject] = []
    for row in reader:
        line = reader.line_num
        if not row or all(not f.strip() for f in row):
            continue
        try:
            entries.append(_parse_row(row))
        except ValueError as exc:
            rejects.append(Reject(line, str(exc), ",".join(row)))
    return entries, rejects


def serialize_catalog(entries: Iterable[CatalogEntry]) -> str:
    """CSV text that :func:`parse_catalog` reads back to equal entries."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for en in entries:
        w.writerow([en.designation] + [repr(float(v)) for v in (en.q, en.e, en.i, en.node, en.argperi, en.h_mag)])
    return buf.getvalue()


def fold_omega(omega: float) -> float:
    """Representative of omega in [0, pi/2] under omega -> -omega and
    omega -> pi - omega."""
    a = fold_angle(omega)
    return PI - a if a > HALF_PI else a


@dataclass(frozen=True)
class EntryDiagnostics:
    omega_folded: float
    region: RegionLabel
    beta_offset: float
    faint: bool


def entry_omega(entry: CatalogEntry, reference: CometaryElements | None = None) -> float:
    """Unfolded omega of an entry (radians): the argument of perihelion, or
    the mutual argument of perihelion when a reference orbit is given."""
    if reference is None:
        return math.radians(entry.argperi)
    return to_mutual(entry.cometary(), reference).omega


def analyze_entry(entry: CatalogEntry, q_prime: float = 1.0, e_prime: float = 0.0,
                  h_threshold: float = DEFAULT_H_THRESHOLD,
                  reference: CometaryElements | None = None) -> EntryDiagnostics:
    w = fold_omega(entry_omega(entry, reference))
    return EntryDiagnostics(
        omega_folded=w,
        region=classify_plane_point("q-omega", (entry.q, w), q_prime, e_prime),
        beta_offset=entry.q - beta_curve_q(w, q_prime),
        faint=entry.h_mag > h_threshold,
    )


@dataclass(frozen=True)
class CatalogSummary:
    faint_total: int
    in_only_internal: int
    within_band_of_beta: int


def catalog_summary(entries: Iterable[CatalogEntry], q_prime: float = 1.0, e_prime: float = 0.0,
                    h_threshold: float = DEFAULT_H_THRESHOLD, band_width: float = DEFAULT_BAND,
                    reference: CometaryElements | None = None) -> CatalogSummary:
    """Counts over the faint entries: total, inside the only-internal region,
    and within ``band_width`` (in q) of the beta curve."""
    if not band_width > 0.0:
        raise ValueError("band_width must be positive")
    faint = internal = band = 0
    for en in entries:
        d = analyze_entry(en, q_prime, e_prime, h_threshold, reference)
        if not d.faint:
            continue
        faint += 1
        internal += d.region.only_internal
        band += abs(d.beta_offset) <= band_width
    return CatalogSummary(faint, internal, band)
