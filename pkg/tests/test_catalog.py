import io
import math

import pytest

from orbitprox.bounds import beta_curve_q, bounds_circular_q_omega
from orbitprox.catalog import (
    CatalogEntry,
    analyze_entry,
    catalog_summary,
    fold_omega,
    parse_catalog,
    serialize_catalog,
)
from orbitprox.elements import CometaryElements
from orbitprox.errors import MalformedHeader

HEADER = "designation,q_au,e,i_deg,node_deg,argperi_deg,H\n"


def test_parse_row():
    entries, rejects = parse_catalog(io.StringIO(HEADER + "2019AB,0.9,0.3,12.5,100.0,250.0,23.1\n"))
    assert not rejects
    (en,) = entries
    assert en.designation == "2019AB" and en.q == 0.9 and en.h_mag == 23.1 and en.argperi == 250.0


def test_rejects_with_line_numbers():
    text = HEADER + "A,0.9,0.3,1,2,3,20\nB,-1,0.3,1,2,3,20\nC,0.5,x,1,2,3,20\nD,0.5,0.1\n"
    entries, rejects = parse_catalog(io.StringIO(text))
    assert [e.designation for e in entries] == ["A"]
    assert [(r.line, r.reason) for r in rejects][0] == (3, "q ≤ 0")
    assert [r.line for r in rejects] == [3, 4, 5]


def test_empty_and_bad_header():
    assert parse_catalog(io.StringIO(HEADER)) == ([], [])
    with pytest.raises(MalformedHeader):
        parse_catalog(io.StringIO("a,b,c\n"))
    with pytest.raises(MalformedHeader):
        parse_catalog(io.StringIO(""))


def test_round_trip():
    entries = [CatalogEntry("X1", 0.1 + 0.2, 0.123456789, 12.5, 100.0, 250.0, 23.1),
               CatalogEntry("Y 2", 1.7, 0.0, 0.0, 359.999, 1e-7, 17.0)]
    back, rejects = parse_catalog(io.StringIO(serialize_catalog(entries)))
    assert back == entries and not rejects


def test_fold():
    assert fold_omega(math.radians(250.0)) == pytest.approx(math.radians(70.0), abs=1e-12)
    for w in (0.0, 0.3, 1.2, math.pi / 2):
        assert fold_omega(fold_omega(w)) == fold_omega(w)


def test_analyze_entry():
    en = CatalogEntry("A", 0.9, 0.3, 12.5, 100.0, 250.0, 23.1)
    d = analyze_entry(en)
    assert d.omega_folded == pytest.approx(1.2217304763960306, abs=1e-12)
    assert d.faint
    low = analyze_entry(CatalogEntry("B", 0.1, 0.5, 1.0, 0.0, 90.0, 20.0))
    assert low.region.only_internal and not low.faint
    w = 0.7
    on_beta = CatalogEntry("C", beta_curve_q(w, 1.0), 0.5, 1.0, 0.0, math.degrees(w), 25.0)
    assert analyze_entry(on_beta).beta_offset == pytest.approx(0.0, abs=1e-12)


def test_uses_circular_pieces():
    en = CatalogEntry("A", 0.45, 0.3, 12.5, 100.0, 40.0, 23.1)
    d = analyze_entry(en)
    ref = bounds_circular_q_omega(0.45, d.omega_folded, 1.0)
    assert d.region.only_internal == (ref.pieces.l_int > 0)
    assert d.region.crossing_possible == (ref.lower == 0.0)


def test_summary_counts():
    on_beta = [CatalogEntry(f"B{k}", beta_curve_q(w, 1.0), 0.4, 5.0, 0.0, math.degrees(w), 23.0)
               for k, w in enumerate([0.1 * j for j in range(15)])]
    bright = [CatalogEntry("Z", 0.5, 0.4, 5.0, 0.0, 10.0, 20.0)]
    s = catalog_summary(on_beta + bright)
    assert s.faint_total == 15 and s.within_band_of_beta == 15
    assert catalog_summary(bright).faint_total == 0
    with pytest.raises(ValueError):
        catalog_summary(bright, band_width=0.0)


def test_mutual_reference_option():
    earth = CometaryElements(0.983, 0.0167, math.radians(0.00005), math.radians(-11.26), math.radians(114.2))
    en = CatalogEntry("A", 0.9, 0.3, 12.5, 100.0, 250.0, 23.1)
    d = analyze_entry(en, reference=earth)
    assert 0.0 <= d.omega_folded <= math.pi / 2
