import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from k3stab import plot as plotting
from k3stab.lattice import MukaiVector
from k3stab.model import K3Context
from k3stab.walls import disk_D, region_R, wall

F = Fraction


def _figures():
    ctx = K3Context(1)
    return [
        plotting.plot_spherical(ctx, 6, -1, 1),
        plotting.plot_boundary(ctx, 6, 0, 1),
        plotting.plot_walls(ctx, MukaiVector(1, 1, 1), 6, -1, 2),
        plotting.plot_region(ctx, MukaiVector(1, 0, 0), 6),
        plotting.plot_disk(ctx, MukaiVector(2, 1, 1), 12),
        plotting.plot_region(K3Context(6), MukaiVector(3, 1, 2), 6, paper_printed_B=True),
    ]


@pytest.mark.parametrize("index", range(6))
def test_figures_are_deterministic_and_well_formed(index):
    fig, again = _figures()[index], _figures()[index]
    svg = fig.to_svg()
    assert svg == again.to_svg() and fig.to_csv() == again.to_csv()
    root = ET.fromstring(svg)
    assert root.get("width") == "1000" and root.get("height") == "600"


@pytest.mark.parametrize("index", range(6))
def test_csv_round_trip(index):
    fig = _figures()[index]
    rows = plotting.parse_csv(fig.to_csv())
    assert rows == fig.rows


def test_walls_figure_content():
    ctx = K3Context(1)
    E = MukaiVector(1, 1, 1)
    rows = plotting.plot_walls(ctx, E, 2, 0, 1).rows
    walls = [r for r in rows if r[0] == "wall"]
    w = wall(MukaiVector(1, 0, 1), E, ctx)
    assert ["wall", "TypeI 1,0,1", w.alpha_E, w.x_E, w.geodesic.center, w.geodesic.radius_sq] in walls
    assert ["point", "2,1,1", F(1, 2), F(1, 2)] in rows


def test_region_and_disk_rows():
    ctx = K3Context(1)
    reg = region_R(MukaiVector(1, 0, 0), ctx)
    rows = plotting.plot_region(ctx, MukaiVector(1, 0, 0), 4).rows
    assert ["strip", "t<=1", 1] in rows
    assert sum(r[0] == "disk" for r in rows) == 2
    assert any(r[0] == "ray" for r in rows)
    assert ["disk", "R", reg.center_x - 1, 1] in rows
    disk = disk_D(MukaiVector(2, 1, 1), ctx)
    rows = plotting.plot_disk(ctx, MukaiVector(2, 1, 1), 10).rows
    assert rows[0] == ["disk_D", "image of t>1", disk.tangent_x, disk.top_t]


def test_empty_window_gives_empty_figure():
    fig = plotting.plot_spherical(K3Context(1), 5, 2, 1)
    assert fig.rows == []
    ET.fromstring(fig.to_svg())
    assert fig.to_csv() == "kind,label,v1,v2,v3,v4\n"


def test_parse_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        plotting.parse_csv("a,b\n1,2\n")
