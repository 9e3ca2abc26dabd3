// Copyright 2026 The hexembed authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include "hexembed/grid.hpp"
#include "hexembed/rng.hpp"

using namespace hexembed;

namespace {

// Brute-force reference for polygon_to_cells: test every cell of a window.
std::set<RegionId> cells_by_exhaustion(const SyntheticGrid& grid, const Geometry& g, int window) {
    std::set<RegionId> out;
    for (int q = -window; q <= window; ++q) {
        for (int r = -window; r <= window; ++r) {
            const RegionId c = RegionId::synthetic(q, r, grid.instance_id());
            if (intersects(g, grid.cell_boundary(c))) out.insert(c);
        }
    }
    return out;
}

Polygon disc_polygon(Point center, double radius, int segments = 48) {
    Polygon p;
    for (int i = 0; i < segments; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / segments;
        p.exterior.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    p.exterior.push_back(p.exterior.front());
    return p;
}

}  // namespace

TEST_CASE("region id string forms round trip") {
    const RegionId syn = RegionId::synthetic(3, -2);
    CHECK(to_string(syn) == "s:3,-2");
    CHECK(parse_region_id("s:3,-2") == syn);

    const RegionId h3 = RegionId::h3(0x8928308280fffffULL);
    CHECK(to_string(h3) == "8928308280fffff");
    CHECK(parse_region_id("8928308280fffff") == h3);

    CHECK_THROWS_AS(parse_region_id("s:abc"), DataError);
    CHECK_THROWS_AS(parse_region_id(""), DataError);
    CHECK_THROWS_AS(parse_region_id("xyz!"), DataError);
}

TEST_CASE("resolution bounds") {
    CHECK(Resolution::checked(9).level == 9);
    CHECK_THROWS_AS(Resolution::checked(-1), InputError);
    CHECK_THROWS_AS(Resolution::checked(16), InputError);
}

TEST_CASE("synthetic point at axial origin maps to cell (0,0)") {
    SyntheticGrid grid;
    CHECK(grid.point_to_cell({0.0, 0.0}, Resolution{}) == RegionId::synthetic(0, 0));
}

TEST_CASE("synthetic cell boundary is a regular CCW hexagon") {
    SyntheticGrid grid;
    const Polygon b = grid.cell_boundary(RegionId::synthetic(0, 0));
    REQUIRE(b.exterior.size() == 7);
    CHECK(b.exterior.front() == b.exterior.back());
    CHECK(ring_area_signed(b.exterior) > 0.0);  // counterclockwise
    CHECK(polygon_area(b) == Catch::Approx(3.0 * std::sqrt(3.0) / 2.0));

    // all six vertices at circumradius = edge length from the center
    const Point c = grid.cell_center(RegionId::synthetic(0, 0));
    for (std::size_t i = 0; i + 1 < b.exterior.size(); ++i) {
        const double dx = b.exterior[i].x - c.x;
        const double dy = b.exterior[i].y - c.y;
        CHECK(std::sqrt(dx * dx + dy * dy) == Catch::Approx(1.0));
    }
}

TEST_CASE("neighboring cells share exactly one edge (two vertices)") {
    SyntheticGrid grid;
    const RegionId center = RegionId::synthetic(2, -1);
    const Polygon cb = grid.cell_boundary(center);
    for (const RegionId& n : grid.ring(center, 1)) {
        const Polygon nb = grid.cell_boundary(n);
        int shared = 0;
        for (std::size_t i = 0; i + 1 < cb.exterior.size(); ++i)
            for (std::size_t j = 0; j + 1 < nb.exterior.size(); ++j)
                if (points_equal(cb.exterior[i], nb.exterior[j])) ++shared;
        CHECK(shared == 2);
    }
}

TEST_CASE("centroid of a cell maps back to the cell") {
    SyntheticGrid grid;
    for (int q = -5; q <= 5; ++q) {
        for (int r = -5; r <= 5; ++r) {
            const RegionId c = RegionId::synthetic(q, r);
            const Point centroid = polygon_centroid(grid.cell_boundary(c));
            CHECK(grid.point_to_cell(centroid, Resolution{}) == c);
        }
    }
}

TEST_CASE("ring and k_ring cardinalities") {
    SyntheticGrid grid;
    const RegionId c = RegionId::synthetic(0, 0);

    CHECK(grid.ring(c, 0) == std::vector<RegionId>{c});
    CHECK(grid.ring(c, 1).size() == 6);
    CHECK(grid.ring(c, 2).size() == 12);
    CHECK(grid.k_ring(c, 0) == std::vector<RegionId>{c});
    CHECK(grid.k_ring(c, 1).size() == 7);
    CHECK(grid.k_ring(c, 2).size() == 19);

    for (int k = 1; k <= 6; ++k) {
        CHECK(grid.ring(c, k).size() == static_cast<std::size_t>(6 * k));
        CHECK(grid.k_ring(c, k).size() == static_cast<std::size_t>(1 + 3 * k * (k + 1)));
    }

    CHECK_THROWS_AS(grid.ring(c, -1), InputError);
    CHECK_THROWS_AS(grid.k_ring(c, -2), InputError);
}

TEST_CASE("k_ring(c,2) equals union of rings 0..2") {
    SyntheticGrid grid;
    const RegionId c = RegionId::synthetic(-3, 4);
    std::set<RegionId> by_union;
    for (int k = 0; k <= 2; ++k)
        for (const RegionId& id : grid.ring(c, k)) by_union.insert(id);
    const std::vector<RegionId> kr = grid.k_ring(c, 2);
    CHECK(std::set<RegionId>(kr.begin(), kr.end()) == by_union);
}

TEST_CASE("ring membership at exact grid distance") {
    SyntheticGrid grid;
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const RegionId c = RegionId::synthetic(
            static_cast<int>(rng.uniform_below(21)) - 10,
            static_cast<int>(rng.uniform_below(21)) - 10);
        const int k = static_cast<int>(rng.uniform_below(4)) + 1;
        for (const RegionId& m : grid.ring(c, k))
            CHECK(SyntheticGrid::grid_distance(c, m) == k);
    }
}

TEST_CASE("neighborhood symmetry") {
    SyntheticGrid grid;
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const RegionId a = RegionId::synthetic(
            static_cast<int>(rng.uniform_below(41)) - 20,
            static_cast<int>(rng.uniform_below(41)) - 20);
        const std::vector<RegionId> nbrs = grid.ring(a, 1);
        for (const RegionId& b : nbrs) {
            const std::vector<RegionId> back = grid.ring(b, 1);
            CHECK(std::find(back.begin(), back.end(), a) != back.end());
        }
    }
}

TEST_CASE("grid instance id participates in identity") {
    SyntheticGrid g0(0), g1(1);
    CHECK(g0.point_to_cell({0, 0}, Resolution{}) != g1.point_to_cell({0, 0}, Resolution{}));
    CHECK_THROWS_AS(g0.cell_boundary(RegionId::synthetic(0, 0, 1)), InputError);
}

TEST_CASE("polygon strictly inside one cell maps to that cell") {
    SyntheticGrid grid;
    const RegionId c = RegionId::synthetic(1, 1);
    const Point center = grid.cell_center(c);
    const Polygon tiny = disc_polygon(center, 0.2, 12);
    const std::set<RegionId> cells = grid.polygon_to_cells(Geometry{tiny}, Resolution{});
    CHECK(cells == std::set<RegionId>{c});
}

TEST_CASE("polygon straddling an edge maps to both cells") {
    SyntheticGrid grid;
    const RegionId a = RegionId::synthetic(0, 0);
    const RegionId b = RegionId::synthetic(1, 0);  // east neighbor
    const Point ca = grid.cell_center(a);
    const Point cb = grid.cell_center(b);
    const Point mid{(ca.x + cb.x) / 2.0, (ca.y + cb.y) / 2.0};
    const Polygon blob = disc_polygon(mid, 0.3, 16);
    const std::set<RegionId> cells = grid.polygon_to_cells(Geometry{blob}, Resolution{});
    CHECK(cells.count(a) == 1);
    CHECK(cells.count(b) == 1);
}

TEST_CASE("disc of radius 1.5 edge equals brute-force enumeration") {
    SyntheticGrid grid;
    const RegionId c = RegionId::synthetic(2, -1);
    const Polygon disc = disc_polygon(grid.cell_center(c), 1.5);
    const Geometry g{disc};
    CHECK(grid.polygon_to_cells(g, Resolution{}) == cells_by_exhaustion(grid, g, 8));
}

TEST_CASE("empty polygon yields empty set") {
    SyntheticGrid grid;
    CHECK(grid.polygon_to_cells(Geometry{Polygon{}}, Resolution{}).empty());
}

TEST_CASE("point and line geometries assign to crossed cells") {
    SyntheticGrid grid;
    const RegionId c = RegionId::synthetic(0, 0);
    // a point at a cell center hits exactly one cell
    CHECK(grid.polygon_to_cells(Geometry{grid.cell_center(c)}, Resolution{}) ==
          std::set<RegionId>{c});

    // a long horizontal line crosses the same cells the oracle finds
    const LineString line{{{-4.0, 0.2}, {4.0, 0.2}}};
    const Geometry g{line};
    CHECK(grid.polygon_to_cells(g, Resolution{}) == cells_by_exhaustion(grid, g, 6));

    // a point on the shared edge of two cells is counted in both
    const Point ca = grid.cell_center(RegionId::synthetic(0, 0));
    const Point cb = grid.cell_center(RegionId::synthetic(1, 0));
    const Point on_edge{(ca.x + cb.x) / 2.0, (ca.y + cb.y) / 2.0};
    const std::set<RegionId> hit = grid.polygon_to_cells(Geometry{on_edge}, Resolution{});
    CHECK(hit.size() >= 2);
    CHECK(hit.count(RegionId::synthetic(0, 0)) == 1);
    CHECK(hit.count(RegionId::synthetic(1, 0)) == 1);
}

TEST_CASE("random scenes match the brute-force oracle") {
    SyntheticGrid grid;
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const double cx = rng.uniform01() * 10 - 5;
        const double cy = rng.uniform01() * 10 - 5;
        Geometry g;
        switch (rng.uniform_below(3)) {
            case 0:
                g = disc_polygon({cx, cy}, 0.3 + rng.uniform01() * 2.5,
                                 static_cast<int>(8 + rng.uniform_below(24)));
                break;
            case 1: {
                LineString l;
                const int pts = 2 + static_cast<int>(rng.uniform_below(4));
                for (int i = 0; i < pts; ++i)
                    l.points.push_back({cx + rng.uniform01() * 6 - 3, cy + rng.uniform01() * 6 - 3});
                g = l;
                break;
            }
            default:
                g = Point{cx, cy};
        }
        CHECK(grid.polygon_to_cells(g, Resolution{}) == cells_by_exhaustion(grid, g, 12));
    }
}

TEST_CASE("polygon with a hole excludes cells strictly inside the hole") {
    SyntheticGrid grid;
    // a large disc with a big hole in the middle: the annulus
    Polygon annulus = disc_polygon({0, 0}, 6.0, 64);
    Polygon hole = disc_polygon({0, 0}, 3.0, 64);
    annulus.holes.push_back(hole.exterior);
    const Geometry g{annulus};
    const auto got = grid.polygon_to_cells(g, Resolution{});
    CHECK(got == cells_by_exhaustion(grid, g, 10));
    CHECK(got.count(RegionId::synthetic(0, 0)) == 0);  // center cell is inside the hole
}
