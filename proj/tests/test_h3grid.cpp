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

#include "hexembed/h3grid.hpp"

using namespace hexembed;

namespace {

struct RefCase {
    double lat;
    double lon;
    int res;
    const char* cell;
};

// Frozen outputs of the reference H3 implementation (python bindings, v4.5.0)
// for fixed world points.
constexpr RefCase kReferenceCells[] = {
    {51.11, 17.03, 9, "891e2040897ffff"},
    {37.7955, -122.3937, 9, "89283082a67ffff"},
    {40.7484, -73.9857, 9, "892a100d2d7ffff"},
    {52.2297, 21.0122, 9, "891f53c93b7ffff"},
    {-33.8688, 151.2093, 9, "89be0e35cbbffff"},
    {64.1466, -21.9426, 9, "89075dd4b8bffff"},
    {51.11, 17.03, 8, "881e204089fffff"},
    {51.11, 17.03, 10, "8a1e2040895ffff"},
    // documented sample cell of the upstream library
    {37.775938728915946, -122.41795063018799, 9, "8928308280fffff"},
};

}  // namespace

TEST_CASE("point_to_cell matches the reference implementation") {
    H3Grid grid;
    for (const RefCase& rc : kReferenceCells) {
        const RegionId cell = grid.point_to_cell({rc.lon, rc.lat}, Resolution{rc.res});
        CHECK(to_string(cell) == rc.cell);
        CHECK(H3Grid::resolution_of(cell) == rc.res);
    }
}

TEST_CASE("coordinates outside the valid domain are rejected") {
    H3Grid grid;
    CHECK_THROWS_AS(grid.point_to_cell({0.0, 91.0}, Resolution{9}), InputError);
    CHECK_THROWS_AS(grid.point_to_cell({181.0, 0.0}, Resolution{9}), InputError);
    CHECK_THROWS_AS(grid.point_to_cell({0.0, 0.0}, Resolution{99}), InputError);
}

TEST_CASE("cell boundary is closed with at least six corners") {
    H3Grid grid;
    const RegionId cell = parse_region_id("891e2040897ffff");
    const Polygon b = grid.cell_boundary(cell);
    CHECK(b.exterior.size() >= 7);  // closed ring, >= 6 distinct vertices
    CHECK(b.exterior.front() == b.exterior.back());
}

TEST_CASE("resolution 9 cell areas sit near the published average") {
    H3Grid grid;
    // Average area of a resolution 9 cell is 105332.5 m^2; individual cells
    // vary with latitude but stay well within +-40%.
    for (const RefCase& rc : kReferenceCells) {
        if (rc.res != 9) continue;
        const RegionId cell = grid.point_to_cell({rc.lon, rc.lat}, Resolution{9});
        const double area = H3Grid::cell_area_m2(cell);
        CHECK(area > 105332.5 * 0.6);
        CHECK(area < 105332.5 * 1.4);
    }
}

TEST_CASE("centroid of a cell maps back to the same cell") {
    H3Grid grid;
    for (const RefCase& rc : kReferenceCells) {
        const RegionId cell = grid.point_to_cell({rc.lon, rc.lat}, Resolution{rc.res});
        const Point centroid = polygon_centroid(grid.cell_boundary(cell));
        CHECK(grid.point_to_cell(centroid, Resolution{rc.res}) == cell);
    }
}

TEST_CASE("rings and disks on a hexagonal cell") {
    H3Grid grid;
    const RegionId cell = parse_region_id("891e2040897ffff");
    CHECK(grid.ring(cell, 0) == std::vector<RegionId>{cell});
    CHECK(grid.ring(cell, 1).size() == 6);
    CHECK(grid.ring(cell, 2).size() == 12);
    CHECK(grid.k_ring(cell, 2).size() == 19);

    std::set<RegionId> by_union;
    for (int k = 0; k <= 2; ++k)
        for (const RegionId& id : grid.ring(cell, k)) by_union.insert(id);
    const std::vector<RegionId> kr = grid.k_ring(cell, 2);
    CHECK(std::set<RegionId>(kr.begin(), kr.end()) == by_union);

    CHECK_THROWS_AS(grid.ring(cell, -1), InputError);
}

TEST_CASE("pentagons report five neighbors and are otherwise accepted") {
    H3Grid grid;
    const RegionId pent = parse_region_id("89080000003ffff");
    REQUIRE(H3Grid::is_valid(pent));
    CHECK(grid.ring(pent, 1).size() == 5);
    const Polygon b = grid.cell_boundary(pent);
    CHECK(b.exterior.size() >= 6);  // 5+ distinct vertices, closed
}

TEST_CASE("neighboring H3 cells share an edge") {
    H3Grid grid;
    const RegionId cell = parse_region_id("8928308280fffff");
    const Polygon cb = grid.cell_boundary(cell);
    for (const RegionId& n : grid.ring(cell, 1)) {
        const Polygon nb = grid.cell_boundary(n);
        int shared = 0;
        for (std::size_t i = 0; i + 1 < cb.exterior.size(); ++i) {
            for (std::size_t j = 0; j + 1 < nb.exterior.size(); ++j) {
                const double dx = cb.exterior[i].x - nb.exterior[j].x;
                const double dy = cb.exterior[i].y - nb.exterior[j].y;
                if (std::sqrt(dx * dx + dy * dy) < 1e-7) ++shared;
            }
        }
        CHECK(shared == 2);
    }
}

TEST_CASE("polygon_to_cells on a geographic box matches exhaustive check") {
    H3Grid grid;
    // box around the Wroclaw reference point, roughly 1.2 x 0.9 km
    Polygon box;
    box.exterior = {{17.02, 51.105}, {17.038, 51.105}, {17.038, 51.113},
                    {17.02, 51.113}, {17.02, 51.105}};
    const Geometry g{box};
    const std::set<RegionId> got = grid.polygon_to_cells(g, Resolution{9});
    CHECK(!got.empty());

    // exhaustive reference: every cell of a wide disk around the box center
    const RegionId center = grid.point_to_cell({17.029, 51.109}, Resolution{9});
    std::set<RegionId> expect;
    for (const RegionId& c : grid.k_ring(center, 12)) {
        if (intersects(g, grid.cell_boundary(c))) expect.insert(c);
    }
    CHECK(got == expect);
}

TEST_CASE("invalid cells are rejected") {
    H3Grid grid;
    CHECK_THROWS_AS(grid.cell_boundary(RegionId::h3(0xdeadbeefULL)), InputError);
    CHECK_THROWS_AS(grid.cell_boundary(RegionId::synthetic(0, 0)), InputError);
}
