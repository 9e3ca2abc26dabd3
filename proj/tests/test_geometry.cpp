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

#include "hexembed/geometry.hpp"
#include "hexembed/rng.hpp"

using namespace hexembed;

namespace {

Polygon make_square(double x0, double y0, double side) {
    Polygon p;
    p.exterior = {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}, {x0, y0}};
    return p;
}

}  // namespace

TEST_CASE("point_on_segment basics") {
    CHECK(point_on_segment({0.5, 0.0}, {0.0, 0.0}, {1.0, 0.0}));
    CHECK(point_on_segment({0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}));
    CHECK(point_on_segment({1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}));
    CHECK_FALSE(point_on_segment({1.5, 0.0}, {0.0, 0.0}, {1.0, 0.0}));
    CHECK_FALSE(point_on_segment({0.5, 0.1}, {0.0, 0.0}, {1.0, 0.0}));
}

TEST_CASE("segments_intersect covers crossing, touching and disjoint") {
    CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 1}));   // shared endpoint
    CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, 5}));   // T-touch
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 1}, {2, 2.5}, {3, 4}));  // collinear-ish, apart
}

TEST_CASE("point_in_polygon with hole") {
    Polygon p = make_square(0, 0, 4);
    p.holes.push_back({{1, 1}, {3, 1}, {3, 3}, {1, 3}, {1, 1}});

    CHECK(point_in_polygon({0.5, 0.5}, p));
    CHECK(point_in_polygon({0.0, 0.0}, p));    // exterior boundary counts
    CHECK(point_in_polygon({1.0, 2.0}, p));    // hole boundary counts
    CHECK_FALSE(point_in_polygon({2.0, 2.0}, p));  // strictly inside hole
    CHECK_FALSE(point_in_polygon({5.0, 5.0}, p));
}

TEST_CASE("polygons_intersect: overlap, touch, containment, hole") {
    Polygon a = make_square(0, 0, 2);
    Polygon b = make_square(1, 1, 2);
    Polygon c = make_square(2, 0, 2);   // shares an edge with a
    Polygon d = make_square(5, 5, 1);
    Polygon inner = make_square(0.5, 0.5, 0.5);

    CHECK(polygons_intersect(a, b));
    CHECK(polygons_intersect(a, c));        // touching boundary counts
    CHECK_FALSE(polygons_intersect(a, d));
    CHECK(polygons_intersect(a, inner));    // containment without edge crossings
    CHECK(polygons_intersect(inner, a));

    Polygon ring = make_square(0, 0, 4);
    ring.holes.push_back({{1, 1}, {3, 1}, {3, 3}, {1, 3}, {1, 1}});
    Polygon in_hole = make_square(1.5, 1.5, 1.0);
    CHECK_FALSE(polygons_intersect(ring, in_hole));  // inside the hole -> disjoint
    CHECK(polygons_intersect(ring, make_square(0.2, 0.2, 0.5)));
}

TEST_CASE("line and point intersect polygon") {
    Polygon a = make_square(0, 0, 2);
    LineString crossing{{{-1, 1}, {3, 1}}};
    LineString outside{{{-1, 5}, {3, 5}}};
    LineString inside{{{0.5, 0.5}, {1.5, 1.5}}};
    CHECK(line_intersects_polygon(crossing, a));
    CHECK_FALSE(line_intersects_polygon(outside, a));
    CHECK(line_intersects_polygon(inside, a));

    CHECK(intersects(Geometry{Point{1, 1}}, a));
    CHECK(intersects(Geometry{Point{2, 2}}, a));  // corner touch
    CHECK_FALSE(intersects(Geometry{Point{9, 9}}, a));
}

TEST_CASE("area and centroid") {
    Polygon sq = make_square(2, 3, 4);
    CHECK(polygon_area(sq) == Catch::Approx(16.0));
    const Point c = polygon_centroid(sq);
    CHECK(c.x == Catch::Approx(4.0));
    CHECK(c.y == Catch::Approx(5.0));

    Polygon holed = make_square(0, 0, 4);
    holed.holes.push_back({{1, 1}, {2, 1}, {2, 2}, {1, 2}, {1, 1}});
    CHECK(polygon_area(holed) == Catch::Approx(15.0));

    // hole off-centre pushes the centroid away from it
    Polygon lop = make_square(0, 0, 4);
    lop.holes.push_back({{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}, {0.5, 0.5}});
    const Point lc = polygon_centroid(lop);
    CHECK(lc.x > 2.0);
    CHECK(lc.y > 2.0);
}

TEST_CASE("geojson round trip preserves geometry") {
    Polygon p = make_square(-1, -2, 3);
    p.holes.push_back({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
    Geometry g{p};
    const nlohmann::json j = geojson::geometry_to_json(g);
    const Geometry back = geojson::parse_geometry(j);
    REQUIRE(std::holds_alternative<Polygon>(back));
    const Polygon& q = std::get<Polygon>(back);
    REQUIRE(q.exterior.size() == p.exterior.size());
    REQUIRE(q.holes.size() == 1);
    CHECK(polygon_area(q) == Catch::Approx(polygon_area(p)));

    const Geometry pt = geojson::parse_geometry(nlohmann::json::parse(
        R"({"type":"Point","coordinates":[17.03,51.11]})"));
    REQUIRE(std::holds_alternative<Point>(pt));
    CHECK(std::get<Point>(pt).x == Catch::Approx(17.03));

    const Geometry mp = geojson::parse_geometry(nlohmann::json::parse(
        R"({"type":"MultiPolygon","coordinates":[[[[0,0],[1,0],[1,1],[0,0]]],[[[5,5],[6,5],[6,6],[5,5]]]]})"));
    REQUIRE(std::holds_alternative<MultiPolygon>(mp));
    CHECK(std::get<MultiPolygon>(mp).parts.size() == 2);
}

TEST_CASE("geojson parse rejects malformed geometry") {
    CHECK_THROWS_AS(geojson::parse_geometry(nlohmann::json::parse(R"({"type":"Point"})")),
                    DataError);
    CHECK_THROWS_AS(
        geojson::parse_geometry(nlohmann::json::parse(R"({"type":"Banana","coordinates":[]})")),
        DataError);
}

TEST_CASE("intersects agrees with containment on random rectangles") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const double ax = rng.uniform01() * 10, ay = rng.uniform01() * 10;
        const double bx = rng.uniform01() * 10, by = rng.uniform01() * 10;
        const double aw = rng.uniform01() * 3 + 0.1, bw = rng.uniform01() * 3 + 0.1;
        Polygon a = make_square(ax, ay, aw);
        Polygon b = make_square(bx, by, bw);
        // axis-aligned rectangles intersect iff the intervals overlap
        const bool expect =
            ax <= bx + bw && bx <= ax + aw && ay <= by + bw && by <= ay + aw;
        CHECK(polygons_intersect(a, b) == expect);
    }
}
