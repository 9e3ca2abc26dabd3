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

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hexembed/errors.hpp"

namespace hexembed {

// Planar geometry on (x, y) pairs. For geodetic data x is longitude and
// y is latitude in degrees; for the synthetic grid both are abstract units.
struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point& a, const Point& b) = default;
};

/// Closed ring: front() == back(). At least 4 points when non-empty.
using Ring = std::vector<Point>;

struct Polygon {
    Ring exterior;
    std::vector<Ring> holes;

    bool empty() const { return exterior.size() < 4; }
};

struct LineString {
    std::vector<Point> points;
};

struct MultiPolygon {
    std::vector<Polygon> parts;
};

using Geometry = std::variant<Point, LineString, Polygon, MultiPolygon>;

// Touch tolerance for the intersects predicate: absolute distance in
// coordinate units (sub-millimeter in degrees, negligible in grid units).
inline constexpr double kGeomEps = 1e-9;

namespace detail {

inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double dist2(const Point& a, const Point& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace detail

inline bool points_equal(const Point& a, const Point& b) {
    return detail::dist2(a, b) <= kGeomEps * kGeomEps;
}

inline bool point_on_segment(const Point& p, const Point& a, const Point& b) {
    const double len = std::sqrt(detail::dist2(a, b));
    if (len <= kGeomEps) return points_equal(p, a);
    // perpendicular distance from the supporting line
    if (std::abs(detail::cross(a, b, p)) > kGeomEps * len) return false;
    const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
    return t >= -kGeomEps && t <= 1.0 + kGeomEps;
}

/// Segment-segment intersection, touching endpoints included.
inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    const double d1 = detail::cross(c, d, a);
    const double d2 = detail::cross(c, d, b);
    const double d3 = detail::cross(a, b, c);
    const double d4 = detail::cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return point_on_segment(a, c, d) || point_on_segment(b, c, d) ||
           point_on_segment(c, a, b) || point_on_segment(d, a, b);
}

/// Even-odd ray cast; boundary points count as inside.
inline bool point_in_ring(const Point& p, const Ring& ring) {
    const std::size_t n = ring.size();
    if (n < 4) return false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (point_on_segment(p, ring[i], ring[i + 1])) return true;
    }
    bool inside = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Point& a = ring[i];
        const Point& b = ring[i + 1];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

/// True when p lies inside the polygon or on any of its rings. Points
/// strictly inside a hole are outside.
inline bool point_in_polygon(const Point& p, const Polygon& poly) {
    if (poly.empty()) return false;
    for (const Ring& hole : poly.holes) {
        const std::size_t n = hole.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (point_on_segment(p, hole[i], hole[i + 1])) return true;
        }
        if (n >= 4 && point_in_ring(p, hole)) return false;
    }
    return point_in_ring(p, poly.exterior);
}

namespace detail {

inline bool ring_edges_intersect(const Ring& ra, const Ring& rb) {
    for (std::size_t i = 0; i + 1 < ra.size(); ++i)
        for (std::size_t j = 0; j + 1 < rb.size(); ++j)
            if (segments_intersect(ra[i], ra[i + 1], rb[j], rb[j + 1])) return true;
    return false;
}

inline bool polygon_edges_intersect(const Polygon& a, const Polygon& b) {
    std::vector<const Ring*> ra{&a.exterior};
    for (const Ring& h : a.holes) ra.push_back(&h);
    std::vector<const Ring*> rb{&b.exterior};
    for (const Ring& h : b.holes) rb.push_back(&h);
    for (const Ring* x : ra)
        for (const Ring* y : rb)
            if (ring_edges_intersect(*x, *y)) return true;
    return false;
}

}  // namespace detail

/// Standard intersects predicate: shared interior or touching boundary.
inline bool polygons_intersect(const Polygon& a, const Polygon& b) {
    if (a.empty() || b.empty()) return false;
    if (detail::polygon_edges_intersect(a, b)) return true;
    // No edge crossings: either one contains the other or they are disjoint
    // (a polygon lying in the other's hole falls out of point_in_polygon).
    if (point_in_polygon(b.exterior.front(), a)) return true;
    if (point_in_polygon(a.exterior.front(), b)) return true;
    return false;
}

inline bool line_intersects_polygon(const LineString& l, const Polygon& poly) {
    if (poly.empty() || l.points.empty()) return false;
    if (l.points.size() == 1) return point_in_polygon(l.points.front(), poly);
    std::vector<const Ring*> rings{&poly.exterior};
    for (const Ring& h : poly.holes) rings.push_back(&h);
    for (std::size_t i = 0; i + 1 < l.points.size(); ++i)
        for (const Ring* r : rings)
            for (std::size_t j = 0; j + 1 < r->size(); ++j)
                if (segments_intersect(l.points[i], l.points[i + 1], (*r)[j], (*r)[j + 1]))
                    return true;
    return point_in_polygon(l.points.front(), poly);
}

/// Geometry x polygon intersects dispatch.
inline bool intersects(const Geometry& g, const Polygon& poly) {
    return std::visit(
        [&](const auto& shape) -> bool {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Point>) {
                return point_in_polygon(shape, poly);
            } else if constexpr (std::is_same_v<T, LineString>) {
                return line_intersects_polygon(shape, poly);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return polygons_intersect(shape, poly);
            } else {
                for (const Polygon& part : shape.parts)
                    if (polygons_intersect(part, poly)) return true;
                return false;
            }
        },
        g);
}

inline bool intersects(const Geometry& g, const MultiPolygon& mp) {
    for (const Polygon& part : mp.parts)
        if (intersects(g, part)) return true;
    return false;
}

inline double ring_area_signed(const Ring& ring) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        s += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    return 0.5 * s;
}

/// Planar area, holes subtracted.
inline double polygon_area(const Polygon& poly) {
    double a = std::abs(ring_area_signed(poly.exterior));
    for (const Ring& h : poly.holes) a -= std::abs(ring_area_signed(h));
    return a;
}

/// Area-weighted centroid; falls back to the vertex mean for degenerate rings.
inline Point polygon_centroid(const Polygon& poly) {
    double a_total = 0.0, cx = 0.0, cy = 0.0;
    auto accumulate = [&](const Ring& ring, double sign) {
        const double a = ring_area_signed(ring);
        double rx = 0.0, ry = 0.0;
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const double w = ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
            rx += (ring[i].x + ring[i + 1].x) * w;
            ry += (ring[i].y + ring[i + 1].y) * w;
        }
        a_total += sign * std::abs(a);
        const double ring_sign = (a < 0 ? -1.0 : 1.0) * sign;
        cx += ring_sign * rx / 6.0;
        cy += ring_sign * ry / 6.0;
    };
    accumulate(poly.exterior, 1.0);
    for (const Ring& h : poly.holes) accumulate(h, -1.0);
    if (std::abs(a_total) < 1e-300) {
        double sx = 0.0, sy = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i + 1 < poly.exterior.size(); ++i, ++n) {
            sx += poly.exterior[i].x;
            sy += poly.exterior[i].y;
        }
        if (n == 0) return {};
        return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
    }
    return {cx / a_total, cy / a_total};
}

inline std::vector<Point> geometry_vertices(const Geometry& g) {
    std::vector<Point> out;
    std::visit(
        [&](const auto& shape) {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Point>) {
                out.push_back(shape);
            } else if constexpr (std::is_same_v<T, LineString>) {
                out = shape.points;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                out.insert(out.end(), shape.exterior.begin(), shape.exterior.end());
                for (const Ring& h : shape.holes) out.insert(out.end(), h.begin(), h.end());
            } else {
                for (const Polygon& part : shape.parts) {
                    out.insert(out.end(), part.exterior.begin(), part.exterior.end());
                    for (const Ring& h : part.holes) out.insert(out.end(), h.begin(), h.end());
                }
            }
        },
        g);
    return out;
}

inline bool geometry_empty(const Geometry& g) {
    return std::visit(
        [](const auto& shape) -> bool {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Point>) {
                return false;
            } else if constexpr (std::is_same_v<T, LineString>) {
                return shape.points.empty();
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return shape.empty();
            } else {
                for (const Polygon& part : shape.parts)
                    if (!part.empty()) return false;
                return true;
            }
        },
        g);
}

// ---------------------------------------------------------------------------
// GeoJSON (geometry objects only; features live with their owners)

namespace geojson {

inline Ring parse_ring(const nlohmann::json& arr) {
    Ring ring;
    for (const auto& coord : arr) {
        if (!coord.is_array() || coord.size() < 2)
            throw DataError("GeoJSON ring coordinate is not an [x, y] pair");
        ring.push_back({coord[0].get<double>(), coord[1].get<double>()});
    }
    if (ring.size() >= 3 && !(ring.front() == ring.back())) ring.push_back(ring.front());
    if (!ring.empty() && ring.size() < 4) throw DataError("GeoJSON ring has fewer than 3 vertices");
    return ring;
}

inline Polygon parse_polygon_coords(const nlohmann::json& arr) {
    Polygon poly;
    bool first = true;
    for (const auto& ring : arr) {
        if (first) {
            poly.exterior = parse_ring(ring);
            first = false;
        } else {
            poly.holes.push_back(parse_ring(ring));
        }
    }
    return poly;
}

inline Geometry parse_geometry(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j.contains("coordinates"))
        throw DataError("GeoJSON geometry must have type and coordinates");
    const std::string type = j["type"].get<std::string>();
    const nlohmann::json& c = j["coordinates"];
    if (type == "Point") {
        if (!c.is_array() || c.size() < 2) throw DataError("GeoJSON Point needs [x, y]");
        return Point{c[0].get<double>(), c[1].get<double>()};
    }
    if (type == "LineString") {
        LineString l;
        for (const auto& coord : c) l.points.push_back({coord[0].get<double>(), coord[1].get<double>()});
        return l;
    }
    if (type == "Polygon") return parse_polygon_coords(c);
    if (type == "MultiPolygon") {
        MultiPolygon mp;
        for (const auto& part : c) mp.parts.push_back(parse_polygon_coords(part));
        return mp;
    }
    throw DataError("unsupported GeoJSON geometry type: " + type);
}

inline nlohmann::json ring_to_json(const Ring& ring) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Point& p : ring) arr.push_back({p.x, p.y});
    return arr;
}

inline nlohmann::json polygon_coords(const Polygon& poly) {
    nlohmann::json arr = nlohmann::json::array();
    arr.push_back(ring_to_json(poly.exterior));
    for (const Ring& h : poly.holes) arr.push_back(ring_to_json(h));
    return arr;
}

inline nlohmann::json geometry_to_json(const Geometry& g) {
    return std::visit(
        [](const auto& shape) -> nlohmann::json {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Point>) {
                return {{"type", "Point"}, {"coordinates", {shape.x, shape.y}}};
            } else if constexpr (std::is_same_v<T, LineString>) {
                nlohmann::json arr = nlohmann::json::array();
                for (const Point& p : shape.points) arr.push_back({p.x, p.y});
                return {{"type", "LineString"}, {"coordinates", arr}};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return {{"type", "Polygon"}, {"coordinates", polygon_coords(shape)}};
            } else {
                nlohmann::json arr = nlohmann::json::array();
                for (const Polygon& part : shape.parts) arr.push_back(polygon_coords(part));
                return {{"type", "MultiPolygon"}, {"coordinates", arr}};
            }
        },
        g);
}

}  // namespace geojson

}  // namespace hexembed
