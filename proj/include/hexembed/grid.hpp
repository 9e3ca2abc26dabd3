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

#include <charconv>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "hexembed/errors.hpp"
#include "hexembed/geometry.hpp"

namespace hexembed {

enum class GridKind : std::uint8_t { H3, Synthetic };

/// Grid resolution level. H3 defines levels 0..15; the synthetic grid has a
/// single implicit level and ignores the value.
struct Resolution {
    int level = 9;

    static Resolution checked(int level) {
        if (level < 0 || level > 15)
            throw InputError("resolution level " + std::to_string(level) + " outside [0, 15]");
        return Resolution{level};
    }
    friend auto operator<=>(const Resolution&, const Resolution&) = default;
};

/// Identifier of one hexagonal cell. H3 cells carry the 64-bit index; synthetic
/// cells carry axial coordinates plus the id of their grid instance.
struct RegionId {
    GridKind kind = GridKind::Synthetic;
    std::uint64_t cell = 0;  // H3 only
    std::int32_t q = 0;      // Synthetic only
    std::int32_t r = 0;
    std::uint32_t grid = 0;  // synthetic grid instance

    static RegionId h3(std::uint64_t index) { return {GridKind::H3, index, 0, 0, 0}; }
    static RegionId synthetic(std::int32_t q, std::int32_t r, std::uint32_t grid = 0) {
        return {GridKind::Synthetic, 0, q, r, grid};
    }

    friend auto operator<=>(const RegionId&, const RegionId&) = default;
};

struct RegionIdHash {
    std::size_t operator()(const RegionId& id) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ULL;
        };
        mix(static_cast<std::uint64_t>(id.kind));
        mix(id.cell);
        mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(id.q)));
        mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(id.r)));
        mix(id.grid);
        return static_cast<std::size_t>(h);
    }
};

/// "s:q,r" for synthetic cells, lowercase hex for H3 cells.
inline std::string to_string(const RegionId& id) {
    if (id.kind == GridKind::Synthetic)
        return "s:" + std::to_string(id.q) + "," + std::to_string(id.r);
    char buf[17];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), id.cell, 16);
    return std::string(buf, end);
}

inline RegionId parse_region_id(const std::string& s) {
    if (s.rfind("s:", 0) == 0) {
        const auto comma = s.find(',');
        if (comma == std::string::npos) throw DataError("bad synthetic region id: " + s);
        std::int32_t q = 0, r = 0;
        const char* qb = s.data() + 2;
        const char* qe = s.data() + comma;
        const char* rb = s.data() + comma + 1;
        const char* re = s.data() + s.size();
        auto rq = std::from_chars(qb, qe, q);
        auto rr = std::from_chars(rb, re, r);
        if (rq.ec != std::errc{} || rq.ptr != qe || rr.ec != std::errc{} || rr.ptr != re)
            throw DataError("bad synthetic region id: " + s);
        return RegionId::synthetic(q, r);
    }
    std::uint64_t cell = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), cell, 16);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw DataError("bad region id: " + s);
    return RegionId::h3(cell);
}

/// Hexagonal tessellation provider. All operations are pure; implementations
/// must be safe to call from any number of concurrent workers.
class GridProvider {
public:
    virtual ~GridProvider() = default;

    virtual GridKind kind() const = 0;

    /// Unique cell containing the point at the given resolution.
    virtual RegionId point_to_cell(const Point& p, Resolution res) const = 0;

    /// Closed CCW boundary polygon of the cell (6 vertices for regular
    /// hexagons; H3 pentagons and distorted cells may differ).
    virtual Polygon cell_boundary(const RegionId& cell) const = 0;

    /// Cells at grid distance exactly k, sorted. ring(c, 0) = {c}.
    virtual std::vector<RegionId> ring(const RegionId& cell, int k) const = 0;

    /// Cells at grid distance <= k, sorted, including the cell itself.
    virtual std::vector<RegionId> k_ring(const RegionId& cell, int k) const {
        if (k < 0) throw InputError("k_ring: negative k");
        std::vector<RegionId> out;
        for (int i = 0; i <= k; ++i) {
            const std::vector<RegionId> r = ring(cell, i);
            out.insert(out.end(), r.begin(), r.end());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Exactly the cells whose boundary hexagon intersects the geometry
    /// (touching counts). The cells hit by a connected shape form a
    /// ring-1-connected set, so a BFS seeded from the shape's vertices
    /// visits all of them.
    virtual std::set<RegionId> polygon_to_cells(const Geometry& g, Resolution res) const {
        std::set<RegionId> result;
        if (geometry_empty(g)) return result;
        std::set<RegionId> seen;
        std::deque<RegionId> frontier;
        for (const Point& p : geometry_vertices(g)) {
            const RegionId c = point_to_cell(p, res);
            if (seen.insert(c).second) frontier.push_back(c);
        }
        while (!frontier.empty()) {
            const RegionId c = frontier.front();
            frontier.pop_front();
            if (!intersects(g, cell_boundary(c))) continue;
            result.insert(c);
            for (const RegionId& n : ring(c, 1)) {
                if (seen.insert(n).second) frontier.push_back(n);
            }
        }
        return result;
    }
};

/// Deterministic axial-coordinate hexagonal grid: pointy-top cells of unit
/// edge on an abstract plane. Centers: x = sqrt(3) * e * (q + r/2),
/// y = 1.5 * e * r.
class SyntheticGrid final : public GridProvider {
public:
    explicit SyntheticGrid(std::uint32_t instance_id = 0, double edge = 1.0)
        : id_(instance_id), edge_(edge) {
        if (edge <= 0.0) throw InputError("SyntheticGrid: edge length must be positive");
    }

    GridKind kind() const override { return GridKind::Synthetic; }
    std::uint32_t instance_id() const { return id_; }
    double edge_length() const { return edge_; }

    Point cell_center(const RegionId& cell) const {
        require_own(cell);
        const double x = kSqrt3 * edge_ * (cell.q + cell.r / 2.0);
        const double y = 1.5 * edge_ * cell.r;
        return {x, y};
    }

    RegionId point_to_cell(const Point& p, Resolution) const override {
        const double rf = p.y / (1.5 * edge_);
        const double qf = p.x / (kSqrt3 * edge_) - rf / 2.0;
        auto [q, r] = axial_round(qf, rf);
        return RegionId::synthetic(q, r, id_);
    }

    Polygon cell_boundary(const RegionId& cell) const override {
        const Point c = cell_center(cell);
        Polygon poly;
        // CCW, starting at the east-by-northeast vertex (30 degrees)
        for (int i = 0; i < 6; ++i) {
            const double angle = (30.0 + 60.0 * i) * kDegToRad;
            poly.exterior.push_back({c.x + edge_ * std::cos(angle), c.y + edge_ * std::sin(angle)});
        }
        poly.exterior.push_back(poly.exterior.front());
        return poly;
    }

    std::vector<RegionId> ring(const RegionId& cell, int k) const override {
        require_own(cell);
        if (k < 0) throw InputError("ring: negative k");
        std::vector<RegionId> out;
        if (k == 0) {
            out.push_back(cell);
            return out;
        }
        // walk the hollow ring: start k steps along direction 4, then take
        // k steps in each of the six directions
        std::int32_t q = cell.q + kDirections[4][0] * k;
        std::int32_t r = cell.r + kDirections[4][1] * k;
        for (int side = 0; side < 6; ++side) {
            for (int step = 0; step < k; ++step) {
                out.push_back(RegionId::synthetic(q, r, id_));
                q += kDirections[side][0];
                r += kDirections[side][1];
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    static int grid_distance(const RegionId& a, const RegionId& b) {
        const std::int32_t dq = a.q - b.q;
        const std::int32_t dr = a.r - b.r;
        return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
    }

private:
    static constexpr double kSqrt3 = 1.7320508075688772;
    static constexpr double kDegToRad = 3.141592653589793238462643383279502884 / 180.0;
    static constexpr int kDirections[6][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};

    void require_own(const RegionId& cell) const {
        if (cell.kind != GridKind::Synthetic || cell.grid != id_)
            throw InputError("cell " + to_string(cell) + " does not belong to this synthetic grid");
    }

    static std::pair<std::int32_t, std::int32_t> axial_round(double qf, double rf) {
        const double sf = -qf - rf;
        double q = std::round(qf), r = std::round(rf), s = std::round(sf);
        const double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
        if (dq > dr && dq > ds) {
            q = -r - s;
        } else if (dr > ds) {
            r = -q - s;
        }
        return {static_cast<std::int32_t>(q), static_cast<std::int32_t>(r)};
    }

    std::uint32_t id_;
    double edge_;
};

}  // namespace hexembed
