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

#include <string>
#include <vector>

#include <h3api.h>

#include "hexembed/grid.hpp"

namespace hexembed {

/// Geodetic provider backed by the H3 discrete global grid. Points are
/// (x = longitude, y = latitude) in WGS84 degrees.
class H3Grid final : public GridProvider {
public:
    GridKind kind() const override { return GridKind::H3; }

    RegionId point_to_cell(const Point& p, Resolution res) const override {
        if (p.y < -90.0 || p.y > 90.0) throw InputError("latitude outside [-90, 90]");
        if (p.x < -180.0 || p.x > 180.0) throw InputError("longitude outside [-180, 180]");
        Resolution::checked(res.level);
        const LatLng g{degsToRads(p.y), degsToRads(p.x)};
        H3Index out = 0;
        if (latLngToCell(&g, res.level, &out) != E_SUCCESS)
            throw InputError("latLngToCell failed");
        return RegionId::h3(out);
    }

    Polygon cell_boundary(const RegionId& cell) const override {
        const H3Index h = require_h3(cell);
        CellBoundary boundary;
        if (cellToBoundary(h, &boundary) != E_SUCCESS)
            throw InputError("cellToBoundary failed for " + to_string(cell));
        Polygon poly;
        for (int i = 0; i < boundary.numVerts; ++i) {
            poly.exterior.push_back(
                {radsToDegs(boundary.verts[i].lng), radsToDegs(boundary.verts[i].lat)});
        }
        poly.exterior.push_back(poly.exterior.front());
        return poly;
    }

    std::vector<RegionId> ring(const RegionId& cell, int k) const override {
        const H3Index h = require_h3(cell);
        if (k < 0) throw InputError("ring: negative k");
        // gridRing handles pentagon neighborhoods since 4.5; keep the
        // disk-with-distances path as fallback for any residual failure
        int64_t max_size = 0;
        if (maxGridDiskSize(k, &max_size) != E_SUCCESS)
            throw InputError("maxGridDiskSize failed");
        std::vector<H3Index> cells(static_cast<std::size_t>(max_size), 0);
        const int64_t ring_capacity = k == 0 ? 1 : 6 * static_cast<int64_t>(k);
        std::vector<H3Index> ring_cells(static_cast<std::size_t>(ring_capacity), 0);
        std::vector<RegionId> out;
        if (gridRing(h, k, ring_cells.data()) == E_SUCCESS) {
            for (H3Index c : ring_cells)
                if (c != 0) out.push_back(RegionId::h3(c));
        } else {
            std::vector<int> distances(static_cast<std::size_t>(max_size), 0);
            if (gridDiskDistances(h, k, cells.data(), distances.data()) != E_SUCCESS)
                throw InputError("gridDiskDistances failed for " + to_string(cell));
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] != 0 && distances[i] == k) out.push_back(RegionId::h3(cells[i]));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<RegionId> k_ring(const RegionId& cell, int k) const override {
        const H3Index h = require_h3(cell);
        if (k < 0) throw InputError("k_ring: negative k");
        int64_t max_size = 0;
        if (maxGridDiskSize(k, &max_size) != E_SUCCESS)
            throw InputError("maxGridDiskSize failed");
        std::vector<H3Index> cells(static_cast<std::size_t>(max_size), 0);
        if (gridDisk(h, k, cells.data()) != E_SUCCESS)
            throw InputError("gridDisk failed for " + to_string(cell));
        std::vector<RegionId> out;
        for (H3Index c : cells)
            if (c != 0) out.push_back(RegionId::h3(c));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Spherical cell area in square meters.
    static double cell_area_m2(const RegionId& cell) {
        const H3Index h = require_h3(cell);
        double area = 0.0;
        if (cellAreaM2(h, &area) != E_SUCCESS)
            throw InputError("cellAreaM2 failed for " + to_string(cell));
        return area;
    }

    static int resolution_of(const RegionId& cell) { return getResolution(require_h3(cell)); }

    static bool is_valid(const RegionId& cell) {
        return cell.kind == GridKind::H3 && isValidCell(cell.cell) != 0;
    }

private:
    static H3Index require_h3(const RegionId& cell) {
        if (cell.kind != GridKind::H3 || isValidCell(cell.cell) == 0)
            throw InputError("not a valid H3 cell: " + to_string(cell));
        return cell.cell;
    }
};

}  // namespace hexembed
