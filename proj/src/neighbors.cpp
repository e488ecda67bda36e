/*
Copyright 2026 the wecsim authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "wec/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wec {

namespace {

struct GridDims {
    double minx, miny, minz;
    std::uint32_t nx, ny, nz;
    double inv_cell;
};

GridDims compute_grid(const ParticleSystem& ps, double cell) {
    const std::size_t n = ps.count();
    require(n > 0, ErrorCode::InvalidArgument, "neighbour build on empty system");
    double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
    double miny = minx, maxy = maxx;
    double minz = minx, maxz = maxx;
    for (std::size_t i = 0; i < n; ++i) {
        minx = std::min(minx, ps.x[i]); maxx = std::max(maxx, ps.x[i]);
        miny = std::min(miny, ps.y[i]); maxy = std::max(maxy, ps.y[i]);
        minz = std::min(minz, ps.z[i]); maxz = std::max(maxz, ps.z[i]);
    }
    GridDims g;
    g.inv_cell = 1.0 / cell;
    g.minx = minx; g.miny = miny; g.minz = minz;
    auto span = [&](double lo, double hi) {
        const double ext = hi - lo;
        require(std::isfinite(ext), ErrorCode::Numeric, "non-finite particle positions");
        auto cells = static_cast<std::uint64_t>(ext * g.inv_cell) + 1;
        require(cells < (1u << 21), ErrorCode::Numeric,
                "particle cloud spread exceeds sane grid bounds (escaped particle?)");
        return static_cast<std::uint32_t>(cells);
    };
    g.nx = span(minx, maxx);
    g.ny = (ps.dim == 3) ? span(miny, maxy) : 1;
    g.nz = span(minz, maxz);
    return g;
}

} // namespace

void NeighborList::build(const ParticleSystem& ps, double support) {
    const std::size_t n = ps.count();
    const double sup2 = support * support;
    const GridDims g = compute_grid(ps, support);
    const std::uint64_t ncells = std::uint64_t(g.nx) * g.ny * g.nz;
    require(ncells < (std::uint64_t(1) << 31), ErrorCode::Numeric, "neighbour grid too large");

    // bin particles; ascending fill keeps each cell's list ascending by index
    cell_of_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto cx = static_cast<std::uint32_t>((ps.x[i] - g.minx) * g.inv_cell);
        auto cz = static_cast<std::uint32_t>((ps.z[i] - g.minz) * g.inv_cell);
        cx = std::min(cx, g.nx - 1);
        cz = std::min(cz, g.nz - 1);
        std::uint32_t c = cx + g.nx * cz;
        if (ps.dim == 3) {
            auto cy = static_cast<std::uint32_t>((ps.y[i] - g.miny) * g.inv_cell);
            cy = std::min(cy, g.ny - 1);
            c += g.nx * g.nz * cy;
        }
        cell_of_[i] = c;
    }
    cell_start_.assign(ncells + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ++cell_start_[cell_of_[i] + 1];
    for (std::uint64_t c = 0; c < ncells; ++c) cell_start_[c + 1] += cell_start_[c];
    cell_items_.resize(n);
    {
        std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
        for (std::size_t i = 0; i < n; ++i)
            cell_items_[cursor[cell_of_[i]]++] = static_cast<std::uint32_t>(i);
    }

    offsets_.assign(n + 1, 0);

    const int ylo = (ps.dim == 3) ? -1 : 0;
    const int yhi = (ps.dim == 3) ? 1 : 0;
    const std::uint32_t plane = g.nx * g.nz;

    auto for_candidates = [&](std::size_t i, auto&& fn) {
        const double xi = ps.x[i], yi = ps.y[i], zi = ps.z[i];
        const std::uint32_t c = cell_of_[i];
        const std::uint32_t cy = (ps.dim == 3) ? c / plane : 0;
        const std::uint32_t rem = c - cy * plane;
        const std::uint32_t cz = rem / g.nx;
        const std::uint32_t cx = rem - cz * g.nx;
        for (int dy = ylo; dy <= yhi; ++dy) {
            const std::int64_t yy = std::int64_t(cy) + dy;
            if (yy < 0 || yy >= g.ny) continue;
            for (int dz = -1; dz <= 1; ++dz) {
                const std::int64_t zz = std::int64_t(cz) + dz;
                if (zz < 0 || zz >= g.nz) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const std::int64_t xx = std::int64_t(cx) + dx;
                    if (xx < 0 || xx >= g.nx) continue;
                    const std::uint32_t cc =
                        static_cast<std::uint32_t>(xx + g.nx * zz + plane * yy);
                    for (std::uint32_t s = cell_start_[cc]; s < cell_start_[cc + 1]; ++s) {
                        const std::uint32_t j = cell_items_[s];
                        if (j == i) continue;
                        const double ddx = xi - ps.x[j];
                        const double ddy = yi - ps.y[j];
                        const double ddz = zi - ps.z[j];
                        const double r2 = ddx * ddx + ddy * ddy + ddz * ddz;
                        if (r2 < sup2) fn(j);
                    }
                }
            }
        }
    };

    // pass 1: degrees
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        std::uint64_t cnt = 0;
        for_candidates(static_cast<std::size_t>(i), [&](std::uint32_t) { ++cnt; });
        offsets_[i + 1] = cnt;
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    idx_.resize(offsets_[n]);

    // pass 2: fill and sort each row ascending
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        std::uint32_t* out = idx_.data() + offsets_[i];
        std::uint32_t* cur = out;
        for_candidates(static_cast<std::size_t>(i), [&](std::uint32_t j) { *cur++ = j; });
        std::sort(out, cur);
    }
}

} // namespace wec
