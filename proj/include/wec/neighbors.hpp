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

#pragma once

#include <cstdint>
#include <vector>

#include "wec/particles.hpp"

namespace wec {

// Uniform-grid (cell-linked-list) neighbour search over all particles.
//
// Lists are CSR: neighbours of particle i are idx[offsets[i] .. offsets[i+1]),
// strictly within the support radius, self excluded, sorted ascending by
// particle index. Sorted per-particle lists make every gather reduction a
// fixed-order sum, so results are bitwise independent of the worker count.
class NeighborList {
public:
    // support: interaction cutoff (2h); also used as the grid cell size
    void build(const ParticleSystem& ps, double support);

    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

    const std::uint32_t* begin(std::size_t i) const { return idx_.data() + offsets_[i]; }
    const std::uint32_t* end(std::size_t i) const { return idx_.data() + offsets_[i + 1]; }
    std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
    std::size_t pair_entries() const { return idx_.size(); }

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> idx_;

    // scratch reused across rebuilds
    std::vector<std::uint32_t> cell_of_;
    std::vector<std::uint32_t> cell_start_;
    std::vector<std::uint32_t> cell_items_;
};

} // namespace wec
