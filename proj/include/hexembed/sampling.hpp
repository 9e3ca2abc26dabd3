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

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "hexembed/features.hpp"
#include "hexembed/grid.hpp"
#include "hexembed/rng.hpp"

namespace hexembed {

/// One (target, context, negative) sample feeding the pairwise logistic loss.
struct TrainingTriple {
    RegionId target;
    RegionId context;
    RegionId negative;
    friend auto operator<=>(const TrainingTriple&, const TrainingTriple&) = default;
};

struct SamplerConfig {
    int negatives_per_pair = 1;
    int exclusion_radius = 2;
    std::uint64_t rng_seed = 0;
    bool same_city = true;  // negatives drawn from the target's own city

    void validate() const {
        if (negatives_per_pair < 1) throw InputError("negatives_per_pair must be >= 1");
        if (exclusion_radius < 1) throw InputError("exclusion_radius must be >= 1");
    }
};

/// Ring-1 neighbors of the target that exist in the dataset, sorted.
inline std::vector<RegionId> contexts(const RegionId& target, const std::set<RegionId>& dataset,
                                      const GridProvider& grid) {
    std::vector<RegionId> out;
    for (const RegionId& n : grid.ring(target, 1)) {
        if (dataset.count(n)) out.push_back(n);
    }
    return out;
}

/// Uniform draw from the candidate pool (same-city dataset regions outside
/// the exclusion disk around the target). Rejection sampling keeps the draw
/// exactly uniform over candidates while advancing the rng deterministically.
inline RegionId sample_negative(const RegionId& target, const std::vector<RegionId>& pool,
                                const GridProvider& grid, const SamplerConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::vector<RegionId> excluded_vec = grid.k_ring(target, cfg.exclusion_radius);
    const std::set<RegionId> excluded(excluded_vec.begin(), excluded_vec.end());
    std::size_t candidates = 0;
    for (const RegionId& id : pool)
        if (!excluded.count(id)) ++candidates;
    if (candidates == 0)
        throw SamplingError("no negative candidates outside the " +
                            std::to_string(cfg.exclusion_radius) + "-ring of " + to_string(target));
    for (;;) {
        const RegionId pick = pool[rng.uniform_below(pool.size())];
        if (!excluded.count(pick)) return pick;
    }
}

struct EpochStream {
    std::vector<TrainingTriple> triples;
    std::size_t positive_pairs = 0;  // pairs found before negative sampling
    std::size_t skipped_pairs = 0;   // pairs dropped for lack of negatives
};

/// One epoch: every (target, context) positive pair once, in rng-shuffled
/// order, with negatives_per_pair fresh negatives each (one triple per
/// negative). Pairs whose negative pool is empty are skipped and counted.
inline EpochStream epoch_stream(const FeatureMatrix& matrix, const GridProvider& grid,
                                const SamplerConfig& cfg, Rng& rng) {
    cfg.validate();
    if (matrix.row_count() == 0) throw InputError("epoch_stream: empty matrix");

    const std::set<RegionId> dataset(matrix.regions.begin(), matrix.regions.end());
    std::map<std::string, std::vector<RegionId>> by_city;
    for (std::size_t i = 0; i < matrix.row_count(); ++i)
        by_city[matrix.city_of[i]].push_back(matrix.regions[i]);
    std::vector<RegionId> all_regions = matrix.regions;
    std::sort(all_regions.begin(), all_regions.end());
    for (auto& [city, regions] : by_city) std::sort(regions.begin(), regions.end());

    std::vector<std::pair<std::size_t, RegionId>> pairs;  // (target row, context)
    for (std::size_t row = 0; row < matrix.row_count(); ++row) {
        for (const RegionId& c : contexts(matrix.regions[row], dataset, grid))
            pairs.emplace_back(row, c);
    }

    EpochStream stream;
    stream.positive_pairs = pairs.size();
    if (pairs.empty()) return stream;

    rng.shuffle(pairs);
    stream.triples.reserve(pairs.size() * static_cast<std::size_t>(cfg.negatives_per_pair));
    for (const auto& [row, context] : pairs) {
        const RegionId& target = matrix.regions[row];
        const std::vector<RegionId>& pool =
            cfg.same_city ? by_city[matrix.city_of[row]] : all_regions;
        try {
            std::vector<TrainingTriple> drawn;
            drawn.reserve(static_cast<std::size_t>(cfg.negatives_per_pair));
            for (int j = 0; j < cfg.negatives_per_pair; ++j)
                drawn.push_back({target, context, sample_negative(target, pool, grid, cfg, rng)});
            stream.triples.insert(stream.triples.end(), drawn.begin(), drawn.end());
        } catch (const SamplingError&) {
            ++stream.skipped_pairs;
        }
    }
    return stream;
}

/// Debug/replay dump: "target,context,negative" per triple.
inline void write_triples_csv(std::ostream& out, const std::vector<TrainingTriple>& triples) {
    out << "target,context,negative\n";
    for (const TrainingTriple& t : triples) {
        out << csv_quote(to_string(t.target)) << ',' << csv_quote(to_string(t.context)) << ','
            << csv_quote(to_string(t.negative)) << '\n';
    }
}

}  // namespace hexembed
