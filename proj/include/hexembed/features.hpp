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
#include <cstdint>
#include <future>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "hexembed/grid.hpp"
#include "hexembed/io.hpp"
#include "hexembed/osm.hpp"

namespace hexembed {

/// Ordered feature space: "key_value" names define the canonical column
/// order used by every downstream artifact.
class TagVocabulary {
public:
    TagVocabulary() = default;

    static TagVocabulary from_features(std::vector<std::string> features) {
        TagVocabulary v;
        v.features_ = std::move(features);
        for (std::size_t i = 0; i < v.features_.size(); ++i) {
            if (!v.index_.emplace(v.features_[i], static_cast<std::int32_t>(i)).second)
                throw InputError("duplicate feature in vocabulary: " + v.features_[i]);
        }
        return v;
    }

    static std::string feature_name(const std::string& key, const std::string& value) {
        return key + "_" + value;
    }

    /// OSM key of a feature: the part before the first underscore
    /// (keys themselves never contain one; values may).
    static std::string key_of(const std::string& feature) {
        return feature.substr(0, feature.find('_'));
    }

    const std::vector<std::string>& features() const { return features_; }
    std::size_t size() const { return features_.size(); }
    bool empty() const { return features_.empty(); }

    std::optional<std::int32_t> column_of(const std::string& feature) const {
        auto it = index_.find(feature);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const TagVocabulary& other) const { return features_ == other.features_; }

private:
    std::vector<std::string> features_;
    std::unordered_map<std::string, std::int32_t> index_;
};

/// One feature per line; blank lines ignored.
inline TagVocabulary load_vocabulary(std::istream& in) {
    std::vector<std::string> features;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) features.push_back(line);
    }
    return TagVocabulary::from_features(std::move(features));
}

/// If an explicit list is given it is used verbatim; otherwise every
/// key_value pair present in any dataset after filtering, sorted.
inline TagVocabulary build_vocabulary(const std::vector<CityDataset>& datasets,
                                      const TagFilter& filter,
                                      const std::optional<std::vector<std::string>>& explicit_list =
                                          std::nullopt) {
    if (datasets.empty()) throw InputError("build_vocabulary: no datasets");
    if (explicit_list) {
        if (explicit_list->empty()) throw InputError("explicit vocabulary is empty");
        return TagVocabulary::from_features(*explicit_list);
    }
    std::set<std::string> names;
    for (const CityDataset& ds : datasets) {
        for (const OsmElement& e : ds.elements) {
            for (const auto& [k, v] : e.tags) {
                if (filter.key_allowed(k) && !filter.pair_discarded(k, v))
                    names.insert(TagVocabulary::feature_name(k, v));
            }
        }
    }
    if (names.empty()) throw InputError("vocabulary is empty: no tags survive filtering");
    return TagVocabulary::from_features({names.begin(), names.end()});
}

/// Sparse region x feature count matrix. Rows follow the sorted region-id
/// order; entries are (column, count) pairs sorted by column with count > 0.
struct FeatureMatrix {
    std::vector<RegionId> regions;
    std::vector<std::string> city_of;
    std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> rows;
    TagVocabulary vocabulary;

    std::size_t row_count() const { return regions.size(); }
    std::size_t col_count() const { return vocabulary.size(); }

    std::int64_t at(std::size_t row, std::int32_t col) const {
        const auto& r = rows[row];
        auto it = std::lower_bound(r.begin(), r.end(), col,
                                   [](const auto& e, std::int32_t c) { return e.first < c; });
        return (it != r.end() && it->first == col) ? it->second : 0;
    }

    std::vector<double> dense_row(std::size_t row) const {
        std::vector<double> out(col_count(), 0.0);
        for (const auto& [col, count] : rows[row]) out[static_cast<std::size_t>(col)] = static_cast<double>(count);
        return out;
    }

    std::int64_t row_sum(std::size_t row) const {
        std::int64_t s = 0;
        for (const auto& [col, count] : rows[row]) s += count;
        return s;
    }

    std::optional<std::size_t> row_of(const RegionId& id) const {
        auto it = std::lower_bound(regions.begin(), regions.end(), id);
        if (it != regions.end() && *it == id)
            return static_cast<std::size_t>(it - regions.begin());
        return std::nullopt;
    }
};

struct CountDiagnostics {
    std::size_t unknown_tag_occurrences = 0;  // tags outside the vocabulary
    std::size_t out_of_boundary_cells = 0;    // element cells beyond the city polyfill
};

/// Counts every vocabulary tag of every element into every region whose
/// hexagon the element intersects (multi-region elements count in each).
/// The region universe is the city boundary's cell cover when a boundary is
/// present, otherwise the union of the elements' own cells. Rows come back
/// sorted by region id, including still-empty regions.
inline FeatureMatrix count_tags(const CityDataset& dataset, const GridProvider& grid,
                                Resolution res, const TagVocabulary& vocab,
                                CountDiagnostics* diagnostics = nullptr, int threads = 1) {
    if (vocab.empty()) throw InputError("count_tags: empty vocabulary");
    CountDiagnostics local;
    CountDiagnostics& diag = diagnostics ? *diagnostics : local;

    // per-element cell cover, computed in parallel chunks
    const std::size_t n = dataset.elements.size();
    std::vector<std::set<RegionId>> covers(n);
    const int workers = std::max(1, threads);
    if (workers == 1 || n < 32) {
        for (std::size_t i = 0; i < n; ++i)
            covers[i] = grid.polygon_to_cells(dataset.elements[i].geometry, res);
    } else {
        std::vector<std::future<void>> futures;
        const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
        for (int w = 0; w < workers; ++w) {
            const std::size_t lo = static_cast<std::size_t>(w) * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            futures.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i)
                    covers[i] = grid.polygon_to_cells(dataset.elements[i].geometry, res);
            }));
        }
        for (auto& f : futures) f.get();
    }

    std::set<RegionId> universe;
    const bool has_boundary = !geometry_empty(dataset.boundary);
    if (has_boundary) {
        universe = grid.polygon_to_cells(dataset.boundary, res);
    } else {
        for (const auto& cover : covers) universe.insert(cover.begin(), cover.end());
    }

    std::map<RegionId, std::map<std::int32_t, std::int64_t>> counts;
    for (const RegionId& cell : universe) counts[cell];  // keep empty regions as rows
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::int32_t> cols;
        for (const auto& [k, v] : dataset.elements[i].tags) {
            const auto col = vocab.column_of(TagVocabulary::feature_name(k, v));
            if (col) {
                cols.push_back(*col);
            } else {
                ++diag.unknown_tag_occurrences;
            }
        }
        if (cols.empty()) continue;
        for (const RegionId& cell : covers[i]) {
            auto it = counts.find(cell);
            if (it == counts.end()) {
                ++diag.out_of_boundary_cells;
                continue;
            }
            for (std::int32_t col : cols) ++it->second[col];
        }
    }

    FeatureMatrix m;
    m.vocabulary = vocab;
    m.regions.reserve(counts.size());
    for (auto& [cell, row] : counts) {
        m.regions.push_back(cell);
        m.city_of.push_back(dataset.city_name);
        m.rows.emplace_back(row.begin(), row.end());
    }
    return m;
}

/// Concatenates matrices sharing one vocabulary (rows stay grouped by input
/// order; region ids must not repeat across inputs).
inline FeatureMatrix merge_matrices(const std::vector<FeatureMatrix>& matrices) {
    if (matrices.empty()) throw InputError("merge_matrices: nothing to merge");
    FeatureMatrix out;
    out.vocabulary = matrices.front().vocabulary;
    for (const FeatureMatrix& m : matrices) {
        if (!(m.vocabulary == out.vocabulary))
            throw ShapeError("merge_matrices: vocabularies differ");
        out.regions.insert(out.regions.end(), m.regions.begin(), m.regions.end());
        out.city_of.insert(out.city_of.end(), m.city_of.begin(), m.city_of.end());
        out.rows.insert(out.rows.end(), m.rows.begin(), m.rows.end());
    }
    std::set<RegionId> unique(out.regions.begin(), out.regions.end());
    if (unique.size() != out.regions.size())
        throw DataError("merge_matrices: duplicate region ids across inputs");
    return out;
}

/// Removes all-zero rows, preserving survivor order.
inline FeatureMatrix drop_empty_regions(const FeatureMatrix& m) {
    FeatureMatrix out;
    out.vocabulary = m.vocabulary;
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        if (m.rows[i].empty()) continue;
        out.regions.push_back(m.regions[i]);
        out.city_of.push_back(m.city_of[i]);
        out.rows.push_back(m.rows[i]);
    }
    if (out.regions.empty()) throw DataError("all regions are empty after filtering");
    return out;
}

/// Per (city, key) coverage: percent of the city's regions with at least one
/// element under the key, plus the per-key column-max normalization.
struct CoverageStats {
    std::vector<std::string> cities;
    std::vector<std::string> keys;
    std::vector<std::vector<double>> raw_percent;  // cities x keys
    std::vector<std::vector<double>> normalized;   // same shape, per-key max = 1
};

inline CoverageStats coverage_stats(const std::vector<FeatureMatrix>& matrices) {
    if (matrices.empty()) throw InputError("coverage_stats: no matrices");
    const TagVocabulary& vocab = matrices.front().vocabulary;
    for (const FeatureMatrix& m : matrices)
        if (!(m.vocabulary == vocab)) throw ShapeError("coverage_stats: vocabularies differ");

    std::set<std::string> key_set;
    std::vector<std::string> col_key(vocab.size());
    for (std::size_t c = 0; c < vocab.size(); ++c) {
        col_key[c] = TagVocabulary::key_of(vocab.features()[c]);
        key_set.insert(col_key[c]);
    }
    CoverageStats stats;
    stats.keys.assign(key_set.begin(), key_set.end());
    std::unordered_map<std::string, std::size_t> key_index;
    for (std::size_t i = 0; i < stats.keys.size(); ++i) key_index[stats.keys[i]] = i;

    std::map<std::string, std::pair<std::size_t, std::vector<std::size_t>>> per_city;
    for (const FeatureMatrix& m : matrices) {
        for (std::size_t row = 0; row < m.row_count(); ++row) {
            auto& [total, hits] = per_city[m.city_of[row]];
            if (hits.empty()) hits.assign(stats.keys.size(), 0);
            ++total;
            std::set<std::size_t> seen_keys;
            for (const auto& [col, count] : m.rows[row]) {
                if (count > 0) seen_keys.insert(key_index[col_key[static_cast<std::size_t>(col)]]);
            }
            for (std::size_t k : seen_keys) ++hits[k];
        }
    }

    for (const auto& [city, data] : per_city) {
        stats.cities.push_back(city);
        std::vector<double> row(stats.keys.size(), 0.0);
        for (std::size_t k = 0; k < stats.keys.size(); ++k)
            row[k] = data.first == 0 ? 0.0
                                     : 100.0 * static_cast<double>(data.second[k]) /
                                           static_cast<double>(data.first);
        stats.raw_percent.push_back(std::move(row));
    }
    stats.normalized = stats.raw_percent;
    for (std::size_t k = 0; k < stats.keys.size(); ++k) {
        double mx = 0.0;
        for (std::size_t c = 0; c < stats.cities.size(); ++c)
            mx = std::max(mx, stats.raw_percent[c][k]);
        for (std::size_t c = 0; c < stats.cities.size(); ++c)
            stats.normalized[c][k] = mx > 0.0 ? stats.raw_percent[c][k] / mx : 0.0;
    }
    return stats;
}

// ---------------------------------------------------------------------------
// CSV forms

inline void write_feature_matrix_csv(std::ostream& out, const FeatureMatrix& m) {
    out << "region_id,city";
    for (const std::string& f : m.vocabulary.features()) out << ',' << csv_quote(f);
    out << '\n';
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        out << csv_quote(to_string(m.regions[i])) << ',' << csv_quote(m.city_of[i]);
        std::size_t next = 0;
        const auto& row = m.rows[i];
        for (std::size_t c = 0; c < m.col_count(); ++c) {
            if (next < row.size() && static_cast<std::size_t>(row[next].first) == c) {
                out << ',' << row[next].second;
                ++next;
            } else {
                out << ",0";
            }
        }
        out << '\n';
    }
}

inline FeatureMatrix read_feature_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("feature matrix CSV is empty");
    const std::vector<std::string> header = csv_split_line(line);
    if (header.size() < 3 || header[0] != "region_id" || header[1] != "city")
        throw DataError("feature matrix CSV header must start with region_id,city");
    FeatureMatrix m;
    m.vocabulary =
        TagVocabulary::from_features({header.begin() + 2, header.end()});
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv_split_line(line);
        if (fields.size() != header.size())
            throw ParseError("wrong field count in feature matrix CSV", line_no);
        m.regions.push_back(parse_region_id(fields[0]));
        m.city_of.push_back(fields[1]);
        std::vector<std::pair<std::int32_t, std::int64_t>> row;
        for (std::size_t c = 2; c < fields.size(); ++c) {
            const std::int64_t v = std::strtoll(fields[c].c_str(), nullptr, 10);
            if (v < 0) throw ParseError("negative count in feature matrix CSV", line_no);
            if (v != 0) row.emplace_back(static_cast<std::int32_t>(c - 2), v);
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

inline void write_coverage_csv(std::ostream& out, const CoverageStats& stats, bool normalized) {
    out << "city";
    for (const std::string& k : stats.keys) out << ',' << csv_quote(k);
    out << '\n';
    const auto& table = normalized ? stats.normalized : stats.raw_percent;
    for (std::size_t c = 0; c < stats.cities.size(); ++c) {
        out << csv_quote(stats.cities[c]);
        for (double v : table[c]) out << ',' << format_double(v);
        out << '\n';
    }
}

}  // namespace hexembed
