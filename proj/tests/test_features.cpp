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

#include <sstream>

#include <catch_amalgamated.hpp>

#include "hexembed/features.hpp"
#include "hexembed/rng.hpp"

using namespace hexembed;

namespace {

OsmElement point_element(std::int64_t id, Point p, std::map<std::string, std::string> tags) {
    OsmElement e;
    e.id = id;
    e.kind = ElementKind::Node;
    e.geometry = p;
    e.tags = std::move(tags);
    return e;
}

OsmElement line_element(std::int64_t id, std::vector<Point> pts,
                        std::map<std::string, std::string> tags) {
    OsmElement e;
    e.id = id;
    e.kind = ElementKind::Way;
    e.geometry = LineString{std::move(pts)};
    e.tags = std::move(tags);
    return e;
}

OsmElement disc_element(std::int64_t id, Point c, double radius,
                        std::map<std::string, std::string> tags) {
    Polygon p;
    for (int i = 0; i < 20; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / 20;
        p.exterior.push_back({c.x + radius * std::cos(a), c.y + radius * std::sin(a)});
    }
    p.exterior.push_back(p.exterior.front());
    OsmElement e;
    e.id = id;
    e.kind = ElementKind::Way;
    e.geometry = p;
    e.tags = std::move(tags);
    return e;
}

// Brute-force reference: loop over (region, element, tag) with direct
// geometry tests, fully independent of count_tags' BFS cell assignment.
FeatureMatrix count_by_triple_loop(const CityDataset& dataset, const SyntheticGrid& grid,
                                   const TagVocabulary& vocab, int window) {
    std::vector<RegionId> universe;
    const bool has_boundary = !geometry_empty(dataset.boundary);
    for (int q = -window; q <= window; ++q) {
        for (int r = -window; r <= window; ++r) {
            const RegionId cell = RegionId::synthetic(q, r, grid.instance_id());
            const Polygon hex = grid.cell_boundary(cell);
            bool in_universe = false;
            if (has_boundary) {
                in_universe = geometry_intersects_boundary(Geometry{hex}, dataset.boundary) ||
                              intersects(dataset.boundary, hex);
            } else {
                for (const OsmElement& e : dataset.elements) {
                    if (intersects(e.geometry, hex)) {
                        in_universe = true;
                        break;
                    }
                }
            }
            if (in_universe) universe.push_back(cell);
        }
    }
    FeatureMatrix m;
    m.vocabulary = vocab;
    for (const RegionId& cell : universe) {
        const Polygon hex = grid.cell_boundary(cell);
        std::map<std::int32_t, std::int64_t> row;
        for (const OsmElement& e : dataset.elements) {
            if (!intersects(e.geometry, hex)) continue;
            for (const auto& [k, v] : e.tags) {
                const auto col = vocab.column_of(TagVocabulary::feature_name(k, v));
                if (col) ++row[*col];
            }
        }
        m.regions.push_back(cell);
        m.city_of.push_back(dataset.city_name);
        m.rows.emplace_back(row.begin(), row.end());
    }
    return m;
}

bool matrices_equal(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.regions == b.regions && a.city_of == b.city_of && a.rows == b.rows &&
           a.vocabulary == b.vocabulary;
}

}  // namespace

TEST_CASE("build_vocabulary unions and sorts features") {
    CityDataset a{"a", Polygon{}, {point_element(1, {0, 0}, {{"building", "yes"}})}};
    CityDataset b{"b", Polygon{}, {point_element(2, {0, 0}, {{"amenity", "school"}})}};
    const TagVocabulary v = build_vocabulary({a, b}, TagFilter::defaults());
    CHECK(v.features() == std::vector<std::string>{"amenity_school", "building_yes"});
}

TEST_CASE("explicit vocabulary wins even for absent features") {
    CityDataset a{"a", Polygon{}, {point_element(1, {0, 0}, {{"building", "yes"}})}};
    const TagVocabulary v = build_vocabulary(
        {a}, TagFilter::defaults(), std::vector<std::string>{"waterway_river", "aeroway_gate"});
    CHECK(v.features() == std::vector<std::string>{"waterway_river", "aeroway_gate"});
}

TEST_CASE("empty vocabulary is a configuration error") {
    CityDataset a{"a", Polygon{}, {point_element(1, {0, 0}, {{"craft", "pottery"}})}};
    CHECK_THROWS_AS(build_vocabulary({a}, TagFilter::defaults()), InputError);
    CHECK_THROWS_AS(build_vocabulary({}, TagFilter::defaults()), InputError);
}

TEST_CASE("single point element counts once in its cell") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features({"amenity_school", "building_yes"});
    CityDataset ds{"town", Polygon{}, {point_element(1, {0.1, 0.1}, {{"amenity", "school"}})}};
    const FeatureMatrix m = count_tags(ds, grid, Resolution{}, vocab);
    REQUIRE(m.row_count() == 1);
    CHECK(m.regions[0] == RegionId::synthetic(0, 0));
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 1) == 0);
}

TEST_CASE("a way crossing two cells is counted in both") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features({"building_yes"});
    const Point c0 = grid.cell_center(RegionId::synthetic(0, 0));
    const Point c1 = grid.cell_center(RegionId::synthetic(1, 0));
    CityDataset ds{"town", Polygon{}, {line_element(1, {c0, c1}, {{"building", "yes"}})}};
    const FeatureMatrix m = count_tags(ds, grid, Resolution{}, vocab);
    REQUIRE(m.row_count() == 2);
    std::int64_t col_sum = 0;
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        CHECK(m.at(i, 0) == 1);
        col_sum += m.at(i, 0);
    }
    CHECK(col_sum == 2);
}

TEST_CASE("multi-tag elements increment one column per tag") {
    SyntheticGrid grid;
    const TagVocabulary vocab =
        TagVocabulary::from_features({"amenity_school", "building_yes", "leisure_park"});
    CityDataset ds{"town", Polygon{},
                   {point_element(1, {0, 0}, {{"amenity", "school"}, {"building", "yes"}})}};
    const FeatureMatrix m = count_tags(ds, grid, Resolution{}, vocab);
    REQUIRE(m.row_count() == 1);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(0, 2) == 0);
}

TEST_CASE("tags outside the vocabulary are tallied, not counted") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features({"building_yes"});
    CityDataset ds{"town", Polygon{},
                   {point_element(1, {0, 0}, {{"building", "yes"}, {"shop", "bakery"}})}};
    CountDiagnostics diag;
    const FeatureMatrix m = count_tags(ds, grid, Resolution{}, vocab, &diag);
    CHECK(m.at(0, 0) == 1);
    CHECK(diag.unknown_tag_occurrences == 1);
}

TEST_CASE("random scenes match the triple-loop oracle") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features(
        {"amenity_school", "building_yes", "leisure_park", "natural_water", "shop_bakery"});
    const std::vector<std::pair<std::string, std::string>> tag_pool = {
        {"amenity", "school"}, {"building", "yes"},   {"leisure", "park"},
        {"natural", "water"},  {"shop", "bakery"},    {"craft", "pottery"}};
    Rng rng(555);

    for (int scene = 0; scene < 8; ++scene) {
        CityDataset ds;
        ds.city_name = "scene" + std::to_string(scene);
        const int n_elements = 10 + static_cast<int>(rng.uniform_below(21));
        for (int i = 0; i < n_elements; ++i) {
            const double x = rng.uniform01() * 8 - 4;
            const double y = rng.uniform01() * 8 - 4;
            std::map<std::string, std::string> tags;
            const int n_tags = 1 + static_cast<int>(rng.uniform_below(3));
            for (int t = 0; t < n_tags; ++t) {
                const auto& [k, v] = tag_pool[rng.uniform_below(tag_pool.size())];
                tags[k] = v;
            }
            switch (rng.uniform_below(3)) {
                case 0:
                    ds.elements.push_back(point_element(i, {x, y}, tags));
                    break;
                case 1:
                    ds.elements.push_back(line_element(
                        i, {{x, y}, {x + rng.uniform01() * 3 - 1.5, y + rng.uniform01() * 3 - 1.5}},
                        tags));
                    break;
                default:
                    ds.elements.push_back(
                        disc_element(i, {x, y}, 0.2 + rng.uniform01() * 1.2, tags));
            }
        }
        if (scene % 2 == 1) {
            Polygon boundary;
            boundary.exterior = {{-3, -3}, {3, -3}, {3, 3}, {-3, 3}, {-3, -3}};
            ds.boundary = boundary;
        }
        const FeatureMatrix fast = count_tags(ds, grid, Resolution{}, vocab);
        const FeatureMatrix slow = count_by_triple_loop(ds, grid, vocab, 12);
        CHECK(matrices_equal(fast, slow));
    }
}

TEST_CASE("count_tags is invariant to element order and thread count") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features({"building_yes", "leisure_park"});
    CityDataset ds{"town", Polygon{}, {}};
    Rng rng(77);
    for (int i = 0; i < 40; ++i) {
        ds.elements.push_back(disc_element(i, {rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3},
                                           0.5, {{i % 2 ? "building" : "leisure",
                                                  i % 2 ? "yes" : "park"}}));
    }
    const FeatureMatrix base = count_tags(ds, grid, Resolution{}, vocab);

    CityDataset shuffled = ds;
    rng.shuffle(shuffled.elements);
    CHECK(matrices_equal(base, count_tags(shuffled, grid, Resolution{}, vocab)));
    CHECK(matrices_equal(base, count_tags(ds, grid, Resolution{}, vocab, nullptr, 4)));
}

TEST_CASE("column sums satisfy the double-counting identity") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features({"building_yes"});
    CityDataset ds{"town", Polygon{}, {}};
    Rng rng(99);
    for (int i = 0; i < 15; ++i) {
        ds.elements.push_back(disc_element(
            i, {rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3}, 0.4 + rng.uniform01(), 
            {{"building", "yes"}}));
    }
    const FeatureMatrix m = count_tags(ds, grid, Resolution{}, vocab);
    std::int64_t col_sum = 0;
    for (std::size_t i = 0; i < m.row_count(); ++i) col_sum += m.at(i, 0);
    std::int64_t expected = 0;
    for (const OsmElement& e : ds.elements)
        expected += static_cast<std::int64_t>(grid.polygon_to_cells(e.geometry, Resolution{}).size());
    CHECK(col_sum == expected);
}

TEST_CASE("drop_empty_regions removes zero rows and is idempotent") {
    FeatureMatrix m;
    m.vocabulary = TagVocabulary::from_features({"building_yes"});
    m.regions = {RegionId::synthetic(0, 0), RegionId::synthetic(1, 0), RegionId::synthetic(2, 0)};
    m.city_of = {"t", "t", "t"};
    m.rows = {{{0, 2}}, {}, {{0, 5}}};

    const FeatureMatrix d = drop_empty_regions(m);
    REQUIRE(d.row_count() == 2);
    CHECK(d.regions == std::vector<RegionId>{RegionId::synthetic(0, 0), RegionId::synthetic(2, 0)});

    const FeatureMatrix dd = drop_empty_regions(d);
    CHECK(matrices_equal(d, dd));

    FeatureMatrix none = d;  // no zero rows: identity
    CHECK(matrices_equal(drop_empty_regions(none), d));

    FeatureMatrix all_empty;
    all_empty.vocabulary = m.vocabulary;
    all_empty.regions = {RegionId::synthetic(0, 0)};
    all_empty.city_of = {"t"};
    all_empty.rows = {{}};
    CHECK_THROWS_AS(drop_empty_regions(all_empty), DataError);
}

TEST_CASE("coverage percentages and normalization") {
    const TagVocabulary vocab =
        TagVocabulary::from_features({"building_house", "building_yes", "leisure_park"});

    FeatureMatrix city_a;
    city_a.vocabulary = vocab;
    for (int i = 0; i < 4; ++i) {
        city_a.regions.push_back(RegionId::synthetic(i, 0));
        city_a.city_of.push_back("alpha");
    }
    // two of four regions have a building_* feature
    city_a.rows = {{{0, 1}}, {{1, 3}}, {{2, 1}}, {{2, 2}}};

    const CoverageStats solo = coverage_stats({city_a});
    const auto key_at = [&](const std::string& key) {
        return static_cast<std::size_t>(
            std::find(solo.keys.begin(), solo.keys.end(), key) - solo.keys.begin());
    };
    CHECK(solo.raw_percent[0][key_at("building")] == Catch::Approx(50.0));
    CHECK(solo.raw_percent[0][key_at("leisure")] == Catch::Approx(50.0));

    // second city: 1 of 5 regions has building -> 20% vs 50%: normalized 0.4 / 1.0
    FeatureMatrix city_b;
    city_b.vocabulary = vocab;
    for (int i = 0; i < 5; ++i) {
        city_b.regions.push_back(RegionId::synthetic(i, 5));
        city_b.city_of.push_back("beta");
    }
    city_b.rows = {{{0, 1}}, {}, {}, {}, {}};

    const CoverageStats both = coverage_stats({city_a, city_b});
    REQUIRE(both.cities == std::vector<std::string>{"alpha", "beta"});
    const auto bk = static_cast<std::size_t>(
        std::find(both.keys.begin(), both.keys.end(), "building") - both.keys.begin());
    const auto lk = static_cast<std::size_t>(
        std::find(both.keys.begin(), both.keys.end(), "leisure") - both.keys.begin());
    CHECK(both.raw_percent[1][bk] == Catch::Approx(20.0));
    CHECK(both.normalized[0][bk] == Catch::Approx(1.0));
    CHECK(both.normalized[1][bk] == Catch::Approx(0.4));
    // beta has no leisure at all: 0% raw and 0 normalized
    CHECK(both.raw_percent[1][lk] == Catch::Approx(0.0));
    CHECK(both.normalized[1][lk] == Catch::Approx(0.0));
}

TEST_CASE("feature matrix CSV round-trips exactly") {
    SyntheticGrid grid;
    const TagVocabulary vocab = TagVocabulary::from_features({"building_yes", "leisure_park"});
    CityDataset ds{"Comma, Town", Polygon{}, {}};
    Rng rng(31);
    for (int i = 0; i < 12; ++i)
        ds.elements.push_back(point_element(i, {rng.uniform01() * 6 - 3, rng.uniform01() * 6 - 3},
                                            {{"building", "yes"}}));
    const FeatureMatrix m = count_tags(ds, grid, Resolution{}, vocab);

    std::ostringstream out;
    write_feature_matrix_csv(out, m);
    std::istringstream in(out.str());
    const FeatureMatrix back = read_feature_matrix_csv(in);
    CHECK(matrices_equal(m, back));

    std::ostringstream out2;
    write_feature_matrix_csv(out2, back);
    CHECK(out.str() == out2.str());
}

TEST_CASE("merge_matrices rejects duplicate regions and mixed vocabularies") {
    FeatureMatrix a, b;
    a.vocabulary = b.vocabulary = TagVocabulary::from_features({"building_yes"});
    a.regions = {RegionId::synthetic(0, 0)};
    a.city_of = {"a"};
    a.rows = {{{0, 1}}};
    b.regions = {RegionId::synthetic(0, 0)};
    b.city_of = {"b"};
    b.rows = {{{0, 1}}};
    CHECK_THROWS_AS(merge_matrices({a, b}), DataError);

    b.regions = {RegionId::synthetic(1, 0)};
    const FeatureMatrix ok = merge_matrices({a, b});
    CHECK(ok.row_count() == 2);

    FeatureMatrix c = b;
    c.vocabulary = TagVocabulary::from_features({"leisure_park"});
    CHECK_THROWS_AS(merge_matrices({a, c}), ShapeError);
}
