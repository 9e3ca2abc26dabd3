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

#include "hexembed/osm.hpp"

using namespace hexembed;

TEST_CASE("single JSONL record parses to one element") {
    std::istringstream in(
        R"({"id":1,"kind":"node","geometry":{"type":"Point","coordinates":[17.03,51.11]},"tags":{"amenity":"school"}})"
        "\n");
    ParseStats stats;
    const auto elements = parse_elements(in, ElementFormat::ElementsJsonl, ParseMode::Lenient, &stats);
    REQUIRE(elements.size() == 1);
    CHECK(elements[0].id == 1);
    CHECK(elements[0].kind == ElementKind::Node);
    CHECK(elements[0].tags.at("amenity") == "school");
    CHECK(stats.parsed == 1);
    CHECK(stats.errors.empty());
}

TEST_CASE("untagged and geometry-less records are skipped with counters") {
    std::istringstream in(
        R"({"id":1,"kind":"node","geometry":{"type":"Point","coordinates":[0,0]},"tags":{}})"
        "\n"
        R"({"id":2,"kind":"node","tags":{"amenity":"school"}})"
        "\n");
    ParseStats stats;
    const auto elements = parse_elements(in, ElementFormat::ElementsJsonl, ParseMode::Lenient, &stats);
    CHECK(elements.empty());
    CHECK(stats.skipped_untagged == 1);
    CHECK(stats.skipped_no_geometry == 1);
}

TEST_CASE("lenient mode records malformed lines, strict mode throws") {
    const std::string data =
        R"({"id":1,"kind":"node","geometry":{"type":"Point","coordinates":[1,1]},"tags":{"shop":"bakery"}})"
        "\n"
        "this is not json\n"
        R"({"id":3,"kind":"node","geometry":{"type":"Point","coordinates":[2,2]},"tags":{"shop":"butcher"}})"
        "\n";

    std::istringstream lenient(data);
    ParseStats stats;
    const auto elements =
        parse_elements(lenient, ElementFormat::ElementsJsonl, ParseMode::Lenient, &stats);
    CHECK(elements.size() == 2);
    REQUIRE(stats.errors.size() == 1);
    CHECK(stats.errors[0].find("line 2") != std::string::npos);

    std::istringstream strict(data);
    CHECK_THROWS_AS(parse_elements(strict, ElementFormat::ElementsJsonl, ParseMode::Strict),
                    ParseError);
}

TEST_CASE("unknown format tag raises an input error") {
    CHECK_THROWS_AS(element_format_from("parquet"), InputError);
    CHECK(element_format_from("jsonl") == ElementFormat::ElementsJsonl);
    CHECK(element_format_from("osm-xml") == ElementFormat::OsmXml);
}

TEST_CASE("default tag filter matches the checked keys and discard list") {
    const TagFilter f = TagFilter::defaults();
    REQUIRE(f.allowed_keys.size() == 15);
    CHECK(f.key_allowed("amenity"));
    CHECK(f.key_allowed("waterway"));
    CHECK_FALSE(f.key_allowed("barrier"));
    CHECK_FALSE(f.key_allowed("highway"));
    CHECK(f.discarded_pairs.size() == 6);
    CHECK(f.pair_discarded("natural", "tree"));
    CHECK(f.pair_discarded("landuse", "grass"));
    CHECK_FALSE(f.pair_discarded("landuse", "forest"));
}

TEST_CASE("filter_tags keeps allowed keys and drops discarded pairs") {
    const TagFilter f = TagFilter::defaults();
    OsmElement e;
    e.id = 7;
    e.geometry = Point{0, 0};

    e.tags = {{"building", "yes"}, {"barrier", "fence"}};
    auto kept = filter_tags(e, f);
    REQUIRE(kept.has_value());
    CHECK(kept->tags == std::map<std::string, std::string>{{"building", "yes"}});

    e.tags = {{"natural", "tree"}};
    CHECK_FALSE(filter_tags(e, f).has_value());

    e.tags = {{"amenity", "school"}};
    kept = filter_tags(e, f);
    REQUIRE(kept.has_value());
    CHECK(kept->tags == e.tags);
}

TEST_CASE("filter_tags is idempotent") {
    const TagFilter f = TagFilter::defaults();
    OsmElement e;
    e.geometry = Point{0, 0};
    e.tags = {{"building", "yes"}, {"craft", "brewery"}, {"amenity", "waste_basket"},
              {"leisure", "park"}};
    const auto once = filter_tags(e, f);
    REQUIRE(once.has_value());
    const auto twice = filter_tags(*once, f);
    REQUIRE(twice.has_value());
    CHECK(once->tags == twice->tags);
}

TEST_CASE("clip_to_boundary keeps intersecting geometries") {
    Polygon boundary;
    boundary.exterior = {{0, 0}, {10, 0}, {10, 10}, {0, 10}, {0, 0}};
    const Geometry b{boundary};

    OsmElement inside, outside, straddling;
    inside.id = 1;
    inside.geometry = Point{5, 5};
    outside.id = 2;
    Polygon far;
    far.exterior = {{20, 20}, {21, 20}, {21, 21}, {20, 21}, {20, 20}};
    outside.geometry = far;
    straddling.id = 3;
    Polygon cross;
    cross.exterior = {{9, 9}, {12, 9}, {12, 12}, {9, 12}, {9, 9}};
    straddling.geometry = cross;

    const auto kept = clip_to_boundary({inside, outside, straddling}, b);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].id == 1);
    CHECK(kept[1].id == 3);
}

TEST_CASE("jsonl serialization round-trips byte-exactly") {
    const std::string data =
        R"({"id":1,"kind":"node","geometry":{"type":"Point","coordinates":[17.03,51.11]},"tags":{"amenity":"school","shop":"bakery"}})"
        "\n"
        R"({"id":2,"kind":"way","geometry":{"type":"LineString","coordinates":[[0,0],[1.5,2.25]]},"tags":{"waterway":"river"}})"
        "\n";
    std::istringstream in(data);
    const auto elements = parse_elements(in, ElementFormat::ElementsJsonl);

    std::ostringstream first;
    write_elements_jsonl(first, elements);

    std::istringstream again(first.str());
    const auto reparsed = parse_elements(again, ElementFormat::ElementsJsonl);
    std::ostringstream second;
    write_elements_jsonl(second, reparsed);

    CHECK(first.str() == second.str());
    REQUIRE(reparsed.size() == elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        CHECK(reparsed[i].id == elements[i].id);
        CHECK(reparsed[i].tags == elements[i].tags);
    }
}

TEST_CASE("osm xml adapter resolves nodes and ways") {
    const std::string xml = R"(<?xml version="1.0" encoding="UTF-8"?>
<osm version="0.6">
  <node id="1" lat="51.0" lon="17.0"/>
  <node id="2" lat="51.0" lon="17.001"/>
  <node id="3" lat="51.001" lon="17.001"/>
  <node id="4" lat="51.002" lon="17.002">
    <tag k="amenity" v="cafe"/>
    <tag k="name" v="Fish &amp; Chips"/>
  </node>
  <way id="10">
    <nd ref="1"/>
    <nd ref="2"/>
    <nd ref="3"/>
    <nd ref="1"/>
    <tag k="building" v="yes"/>
  </way>
  <way id="11">
    <nd ref="1"/>
    <nd ref="3"/>
    <tag k="waterway" v="stream"/>
  </way>
  <relation id="20">
    <member type="way" ref="10" role="outer"/>
    <tag k="landuse" v="forest"/>
  </relation>
</osm>)";
    std::istringstream in(xml);
    ParseStats stats;
    const auto elements = parse_elements(in, ElementFormat::OsmXml, ParseMode::Lenient, &stats);
    REQUIRE(elements.size() == 3);

    CHECK(elements[0].id == 4);
    CHECK(elements[0].kind == ElementKind::Node);
    CHECK(elements[0].tags.at("name") == "Fish & Chips");

    CHECK(elements[1].id == 10);
    CHECK(elements[1].kind == ElementKind::Way);
    CHECK(std::holds_alternative<Polygon>(elements[1].geometry));  // closed way

    CHECK(elements[2].id == 11);
    CHECK(std::holds_alternative<LineString>(elements[2].geometry));  // open way

    CHECK(stats.parsed == 3);
    CHECK(stats.skipped_no_geometry >= 1);  // the relation
}

TEST_CASE("boundary feature parsing") {
    const auto j = nlohmann::json::parse(R"({
        "type": "Feature",
        "properties": {"name": "Testville"},
        "geometry": {"type": "Polygon",
                     "coordinates": [[[0,0],[4,0],[4,4],[0,4],[0,0]]]}
    })");
    const auto [name, geom] = parse_boundary_feature(j);
    CHECK(name == "Testville");
    CHECK(std::holds_alternative<Polygon>(geom));

    CHECK_THROWS_AS(parse_boundary_feature(nlohmann::json::parse(R"({"type":"Feature"})")),
                    DataError);
    CHECK_THROWS_AS(parse_boundary_feature(nlohmann::json::parse(
                        R"({"type":"Feature","properties":{"name":"X"},
                            "geometry":{"type":"Point","coordinates":[0,0]}})")),
                    DataError);
}
