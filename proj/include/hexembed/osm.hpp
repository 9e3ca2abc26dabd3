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
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hexembed/errors.hpp"
#include "hexembed/geometry.hpp"

namespace hexembed {

enum class ElementKind : std::uint8_t { Node, Way, Relation };

inline std::string to_string(ElementKind k) {
    switch (k) {
        case ElementKind::Node: return "node";
        case ElementKind::Way: return "way";
        default: return "relation";
    }
}

inline ElementKind element_kind_from(const std::string& s) {
    if (s == "node") return ElementKind::Node;
    if (s == "way") return ElementKind::Way;
    if (s == "relation") return ElementKind::Relation;
    throw DataError("unknown element kind: " + s);
}

struct OsmElement {
    std::int64_t id = 0;
    ElementKind kind = ElementKind::Node;
    Geometry geometry;
    std::map<std::string, std::string> tags;
};

/// Key whitelist plus explicit (key, value) discard list.
struct TagFilter {
    std::vector<std::string> allowed_keys;
    std::set<std::pair<std::string, std::string>> discarded_pairs;

    /// The 15 checked keys and the six discarded pairs.
    static TagFilter defaults() {
        TagFilter f;
        f.allowed_keys = {"aeroway",  "amenity", "building", "healthcare", "historic",
                          "landuse",  "leisure", "military", "natural",    "office",
                          "shop",     "sport",   "tourism",  "water",      "waterway"};
        f.discarded_pairs = {{"amenity", "waste_basket"}, {"landuse", "grass"},
                             {"historic", "tomb"},        {"natural", "tree"},
                             {"natural", "tree_row"},     {"natural", "valley"}};
        return f;
    }

    bool key_allowed(const std::string& key) const {
        return std::find(allowed_keys.begin(), allowed_keys.end(), key) != allowed_keys.end();
    }

    bool pair_discarded(const std::string& key, const std::string& value) const {
        return discarded_pairs.count({key, value}) > 0;
    }

    static TagFilter from_json(const nlohmann::json& j) {
        TagFilter f;
        if (j.contains("allowed_keys"))
            for (const auto& k : j["allowed_keys"]) f.allowed_keys.push_back(k.get<std::string>());
        else
            f.allowed_keys = defaults().allowed_keys;
        if (j.contains("discarded_pairs"))
            for (const auto& p : j["discarded_pairs"])
                f.discarded_pairs.insert({p[0].get<std::string>(), p[1].get<std::string>()});
        else
            f.discarded_pairs = defaults().discarded_pairs;
        if (f.allowed_keys.empty()) throw InputError("tag filter allows no keys");
        return f;
    }
};

struct CityDataset {
    std::string city_name;
    Geometry boundary = Polygon{};  // Polygon or MultiPolygon; empty when absent
    std::vector<OsmElement> elements;
};

enum class ElementFormat : std::uint8_t { ElementsJsonl, OsmXml };

inline ElementFormat element_format_from(const std::string& s) {
    if (s == "jsonl" || s == "elements-jsonl") return ElementFormat::ElementsJsonl;
    if (s == "xml" || s == "osm-xml") return ElementFormat::OsmXml;
    throw InputError("unknown element format: " + s);
}

enum class ParseMode : std::uint8_t { Lenient, Strict };

struct ParseStats {
    std::size_t parsed = 0;
    std::size_t skipped_untagged = 0;
    std::size_t skipped_no_geometry = 0;
    std::vector<std::string> errors;  // lenient mode only; "line N: reason"
};

namespace detail {

inline OsmElement element_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DataError("record is not a JSON object");
    if (!j.contains("id") || !j.contains("kind")) throw DataError("record missing id or kind");
    OsmElement e;
    e.id = j["id"].get<std::int64_t>();
    e.kind = element_kind_from(j["kind"].get<std::string>());
    if (!j.contains("geometry") || j["geometry"].is_null())
        throw DataError("record has no geometry");
    e.geometry = geojson::parse_geometry(j["geometry"]);
    if (j.contains("tags")) {
        if (!j["tags"].is_object()) throw DataError("tags is not an object");
        for (const auto& [k, v] : j["tags"].items()) {
            if (!v.is_string()) throw DataError("tag value for key '" + k + "' is not a string");
            e.tags[k] = v.get<std::string>();
        }
    }
    return e;
}

inline std::string xml_unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        const auto semi = s.find(';', i);
        if (semi == std::string::npos) {
            out += s[i];
            continue;
        }
        const std::string ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (!ent.empty() && ent[0] == '#') {
            const long code = std::strtol(ent.c_str() + 1, nullptr, ent.size() > 1 && ent[1] == 'x' ? 16 : 10);
            if (code > 0 && code < 128) out += static_cast<char>(code);
        } else {
            out += '&' + ent + ';';
            i = semi;
            continue;
        }
        i = semi;
    }
    return out;
}

/// Attribute values of one XML start tag ("node", "tag", "nd", ...).
inline std::map<std::string, std::string> xml_attributes(const std::string& tag_body) {
    std::map<std::string, std::string> attrs;
    std::size_t i = 0;
    while (i < tag_body.size()) {
        while (i < tag_body.size() && (std::isspace(static_cast<unsigned char>(tag_body[i])) || tag_body[i] == '/'))
            ++i;
        std::size_t eq = tag_body.find('=', i);
        if (eq == std::string::npos) break;
        const std::string name = tag_body.substr(i, eq - i);
        std::size_t vstart = eq + 1;
        if (vstart >= tag_body.size()) break;
        const char quote = tag_body[vstart];
        if (quote != '"' && quote != '\'') break;
        const std::size_t vend = tag_body.find(quote, vstart + 1);
        if (vend == std::string::npos) break;
        attrs[name] = xml_unescape(tag_body.substr(vstart + 1, vend - vstart - 1));
        i = vend + 1;
    }
    return attrs;
}

}  // namespace detail

/// Reads pre-extracted elements. ElementsJSONL is the canonical format: one
/// JSON object per line with id, kind, geometry (GeoJSON) and tags. The OSM
/// XML reader is a thin adapter producing the same stream; ways resolve their
/// node references within the file, relations are skipped (geometries must be
/// pre-resolved).
inline std::vector<OsmElement> parse_elements(std::istream& in, ElementFormat format,
                                              ParseMode mode = ParseMode::Lenient,
                                              ParseStats* stats = nullptr) {
    ParseStats local;
    ParseStats& st = stats ? *stats : local;
    std::vector<OsmElement> out;

    auto note_error = [&](const std::string& msg, std::size_t line) {
        if (mode == ParseMode::Strict) throw ParseError(msg, line);
        st.errors.push_back("line " + std::to_string(line) + ": " + msg);
    };

    if (format == ElementFormat::ElementsJsonl) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                note_error(e.what(), line_no);
                continue;
            }
            try {
                OsmElement e = detail::element_from_json(j);
                if (e.tags.empty()) {
                    ++st.skipped_untagged;
                    continue;
                }
                out.push_back(std::move(e));
                ++st.parsed;
            } catch (const DataError& e) {
                if (std::string(e.what()).find("no geometry") != std::string::npos) {
                    ++st.skipped_no_geometry;
                } else {
                    note_error(e.what(), line_no);
                }
            }
        }
        return out;
    }

    // OSM XML
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::unordered_map<std::int64_t, Point> node_coords;
    std::size_t pos = 0;
    std::size_t line_no = 1;

    struct Pending {
        bool active = false;
        bool is_way = false;
        OsmElement element;
        std::vector<std::int64_t> refs;
    } pending;

    auto flush_node = [&](Pending& p) {
        if (p.element.tags.empty()) {
            ++st.skipped_untagged;
            return;
        }
        out.push_back(std::move(p.element));
        ++st.parsed;
    };
    auto flush_way = [&](Pending& p) {
        std::vector<Point> pts;
        for (std::int64_t ref : p.refs) {
            auto it = node_coords.find(ref);
            if (it == node_coords.end()) {
                note_error("way " + std::to_string(p.element.id) + " references unknown node " +
                               std::to_string(ref),
                           line_no);
                return;
            }
            pts.push_back(it->second);
        }
        if (pts.size() < 2) {
            ++st.skipped_no_geometry;
            return;
        }
        if (p.element.tags.empty()) {
            ++st.skipped_untagged;
            return;
        }
        if (pts.size() >= 4 && points_equal(pts.front(), pts.back())) {
            Polygon poly;
            poly.exterior = std::move(pts);
            p.element.geometry = poly;
        } else {
            p.element.geometry = LineString{std::move(pts)};
        }
        out.push_back(std::move(p.element));
        ++st.parsed;
    };

    while ((pos = text.find('<', pos)) != std::string::npos) {
        const std::size_t end = text.find('>', pos);
        if (end == std::string::npos) break;
        line_no = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
        std::string body = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (body.empty() || body[0] == '?' || body[0] == '!') continue;

        const bool closing = body[0] == '/';
        const bool self_closed = body.back() == '/';
        std::string name = body.substr(closing ? 1 : 0);
        const std::size_t name_end = name.find_first_of(" \t\r\n/");
        std::string attrs_body;
        if (name_end != std::string::npos) {
            attrs_body = name.substr(name_end);
            name = name.substr(0, name_end);
        }

        if (closing) {
            if (name == "node" && pending.active && !pending.is_way) {
                flush_node(pending);
                pending = {};
            } else if (name == "way" && pending.active && pending.is_way) {
                flush_way(pending);
                pending = {};
            }
            continue;
        }

        const auto attrs = detail::xml_attributes(attrs_body);
        if (name == "node") {
            auto id_it = attrs.find("id");
            auto lat_it = attrs.find("lat");
            auto lon_it = attrs.find("lon");
            if (id_it == attrs.end() || lat_it == attrs.end() || lon_it == attrs.end()) {
                note_error("node missing id/lat/lon", line_no);
                continue;
            }
            const std::int64_t id = std::strtoll(id_it->second.c_str(), nullptr, 10);
            const Point p{std::strtod(lon_it->second.c_str(), nullptr),
                          std::strtod(lat_it->second.c_str(), nullptr)};
            node_coords[id] = p;
            OsmElement e;
            e.id = id;
            e.kind = ElementKind::Node;
            e.geometry = p;
            if (self_closed) {
                ++st.skipped_untagged;  // bare node, no tags possible
            } else {
                pending = {true, false, std::move(e), {}};
            }
        } else if (name == "way") {
            auto id_it = attrs.find("id");
            if (id_it == attrs.end()) {
                note_error("way missing id", line_no);
                continue;
            }
            OsmElement e;
            e.id = std::strtoll(id_it->second.c_str(), nullptr, 10);
            e.kind = ElementKind::Way;
            pending = {true, true, std::move(e), {}};
            if (self_closed) {
                ++st.skipped_no_geometry;
                pending = {};
            }
        } else if (name == "tag" && pending.active) {
            auto k = attrs.find("k");
            auto v = attrs.find("v");
            if (k != attrs.end() && v != attrs.end()) pending.element.tags[k->second] = v->second;
        } else if (name == "nd" && pending.active && pending.is_way) {
            auto ref = attrs.find("ref");
            if (ref != attrs.end())
                pending.refs.push_back(std::strtoll(ref->second.c_str(), nullptr, 10));
        } else if (name == "relation") {
            ++st.skipped_no_geometry;  // member geometries are not assembled here
        }
    }
    return out;
}

/// Canonical single-line JSON form of one element (keys alphabetical).
inline std::string element_to_jsonl(const OsmElement& e) {
    nlohmann::json j;
    j["id"] = e.id;
    j["kind"] = to_string(e.kind);
    j["geometry"] = geojson::geometry_to_json(e.geometry);
    j["tags"] = nlohmann::json::object();
    for (const auto& [k, v] : e.tags) j["tags"][k] = v;
    return j.dump();
}

inline void write_elements_jsonl(std::ostream& out, const std::vector<OsmElement>& elements) {
    for (const OsmElement& e : elements) out << element_to_jsonl(e) << '\n';
}

/// Keeps only tags with an allowed key and no discarded (key, value) pair.
/// Returns nullopt ("Dropped") when nothing remains.
inline std::optional<OsmElement> filter_tags(const OsmElement& element, const TagFilter& filter) {
    OsmElement kept = element;
    kept.tags.clear();
    for (const auto& [k, v] : element.tags) {
        if (filter.key_allowed(k) && !filter.pair_discarded(k, v)) kept.tags[k] = v;
    }
    if (kept.tags.empty()) return std::nullopt;
    return kept;
}

inline bool geometry_intersects_boundary(const Geometry& g, const Geometry& boundary) {
    if (std::holds_alternative<Polygon>(boundary))
        return intersects(g, std::get<Polygon>(boundary));
    if (std::holds_alternative<MultiPolygon>(boundary))
        return intersects(g, std::get<MultiPolygon>(boundary));
    throw InputError("city boundary must be a Polygon or MultiPolygon");
}

/// Retains exactly the elements whose geometry intersects the boundary.
inline std::vector<OsmElement> clip_to_boundary(std::vector<OsmElement> elements,
                                                const Geometry& boundary) {
    std::vector<OsmElement> out;
    out.reserve(elements.size());
    for (OsmElement& e : elements) {
        if (geometry_intersects_boundary(e.geometry, boundary)) out.push_back(std::move(e));
    }
    return out;
}

/// City boundary file: a single GeoJSON Feature with Polygon/MultiPolygon
/// geometry and a "name" property.
inline std::pair<std::string, Geometry> parse_boundary_feature(const nlohmann::json& j) {
    if (!j.is_object() || j.value("type", "") != "Feature")
        throw DataError("boundary file must contain a GeoJSON Feature");
    std::string name;
    if (j.contains("properties") && j["properties"].is_object() &&
        j["properties"].contains("name"))
        name = j["properties"]["name"].get<std::string>();
    if (name.empty()) throw DataError("boundary feature has no name property");
    if (!j.contains("geometry")) throw DataError("boundary feature has no geometry");
    Geometry g = geojson::parse_geometry(j["geometry"]);
    if (!std::holds_alternative<Polygon>(g) && !std::holds_alternative<MultiPolygon>(g))
        throw DataError("boundary geometry must be Polygon or MultiPolygon");
    return {name, std::move(g)};
}

}  // namespace hexembed
