#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilcentral/error.hpp"
#include "nilcentral/field.hpp"
#include "nilcentral/maps.hpp"
#include "nilcentral/matrix.hpp"

namespace nilcentral {

using Json = nlohmann::ordered_json;

/// Largest r accepted from external input. The mathematics is desk-scale; the
/// cap only guards against absurd allocations from malformed files.
inline constexpr long long kMaxInputR = 256;

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
}

namespace detail {

inline void require_keys(const Json& j, const std::vector<std::string>& keys,
                         const std::string& what) {
    if (!j.is_object()) throw parse_error(what + ": expected a JSON object");
    for (const std::string& key : keys) {
        if (!j.contains(key)) throw parse_error(what + ": missing key \"" + key + "\"");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const std::string& k : keys) {
            if (k == key) {
                known = true;
                break;
            }
        }
        if (!known) throw parse_error(what + ": unknown key \"" + key + "\"");
    }
}

inline long long int_field(const Json& j, const std::string& key, const std::string& what) {
    const Json& v = j.at(key);
    if (!v.is_number_integer()) throw parse_error(what + ": \"" + key + "\" must be an integer");
    return v.get<long long>();
}

inline std::string string_field(const Json& j, const std::string& key, const std::string& what) {
    const Json& v = j.at(key);
    if (!v.is_string()) throw parse_error(what + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline std::pair<FieldSpec, int> context_fields(const Json& j, const std::string& what) {
    const long long r = int_field(j, "r", what);
    if (r < 2 || r > kMaxInputR) {
        throw parse_error(what + ": r must be between 2 and " + std::to_string(kMaxInputR));
    }
    return {FieldSpec::parse(string_field(j, "field", what)), static_cast<int>(r)};
}

} // namespace detail

/// {"r": <int>, "field": "Q"|"F<p>", "entries": [{"i","j","v"}...]} with
/// entries in strict lexicographic order and no zero values.
inline Json matrix_to_json(const UTMatrix& m) {
    Json entries = Json::array();
    for (const auto& [ij, v] : m.entries()) {
        entries.push_back(Json{{"i", ij.first}, {"j", ij.second}, {"v", v.str()}});
    }
    return Json{{"r", m.r()}, {"field", m.spec().str()}, {"entries", std::move(entries)}};
}

inline UTMatrix matrix_from_json(const Json& j) {
    detail::require_keys(j, {"r", "field", "entries"}, "matrix");
    const auto [spec, r] = detail::context_fields(j, "matrix");
    const Json& entries = j.at("entries");
    if (!entries.is_array()) throw parse_error("matrix: \"entries\" must be an array");
    UTMatrix m(spec, r);
    std::pair<int, int> prev{0, 0};
    for (const Json& entry : entries) {
        detail::require_keys(entry, {"i", "j", "v"}, "matrix entry");
        const long long i = detail::int_field(entry, "i", "matrix entry");
        const long long jj = detail::int_field(entry, "j", "matrix entry");
        if (i < 1 || jj <= i || jj > r) {
            throw parse_error("matrix entry: slot (" + std::to_string(i) + "," +
                              std::to_string(jj) + ") is not strictly upper for r=" +
                              std::to_string(r));
        }
        const std::pair<int, int> slot{static_cast<int>(i), static_cast<int>(jj)};
        if (slot <= prev) {
            throw parse_error("matrix entries must be in strict lexicographic (i,j) order");
        }
        prev = slot;
        const Scalar v = Scalar::parse(spec, detail::string_field(entry, "v", "matrix entry"));
        if (v.is_zero()) throw parse_error("matrix entries must not carry zero values");
        m.set(slot.first, slot.second, v);
    }
    return m;
}

/// {"r": <int>, "field": ..., "columns": [[n scalar strings] x n],
///  "constant": <matrix JSON>|null}. Column k lists the coordinates of the
/// image of the k-th basis unit in lexicographic slot order.
inline Json map_to_json(const MapOnN& f) {
    Json columns = Json::array();
    for (const std::vector<Scalar>& col : f.columns()) {
        Json jcol = Json::array();
        for (const Scalar& s : col) {
            jcol.push_back(s.str());
        }
        columns.push_back(std::move(jcol));
    }
    Json constant;
    if (f.is_affine()) {
        constant = matrix_to_json(f.constant());
    } else {
        constant = nullptr;
    }
    return Json{{"r", f.r()},
                {"field", f.spec().str()},
                {"columns", std::move(columns)},
                {"constant", std::move(constant)}};
}

inline MapOnN map_from_json(const Json& j) {
    detail::require_keys(j, {"r", "field", "columns", "constant"}, "map");
    const auto [spec, r] = detail::context_fields(j, "map");
    const std::size_t n = strict_upper_slot_count(r);
    const Json& columns = j.at("columns");
    if (!columns.is_array() || columns.size() != n) {
        throw parse_error("map: \"columns\" must be an array of " + std::to_string(n) +
                          " columns");
    }
    std::vector<std::vector<Scalar>> cols;
    cols.reserve(n);
    for (const Json& jcol : columns) {
        if (!jcol.is_array() || jcol.size() != n) {
            throw parse_error("map: every column must list " + std::to_string(n) +
                              " scalar strings");
        }
        std::vector<Scalar> col;
        col.reserve(n);
        for (const Json& s : jcol) {
            if (!s.is_string()) throw parse_error("map: column entries must be scalar strings");
            col.push_back(Scalar::parse(spec, s.get<std::string>()));
        }
        cols.push_back(std::move(col));
    }
    const Json& jconst = j.at("constant");
    if (jconst.is_null()) {
        return MapOnN::from_columns(spec, r, std::move(cols), std::nullopt);
    }
    UTMatrix constant = matrix_from_json(jconst);
    if (constant.spec() != spec || constant.r() != r) {
        throw parse_error("map: constant term context differs from the map context");
    }
    return MapOnN::from_columns(spec, r, std::move(cols), std::move(constant));
}

} // namespace nilcentral
