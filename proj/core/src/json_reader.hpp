#pragma once

// Field-path aware helpers over nlohmann::json for strict document parsing.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "trunkload/errors.hpp"
#include "trunkload/spatial.hpp"

namespace trunkload::detail {

using json = nlohmann::json;

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

inline json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), line_of_offset(text, e.byte), "");
    }
}

/// A JSON object plus the path used in diagnostics.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path, bool lenient) : node_(node), path_(std::move(path)), lenient_(lenient) {
        if (!node_.is_object()) fail("expected an object");
    }

    [[noreturn]] void fail(const std::string& message, std::string_view key = {}) const {
        throw ParseError(message, 0, key.empty() ? path_ : field(key));
    }

    std::string field(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    void allow_only(std::initializer_list<std::string_view> keys) const {
        if (lenient_) return;
        for (const auto& [key, value] : node_.items()) {
            bool known = false;
            for (auto k : keys) known = known || k == key;
            if (!known) fail("unknown field", key);
        }
    }

    bool has(std::string_view key) const { return node_.contains(std::string(key)) && !at(key).is_null(); }
    const json& at(std::string_view key) const { return node_.at(std::string(key)); }

    const json& require(std::string_view key) const {
        if (!node_.contains(std::string(key))) fail("missing required field", key);
        return at(key);
    }

    std::string string(std::string_view key) const {
        const auto& v = require(key);
        if (!v.is_string()) fail("expected a string", key);
        return v.get<std::string>();
    }

    double number(std::string_view key) const { return as_number(require(key), field(key)); }

    double number_or(std::string_view key, double fallback) const {
        return has(key) ? as_number(at(key), field(key)) : fallback;
    }

    int integer(std::string_view key) const {
        const auto& v = require(key);
        if (!v.is_number_integer()) fail("expected an integer", key);
        return v.get<int>();
    }

    Vec3 vec3(std::string_view key) const { return as_vec3(require(key), field(key)); }
    Vec3 vec3_or(std::string_view key, const Vec3& fallback) const {
        return has(key) ? as_vec3(at(key), field(key)) : fallback;
    }

    bool lenient() const { return lenient_; }
    const std::string& path() const { return path_; }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ParseError("expected a number", 0, path);
        return v.get<double>();
    }

    static Vec3 as_vec3(const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 3) throw ParseError("expected a 3-vector", 0, path);
        Vec3 out;
        for (int i = 0; i < 3; ++i) out[i] = as_number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
        return out;
    }

private:
    const json& node_;
    std::string path_;
    bool lenient_;
};

inline const json& require_array(const json& root, std::string_view key, const std::string& path) {
    const auto& v = root.at(std::string(key));
    if (!v.is_array()) throw ParseError("expected an array", 0, path);
    return v;
}

inline json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace trunkload::detail
