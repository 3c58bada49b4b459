#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>

#include "dicke/errors.hpp"
#include "json.hpp"

namespace dicke::detail {

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

// Walks one JSON object, tracking which keys were consumed so unknown keys
// can be rejected with their full dotted path.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& obj, std::string path)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object())
            throw ConfigError((path_.empty() ? std::string("document") : path_) +
                              ": expected an object");
    }

    const std::string& path() const { return path_; }
    std::string field(const std::string& key) const { return join_path(path_, key); }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const nlohmann::json& raw(const std::string& key) {
        used_.insert(key);
        if (!obj_.contains(key)) throw ConfigError(field(key) + ": missing required field");
        return obj_.at(key);
    }

    double number(const std::string& key) { return as_number(raw(key), field(key)); }
    double number(const std::string& key, double fallback) {
        return has(key) ? number(key) : (used_.insert(key), fallback);
    }

    long long integer(const std::string& key) { return as_integer(raw(key), field(key)); }
    long long integer(const std::string& key, long long fallback) {
        return has(key) ? integer(key) : (used_.insert(key), fallback);
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + ": expected a boolean");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) {
        return has(key) ? string(key) : fallback;
    }

    // Rejects keys that were never read.
    void finish() const {
        for (const auto& [key, value] : obj_.items())
            if (!used_.count(key)) throw ConfigError(field(key) + ": unknown key");
    }

    static double as_number(const nlohmann::json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path + ": must be finite");
        return d;
    }

    static long long as_integer(const nlohmann::json& v, const std::string& path) {
        if (v.is_number_integer()) return v.get<long long>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<long long>(d);
        }
        throw ConfigError(path + ": expected an integer");
    }

private:
    nlohmann::json obj_;
    std::string path_;
    std::set<std::string> used_;
};

}  // namespace dicke::detail
