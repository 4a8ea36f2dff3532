#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pinion/device.hpp"

namespace pinion {

// Malformed or inconsistent user configuration. The CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Wrapper over a JSON object that tracks key consumption. done() rejects any
// key nobody asked for, by name, so a typo never silently falls back to a
// default value.
class StrictObject {
  public:
    StrictObject(const nlohmann::json& j, std::string context)
        : j_(j), context_(std::move(context)) {
        if (!j_.is_object())
            throw ConfigError(context_ + ": expected an object");
    }

    const std::string& context() const { return context_; }

    const nlohmann::json* find(const std::string& key) {
        const auto it = j_.find(key);
        if (it == j_.end()) return nullptr;
        used_.insert(key);
        return &*it;
    }

    const nlohmann::json& require(const std::string& key) {
        const auto* p = find(key);
        if (!p) throw ConfigError(context_ + ": missing required key '" + key + "'");
        return *p;
    }

    double number(const std::string& key) { return as_number(require(key), key); }

    double number_or(const std::string& key, double fallback) {
        const auto* p = find(key);
        return p ? as_number(*p, key) : fallback;
    }

    bool bool_or(const std::string& key, bool fallback) {
        const auto* p = find(key);
        if (!p) return fallback;
        if (!p->is_boolean())
            throw ConfigError(context_ + ": key '" + key + "' must be a boolean");
        return p->get<bool>();
    }

    std::string string(const std::string& key) {
        const auto& v = require(key);
        if (!v.is_string())
            throw ConfigError(context_ + ": key '" + key + "' must be a string");
        return v.get<std::string>();
    }

    std::string string_or(const std::string& key, const std::string& fallback) {
        const auto* p = find(key);
        if (!p) return fallback;
        if (!p->is_string())
            throw ConfigError(context_ + ": key '" + key + "' must be a string");
        return p->get<std::string>();
    }

    // SI quantity: either a bare number (already SI) or a "value unit" string.
    double quantity(const std::string& key, Dim dim) {
        return as_quantity(require(key), key, dim);
    }

    double quantity_or(const std::string& key, Dim dim, double fallback) {
        const auto* p = find(key);
        return p ? as_quantity(*p, key, dim) : fallback;
    }

    void done() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key()))
                throw ConfigError(context_ + ": unknown key '" + item.key() + "'");
    }

  private:
    double as_number(const nlohmann::json& v, const std::string& key) const {
        if (!v.is_number())
            throw ConfigError(context_ + ": key '" + key + "' must be a number");
        return v.get<double>();
    }

    double as_quantity(const nlohmann::json& v, const std::string& key, Dim dim) const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            try {
                return parse_quantity(v.get<std::string>(), dim);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(context_ + ": key '" + key + "': " + e.what());
            }
        }
        throw ConfigError(context_ + ": key '" + key +
                          "' must be a number (SI) or a quantity string");
    }

    const nlohmann::json& j_;
    std::string context_;
    std::set<std::string> used_;
};

}  // namespace pinion
