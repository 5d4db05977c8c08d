#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "evsim/errors.hpp"

namespace evsim {

/// Strict-schema view over one JSON object: every key must be consumed by a
/// getter before finish(), so unknown keys are reported with their full path.
class JsonObj {
public:
    JsonObj(const nlohmann::json& j, std::string path) : m_j(&j), m_path(std::move(path))
    {
        if (!j.is_object()) throw ConfigError(m_path + ": expected an object");
    }

    const std::string& path() const { return m_path; }
    std::string key_path(const std::string& key) const { return m_path + "." + key; }

    bool has(const std::string& key) const { return m_j->contains(key); }

    const nlohmann::json& raw(const std::string& key)
    {
        const nlohmann::json* p = raw_opt(key);
        if (!p) throw ConfigError(key_path(key) + ": missing required key");
        return *p;
    }

    const nlohmann::json* raw_opt(const std::string& key)
    {
        auto it = m_j->find(key);
        if (it == m_j->end()) return nullptr;
        m_used.insert(key);
        return &*it;
    }

    double num(const std::string& key) { return to_num(raw(key), key); }
    double num(const std::string& key, double fallback)
    {
        const nlohmann::json* p = raw_opt(key);
        return p ? to_num(*p, key) : fallback;
    }
    std::optional<double> num_opt(const std::string& key)
    {
        const nlohmann::json* p = raw_opt(key);
        if (!p || p->is_null()) return std::nullopt;
        return to_num(*p, key);
    }

    std::int64_t integer(const std::string& key) { return to_int(raw(key), key); }
    std::int64_t integer(const std::string& key, std::int64_t fallback)
    {
        const nlohmann::json* p = raw_opt(key);
        return p ? to_int(*p, key) : fallback;
    }

    bool boolean(const std::string& key, bool fallback)
    {
        const nlohmann::json* p = raw_opt(key);
        if (!p) return fallback;
        if (!p->is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
        return p->get<bool>();
    }

    std::string str(const std::string& key)
    {
        const nlohmann::json& j = raw(key);
        if (!j.is_string()) throw ConfigError(key_path(key) + ": expected a string");
        return j.get<std::string>();
    }
    std::string str(const std::string& key, const std::string& fallback)
    {
        const nlohmann::json* p = raw_opt(key);
        if (!p) return fallback;
        if (!p->is_string()) throw ConfigError(key_path(key) + ": expected a string");
        return p->get<std::string>();
    }
    std::optional<std::string> str_opt(const std::string& key)
    {
        const nlohmann::json* p = raw_opt(key);
        if (!p || p->is_null()) return std::nullopt;
        if (!p->is_string()) throw ConfigError(key_path(key) + ": expected a string");
        return p->get<std::string>();
    }

    JsonObj child(const std::string& key) { return JsonObj(raw(key), key_path(key)); }
    std::optional<JsonObj> child_opt(const std::string& key)
    {
        const nlohmann::json* p = raw_opt(key);
        if (!p) return std::nullopt;
        return JsonObj(*p, key_path(key));
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        throw ConfigError(key_path(key) + ": " + message);
    }

    /// Call after all expected keys were read.
    void finish() const
    {
        for (auto it = m_j->begin(); it != m_j->end(); ++it) {
            if (!m_used.count(it.key())) {
                throw ConfigError(key_path(it.key()) + ": unknown key");
            }
        }
    }

private:
    double to_num(const nlohmann::json& j, const std::string& key) const
    {
        if (!j.is_number()) throw ConfigError(key_path(key) + ": expected a number");
        return j.get<double>();
    }
    std::int64_t to_int(const nlohmann::json& j, const std::string& key) const
    {
        if (!j.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
        return j.get<std::int64_t>();
    }

    const nlohmann::json* m_j;
    std::string m_path;
    std::set<std::string> m_used;
};

/// Parses text as JSON, mapping parse failures to ConfigError.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

} // namespace evsim
