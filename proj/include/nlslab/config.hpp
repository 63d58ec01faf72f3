#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlslab/errors.hpp"

namespace nlslab {

struct config_error : error {
    using error::error;
};

/// Flat key-value configuration with dotted section keys:
///   scenario = rates
///   grid.points = 4096
///   grid.half_width = 180pi       # numbers accept a trailing "pi" multiplier
///   exponent.p = 4/3              # rationals keep exact regime classification
///   time.samples = 10,20,40,80
/// '#' starts a comment. Later assignments win.
class Config {
public:
    static Config parse_string(const std::string& text) {
        Config c;
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
            c.kv_[key] = value;
        }
        return c;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw config_error("cannot open config file: " + path);
        std::stringstream ss;
        ss << is.rdbuf();
        return parse_string(ss.str());
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    const std::map<std::string, std::string>& entries() const { return kv_; }

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get_string(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw config_error("missing config key: " + key);
        return it->second;
    }
    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return parse_number(get_string(key), key); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    int get_int(const std::string& key) const {
        double v = get_double(key);
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) throw config_error("config key " + key + " is not an integer");
        return i;
    }
    int get_int(const std::string& key, int fallback) const { return has(key) ? get_int(key) : fallback; }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw config_error("config key " + key + " is not a boolean");
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(get_string(key));
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(parse_number(trim(cell), key));
        if (out.empty()) throw config_error("config key " + key + " is an empty list");
        return out;
    }

    /// Rational view of a numeric value when written as "a/b"; exact regime
    /// boundaries rely on this.
    std::optional<std::pair<std::int64_t, std::int64_t>> get_rational(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const std::string v = get_string(key);
        auto slash = v.find('/');
        if (slash == std::string::npos) return std::nullopt;
        try {
            std::int64_t num = std::stoll(trim(v.substr(0, slash)));
            std::int64_t den = std::stoll(trim(v.substr(slash + 1)));
            if (den == 0) throw config_error("config key " + key + ": zero denominator");
            return std::make_pair(num, den);
        } catch (const std::invalid_argument&) {
            throw config_error("config key " + key + ": malformed rational '" + v + "'");
        }
    }

    /// Deterministic flat rendering (sorted keys), used for the manifest echo.
    std::string render() const {
        std::string out;
        for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        auto e = s.find_last_not_of(" \t\r\n");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    }

    static double parse_number(const std::string& raw, const std::string& key) {
        std::string v = raw;
        double mult = 1.0;
        if (v.size() > 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
            mult = std::numbers::pi;
            v = trim(v.substr(0, v.size() - 2));
            if (v.empty()) return mult; // bare "pi"
        }
        auto slash = v.find('/');
        try {
            if (slash != std::string::npos) {
                double num = std::stod(v.substr(0, slash));
                double den = std::stod(v.substr(slash + 1));
                if (den == 0.0) throw config_error("config key " + key + ": division by zero");
                return mult * num / den;
            }
            std::size_t used = 0;
            double val = std::stod(v, &used);
            if (used != v.size()) throw config_error("config key " + key + ": trailing junk in number '" + raw + "'");
            return mult * val;
        } catch (const std::invalid_argument&) {
            throw config_error("config key " + key + ": malformed number '" + raw + "'");
        } catch (const std::out_of_range&) {
            throw config_error("config key " + key + ": number out of range '" + raw + "'");
        }
    }

    std::map<std::string, std::string> kv_;
};

} // namespace nlslab
