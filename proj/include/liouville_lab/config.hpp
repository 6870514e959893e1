#pragma once

#include "liouville_lab/defaults_conf.hpp"
#include "liouville_lab/quadrature.hpp"

#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouville_lab {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// key = value lines; '#' starts a comment.
class Config {
public:
    static Config defaults() {
        Config c;
        c.parse(default_config_text, true);
        return c;
    }

    // Later values win. Unknown keys are rejected unless allow_new is set.
    void parse(const std::string& text, bool allow_new = false) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), allow_new);
        }
    }

    void set(const std::string& key, const std::string& value, bool allow_new = false) {
        if (key.empty()) throw ConfigError("config: empty key");
        if (!allow_new && !values_.count(key) && !is_override(key)) throw ConfigError("config: unknown key " + key);
        values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    const std::string& raw(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("config: missing key " + key);
        return it->second;
    }

    double real(const std::string& key) const {
        const std::string& s = raw(key);
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("config: " + key + " is not a number: " + s);
    }

    int integer(const std::string& key) const {
        const std::string& s = raw(key);
        try {
            size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("config: " + key + " is not an integer: " + s);
    }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        std::istringstream in(raw(key));
        std::string item;
        while (std::getline(in, item, ',')) {
            Config tmp;
            tmp.values_["x"] = trim(item);
            out.push_back(tmp.real("x"));
        }
        if (out.empty()) throw ConfigError("config: " + key + " is empty");
        return out;
    }

    std::vector<int> integers(const std::string& key) const {
        std::vector<int> out;
        for (double v : reals(key)) {
            if (v != static_cast<int>(v)) throw ConfigError("config: " + key + " must hold integers");
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    // The N override collapses a sweep to a single value.
    std::vector<int> n_values(const std::string& key) const {
        return has("N") ? std::vector<int>{integer("N")} : integers(key);
    }
    double mu(const std::string& key) const { return has("mu") ? real("mu") : real(key); }
    std::vector<double> mu_values(const std::string& key) const {
        return has("mu") ? std::vector<double>{real("mu")} : reals(key);
    }
    unsigned long long seed() const {
        int s = integer("seed");
        if (s < 0) throw ConfigError("config: seed must be non-negative");
        return static_cast<unsigned long long>(s);
    }

    QuadratureSpec quadrature() const {
        QuadratureSpec q;
        q.rel_tol = has("tol") ? real("tol") : real("rel_tol");
        q.abs_tol = real("abs_tol");
        q.max_subdivisions = integer("max_subdivisions");
        q.plane_compactification_scale = real("plane_compactification_scale");
        q.validate();
        return q;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static bool is_override(const std::string& key) { return key == "N" || key == "mu" || key == "tol"; }

    static std::string trim(const std::string& s) {
        const char* ws = " \t\r\n";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return "";
        return s.substr(b, s.find_last_not_of(ws) - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace liouville_lab
