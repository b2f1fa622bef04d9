#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "risfd/errors.hpp"

namespace risfd {

/// Flat key-value text config with dotted section names:
///   section.key = value      # comment
/// Later assignments win. Lists are comma-separated.
class KvConfig {
public:
    KvConfig() = default;

    static KvConfig from_stream(std::istream& is, const std::string& origin = "<stream>") {
        KvConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const std::size_t eq = trimmed.find('=');
            if (eq == std::string::npos) {
                throw ContractError(origin + ":" + std::to_string(lineno) +
                                    ": expected 'key = value'");
            }
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty()) {
                throw ContractError(origin + ":" + std::to_string(lineno) + ": empty key");
            }
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static KvConfig from_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw IoError(path, "cannot open config");
        return from_stream(is, path);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_double(key, it->second);
    }

    long long get_int(const std::string& key, long long fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_int(key, it->second);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ContractError("config key '" + key + "': not a boolean: " + v);
    }

    std::vector<std::string> get_list(const std::string& key,
                                      const std::vector<std::string>& fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<std::string> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
        if (!has(key)) return fallback;
        std::vector<double> out;
        for (const std::string& s : get_list(key, {})) out.push_back(parse_double(key, s));
        return out;
    }

    std::vector<long long> get_int_list(const std::string& key,
                                        const std::vector<long long>& fallback) const {
        if (!has(key)) return fallback;
        std::vector<long long> out;
        for (const std::string& s : get_list(key, {})) out.push_back(parse_int(key, s));
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        const std::size_t begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) return "";
        const std::size_t end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }

    static double parse_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ContractError("config key '" + key + "': not a number: " + v);
        }
    }

    static long long parse_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ContractError("config key '" + key + "': not an integer: " + v);
        }
    }

    std::map<std::string, std::string> values_;
};

}  // namespace risfd
