#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lefk/errors.hpp"

namespace lefk {

// Minimal reader for the flat TOML subset used by run configuration files:
// comments, [sections] (flattened to dotted keys), bare keys with integer,
// boolean, quoted-string or homogeneous-array values. Enough for config
// files; not a general TOML implementation.
class TomlLite {
public:
    static TomlLite parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw invalid_datum("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    static TomlLite parse(const std::string& text) {
        TomlLite t;
        std::string section;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip_comment(line);
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw invalid_datum("config line " + std::to_string(lineno) + ": bad section");
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw invalid_datum("config line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(s.substr(0, eq));
            std::string val = trim(s.substr(eq + 1));
            if (!section.empty()) key = section + "." + key;
            t.values_[key] = val;
        }
        return t;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const {
        std::string v = values_.at(key);
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
        return v;
    }

    long long get_int(const std::string& key) const {
        try {
            return std::stoll(get_string(key));
        } catch (const std::exception&) {
            throw invalid_datum("config key '" + key + "' is not an integer");
        }
    }

    bool get_bool(const std::string& key) const {
        std::string v = get_string(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw invalid_datum("config key '" + key + "' is not a boolean");
    }

    std::vector<std::string> get_array(const std::string& key) const {
        std::string v = values_.at(key);
        if (v.empty() || v.front() != '[' || v.back() != ']')
            throw invalid_datum("config key '" + key + "' is not an array");
        std::vector<std::string> out;
        std::string body = v.substr(1, v.size() - 2);
        std::string item;
        std::istringstream in(body);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.size() >= 2 && item.front() == '"' && item.back() == '"')
                item = item.substr(1, item.size() - 2);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

private:
    static std::string strip_comment(const std::string& s) {
        bool in_str = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '#' && !in_str) return s.substr(0, i);
        }
        return s;
    }
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        if (b == std::string::npos) return "";
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

} // namespace lefk
