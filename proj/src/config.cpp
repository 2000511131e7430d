#include "noisectl/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace noisectl {

static std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ConfigDoc parse_config_text(const std::string& text, const std::string& origin) {
    ConfigDoc doc;
    std::map<std::string, std::string>* current = &doc.globals;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line != "[object]")
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": unknown section '" + line + "' (only [object] is valid)");
            doc.objects.emplace_back();
            current = &doc.objects.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
        if (current->count(key))
            throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        (*current)[key] = val;
    }
    return doc;
}

ConfigDoc load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

int64_t cfg_int(const std::map<std::string, std::string>& kv, const std::string& key, int64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        size_t pos = 0;
        int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw config_error("key '" + key + "': not an integer: '" + it->second + "'");
    }
}

double cfg_double(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw config_error("key '" + key + "': not a number: '" + it->second + "'");
    }
}

std::string cfg_str(const std::map<std::string, std::string>& kv, const std::string& key,
                    const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

bool cfg_bool(const std::map<std::string, std::string>& kv, const std::string& key, bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "on") return true;
    if (it->second == "false" || it->second == "0" || it->second == "off") return false;
    throw config_error("key '" + key + "': not a boolean: '" + it->second + "'");
}

void reject_unknown_keys(const ConfigDoc& doc, const std::vector<std::string>& known) {
    for (const auto& [key, _] : doc.globals) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw config_error("unknown config key '" + key + "'");
    }
}

}  // namespace noisectl
