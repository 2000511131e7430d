#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace noisectl {

// A config error means the run cannot start; the CLI maps it to exit 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// UTF-8 key=value document. Grammar: one `key = value` per line, `#` starts
// a comment, `[object]` opens a new object block whose keys describe one
// foreground object. Keys before the first block are global.
struct ConfigDoc {
    std::map<std::string, std::string> globals;
    std::vector<std::map<std::string, std::string>> objects;
};

ConfigDoc parse_config_text(const std::string& text, const std::string& origin = "<string>");
ConfigDoc load_config(const std::filesystem::path& path);

// Helpers shared by SceneSpec and RunConfig parsing. All throw config_error
// on malformed values.
int64_t cfg_int(const std::map<std::string, std::string>& kv, const std::string& key, int64_t fallback);
double cfg_double(const std::map<std::string, std::string>& kv, const std::string& key, double fallback);
std::string cfg_str(const std::map<std::string, std::string>& kv, const std::string& key,
                    const std::string& fallback);
bool cfg_bool(const std::map<std::string, std::string>& kv, const std::string& key, bool fallback);

// Rejects any global key not in `known`; object-block keys are validated by
// the scene parser.
void reject_unknown_keys(const ConfigDoc& doc, const std::vector<std::string>& known);

}  // namespace noisectl
