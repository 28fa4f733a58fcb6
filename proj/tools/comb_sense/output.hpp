#pragma once

// Run outputs are assembled in memory and written once, at the end, through a
// staging directory, so a failed run leaves no partial files behind.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace combsense::cli {

inline constexpr std::string_view tool_version = "1.0.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// UTC ISO-8601. Honors SOURCE_DATE_EPOCH so manifests can be reproduced too.
std::string utc_timestamp();

class OutputSet {
public:
    void add(const std::string& name, std::string contents);
    const std::map<std::string, std::string>& files() const { return files_; }
    bool empty() const { return files_.empty(); }

    // Writes every file plus manifest.json into `dir`. Files are staged in a
    // sibling directory and renamed into place only when all of them exist.
    void commit(const std::filesystem::path& dir, nlohmann::ordered_json manifest) const;

private:
    std::map<std::string, std::string> files_;
};

} // namespace combsense::cli
