#include "output.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace combsense::cli {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string utc_timestamp()
{
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end && *end == '\0' && v >= 0) {
            now = static_cast<std::time_t>(v);
        }
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void OutputSet::add(const std::string& name, std::string contents)
{
    if (name.empty() || name == "manifest.json" || !files_.emplace(name, std::move(contents)).second) {
        throw std::logic_error("duplicate or reserved output name: " + name);
    }
}

namespace {

void write_file(const fs::path& path, std::string_view contents)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

} // namespace

void OutputSet::commit(const fs::path& dir, nlohmann::ordered_json manifest) const
{
    auto listing = nlohmann::ordered_json::array();
    for (const auto& [name, contents] : files_) {
        listing.push_back({{"path", name}, {"bytes", contents.size()}, {"fnv1a64", hex64(fnv1a64(contents))}});
    }
    manifest["files"] = std::move(listing);
    const std::string manifest_text = manifest.dump(2) + "\n";

    const fs::path target = fs::absolute(dir).lexically_normal();
    const fs::path parent = target.parent_path();
    fs::create_directories(parent);
    const fs::path staging =
        parent / ("." + target.filename().string() + ".staging-" + std::to_string(::getpid()));
    fs::remove_all(staging);
    try {
        for (const auto& [name, contents] : files_) {
            write_file(staging / name, contents);
        }
        write_file(staging / "manifest.json", manifest_text);

        std::error_code ec;
        if (!fs::exists(target)) {
            fs::rename(staging, target, ec);
            if (!ec) {
                return;
            }
        }
        fs::create_directories(target);
        for (const auto& [name, contents] : files_) {
            fs::create_directories((target / name).parent_path());
            fs::rename(staging / name, target / name);
        }
        fs::rename(staging / "manifest.json", target / "manifest.json");
        fs::remove_all(staging);
    } catch (...) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw;
    }
}

} // namespace combsense::cli
