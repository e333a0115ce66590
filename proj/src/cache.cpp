#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gengap/cli.hpp"
#include "gengap/error.hpp"

namespace gengap::cli {

namespace fs = std::filesystem;

CacheConfig cache_config(bool no_cache, const std::string& dir_flag) {
    CacheConfig c;
    if (no_cache) return c;
    if (!dir_flag.empty()) {
        c.dir = dir_flag;
    } else if (const char* env = std::getenv("GENGAP_CACHE_DIR"); env && *env) {
        c.dir = env;
    } else {
        c.dir = ".gengap-cache";
    }
    c.enabled = true;
    return c;
}

std::string content_hash(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex;
    for (int i = 15; i >= 0; --i) out << ((h >> (4 * i)) & 0xf);
    return out.str();
}

std::string cache_key(const std::string& op, const std::string& canonical_input) {
    return op + "-" + content_hash(std::string(kAlgoVersion) + "\n" + op + "\n" + canonical_input);
}

std::optional<std::string> cache_load(const CacheConfig& c, const std::string& key,
                                      std::vector<std::string>& warnings) {
    if (!c.enabled) return std::nullopt;
    fs::path file = fs::path(c.dir) / (key + ".json");
    std::error_code ec;
    if (!fs::exists(file, ec) || ec) return std::nullopt;
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        warnings.push_back("cache entry " + file.string() + " is unreadable; recomputing");
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string payload = buf.str();
    if (payload.empty() || !nlohmann::json::accept(payload)) {
        warnings.push_back("cache entry " + file.string() + " is corrupted; recomputing");
        return std::nullopt;
    }
    return payload;
}

void cache_store(const CacheConfig& c, const std::string& key, const std::string& payload,
                 std::vector<std::string>& warnings) {
    if (!c.enabled) return;
    std::error_code ec;
    fs::create_directories(c.dir, ec);
    if (ec) {
        warnings.push_back("cache directory " + c.dir + " is unusable (" + ec.message() +
                           "); skipping store");
        return;
    }
    fs::path file = fs::path(c.dir) / (key + ".json");
    fs::path tmp = fs::path(c.dir) / (key + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !(out << payload)) {
            warnings.push_back("cache entry " + file.string() + " could not be written");
            return;
        }
    }
    fs::rename(tmp, file, ec);
    if (ec) {
        warnings.push_back("cache entry " + file.string() + " could not be written (" +
                           ec.message() + ")");
        fs::remove(tmp, ec);
    }
}

} // namespace gengap::cli
