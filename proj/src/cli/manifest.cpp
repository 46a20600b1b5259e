#include "occu/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "json.hpp"
#include "occu/cli.hpp"
#include "occu/error.hpp"

namespace occu::cli {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path + "' for hashing");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw DataError("SHA-256 failed for '" + path + "'");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

void RunManifest::write(const std::string& path) const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["seed"] = seed;
    j["options"] = options;
    auto files = [](const std::vector<std::string>& paths) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : paths) arr.push_back({{"path", p}, {"sha256", file_digest(p)}});
        return arr;
    };
    j["inputs"] = files(inputs);
    j["outputs"] = files(outputs);
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const auto secs = now.time_since_epoch().count();
    const auto days = std::chrono::floor<std::chrono::days>(now);
    const std::chrono::year_month_day ymd{days};
    const auto tod = secs - std::chrono::sys_seconds{days}.time_since_epoch().count();
    char stamp[32];
    std::snprintf(stamp, sizeof(stamp), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod / 3600), static_cast<long long>(tod / 60 % 60),
                  static_cast<long long>(tod % 60));
    j["created_utc"] = stamp;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace occu::cli
