#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace occu::cli {

/// Provenance written next to every command output. Re-running the same
/// command with the same inputs and seed reproduces every output digest.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> options;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    /// Writes JSON with SHA-256 digests of inputs and outputs, the tool
    /// version and a UTC timestamp.
    void write(const std::string& path) const;
};

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::string& path);

}  // namespace occu::cli
