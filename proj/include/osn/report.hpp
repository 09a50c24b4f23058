#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace osn {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "osnscope";
inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
/// Throws Error when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Collects a subcommand's outputs in a staging directory and publishes
/// them together with a `<subcommand>.meta.json` record: tool, version,
/// config echo, seed, and SHA-256 digests of every input and output.
class RunOutput {
public:
    RunOutput(std::filesystem::path dir, std::string subcommand);
    ~RunOutput();
    RunOutput(const RunOutput&) = delete;
    RunOutput& operator=(const RunOutput&) = delete;

    void add_input(const std::filesystem::path& path);
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    Json& config() { return config_; }

    void write(const std::string& name, std::string_view content);
    void write_json(const std::string& name, const Json& j);

    /// Moves the staged files into place. A missing output directory is
    /// created by a single rename.
    void commit();

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::filesystem::path staging_;
    std::string subcommand_;
    std::optional<std::uint64_t> seed_;
    Json config_ = Json::object();
    std::map<std::string, std::string> inputs_;
    std::map<std::string, std::string> outputs_;
    bool committed_ = false;
};

}  // namespace osn
