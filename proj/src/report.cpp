#include "osn/report.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>
#include <unistd.h>

#include "osn/error.hpp"

namespace fs = std::filesystem;

namespace osn {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_file(const fs::path& path) {
    return sha256_hex(read_file(path));
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot move output into place: " + path.string());
    }
}

RunOutput::RunOutput(fs::path dir, std::string subcommand)
    : dir_(std::move(dir)), subcommand_(std::move(subcommand)) {
    if (dir_.empty()) dir_ = ".";
    const fs::path abs = fs::absolute(dir_).lexically_normal();
    fs::path parent = abs.has_filename() ? abs.parent_path() : abs.parent_path().parent_path();
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw Error("cannot create " + parent.string() + ": " + ec.message());
    staging_ = parent / ("." + subcommand_ + ".staging-" + std::to_string(::getpid()));
    fs::remove_all(staging_, ec);
    fs::create_directory(staging_, ec);
    if (ec) throw Error("cannot create staging directory " + staging_.string() + ": " + ec.message());
}

RunOutput::~RunOutput() {
    if (!committed_) {
        std::error_code ec;
        fs::remove_all(staging_, ec);
    }
}

void RunOutput::add_input(const fs::path& path) {
    inputs_[path.filename().string()] = sha256_file(path);
}

void RunOutput::write(const std::string& name, std::string_view content) {
    write_file_atomic(staging_ / name, content);
    outputs_[name] = sha256_hex(content);
}

void RunOutput::write_json(const std::string& name, const Json& j) {
    write(name, j.dump(2) + "\n");
}

void RunOutput::commit() {
    Json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["subcommand"] = subcommand_;
    meta["config"] = config_;
    meta["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    meta["inputs"] = Json::object();
    for (const auto& [k, v] : inputs_) meta["inputs"][k] = {{"sha256", v}};
    meta["outputs"] = Json::object();
    for (const auto& [k, v] : outputs_) meta["outputs"][k] = {{"sha256", v}};
    write_file_atomic(staging_ / (subcommand_ + ".meta.json"), meta.dump(2) + "\n");

    std::error_code ec;
    if (!fs::exists(dir_)) {
        fs::rename(staging_, dir_, ec);
        if (!ec) {
            committed_ = true;
            return;
        }
        fs::create_directories(dir_, ec);
        if (ec) throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
    }
    for (const auto& entry : fs::directory_iterator(staging_)) {
        fs::rename(entry.path(), dir_ / entry.path().filename(), ec);
        if (ec) throw Error("cannot move " + entry.path().filename().string() + " into " + dir_.string());
    }
    fs::remove(staging_, ec);
    committed_ = true;
}

}  // namespace osn
