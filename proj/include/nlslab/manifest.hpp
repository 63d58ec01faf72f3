#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/errors.hpp"
#include "nlslab/version.hpp"

namespace nlslab {

/// FNV-1a 64-bit content digest (integrity/determinism checks, not crypto).
inline std::string fnv1a64_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error("cannot read file for digest: " + path);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return bytes;
}

/// One machine-readable outcome; every verdict names the operation and the
/// tolerance that produced it.
struct Verdict {
    std::string name;
    std::string operation;
    double tolerance = 0.0;
    double value = 0.0;
    bool pass = false;
    std::string note;
};

inline nlohmann::json verdict_json(const Verdict& v) {
    nlohmann::json j{{"name", v.name}, {"operation", v.operation}, {"tolerance", v.tolerance},
                     {"value", v.value}, {"pass", v.pass}};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

struct FileEntry {
    std::string path; // relative to the output directory
    std::string digest;
};

struct RunManifest {
    std::string scenario;
    nlohmann::json config_echo;
    std::string code_version = kVersion;
    double timing_seconds = 0.0;
    std::vector<Verdict> verdicts;
    std::vector<FileEntry> files;
    std::string out_dir;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema_version"] = kReportSchemaVersion;
        j["code_version"] = code_version;
        j["scenario"] = scenario;
        j["config"] = config_echo;
        j["timing_seconds"] = timing_seconds;
        j["all_pass"] = all_pass();
        j["verdicts"] = nlohmann::json::array();
        for (const auto& v : verdicts) j["verdicts"].push_back(verdict_json(v));
        j["files"] = nlohmann::json::array();
        for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"digest", f.digest}});
        return j;
    }
};

} // namespace nlslab
