#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace logfp {

/// INI-style experiment configuration: [section] key = value lines, comments
/// with '#' or ';'. Keys are validated against a closed schema; unknown keys
/// or sections are rejected with their line number.
class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);

    /// Apply a "section.key=value" override (from --set).
    void set_override(const std::string& assignment);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;
    /// Parse error if any of the named sections is absent.
    void require_sections(const std::vector<std::string>& sections) const;
    std::string get_str(const std::string& section, const std::string& key,
                        std::optional<std::string> fallback = std::nullopt) const;
    double get_num(const std::string& section, const std::string& key,
                   std::optional<double> fallback = std::nullopt) const;
    long get_int(const std::string& section, const std::string& key,
                 std::optional<long> fallback = std::nullopt) const;

    /// Canonical text form (sorted sections/keys) used for manifests and hashes.
    std::string canonical() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    static void check_known(const std::string& section, const std::string& key, int line);
};

/// Thrown for malformed or out-of-schema configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace logfp
