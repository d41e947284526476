#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "eqharm/ensemble.hpp"

namespace eqharm {

/// Artifact version tag carried by every CSV row and JSON report.
inline constexpr char kVersionTag[] = "eqharm-0.1.0";
/// JSON schema version.
inline constexpr int kSchemaVersion = 1;

/// Flat key=value configuration with precedence CLI > env > file > defaults.
struct Config {
    std::map<std::string, std::string> values;

    void set(const std::string& key, const std::string& value) { values[key] = value; }
    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
    /// Canonical serialization (sorted key=value lines).
    std::string canonical() const;
    /// FNV-1a 64-bit hash of the canonical form, as 16 hex digits.
    std::string hash() const;
};

/// Parses a "key = value" text file ('#' comments, blank lines ignored).
Config load_config_file(const std::string& path);

/// Shortest round-trip decimal formatting ("%.17g").
std::string format_double(double x);

/// Serialized reports (JSON text, schema-versioned).
std::string to_json(const EnsembleReport& report, const std::string& config_hash);
std::string to_json(const EquivalenceReport& report, const std::string& config_hash);

/// Aggregate CSV row(s); every row carries config hash and version tag.
void write_ensemble_csv(const EnsembleReport& report, const std::string& config_hash,
                        const std::string& path);
void write_samples_csv(const EnsembleReport& report, const std::string& config_hash,
                       const std::string& path);
void write_zeros_csv(const ZeroSet& zeros, std::uint64_t seed,
                     const std::string& config_hash, const std::string& path);

/// SVG histogram of integer-valued observations.
void write_histogram_svg(const std::map<int, int>& histogram, const std::string& title,
                         const std::string& path);

}  // namespace eqharm
