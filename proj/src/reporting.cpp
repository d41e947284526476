#include "eqharm/reporting.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eqharm {

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : values) {  // std::map iterates sorted
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Config load_config_file(const std::string& path) {
    Config config;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config_file: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) config.set(key, value);
    }
    return config;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

nlohmann::json params_json(const EnsembleParams& p) {
    return {{"N", p.N},
            {"m", p.m},
            {"n_samples", p.n_samples},
            {"seed", p.seed},
            {"analyze_zeros", p.analyze_zeros},
            {"analyze_surface", p.analyze_surface},
            {"mesh_level", p.mesh_level},
            {"threads", p.threads}};
}

}  // namespace

std::string to_json(const EnsembleReport& report, const std::string& config_hash) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kVersionTag;
    j["config_hash"] = config_hash;
    j["params"] = params_json(report.params);
    j["success_count"] = report.success_count;
    j["failure_count"] = report.failure_count;
    j["mean_zero_count"] = report.mean_zero_count;
    j["stderr_zero_count"] = report.stderr_zero_count;
    j["mean_genus"] = report.mean_genus;
    j["stderr_genus"] = report.stderr_genus;
    j["reference_expected_zero_count"] = report.reference_expected_zero_count;
    j["kernel_expected_zero_count"] = report.kernel_expected_zero_count;
    j["zero_count_ratio_to_reference"] = report.zero_count_ratio_to_reference;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [k, v] : report.component_histogram) {
        hist[std::to_string(k)] = v;
    }
    j["component_histogram"] = hist;
    return j.dump(2);
}

std::string to_json(const EquivalenceReport& report, const std::string& config_hash) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kVersionTag;
    j["config_hash"] = config_hash;
    j["N"] = report.N;
    j["m"] = report.m;
    j["n_samples"] = report.n_samples;
    j["seed"] = report.seed;
    j["mean_complex"] = report.mean_complex;
    j["mean_real"] = report.mean_real;
    j["mean_control"] = report.mean_control;
    j["ks_complex_vs_real"] = {{"statistic", report.complex_vs_real.statistic},
                               {"p_value", report.complex_vs_real.p_value}};
    j["ks_complex_vs_control"] = {{"statistic", report.complex_vs_control.statistic},
                                  {"p_value", report.complex_vs_control.p_value}};
    j["equivalence_passes"] = report.equivalence_passes;
    j["control_rejected"] = report.control_rejected;
    return j.dump(2);
}

void write_ensemble_csv(const EnsembleReport& report, const std::string& config_hash,
                        const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_ensemble_csv: cannot open " + path);
    std::fprintf(f,
                 "N,m,n_samples,seed,success_count,failure_count,mean_zero_count,"
                 "stderr_zero_count,mean_genus,stderr_genus,reference_expected_zero_count,"
                 "kernel_expected_zero_count,config_hash,version\n");
    const EnsembleParams& p = report.params;
    std::fprintf(f, "%d,%d,%d,%llu,%d,%d,%s,%s,%s,%s,%s,%s,%s,%s\n", p.N, p.m,
                 p.n_samples, static_cast<unsigned long long>(p.seed),
                 report.success_count, report.failure_count,
                 format_double(report.mean_zero_count).c_str(),
                 format_double(report.stderr_zero_count).c_str(),
                 format_double(report.mean_genus).c_str(),
                 format_double(report.stderr_genus).c_str(),
                 format_double(report.reference_expected_zero_count).c_str(),
                 format_double(report.kernel_expected_zero_count).c_str(),
                 config_hash.c_str(), kVersionTag);
    std::fclose(f);
}

void write_samples_csv(const EnsembleReport& report, const std::string& config_hash,
                       const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_samples_csv: cannot open " + path);
    std::fprintf(f,
                 "sample,seed,certified,zero_count,index_sum,components,chi,genus,"
                 "refinement_stable,sheet_count,config_hash,version\n");
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const SampleOutcome& s = report.samples[i];
        std::fprintf(f, "%zu,%llu,%d,%d,%d,%d,%lld,%s,%d,%d,%s,%s\n", i,
                     static_cast<unsigned long long>(s.sample_seed), s.certified ? 1 : 0,
                     s.zero_count, s.index_sum, s.components, s.chi,
                     format_double(s.genus).c_str(), s.refinement_stable ? 1 : 0,
                     s.sheet_count, config_hash.c_str(), kVersionTag);
    }
    std::fclose(f);
}

void write_zeros_csv(const ZeroSet& zeros, std::uint64_t seed,
                     const std::string& config_hash, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_zeros_csv: cannot open " + path);
    std::fprintf(f, "seed,x,y,z,alpha,phi,index,newton_residual,certified,at_pole,"
                    "config_hash,version\n");
    for (const ZeroRecord& z : zeros.zeros) {
        std::fprintf(f, "%llu,%s,%s,%s,%s,%s,%d,%s,%d,%d,%s,%s\n",
                     static_cast<unsigned long long>(seed),
                     format_double(z.position.x()).c_str(),
                     format_double(z.position.y()).c_str(),
                     format_double(z.position.z()).c_str(),
                     format_double(z.alpha).c_str(), format_double(z.phi).c_str(),
                     z.index, format_double(z.newton_residual).c_str(),
                     z.certified ? 1 : 0, z.at_pole ? 1 : 0, config_hash.c_str(),
                     kVersionTag);
    }
    std::fclose(f);
}

void write_histogram_svg(const std::map<int, int>& histogram, const std::string& title,
                         const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_histogram_svg: cannot open " + path);
    int max_count = 1;
    for (const auto& [k, v] : histogram) max_count = std::max(max_count, v);
    const int width = 60 * std::max<int>(1, histogram.size()) + 40;
    std::fprintf(f,
                 "<svg xmlns='http://www.w3.org/2000/svg' width='%d' height='260'>\n"
                 "<text x='10' y='20' font-size='14'>%s</text>\n",
                 width, title.c_str());
    int i = 0;
    for (const auto& [k, v] : histogram) {
        const double h = 180.0 * v / max_count;
        const int x = 20 + 60 * i;
        std::fprintf(f,
                     "<rect x='%d' y='%.1f' width='40' height='%.1f' fill='#1f77b4'/>\n"
                     "<text x='%d' y='250' font-size='12'>%d</text>\n"
                     "<text x='%d' y='%.1f' font-size='11'>%d</text>\n",
                     x, 230.0 - h, h, x + 12, k, x + 8, 225.0 - h, v);
        ++i;
    }
    std::fprintf(f, "</svg>\n");
    std::fclose(f);
}

}  // namespace eqharm
