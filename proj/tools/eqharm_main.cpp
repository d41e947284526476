// Command-line driver: seeded experiments on Gaussian equivariant harmonics.
//
// Subcommands: sample, zeros, surface, kernels-table, kacrice-table,
//              ensemble, fit, equivalence.
// Every option resolves with precedence CLI > environment (EQHARM_<KEY>) >
// config file (--config, key = value lines) > built-in default, and the
// resolved configuration's hash is stamped on every output row.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "eqharm/ensemble.hpp"
#include "eqharm/kacrice.hpp"
#include "eqharm/kernels.hpp"
#include "eqharm/nodal.hpp"
#include "eqharm/reporting.hpp"
#include "eqharm/rng.hpp"

namespace fs = std::filesystem;
using namespace eqharm;

namespace {

/// One option with uniform precedence handling. The CLI11 option only records
/// whether (and with what) it was passed; resolution happens afterwards.
struct Resolver {
    Config file_config;
    Config resolved;

    std::string resolve(const std::string& key, const CLI::Option* opt,
                        const std::string& cli_value, const std::string& fallback) {
        std::string value = fallback;
        if (file_config.has(key)) value = file_config.get(key);
        std::string env_key = "EQHARM_";
        for (char c : key) env_key += static_cast<char>(c == '-' ? '_' : std::toupper(c));
        if (const char* env = std::getenv(env_key.c_str())) value = env;
        if (opt != nullptr && opt->count() > 0) value = cli_value;
        resolved.set(key, value);
        return value;
    }

    long long resolve_int(const std::string& key, const CLI::Option* opt,
                          long long cli_value, long long fallback) {
        return std::stoll(
            resolve(key, opt, std::to_string(cli_value), std::to_string(fallback)));
    }

    bool resolve_flag(const std::string& key, const CLI::Option* opt, bool fallback) {
        const std::string v =
            resolve(key, opt, "1", fallback ? "1" : "0");
        return v == "1" || v == "true" || v == "on" || v == "yes";
    }
};

struct GlobalOptions {
    std::uint64_t seed = 12345;
    int threads = 1;
    std::string out_dir = "out";
    std::string basis_cache_dir;
    std::string config_hash;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

std::string out_path(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

// ---------------------------------------------------------------------------
// Subcommand bodies (invoked after option resolution).
// ---------------------------------------------------------------------------

int cmd_sample(const GlobalOptions& g, int N, int m, int count) {
    auto basis = get_basis(N, m, g.basis_cache_dir);
    const std::string path = out_path(g, "sample_coefficients.csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "sample,seed,k,re,im,config_hash,version\n");
    for (int s = 0; s < count; ++s) {
        RandomStream stream = RandomStream::for_task(g.seed, s);
        const std::uint64_t sseed = stream.next_u64();
        const RandomHarmonic h = sample_harmonic(basis, sseed);
        for (int k = 0; k < h.coefficients.size(); ++k) {
            std::fprintf(f, "%d,%llu,%d,%s,%s,%s,%s\n", s,
                         static_cast<unsigned long long>(sseed), k,
                         format_double(h.coefficients(k).real()).c_str(),
                         format_double(h.coefficients(k).imag()).c_str(),
                         g.config_hash.c_str(), kVersionTag);
        }
    }
    std::fclose(f);
    std::printf("wrote %s (%d samples, dim %d)\n", path.c_str(), count,
                harmonic_space_dimension(N, m));
    return 0;
}

int cmd_zeros(const GlobalOptions& g, int N, int m, int count, bool emit_svg) {
    auto basis = get_basis(N, m, g.basis_cache_dir);
    const std::string path = out_path(g, "zeros.csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "sample,seed,x,y,z,alpha,phi,index,newton_residual,certified,"
                    "at_pole,config_hash,version\n");
    int failures = 0;
    for (int s = 0; s < count; ++s) {
        RandomStream stream = RandomStream::for_task(g.seed, s);
        const std::uint64_t sseed = stream.next_u64();
        const RandomHarmonic h = sample_harmonic(basis, sseed);
        const ZeroSet zs = count_zeros(h);
        failures += zs.failure_count;
        for (const ZeroRecord& z : zs.zeros) {
            std::fprintf(f, "%d,%llu,%s,%s,%s,%s,%s,%d,%s,%d,%d,%s,%s\n", s,
                         static_cast<unsigned long long>(sseed),
                         format_double(z.position.x()).c_str(),
                         format_double(z.position.y()).c_str(),
                         format_double(z.position.z()).c_str(),
                         format_double(z.alpha).c_str(),
                         format_double(z.phi).c_str(), z.index,
                         format_double(z.newton_residual).c_str(),
                         z.certified ? 1 : 0, z.at_pole ? 1 : 0,
                         g.config_hash.c_str(), kVersionTag);
        }
        if (emit_svg && s == 0) {
            write_zero_svg(zs, out_path(g, "zeros.svg"));
        }
    }
    std::fclose(f);
    std::printf("wrote %s (%d samples, %d certification failures)\n", path.c_str(),
                count, failures);
    return 0;
}

int cmd_surface(const GlobalOptions& g, int N, int m, int count, int level) {
    auto basis = get_basis(N, m, g.basis_cache_dir);
    const SphereTriangulation mesh = triangulate_sphere3(level);
    const std::string path = out_path(g, "surfaces.csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f,
                 "sample,seed,components,chi,genus,closed,config_hash,version\n");
    for (int s = 0; s < count; ++s) {
        RandomStream stream = RandomStream::for_task(g.seed, s);
        const std::uint64_t sseed = stream.next_u64();
        const RandomHarmonic h = sample_harmonic(basis, sseed);
        const NodalSurface surf = extract_nodal_surface(h, level, &mesh);
        char name[64];
        std::snprintf(name, sizeof name, "surface_%03d.off", s);
        write_surface_off(surf, out_path(g, name));
        std::fprintf(f, "%d,%llu,%zu,%lld,%s,%d,%s,%s\n", s,
                     static_cast<unsigned long long>(sseed), surf.components.size(),
                     surf.total_chi(), format_double(surf.total_genus()).c_str(),
                     surf.closed() ? 1 : 0, g.config_hash.c_str(), kVersionTag);
    }
    std::fclose(f);
    std::printf("wrote %s and %d OFF meshes (level %d)\n", path.c_str(), count, level);
    return 0;
}

int cmd_kernels_table(const GlobalOptions& g, int max_n) {
    const std::string path = out_path(g, "kernels_table.csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "N,m,D,eta,mu,nu,eta_kernel,nu_kernel,rho,config_hash,version\n");
    for (int N = 1; N <= max_n; ++N) {
        for (int m = -N; m <= N; m += 2) {
            const CovarianceMatrices ref = covariance_closed_form(N, m);
            const CovarianceMatrices kernel = covariance_kernel_form(N, m);
            std::fprintf(f, "%d,%d,%s,%s,%s,%s,%s,%s,%s,%s,%s\n", N, m,
                         format_double(covariance_scale(N, m)).c_str(),
                         format_double(ref.eta).c_str(),
                         format_double(ref.mu).c_str(),
                         format_double(ref.nu).c_str(),
                         format_double(kernel.eta).c_str(),
                         format_double(kernel.nu).c_str(),
                         format_double(rho_n(N)).c_str(), g.config_hash.c_str(),
                         kVersionTag);
        }
    }
    std::fclose(f);
    std::printf("wrote %s (N <= %d)\n", path.c_str(), max_n);
    return 0;
}

int cmd_kacrice_table(const GlobalOptions& g, int max_n, long long mc_samples) {
    const std::string path = out_path(g, "kacrice_table.csv");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f,
                 "N,m,D,eta,expected_zero_count,expected_genus,eta_kernel,"
                 "expected_zero_count_kernel,expected_genus_kernel,quadrature,"
                 "mc_mean,mc_stderr,config_hash,version\n");
    for (int N = 1; N <= max_n; ++N) {
        for (int m = -N; m <= N; m += 2) {
            if (m == 0) continue;
            const KacRicePrediction p = predict(N, m);
            const CovarianceMatrices cov = covariance_kernel_form(N, m);
            const double quad = kacrice_integral_quadrature(cov.Lambda, N + 1);
            double mc_mean = std::nan(""), mc_se = std::nan("");
            if (mc_samples > 0) {
                const MonteCarloEstimate mc =
                    kacrice_integral_mc(cov.Lambda, N + 1, mc_samples,
                                        g.seed + 1000003ULL * N + 7ULL * (m + N));
                mc_mean = mc.mean;
                mc_se = mc.stderr_of_mean;
            }
            std::fprintf(f, "%d,%d,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n", N, m,
                         format_double(p.D).c_str(), format_double(p.eta).c_str(),
                         format_double(p.expected_zero_count).c_str(),
                         format_double(p.expected_genus).c_str(),
                         format_double(p.eta_kernel).c_str(),
                         format_double(p.expected_zero_count_kernel).c_str(),
                         format_double(p.expected_genus_kernel).c_str(),
                         format_double(quad).c_str(), format_double(mc_mean).c_str(),
                         format_double(mc_se).c_str(), g.config_hash.c_str(),
                         kVersionTag);
        }
    }
    std::fclose(f);
    std::printf("wrote %s (N <= %d)\n", path.c_str(), max_n);
    return 0;
}

int cmd_ensemble(const GlobalOptions& g, const EnsembleParams& params) {
    const EnsembleReport report = run_ensemble(params);
    write_ensemble_csv(report, g.config_hash, out_path(g, "ensemble.csv"));
    write_samples_csv(report, g.config_hash, out_path(g, "samples.csv"));
    write_text(out_path(g, "ensemble_report.json"), to_json(report, g.config_hash));
    if (params.analyze_surface) {
        write_histogram_svg(report.component_histogram, "nodal component count",
                            out_path(g, "component_histogram.svg"));
    }
    std::printf("ensemble (N=%d, m=%d, %d samples): mean zero count %.6f +- %.6f, "
                "failures %d\n",
                params.N, params.m, params.n_samples, report.mean_zero_count,
                report.stderr_zero_count, report.failure_count);
    return 0;
}

int cmd_fit(const GlobalOptions& g, const std::vector<std::string>& inputs,
            bool kernel_eta) {
    std::vector<EnsembleReport> reports;
    for (const std::string& in : inputs) {
        std::ifstream file(in);
        if (!file) throw std::runtime_error("cannot open " + in);
        nlohmann::json j;
        file >> j;
        EnsembleReport r;
        r.params.N = j.at("params").at("N").get<int>();
        r.params.m = j.at("params").at("m").get<int>();
        r.params.n_samples = j.at("params").at("n_samples").get<int>();
        r.mean_zero_count = j.at("mean_zero_count").get<double>();
        r.stderr_zero_count = j.at("stderr_zero_count").get<double>();
        reports.push_back(r);
    }
    const FitResult fit = fit_normalization(reports, kernel_eta);
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kVersionTag;
    j["config_hash"] = g.config_hash;
    j["kernel_eta"] = kernel_eta;
    j["c"] = fit.c;
    j["ci_low"] = fit.ci_low;
    j["ci_high"] = fit.ci_high;
    j["residuals"] = fit.residuals;
    j["max_abs_relative_residual"] = fit.max_abs_relative_residual;
    j["anchor_prediction"] = fit.anchor_prediction;
    j["anchor_truth"] = fit.anchor_truth;
    j["anchor_consistent"] = fit.anchor_consistent;
    j["ratio_to_reference_constant"] = fit.ratio_to_reference_constant;
    write_text(out_path(g, "fit.json"), j.dump(2));
    std::printf("fit: c = %.8f [%.8f, %.8f], max |rel residual| = %.4f, "
                "c/(1/4pi) = %.4f, anchor %s\n",
                fit.c, fit.ci_low, fit.ci_high, fit.max_abs_relative_residual,
                fit.ratio_to_reference_constant,
                fit.anchor_consistent ? "consistent" : "INCONSISTENT or absent");
    return 0;
}

int cmd_equivalence(const GlobalOptions& g, int N, int m, int n_samples) {
    const EquivalenceReport rep = ensemble_equivalence_test(
        N, m, n_samples, g.seed, g.threads, g.basis_cache_dir);
    write_text(out_path(g, "equivalence.json"), to_json(rep, g.config_hash));
    std::printf("equivalence (N=%d, m=%d, %d samples): complex-vs-real KS D=%.4f "
                "p=%.4f (%s); control KS D=%.4f p=%.4g (%s)\n",
                N, m, n_samples, rep.complex_vs_real.statistic,
                rep.complex_vs_real.p_value, rep.equivalence_passes ? "pass" : "FAIL",
                rep.complex_vs_control.statistic, rep.complex_vs_control.p_value,
                rep.control_rejected ? "rejected" : "NOT rejected");
    return rep.equivalence_passes ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian equivariant spherical harmonics on S3: sampling, zero "
                 "counting, nodal topology, and Kac-Rice experiments"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may appear after the subcommand name

    // Raw option storage; precedence resolution happens after parsing.
    std::string config_path;
    unsigned long long seed = 12345;
    int threads = 1;
    std::string out_dir = "out";
    std::string cache_dir;
    auto* opt_config = app.add_option("--config", config_path,
                                      "key = value config file (lowest precedence "
                                      "above built-in defaults)");
    auto* opt_seed = app.add_option("--seed", seed, "master RNG seed");
    auto* opt_threads = app.add_option("--threads", threads, "worker thread count");
    auto* opt_out = app.add_option("--out-dir", out_dir, "output directory");
    auto* opt_cache =
        app.add_option("--basis-cache-dir", cache_dir, "basis cache directory");

    int N = 4, m = 2, count = 1, level = 5, samples = 100, max_n = 8;
    long long mc_samples = 0;
    bool emit_svg = false, no_zeros = false, do_surface = false, kernel_eta = false;
    std::vector<std::string> fit_inputs;

    auto* sc_sample = app.add_subcommand("sample", "draw Gaussian harmonics, dump "
                                                   "coefficient CSV");
    auto* o_sn = sc_sample->add_option("--N", N, "degree");
    auto* o_sm = sc_sample->add_option("--m", m, "equivariance weight");
    auto* o_sc = sc_sample->add_option("--count", count, "number of samples");

    auto* sc_zeros =
        app.add_subcommand("zeros", "certified zero counting on the base sphere");
    auto* o_zn = sc_zeros->add_option("--N", N, "degree");
    auto* o_zm = sc_zeros->add_option("--m", m, "equivariance weight");
    auto* o_zc = sc_zeros->add_option("--count", count, "number of samples");
    auto* o_zs = sc_zeros->add_flag("--emit-svg", emit_svg,
                                    "stereographic SVG plot of the zero set");

    auto* sc_surface =
        app.add_subcommand("surface", "nodal surface extraction (OFF + CSV)");
    auto* o_fn = sc_surface->add_option("--N", N, "degree");
    auto* o_fm = sc_surface->add_option("--m", m, "equivariance weight");
    auto* o_fc = sc_surface->add_option("--count", count, "number of samples");
    auto* o_fl = sc_surface->add_option("--level", level, "mesh refinement level");

    auto* sc_ktable =
        app.add_subcommand("kernels-table", "covariance sweep CSV over (N, m)");
    auto* o_kn = sc_ktable->add_option("--max-N", max_n, "largest degree");

    auto* sc_krtable =
        app.add_subcommand("kacrice-table", "zero-count prediction sweep CSV");
    auto* o_rn = sc_krtable->add_option("--max-N", max_n, "largest degree");
    auto* o_rs = sc_krtable->add_option("--mc-samples", mc_samples,
                                        "Monte Carlo samples per row (0 = skip)");

    auto* sc_ensemble =
        app.add_subcommand("ensemble", "seeded ensemble statistics (CSV/JSON/SVG)");
    auto* o_en = sc_ensemble->add_option("--N", N, "degree");
    auto* o_em = sc_ensemble->add_option("--m", m, "equivariance weight");
    auto* o_es = sc_ensemble->add_option("--samples", samples, "sample count");
    auto* o_ez = sc_ensemble->add_flag("--no-zeros", no_zeros, "skip zero counting");
    auto* o_ef =
        sc_ensemble->add_flag("--surface", do_surface, "analyze nodal surfaces");
    auto* o_el = sc_ensemble->add_option("--mesh-level", level, "surface mesh level");

    auto* sc_fit = app.add_subcommand("fit", "fit mean zero count = c*(1+eta^2)*D "
                                             "across ensemble JSON reports");
    sc_fit->add_option("--input", fit_inputs, "ensemble_report.json files")
        ->required()
        ->expected(-1);
    auto* o_ke = sc_fit->add_flag("--kernel-eta", kernel_eta,
                                  "use the kernel-form eta = m/D instead of the "
                                  "reference (m/2)/D");

    auto* sc_equiv = app.add_subcommand(
        "equivalence", "KS comparison of complex vs real-span coefficient laws");
    auto* o_qn = sc_equiv->add_option("--N", N, "degree");
    auto* o_qm = sc_equiv->add_option("--m", m, "equivariance weight");
    auto* o_qs = sc_equiv->add_option("--samples", samples, "samples per ensemble");

    CLI11_PARSE(app, argc, argv);

    try {
        Resolver res;
        // --config itself resolves from env only (it seeds the file layer).
        if (opt_config->count() == 0) {
            if (const char* env = std::getenv("EQHARM_CONFIG")) config_path = env;
        }
        if (!config_path.empty()) res.file_config = load_config_file(config_path);

        GlobalOptions g;
        g.seed = static_cast<std::uint64_t>(res.resolve_int(
            "seed", opt_seed, static_cast<long long>(seed), 12345));
        g.threads =
            static_cast<int>(res.resolve_int("threads", opt_threads, threads, 1));
        g.out_dir = res.resolve("out-dir", opt_out, out_dir, "out");
        g.basis_cache_dir = res.resolve("basis-cache-dir", opt_cache, cache_dir, "");

        if (sc_sample->parsed()) {
            N = static_cast<int>(res.resolve_int("N", o_sn, N, 4));
            m = static_cast<int>(res.resolve_int("m", o_sm, m, 2));
            count = static_cast<int>(res.resolve_int("count", o_sc, count, 1));
            g.config_hash = res.resolved.hash();
            return cmd_sample(g, N, m, count);
        }
        if (sc_zeros->parsed()) {
            N = static_cast<int>(res.resolve_int("N", o_zn, N, 4));
            m = static_cast<int>(res.resolve_int("m", o_zm, m, 2));
            count = static_cast<int>(res.resolve_int("count", o_zc, count, 1));
            emit_svg = res.resolve_flag("emit-svg", o_zs, false);
            g.config_hash = res.resolved.hash();
            return cmd_zeros(g, N, m, count, emit_svg);
        }
        if (sc_surface->parsed()) {
            N = static_cast<int>(res.resolve_int("N", o_fn, N, 4));
            m = static_cast<int>(res.resolve_int("m", o_fm, m, 2));
            count = static_cast<int>(res.resolve_int("count", o_fc, count, 1));
            level = static_cast<int>(res.resolve_int("level", o_fl, level, 5));
            g.config_hash = res.resolved.hash();
            return cmd_surface(g, N, m, count, level);
        }
        if (sc_ktable->parsed()) {
            max_n = static_cast<int>(res.resolve_int("max-N", o_kn, max_n, 8));
            g.config_hash = res.resolved.hash();
            return cmd_kernels_table(g, max_n);
        }
        if (sc_krtable->parsed()) {
            max_n = static_cast<int>(res.resolve_int("max-N", o_rn, max_n, 8));
            mc_samples = res.resolve_int("mc-samples", o_rs, mc_samples, 0);
            g.config_hash = res.resolved.hash();
            return cmd_kacrice_table(g, max_n, mc_samples);
        }
        if (sc_ensemble->parsed()) {
            EnsembleParams params;
            params.N = static_cast<int>(res.resolve_int("N", o_en, N, 4));
            params.m = static_cast<int>(res.resolve_int("m", o_em, m, 2));
            params.n_samples =
                static_cast<int>(res.resolve_int("samples", o_es, samples, 100));
            params.analyze_zeros = !res.resolve_flag("no-zeros", o_ez, false);
            params.analyze_surface = res.resolve_flag("surface", o_ef, false);
            params.mesh_level =
                static_cast<int>(res.resolve_int("mesh-level", o_el, level, 5));
            params.seed = g.seed;
            params.threads = g.threads;
            params.basis_cache_dir = g.basis_cache_dir;
            g.config_hash = res.resolved.hash();
            return cmd_ensemble(g, params);
        }
        if (sc_fit->parsed()) {
            kernel_eta = res.resolve_flag("kernel-eta", o_ke, false);
            g.config_hash = res.resolved.hash();
            return cmd_fit(g, fit_inputs, kernel_eta);
        }
        if (sc_equiv->parsed()) {
            N = static_cast<int>(res.resolve_int("N", o_qn, N, 4));
            m = static_cast<int>(res.resolve_int("m", o_qm, m, 2));
            samples = static_cast<int>(res.resolve_int("samples", o_qs, samples, 100));
            g.config_hash = res.resolved.hash();
            return cmd_equivalence(g, N, m, samples);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
