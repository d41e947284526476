#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "eqharm/ensemble.hpp"
#include "eqharm/errors.hpp"
#include "eqharm/reporting.hpp"

using namespace eqharm;

TEST_CASE("two-sample KS statistic and p-value") {
    // Identical samples: D = 0, p = 1.
    std::vector<double> a = {1, 2, 3, 4, 5};
    const KsResult same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);
    // Disjoint supports: D = 1, p ≈ 0.
    std::vector<double> lo(50), hi(50);
    for (int i = 0; i < 50; ++i) {
        lo[i] = i;
        hi[i] = 1000 + i;
    }
    const KsResult apart = ks_two_sample(lo, hi);
    CHECK(apart.statistic == doctest::Approx(1.0));
    CHECK(apart.p_value < 1e-10);
    // Hand-checkable: {1,2} vs {1.5, 2.5} has D = 1/2.
    const KsResult half = ks_two_sample({1.0, 2.0}, {1.5, 2.5});
    CHECK(half.statistic == doctest::Approx(0.5));
    CHECK(half.n1 == 2);
    CHECK(half.n2 == 2);
}

TEST_CASE("ensemble run: bookkeeping, determinism, thread independence") {
    EnsembleParams params;
    params.N = 4;
    params.m = 2;
    params.n_samples = 16;
    params.seed = 20240501;
    params.analyze_zeros = true;
    params.analyze_surface = false;

    const EnsembleReport r1 = run_ensemble(params);
    CHECK(r1.success_count + r1.failure_count == 16);
    CHECK(static_cast<int>(r1.samples.size()) == 16);
    CHECK(r1.mean_zero_count > 0.0);
    CHECK(r1.reference_expected_zero_count > 0.0);
    CHECK(r1.kernel_expected_zero_count == doctest::Approx(5.2));
    for (const SampleOutcome& s : r1.samples) {
        if (s.certified) CHECK(s.index_sum == 2);
    }
    // Per-sample seeds are all distinct.
    std::set<std::uint64_t> seeds;
    for (const SampleOutcome& s : r1.samples) seeds.insert(s.sample_seed);
    CHECK(seeds.size() == r1.samples.size());

    // Same seed → identical report; more workers → identical report.
    const EnsembleReport r2 = run_ensemble(params);
    params.threads = 3;
    const EnsembleReport r3 = run_ensemble(params);
    for (const EnsembleReport* other : {&r2, &r3}) {
        CHECK(other->mean_zero_count == r1.mean_zero_count);
        CHECK(other->stderr_zero_count == r1.stderr_zero_count);
        REQUIRE(other->samples.size() == r1.samples.size());
        for (std::size_t i = 0; i < r1.samples.size(); ++i) {
            CHECK(other->samples[i].sample_seed == r1.samples[i].sample_seed);
            CHECK(other->samples[i].zero_count == r1.samples[i].zero_count);
        }
    }
    // And the serialized CSV rows are byte-identical across thread counts
    // (the JSON report records the worker count as metadata, the CSV does not).
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eqharm_ensemble_test";
    fs::create_directories(dir);
    Config config;
    config.set("N", "4");
    write_ensemble_csv(r1, config.hash(), (dir / "r1.csv").string());
    write_ensemble_csv(r3, config.hash(), (dir / "r3.csv").string());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(dir / "r1.csv") == slurp(dir / "r3.csv"));
    fs::remove_all(dir);

    CHECK_THROWS_AS(run_ensemble([] {
                        EnsembleParams bad;
                        bad.N = 3;
                        bad.m = 2;
                        return bad;
                    }()),
                    EmptySpaceError);
}

TEST_CASE("ensemble run with surface analysis") {
    EnsembleParams params;
    params.N = 3;
    params.m = 1;
    params.n_samples = 4;
    params.seed = 7;
    params.analyze_zeros = false;
    params.analyze_surface = true;
    params.mesh_level = 4;
    params.stability_check = true;
    const EnsembleReport r = run_ensemble(params);
    CHECK(r.success_count == 4);
    CHECK(!r.component_histogram.empty());
    for (const SampleOutcome& s : r.samples) {
        CHECK(s.components >= 1);
        CHECK(s.surface_closed);
        CHECK(s.chi % 2 == 0);
        CHECK(s.sheet_count == 2);
    }
}

TEST_CASE("normalization fit recovers a synthetic constant") {
    auto make = [](int N, int m, double c0) {
        EnsembleReport r;
        r.params.N = N;
        r.params.m = m;
        const double D = covariance_scale(N, m);
        const double eta = m / D;
        r.mean_zero_count = c0 * (1.0 + eta * eta) * D;
        return r;
    };
    const double c0 = 0.5;
    std::vector<EnsembleReport> reports = {make(3, 3, c0), make(4, 2, c0),
                                           make(5, 3, c0), make(6, 6, c0),
                                           make(6, 2, c0)};
    const FitResult fit = fit_normalization(reports, /*kernel_eta=*/true);
    CHECK(fit.c == doctest::Approx(c0).epsilon(1e-12));
    CHECK(fit.max_abs_relative_residual < 1e-12);
    CHECK(fit.anchor_truth == doctest::Approx(3.0));
    CHECK(fit.anchor_prediction == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.anchor_consistent);
    CHECK(fit.ci_low <= fit.c);
    CHECK(fit.c <= fit.ci_high);

    std::vector<EnsembleReport> too_few = {make(4, 2, c0), make(5, 3, c0)};
    CHECK_THROWS_AS(fit_normalization(too_few, true), InsufficientDataError);
}

TEST_CASE("equivalence test report is populated and deterministic") {
    const EquivalenceReport rep = ensemble_equivalence_test(4, 2, 80, 31415);
    CHECK(rep.N == 4);
    CHECK(rep.m == 2);
    CHECK(rep.n_samples == 80);
    CHECK(rep.mean_complex > 3.0);
    CHECK(rep.mean_complex < 8.0);
    CHECK(rep.complex_vs_real.p_value >= 0.0);
    CHECK(rep.complex_vs_real.p_value <= 1.0);
    // The matched real ensemble should not be rejected at this sample size.
    CHECK(rep.equivalence_passes);
    const EquivalenceReport again = ensemble_equivalence_test(4, 2, 80, 31415);
    CHECK(again.complex_vs_real.statistic == rep.complex_vs_real.statistic);
    CHECK(again.mean_control == rep.mean_control);
}

TEST_CASE("config hashing and file parsing") {
    Config a, b;
    a.set("seed", "1");
    a.set("n", "4");
    b.set("n", "4");
    b.set("seed", "1");
    CHECK(a.hash() == b.hash());  // order-independent canonical form
    b.set("seed", "2");
    CHECK(a.hash() != b.hash());
    CHECK(a.hash().size() == 16);
}
