#include "eqharm/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "eqharm/errors.hpp"
#include "eqharm/rng.hpp"

namespace eqharm {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

/// Runs body(i) for i in [0, n) on `threads` workers. Work items are
/// independent and write only to slot i of pre-sized result vectors, so the
/// outcome is identical for any worker count.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::uint64_t sample_seed(std::uint64_t master, int index) {
    RandomStream s = RandomStream::for_task(master, static_cast<std::uint64_t>(index));
    return s.next_u64();
}

void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
    mean = se = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= xs.size();
    if (xs.size() < 2) return;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / (xs.size() - 1.0) / xs.size());
}

}  // namespace

EnsembleReport run_ensemble(const EnsembleParams& params) {
    if (harmonic_space_dimension(params.N, params.m) == 0) {
        throw EmptySpaceError("run_ensemble: empty space H_N^m");
    }
    auto basis = get_basis(params.N, params.m, params.basis_cache_dir);

    EnsembleReport report;
    report.params = params;
    report.samples.resize(params.n_samples);

    parallel_for(params.n_samples, params.threads, [&](int i) {
        SampleOutcome& out = report.samples[i];
        out.sample_seed = sample_seed(params.seed, i);
        const RandomHarmonic h = sample_harmonic(basis, out.sample_seed);

        if (params.analyze_zeros) {
            const ZeroSet zs = count_zeros(h, params.zero_params);
            out.certified = zs.all_certified();
            out.zero_count = zs.total_count;
            out.index_sum = zs.index_sum;
        } else {
            out.certified = true;
        }

        if (params.analyze_surface) {
            const NodalSurface surf = extract_nodal_surface(h, params.mesh_level);
            out.components = static_cast<int>(surf.components.size());
            out.chi = surf.total_chi();
            out.genus = surf.total_genus();
            out.surface_closed = surf.closed();
            if (params.stability_check && params.mesh_level >= 4) {
                // Two consecutive coarser levels must agree: a thin handle can
                // be missed identically at two adjacent levels, so a single
                // coarse/fine comparison is not enough evidence of stability.
                const NodalSurface coarse =
                    extract_nodal_surface(h, params.mesh_level - 1);
                out.refinement_stable =
                    coarse.components.size() == surf.components.size() &&
                    coarse.total_chi() == surf.total_chi();
                if (out.refinement_stable && params.mesh_level >= 5) {
                    const NodalSurface coarser =
                        extract_nodal_surface(h, params.mesh_level - 2);
                    out.refinement_stable =
                        coarser.components.size() == surf.components.size() &&
                        coarser.total_chi() == surf.total_chi();
                }
            } else {
                out.refinement_stable = true;
            }
            // Sheet count at a few deterministic base points off the zero set.
            RandomStream rng(out.sample_seed ^ 0xabcdef12345ULL);
            for (int tries = 0; tries < 8; ++tries) {
                const double alpha = 0.2 + 0.6 * rng.uniform() * kPi / 2;
                const double phi = rng.uniform() * kPi;
                try {
                    out.sheet_count = fiber_sheet_count(h, base_point(alpha, phi));
                    break;
                } catch (const BaseOnZeroSetError&) {
                    continue;
                }
            }
        }
    });

    // Ordered, deterministic aggregation.
    std::vector<double> zero_counts, genera;
    for (const SampleOutcome& s : report.samples) {
        if (!s.certified) {
            ++report.failure_count;
            continue;
        }
        ++report.success_count;
        if (params.analyze_zeros) zero_counts.push_back(s.zero_count);
        if (params.analyze_surface) {
            genera.push_back(s.genus);
            ++report.component_histogram[s.components];
        }
    }
    mean_stderr(zero_counts, report.mean_zero_count, report.stderr_zero_count);
    mean_stderr(genera, report.mean_genus, report.stderr_genus);

    if (params.m != 0) {
        const KacRicePrediction pred = predict(params.N, params.m);
        report.reference_expected_zero_count = pred.expected_zero_count;
        report.kernel_expected_zero_count = pred.expected_zero_count_kernel;
        if (pred.expected_zero_count > 0) {
            report.zero_count_ratio_to_reference =
                report.mean_zero_count / pred.expected_zero_count;
        }
    }
    return report;
}

FitResult fit_normalization(const std::vector<EnsembleReport>& reports, bool kernel_eta) {
    std::vector<std::pair<int, int>> keys;
    for (const auto& r : reports) {
        if (r.params.m != 0) keys.emplace_back(r.params.N, r.params.m);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (keys.size() < 3) {
        throw InsufficientDataError(
            "fit_normalization: need >= 3 reports with distinct (N, m), m != 0");
    }

    FitResult fit;
    double sxx = 0.0, sxy = 0.0;
    std::vector<double> xs, ys;
    for (const auto& r : reports) {
        if (r.params.m == 0) continue;
        const double D = covariance_scale(r.params.N, r.params.m);
        const double eta = kernel_eta ? r.params.m / D : 0.5 * r.params.m / D;
        const double x = (1.0 + eta * eta) * D;
        const double y = r.mean_zero_count;
        xs.push_back(x);
        ys.push_back(y);
        sxx += x * x;
        sxy += x * y;
    }
    fit.c = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = fit.c * xs[i];
        const double rel = (ys[i] - pred) / pred;
        fit.residuals.push_back(rel);
        fit.max_abs_relative_residual =
            std::max(fit.max_abs_relative_residual, std::abs(rel));
        ss_res += (ys[i] - pred) * (ys[i] - pred);
    }
    const double dof = std::max<std::size_t>(1, xs.size() - 1);
    const double se_c = std::sqrt(ss_res / dof / sxx);
    fit.ci_low = fit.c - 2.0 * se_c;
    fit.ci_high = fit.c + 2.0 * se_c;
    fit.ratio_to_reference_constant = fit.c * 4.0 * kPi;

    // m = N anchor: a holomorphic section has exactly N zeros.
    for (const auto& r : reports) {
        if (r.params.m == r.params.N && r.params.m != 0) {
            const double D = covariance_scale(r.params.N, r.params.m);
            const double eta = kernel_eta ? r.params.m / D : 0.5 * r.params.m / D;
            fit.anchor_prediction = fit.c * (1.0 + eta * eta) * D;
            fit.anchor_truth = r.params.N;
            fit.anchor_consistent =
                std::abs(fit.anchor_prediction - fit.anchor_truth) / fit.anchor_truth <
                0.05;
            break;
        }
    }
    return fit;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    KsResult res;
    res.n1 = static_cast<int>(a.size());
    res.n2 = static_cast<int>(b.size());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    res.statistic = d;
    const double ne = static_cast<double>(res.n1) * res.n2 / (res.n1 + res.n2);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k & 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    res.p_value = std::min(1.0, std::max(0.0, p));
    if (d == 0.0) res.p_value = 1.0;
    return res;
}

namespace {

/// Zero counts for n samples under one of three coefficient laws.
enum class CoefficientLaw { complex_gaussian, real_span_gaussian, zeroed_imaginary };

std::vector<double> zero_count_sample(std::shared_ptr<const HarmonicSpaceBasis> basis,
                                      int n_samples, std::uint64_t seed,
                                      CoefficientLaw law, int threads) {
    std::vector<double> counts(n_samples, -1.0);
    parallel_for(n_samples, threads, [&](int i) {
        RandomStream rng(sample_seed(seed, i));
        Eigen::VectorXcd coeffs(basis->dimension());
        for (int k = 0; k < coeffs.size(); ++k) {
            switch (law) {
                case CoefficientLaw::complex_gaussian:
                    coeffs(k) = rng.complex_normal();
                    break;
                case CoefficientLaw::real_span_gaussian:
                    coeffs(k) = Complex(rng.normal(), -rng.normal());
                    break;
                case CoefficientLaw::zeroed_imaginary:
                    coeffs(k) = Complex(rng.normal(), 0.0);
                    break;
            }
        }
        const RandomHarmonic h = harmonic_from_coefficients(basis, coeffs);
        const ZeroSet zs = count_zeros(h);
        counts[i] = zs.all_certified() ? zs.total_count : -1.0;
    });
    // Drop failed samples (rare; tallied by callers via size difference).
    std::vector<double> ok;
    ok.reserve(counts.size());
    for (double c : counts) {
        if (c >= 0) ok.push_back(c);
    }
    return ok;
}

}  // namespace

EquivalenceReport ensemble_equivalence_test(int N, int m, int n_samples,
                                            std::uint64_t seed, int threads,
                                            const std::string& basis_cache_dir) {
    auto basis = get_basis(N, m, basis_cache_dir);
    EquivalenceReport rep;
    rep.N = N;
    rep.m = m;
    rep.n_samples = n_samples;
    rep.seed = seed;
    const auto cx = zero_count_sample(basis, n_samples, seed,
                                      CoefficientLaw::complex_gaussian, threads);
    const auto re = zero_count_sample(basis, n_samples, seed + 1,
                                      CoefficientLaw::real_span_gaussian, threads);
    const auto ctrl = zero_count_sample(basis, n_samples, seed + 2,
                                        CoefficientLaw::zeroed_imaginary, threads);
    auto mean = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / v.size();
    };
    rep.mean_complex = mean(cx);
    rep.mean_real = mean(re);
    rep.mean_control = mean(ctrl);
    rep.complex_vs_real = ks_two_sample(cx, re);
    rep.complex_vs_control = ks_two_sample(cx, ctrl);
    rep.equivalence_passes = rep.complex_vs_real.p_value > 0.01;
    rep.control_rejected = rep.complex_vs_control.p_value < 0.01;
    return rep;
}

}  // namespace eqharm
