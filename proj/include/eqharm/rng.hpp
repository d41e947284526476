#pragma once

#include <complex>
#include <cstdint>

namespace eqharm {

/// Deterministic random stream: splitmix64 state advance with explicit
/// Box-Muller normals. Self-contained on purpose — std::normal_distribution's
/// algorithm is implementation-defined, and ensemble reports must be
/// byte-identical across toolchains and thread counts.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    /// Independent child stream for task `index` (sample-level parallelism).
    static RandomStream for_task(std::uint64_t master_seed, std::uint64_t index) {
        RandomStream s(master_seed + 0x9e3779b97f4a7c15ULL * (index + 1));
        s.next_u64();  // decorrelate nearby seeds
        s.next_u64();
        return s;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1] (never 0, safe for log()).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    /// Standard complex Gaussian: E[z z̄] = 1, E[z²] = 0.
    std::complex<double> complex_normal() {
        const double r = std::sqrt(-std::log(uniform()));
        const double t = 6.283185307179586476925286766559 * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// Real standard normal N(0, 1).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const std::complex<double> z = complex_normal();
        // complex_normal has Re, Im ~ N(0, 1/2) independent
        constexpr double sqrt2 = 1.4142135623730950488;
        spare_ = z.imag() * sqrt2;
        have_spare_ = true;
        return z.real() * sqrt2;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace eqharm
