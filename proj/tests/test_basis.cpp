#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "eqharm/basis.hpp"
#include "eqharm/errors.hpp"
#include "eqharm/rng.hpp"

using namespace eqharm;

namespace {
constexpr double kPi = 3.14159265358979323846;

CartesianPoint random_point(RandomStream& rng) {
    return normalized({rng.complex_normal(), rng.complex_normal()});
}
}  // namespace

TEST_CASE("dimension law") {
    for (int N = 0; N <= 12; ++N) {
        for (int m = -N - 2; m <= N + 2; ++m) {
            const int expected = (std::abs(m) <= N && (N - m) % 2 == 0) ? N + 1 : 0;
            CHECK(harmonic_space_dimension(N, m) == expected);
            const Bidegree bd = bidegree_from_nm(N, m);
            CHECK(bd.valid() == (expected > 0));
            if (bd.valid()) {
                CHECK(bd.N() == N);
                CHECK(bd.m() == m);
            }
        }
    }
    CHECK_THROWS_AS(build_basis(3, 2), EmptySpaceError);
    CHECK_THROWS_AS(build_basis(2, 4), EmptySpaceError);
}

TEST_CASE("monomial inner product pinned values") {
    // <z1, z1> = 2π²·1!0!/2! = π²
    CHECK(monomial_inner_product({1, 0}, {1, 0}) == doctest::Approx(kPi * kPi).epsilon(1e-14));
    // <z1²z2, z1²z2> = 2π²·2!1!/4! = π²/6
    CHECK(monomial_inner_product({2, 1}, {2, 1}) ==
          doctest::Approx(kPi * kPi / 6).epsilon(1e-14));
    // constant: vol S³ = 2π²
    CHECK(monomial_inner_product({0, 0}, {0, 0}) ==
          doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
    // mismatched exponents integrate to zero
    CHECK(monomial_inner_product({1, 0}, {0, 1}) == 0.0);
}

TEST_CASE("basis is harmonic and Gram-orthonormal") {
    for (auto [N, m] : {std::pair{2, 0}, {4, 2}, {5, 5}, {6, 0}, {7, 3}, {8, 4}}) {
        const HarmonicSpaceBasis basis = build_basis(N, m);
        CHECK(basis.dimension() == N + 1);
        const Bidegree bd = basis.bidegree;
        const Eigen::MatrixXd L = laplacian_constraint(bd);
        if (L.rows() > 0) {
            const double lap = (L * basis.vectors).cwiseAbs().maxCoeff();
            CHECK(lap < 1e-12);
        }
        const Eigen::MatrixXd G = gram_matrix(bd);
        const Eigen::MatrixXcd gram =
            basis.vectors.adjoint() * G.cast<Complex>() * basis.vectors;
        const double err =
            (gram - Eigen::MatrixXcd::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff();
        CHECK(err < 1e-12);
    }
}

TEST_CASE("sampling is deterministic and coefficient norms are Gaussian-scaled") {
    auto basis = get_basis(4, 2);
    const RandomHarmonic a = sample_harmonic(basis, 987654321);
    const RandomHarmonic b = sample_harmonic(basis, 987654321);
    CHECK((a.coefficients - b.coefficients).norm() == 0.0);
    const RandomHarmonic c = sample_harmonic(basis, 987654322);
    CHECK((a.coefficients - c.coefficients).norm() > 1e-6);

    // E|a_k|² = 1: with 5·400 draws the average is within ~7 sigma of 1.
    double ss = 0.0;
    int n = 0;
    for (int s = 0; s < 400; ++s) {
        const RandomHarmonic h = sample_harmonic(basis, 1000 + s);
        ss += h.coefficients.squaredNorm();
        n += static_cast<int>(h.coefficients.size());
    }
    CHECK(std::abs(ss / n - 1.0) < 0.16);
}

TEST_CASE("equivariance under the circle action") {
    RandomStream rng(31);
    for (auto [N, m] : {std::pair{4, 2}, {5, -3}, {6, 0}, {5, 5}}) {
        auto basis = get_basis(N, m);
        const RandomHarmonic h = sample_harmonic(basis, 42);
        for (int i = 0; i < 10; ++i) {
            const CartesianPoint p = random_point(rng);
            const double t = rng.uniform() * 2 * kPi;
            const Complex lhs = evaluate(h, circle_action(p, t));
            const Complex rhs =
                std::exp(Complex(0, m * t)) * evaluate(h, p);
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("real part on a fiber is a·cos(mθ) − b·sin(mθ)") {
    auto basis = get_basis(5, 3);
    const RandomHarmonic h = sample_harmonic(basis, 77);
    RandomStream rng(37);
    for (int i = 0; i < 10; ++i) {
        const double alpha = 0.1 + 1.3 * rng.uniform();
        const double phi = rng.uniform() * kPi;
        const Complex f = evaluate(h, hopf_to_cartesian({alpha, phi, 0.0}));
        for (int j = 0; j < 8; ++j) {
            const double theta = rng.uniform() * 2 * kPi - kPi;
            const double expected =
                f.real() * std::cos(3 * theta) - f.imag() * std::sin(3 * theta);
            CHECK(real_part_values(h, {alpha, phi, theta}) ==
                  doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("chart section value and analytic jet vs finite differences") {
    for (auto [N, m] : {std::pair{4, 2}, {6, 0}, {5, 5}, {7, -3}}) {
        auto basis = get_basis(N, m);
        const RandomHarmonic h = sample_harmonic(basis, 55);
        const ChartSection section(h);
        CHECK(section.N() == N);
        CHECK(section.m() == m);
        RandomStream rng(41);
        for (int i = 0; i < 12; ++i) {
            const double alpha = 0.1 + 1.3 * rng.uniform();
            const double phi = rng.uniform() * kPi;
            // value matches the θ = 0 lift, up to the field normalization
            const Complex direct = evaluate(h, hopf_to_cartesian({alpha, phi, 0.0}));
            CHECK(std::abs(section.value(alpha, phi) - direct) < 1e-10);

            Complex f, fa, fp;
            section.jet(alpha, phi, f, fa, fp);
            CHECK(std::abs(f - direct) < 1e-10);
            const double hstep = 1e-5;
            const Complex fa_fd = (section.value(alpha + hstep, phi) -
                                   section.value(alpha - hstep, phi)) /
                                  (2 * hstep);
            const Complex fp_fd = (section.value(alpha, phi + hstep) -
                                   section.value(alpha, phi - hstep)) /
                                  (2 * hstep);
            CHECK(std::abs(fa - fa_fd) < 1e-6 * (1.0 + std::abs(fa)));
            CHECK(std::abs(fp - fp_fd) < 1e-6 * (1.0 + std::abs(fp)));
        }
    }
}

TEST_CASE("horizontal-frame jet at a base point; pole guard") {
    auto basis = get_basis(4, 2);
    const RandomHarmonic h = sample_harmonic(basis, 99);
    const SectionJet jet = evaluate_jet(h, base_point(0.7, 1.1));
    CHECK((jet.base - base_point(0.7, 1.1)).norm() < 1e-12);
    const Complex direct = evaluate(h, hopf_to_cartesian({0.7, 1.1, 0.0}));
    CHECK(std::abs(jet.value - direct) < 1e-10);
    CHECK_THROWS_AS(evaluate_jet(h, SpherePoint(0, 0, 1)), ChartPoleError);
    CHECK_THROWS_AS(evaluate_jet(h, SpherePoint(0, 0, -1)), ChartPoleError);
}

TEST_CASE("restriction is a Laplace-Beltrami eigenfunction: eigenvalue -N(N+2)") {
    // Sixth-order geodesic second-derivative stencil along an orthonormal
    // tangent frame: sum over 3 directions = spherical Laplacian at the point.
    const double stencil[7] = {2, -27, 270, -490, 270, -27, 2};
    const double hstep = 1e-2;
    RandomStream rng(43);
    for (auto [N, m] : {std::pair{3, 1}, {4, 2}, {6, 0}, {8, 4}}) {
        auto basis = get_basis(N, m);
        const RandomHarmonic h = sample_harmonic(basis, 7);
        for (int trial = 0; trial < 3; ++trial) {
            const CartesianPoint x = random_point(rng);
            Eigen::Vector4d xv(x.z1.real(), x.z1.imag(), x.z2.real(), x.z2.imag());
            // Orthonormal tangent frame by Gram-Schmidt on random vectors.
            std::vector<Eigen::Vector4d> frame;
            while (frame.size() < 3) {
                Eigen::Vector4d v(rng.normal(), rng.normal(), rng.normal(),
                                  rng.normal());
                v -= v.dot(xv) * xv;
                for (const auto& u : frame) v -= v.dot(u) * u;
                if (v.norm() < 1e-3) continue;
                frame.push_back(v.normalized());
            }
            Complex lap = 0.0;
            for (const auto& v : frame) {
                for (int k = -3; k <= 3; ++k) {
                    const double t = k * hstep;
                    const Eigen::Vector4d p = std::cos(t) * xv + std::sin(t) * v;
                    const CartesianPoint cp{{p[0], p[1]}, {p[2], p[3]}};
                    lap += stencil[k + 3] * evaluate(h, cp);
                }
            }
            lap /= 180.0 * hstep * hstep;
            const Complex fx = evaluate(h, x);
            const double eig = -static_cast<double>(N) * (N + 2);
            CHECK(std::abs(lap - eig * fx) < 1e-3 * std::abs(eig * fx) + 1e-9);
        }
    }
}

TEST_CASE("basis cache round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eqharm_cache_test";
    fs::create_directories(dir);
    CHECK(load_basis(6, 2, dir.string()) == nullptr);
    const HarmonicSpaceBasis built = build_basis(6, 2);
    save_basis(built, dir.string());
    auto loaded = load_basis(6, 2, dir.string());
    REQUIRE(loaded != nullptr);
    CHECK(loaded->dimension() == built.dimension());
    CHECK((loaded->vectors - built.vectors).cwiseAbs().maxCoeff() == 0.0);
    auto via_get = get_basis(6, 2, dir.string());
    CHECK((via_get->vectors - built.vectors).cwiseAbs().maxCoeff() == 0.0);
    fs::remove_all(dir);
}

TEST_CASE("chart section guards against out-of-range degrees") {
    auto basis = get_basis(61, 61);
    const RandomHarmonic h = sample_harmonic(basis, 1);
    CHECK_THROWS_AS(ChartSection{h}, std::length_error);
}
