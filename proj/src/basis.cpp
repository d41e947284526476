#include "eqharm/basis.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "eqharm/errors.hpp"
#include "eqharm/rng.hpp"

namespace eqharm {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;
constexpr double kChartPoleEps = 1e-6;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}
}  // namespace

Bidegree bidegree_from_nm(int N, int m) {
    if (N < 0 || std::abs(m) > N || ((N - m) & 1)) return {-1, -1};
    return {(N + m) / 2, (N - m) / 2};
}

std::vector<Monomial> monomials(const Bidegree& bd) {
    std::vector<Monomial> out;
    out.reserve(bd.monomial_count());
    for (int a1 = 0; a1 <= bd.p; ++a1) {
        for (int b1 = 0; b1 <= bd.q; ++b1) {
            out.push_back({a1, bd.p - a1, b1, bd.q - b1});
        }
    }
    return out;
}

double monomial_inner_product(const std::array<int, 2>& a, const std::array<int, 2>& b) {
    if (a != b) return 0.0;
    return kTwoPiSq * factorial(a[0]) * factorial(a[1]) / factorial(a[0] + a[1] + 1);
}

Eigen::MatrixXd laplacian_constraint(const Bidegree& bd) {
    const int rows = bd.p * bd.q;
    const int cols = bd.monomial_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(std::max(rows, 0), cols);
    if (rows <= 0) return L;
    // Target monomials of bidegree (p−1, q−1), same ordering convention.
    auto target_index = [&](int a1, int b1) { return a1 * bd.q + b1; };
    const std::vector<Monomial> mons = monomials(bd);
    for (int j = 0; j < cols; ++j) {
        const Monomial& mon = mons[j];
        // ∂²/∂z₁∂z̄₁: coefficient a1·b1, lowers (a1, b1).
        if (mon.a1 >= 1 && mon.b1 >= 1) {
            L(target_index(mon.a1 - 1, mon.b1 - 1), j) += 4.0 * mon.a1 * mon.b1;
        }
        // ∂²/∂z₂∂z̄₂: coefficient a2·b2, lowers (a2, b2) — target (a1, b1) slot.
        if (mon.a2 >= 1 && mon.b2 >= 1) {
            L(target_index(mon.a1, mon.b1), j) += 4.0 * mon.a2 * mon.b2;
        }
    }
    return L;
}

Eigen::MatrixXd gram_matrix(const Bidegree& bd) {
    const std::vector<Monomial> mons = monomials(bd);
    const int n = static_cast<int>(mons.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // ⟨z^{αᵢ}z̄^{βᵢ}, z^{αⱼ}z̄^{βⱼ}⟩ = ∫ z^{αᵢ+βⱼ} z̄^{βᵢ+αⱼ}
            const std::array<int, 2> a = {mons[i].a1 + mons[j].b1, mons[i].a2 + mons[j].b2};
            const std::array<int, 2> b = {mons[i].b1 + mons[j].a1, mons[i].b2 + mons[j].a2};
            G(i, j) = monomial_inner_product(a, b);
        }
    }
    return G;
}

int harmonic_space_dimension(int N, int m) {
    return bidegree_from_nm(N, m).valid() ? N + 1 : 0;
}

namespace {
using Quad = __float128;

Quad quad_factorial(int n) {
    Quad r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// sqrt in quad precision without libquadmath: double seed + Newton steps.
Quad quad_sqrt(Quad x) {
    Quad r = std::sqrt(static_cast<double>(x));
    r = Quad(0.5) * (r + x / r);
    r = Quad(0.5) * (r + x / r);
    return r;
}

/// π to quad accuracy as a double-double sum (avoids the non-portable
/// __float128 literal suffix).
Quad quad_pi() {
    return Quad(3.141592653589793) + Quad(1.2246467991473532e-16);
}
}  // namespace

HarmonicSpaceBasis build_basis(int N, int m) {
    const Bidegree bd = bidegree_from_nm(N, m);
    if (!bd.valid()) {
        throw EmptySpaceError("H_N^m is empty: |m| > N or N−m odd");
    }
    HarmonicSpaceBasis basis;
    basis.bidegree = bd;
    basis.basis_monomials = monomials(bd);
    const int p = bd.p, q = bd.q, n = bd.monomial_count();

    // The right circle action z₁ → e^{iφ}z₁, z₂ → e^{−iφ}z₂ commutes with the
    // Laplacian, so H_N^m splits into N+1 one-dimensional weight spaces
    // indexed by t = a₁ − b₁ ∈ [−q, p] (monomials couple only along a weight
    // line, and the Gram matrix is block diagonal across lines).  On a line
    // the harmonicity constraint is a two-term recurrence with exact integer
    // ratios, so each basis vector is computed in closed form; quad precision
    // absorbs the ~1e8 cancellation in the normalizing sum at N = 30.
    basis.vectors = Eigen::MatrixXcd::Zero(n, N + 1);
    const Quad two_pi_sq = Quad(2) * quad_pi() * quad_pi();
    const Quad fact_total = quad_factorial(N + 1);
    for (int t = -q; t <= p; ++t) {
        const int jmin = std::max(0, t), jmax = std::min(p, q + t);
        const int len = jmax - jmin + 1;
        // c_j: coefficient of z₁^j z₂^{p−j} z̄₁^{j−t} z̄₂^{q−j+t}.
        std::vector<Quad> c(len);
        c[0] = 1;
        for (int j = jmin + 1; j <= jmax; ++j) {
            c[j - jmin] = -c[j - jmin - 1] *
                          Quad((p - j + 1) * (q - j + t + 1)) / Quad(j * (j - t));
        }
        // ⟨e_i, e_j⟩ = 2π² (i+j−t)! (p−i+q−j+t)! / (N+1)! on the line.
        Quad norm_sq = 0;
        for (int i = jmin; i <= jmax; ++i) {
            for (int j = jmin; j <= jmax; ++j) {
                norm_sq += c[i - jmin] * c[j - jmin] * quad_factorial(i + j - t) *
                           quad_factorial(p - i + q - j + t);
            }
        }
        norm_sq *= two_pi_sq / fact_total;
        const Quad norm = quad_sqrt(norm_sq);
        // Column k = t + q; monomial index for (a1 = j, b1 = j − t) is
        // j·(q+1) + (j − t), matching the monomials() ordering.
        const int col = t + q;
        for (int j = jmin; j <= jmax; ++j) {
            basis.vectors(j * (q + 1) + (j - t), col) =
                static_cast<double>(c[j - jmin] / norm);
        }
    }
    return basis;
}

RandomHarmonic sample_harmonic(std::shared_ptr<const HarmonicSpaceBasis> basis,
                               std::uint64_t seed) {
    if (!basis || basis->dimension() == 0) {
        throw EmptySpaceError("sample_harmonic: empty basis");
    }
    RandomStream rng(seed);
    Eigen::VectorXcd coeffs(basis->dimension());
    for (int i = 0; i < coeffs.size(); ++i) coeffs(i) = rng.complex_normal();
    RandomHarmonic h;
    h.basis = std::move(basis);
    h.coefficients = std::move(coeffs);
    h.seed = seed;
    h.poly = h.basis->vectors * h.coefficients;
    return h;
}

RandomHarmonic harmonic_from_coefficients(std::shared_ptr<const HarmonicSpaceBasis> basis,
                                          const Eigen::VectorXcd& coefficients) {
    if (!basis || basis->dimension() == 0) {
        throw EmptySpaceError("harmonic_from_coefficients: empty basis");
    }
    if (coefficients.size() != basis->dimension()) {
        throw std::invalid_argument("harmonic_from_coefficients: size mismatch");
    }
    RandomHarmonic h;
    h.basis = std::move(basis);
    h.coefficients = coefficients;
    h.seed = 0;
    h.poly = h.basis->vectors * h.coefficients;
    return h;
}

Complex evaluate(const RandomHarmonic& h, const CartesianPoint& p) {
    const Complex z1c = std::conj(p.z1), z2c = std::conj(p.z2);
    const Bidegree& bd = h.basis->bidegree;
    // Power tables.
    std::vector<Complex> p1(bd.p + 1), p2(bd.p + 1), q1(bd.q + 1), q2(bd.q + 1);
    p1[0] = p2[0] = q1[0] = q2[0] = 1.0;
    for (int i = 1; i <= bd.p; ++i) {
        p1[i] = p1[i - 1] * p.z1;
        p2[i] = p2[i - 1] * p.z2;
    }
    for (int i = 1; i <= bd.q; ++i) {
        q1[i] = q1[i - 1] * z1c;
        q2[i] = q2[i - 1] * z2c;
    }
    Complex acc = 0.0;
    const auto& mons = h.basis->basis_monomials;
    for (std::size_t j = 0; j < mons.size(); ++j) {
        const Monomial& mo = mons[j];
        acc += h.poly(static_cast<Eigen::Index>(j)) * p1[mo.a1] * p2[mo.a2] * q1[mo.b1] *
               q2[mo.b2];
    }
    return acc;
}

double real_part_values(const RandomHarmonic& h, const HopfPoint& p) {
    return evaluate(h, hopf_to_cartesian(p)).real();
}

ChartSection::ChartSection(const RandomHarmonic& h)
    : degree_(h.N()), weight_(h.m()) {
    if (degree_ > 60) {
        throw std::length_error("ChartSection: degree exceeds fixed power-table size");
    }
    const auto& mons = h.basis->basis_monomials;
    terms_.reserve(mons.size());
    for (std::size_t j = 0; j < mons.size(); ++j) {
        const Complex c = h.poly(static_cast<Eigen::Index>(j));
        if (c == Complex(0.0, 0.0)) continue;
        const Monomial& mo = mons[j];
        terms_.push_back(
            {mo.a1 + mo.b1, mo.a2 + mo.b2, mo.a1 - mo.b1 - mo.a2 + mo.b2, c});
    }
}

double ChartSection::scale() const {
    return std::sqrt((degree_ + 1) / kTwoPiSq);
}

Complex ChartSection::value(double alpha, double phi) const {
    const double s = std::sin(alpha), c = std::cos(alpha);
    double spow[2 * 64], cpow[2 * 64];
    spow[0] = cpow[0] = 1.0;
    for (int i = 1; i <= degree_; ++i) {
        spow[i] = spow[i - 1] * s;
        cpow[i] = cpow[i - 1] * c;
    }
    const Complex e = std::polar(1.0, phi);
    // e^{ikφ} for k ∈ [−N, N], offset by N.
    Complex epow[4 * 64];
    epow[degree_] = 1.0;
    for (int k = 1; k <= degree_; ++k) {
        epow[degree_ + k] = epow[degree_ + k - 1] * e;
        epow[degree_ - k] = std::conj(epow[degree_ + k]);
    }
    Complex acc = 0.0;
    for (const Term& t : terms_) {
        acc += t.c * (spow[t.u] * cpow[t.v]) * epow[degree_ + t.k];
    }
    return acc;
}

void ChartSection::jet(double alpha, double phi, Complex& f, Complex& f_alpha,
                       Complex& f_phi) const {
    const double s = std::sin(alpha), c = std::cos(alpha);
    double spow[2 * 64], cpow[2 * 64];
    spow[0] = cpow[0] = 1.0;
    for (int i = 1; i <= degree_ + 1; ++i) {
        spow[i] = spow[i - 1] * s;
        cpow[i] = cpow[i - 1] * c;
    }
    const Complex e = std::polar(1.0, phi);
    Complex epow[4 * 64];
    epow[degree_] = 1.0;
    for (int k = 1; k <= degree_; ++k) {
        epow[degree_ + k] = epow[degree_ + k - 1] * e;
        epow[degree_ - k] = std::conj(epow[degree_ + k]);
    }
    f = f_alpha = f_phi = 0.0;
    for (const Term& t : terms_) {
        const Complex phase = epow[degree_ + t.k];
        const Complex base = t.c * phase;
        const double sc = spow[t.u] * cpow[t.v];
        f += base * sc;
        // d/dα (s^u c^v) = u s^{u−1}c^{v+1} − v s^{u+1}c^{v−1}
        double d = 0.0;
        if (t.u > 0) d += t.u * spow[t.u - 1] * cpow[t.v + 1];
        if (t.v > 0) d -= t.v * spow[t.u + 1] * cpow[t.v - 1];
        f_alpha += base * d;
        f_phi += base * sc * Complex(0.0, static_cast<double>(t.k));
    }
}

SectionJet evaluate_jet(const RandomHarmonic& h, const SpherePoint& base) {
    const BaseChartResult chart = base_chart(base);
    if (chart.degenerate || chart.alpha < kChartPoleEps ||
        chart.alpha > kPi / 2 - kChartPoleEps) {
        throw ChartPoleError("evaluate_jet: base point within ε of a chart pole");
    }
    const ChartSection section(h);
    Complex f, fa, fp;
    section.jet(chart.alpha, chart.phi, f, fa, fp);
    const double c2a = std::cos(2.0 * chart.alpha);
    const double s2a = std::sin(2.0 * chart.alpha);
    SectionJet jet;
    jet.value = f;
    jet.gradient[0] = fa;
    jet.gradient[1] = (fp + Complex(0.0, h.m() * c2a) * f) / s2a;
    jet.base = base;
    return jet;
}

// ---------------------------------------------------------------------------
// Basis cache: small versioned binary format.
// ---------------------------------------------------------------------------

namespace {
constexpr std::uint32_t kCacheVersion = 2;  // v2: weight-line basis ordering
constexpr char kNormalizationTag[] = "gram-2pi2";  // monomial norm convention

std::string cache_path(int N, int m, const std::string& dir) {
    return dir + "/basis_N" + std::to_string(N) + "_m" + std::to_string(m) + ".eqb";
}
}  // namespace

void save_basis(const HarmonicSpaceBasis& basis, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const Bidegree& bd = basis.bidegree;
    const std::string path = cache_path(bd.N(), bd.m(), dir);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("save_basis: cannot open " + path);
    const char magic[4] = {'E', 'Q', 'H', 'B'};
    std::fwrite(magic, 1, 4, f);
    std::fwrite(&kCacheVersion, sizeof kCacheVersion, 1, f);
    std::uint32_t tag_len = sizeof kNormalizationTag - 1;
    std::fwrite(&tag_len, sizeof tag_len, 1, f);
    std::fwrite(kNormalizationTag, 1, tag_len, f);
    const std::int32_t dims[4] = {static_cast<std::int32_t>(bd.N()),
                                  static_cast<std::int32_t>(bd.m()),
                                  static_cast<std::int32_t>(basis.vectors.rows()),
                                  static_cast<std::int32_t>(basis.vectors.cols())};
    std::fwrite(dims, sizeof(std::int32_t), 4, f);
    std::fwrite(basis.vectors.data(), sizeof(Complex), basis.vectors.size(), f);
    std::fclose(f);
}

std::shared_ptr<const HarmonicSpaceBasis> load_basis(int N, int m,
                                                     const std::string& dir) {
    const std::string path = cache_path(N, m, dir);
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return nullptr;
    auto fail = [&]() {
        std::fclose(f);
        return nullptr;
    };
    char magic[4];
    std::uint32_t version = 0, tag_len = 0;
    if (std::fread(magic, 1, 4, f) != 4 || std::string(magic, 4) != "EQHB") return fail();
    if (std::fread(&version, sizeof version, 1, f) != 1 || version != kCacheVersion) {
        return fail();
    }
    if (std::fread(&tag_len, sizeof tag_len, 1, f) != 1 || tag_len > 64) return fail();
    std::string tag(tag_len, '\0');
    if (std::fread(tag.data(), 1, tag_len, f) != tag_len || tag != kNormalizationTag) {
        return fail();
    }
    std::int32_t dims[4];
    if (std::fread(dims, sizeof(std::int32_t), 4, f) != 4 || dims[0] != N || dims[1] != m) {
        return fail();
    }
    auto basis = std::make_shared<HarmonicSpaceBasis>();
    basis->bidegree = bidegree_from_nm(N, m);
    if (!basis->bidegree.valid()) return fail();
    basis->basis_monomials = monomials(basis->bidegree);
    basis->vectors.resize(dims[2], dims[3]);
    if (std::fread(basis->vectors.data(), sizeof(Complex),
                   static_cast<std::size_t>(basis->vectors.size()),
                   f) != static_cast<std::size_t>(basis->vectors.size())) {
        return fail();
    }
    std::fclose(f);
    return basis;
}

std::shared_ptr<const HarmonicSpaceBasis> get_basis(int N, int m,
                                                    const std::string& cache_dir) {
    if (!cache_dir.empty()) {
        if (auto cached = load_basis(N, m, cache_dir)) return cached;
    }
    auto basis = std::make_shared<HarmonicSpaceBasis>(build_basis(N, m));
    if (!cache_dir.empty()) save_basis(*basis, cache_dir);
    return basis;
}

}  // namespace eqharm
