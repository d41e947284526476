#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "eqharm/hopf.hpp"

namespace eqharm {

/// CR bidegree (p, q): polynomials of degree p in z and q in z̄.
/// Corresponds to (N, m) = (p+q, p−q); the space H_N^m is nonempty exactly
/// when |m| ≤ N and N−m is even, i.e. when p, q ≥ 0 are integers.
struct Bidegree {
    int p = 0, q = 0;
    int N() const { return p + q; }
    int m() const { return p - q; }
    bool valid() const { return p >= 0 && q >= 0; }
    int monomial_count() const { return (p + 1) * (q + 1); }
};

/// Returns the bidegree for (N, m); invalid() if the space is empty.
Bidegree bidegree_from_nm(int N, int m);

/// Monomial z₁^{a1} z₂^{a2} z̄₁^{b1} z̄₂^{b2} with a1+a2 = p, b1+b2 = q.
struct Monomial {
    int a1, a2, b1, b2;
};

/// Monomials of bidegree (p, q) in a fixed deterministic order.
std::vector<Monomial> monomials(const Bidegree& bd);

/// ∫_{S³} z^a z̄^b dV with the unnormalized surface measure (Vol S³ = 2π²):
/// 0 if a ≠ b, else 2π²·a₁!a₂!/(a₁+a₂+1)!.
double monomial_inner_product(const std::array<int, 2>& a, const std::array<int, 2>& b);

/// The flat Laplacian Δ = 4 Σ_j ∂²/∂z_j∂z̄_j as a map from bidegree-(p,q)
/// coefficient space to bidegree-(p−1,q−1) space: z^αz̄^β ↦ 4Σ α_jβ_j z^{α−e_j}z̄^{β−e_j}.
/// Its kernel is the harmonic space H_N^{(p,q)}. Returns a (pq) × (p+1)(q+1)
/// real matrix (empty when p = 0 or q = 0).
Eigen::MatrixXd laplacian_constraint(const Bidegree& bd);

/// Exact Gram matrix of the (p, q) monomials on S³: entry (i, j) equals
/// I(αᵢ+βⱼ, βᵢ+αⱼ) with I the diagonal monomial integral above.
Eigen::MatrixXd gram_matrix(const Bidegree& bd);

/// Orthonormal basis of H_N^m over the bidegree monomials. `vectors` is
/// (monomial_count × dimension); columns are coefficient vectors, orthonormal
/// against the exact Gram matrix and annihilated by laplacian_constraint.
struct HarmonicSpaceBasis {
    Bidegree bidegree;
    std::vector<Monomial> basis_monomials;
    Eigen::MatrixXcd vectors;

    int dimension() const { return static_cast<int>(vectors.cols()); }
};

/// Deterministic basis construction (SVD null space + Gram-Cholesky
/// orthonormalization). Throws EmptySpaceError if H_N^m is empty.
HarmonicSpaceBasis build_basis(int N, int m);

/// Dimension of H_N^m without building anything (N+1 or 0).
int harmonic_space_dimension(int N, int m);

/// One Gaussian sample ψ = Σ aₖ eₖ with aₖ iid standard complex Gaussian
/// (E[a ā] = 1, E[a²] = 0). `poly` caches the combined monomial coefficients.
struct RandomHarmonic {
    std::shared_ptr<const HarmonicSpaceBasis> basis;
    Eigen::VectorXcd coefficients;
    std::uint64_t seed = 0;
    Eigen::VectorXcd poly;

    int N() const { return basis->bidegree.N(); }
    int m() const { return basis->bidegree.m(); }
};

RandomHarmonic sample_harmonic(std::shared_ptr<const HarmonicSpaceBasis> basis,
                               std::uint64_t seed);

/// Deterministic section with prescribed coefficients (tests, named examples).
RandomHarmonic harmonic_from_coefficients(std::shared_ptr<const HarmonicSpaceBasis> basis,
                                          const Eigen::VectorXcd& coefficients);

/// ψ at a point of S³.
Complex evaluate(const RandomHarmonic& h, const CartesianPoint& p);

/// u = Re ψ in Hopf coordinates; equals a·cos mθ − b·sin mθ with
/// (a, b) = (Re f, Im f) at the same base point.
double real_part_values(const RandomHarmonic& h, const HopfPoint& p);

/// The section f(α, φ) := ψ at the θ = 0 lift, with analytic chart partials.
/// Each monomial contributes c · sin^u α · cos^v α · e^{ikφ}
/// (u = a1+b1, v = a2+b2, k = a1−b1−a2+b2), so values and (∂α, ∂φ)
/// derivatives are exact — no finite differences in the production path.
class ChartSection {
public:
    explicit ChartSection(const RandomHarmonic& h);

    Complex value(double alpha, double phi) const;
    void jet(double alpha, double phi, Complex& f, Complex& f_alpha,
             Complex& f_phi) const;

    int N() const { return degree_; }
    int m() const { return weight_; }
    /// Field scale sqrt(E|f|²) = sqrt((N+1)/2π²); used for relative residuals.
    double scale() const;

private:
    struct Term {
        int u, v, k;
        Complex c;
    };
    std::vector<Term> terms_;
    int degree_, weight_;
};

/// Value and horizontal-frame gradient of f at a base point on S².
/// Frame: e₁ = ∂α, e₂ = (∂φ + cos2α·∂θ)/sin2α with ∂θ f = imf by equivariance.
struct SectionJet {
    Complex value;
    Complex gradient[2];
    SpherePoint base;
};

/// Throws ChartPoleError within ε = 1e−6 of a chart pole.
SectionJet evaluate_jet(const RandomHarmonic& h, const SpherePoint& base);

/// Versioned binary cache of a basis, keyed by (N, m, normalization tag).
void save_basis(const HarmonicSpaceBasis& basis, const std::string& dir);
/// Returns nullptr on miss (absent file, version/tag mismatch).
std::shared_ptr<const HarmonicSpaceBasis> load_basis(int N, int m, const std::string& dir);
/// Loads from cache when possible, otherwise builds (and saves if dir ≠ "").
std::shared_ptr<const HarmonicSpaceBasis> get_basis(int N, int m,
                                                    const std::string& cache_dir = "");

}  // namespace eqharm
