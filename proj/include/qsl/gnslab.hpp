#pragma once

#include "qsl/genfun.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qsl {

// L extended to all of O_q(SU(2)) by sum_n lambda_n eta_n^T F_n conj(eta_n);
// agrees with apply() on the coideal.
Complex functional_value(const GenFunctional& F, const AlgElement& x, Convention conv, RepCache& cache);

struct GnsSpace {
    int N = 0;
    Convention convention = Convention::left;
    std::vector<PodlesElement> basis;  // unit first, then degrees 1..N in basis order
    std::vector<int> degree;           // degree of each basis element
    std::vector<Complex> counits;
    CMatrix gram;                      // <x_i, x_j>_L
    Real hermitian_residual;
    std::vector<Real> spectrum;        // ascending
    Real min_eigenvalue;
    size_t rank = 0;
    Real tol_rank;
    Real rank_threshold;
    Real smallest_kept;                // smallest eigenvalue above the threshold
    Real largest_dropped;              // largest |eigenvalue| below it
    CMatrix coords;                    // r x m, C_L(b_j) = coords.col(j)
    bool psd = true;                   // min_eigenvalue >= -tol_rank

    size_t size() const { return basis.size(); }
    size_t index_of(int n, size_t i) const;
};

// Gram of the L-form over the coideal basis up to degree N. The entries use
// L(b_i^* b_j) = sum_k lambda_k <a_i (x) f_j, W_k eta_k> <W_k eta_k, c_i (x) g_j>
// with b_i^* = u_{a_i, c_i}; threads > 1 splits rows.
GnsSpace gram(int N, const GenFunctional& F, Convention conv, OqAlgebra& alg, int threads = 1);

// Same Gram assembled through mul/star/apply; used as an oracle.
CMatrix gram_direct(int N, const GenFunctional& F, Convention conv, OqAlgebra& alg);

// Coordinates of x in the basis of the space; throws std::domain_error
// if x has degree > N or lies outside the coideal.
CVec basis_coordinates(const AlgElement& x, const GnsSpace& space, OqAlgebra& alg);
CVec cocycle_vector(const AlgElement& x, const GnsSpace& space, OqAlgebra& alg);

struct PiL {
    CMatrix matrix;            // r x r, defined on the image of degrees <= N - deg(b)
    int source_degree = 0;     // N - deg(b)
    Real consistency_residual; // || Z - pi Y ||
};

// pi_L(b) C_L(y) = C_L(b y) - C_L(b) eps(y) for y of degree <= N - deg(b).
PiL pi_L(const AlgElement& b, const GnsSpace& space, OqAlgebra& alg);

// Random coideal element with complex Gaussian coefficients over degrees <= max_degree.
AlgElement random_coideal_element(int max_degree, Convention conv, RepCache& cache, std::mt19937_64& rng);

struct CocycleReport {
    Real identity_max;    // || pi(a) C(b) - C(ab) + C(a) eps(b) ||
    Real norm_max;        // | ||C(x)||^2 - <x,x>_L |
    Real star_max;        // <C(x), pi(b) C(y)> - <pi(b*) C(x), C(y)>
    Real spherical_max;   // max_n ||C(u^n_sph)||, spherical basis element
    Real bispherical_max; // max_n ||C(u^n_{eta,eta})||, diagnostic only
    size_t pairs = 0;
};

CocycleReport check_cocycle(const GnsSpace& space, const GenFunctional& F, OqAlgebra& alg, size_t pairs,
                            std::uint64_t seed);

struct GrowthDegree {
    int n = 0;
    CMatrix block;                 // <C(u^n_i), C(u^n_j)>
    std::vector<Real> diagonal;
    std::vector<Real> labels;      // eigenvalue labels of the slot basis
    Real offdiag_max;
    size_t spherical = 0;
    std::vector<size_t> zero_indices;  // diagonal entries below tol_rank
    Real min_nonspherical;
};

struct GrowthTable {
    std::vector<GrowthDegree> degrees;
    bool nondecreasing = true;  // trend of min_nonspherical, reported only
};

GrowthTable growth_table(const GnsSpace& space);

struct GaussianReport {
    int N = 0;
    size_t generated = 0;
    size_t excluded = 0;
    Real max_discard;            // largest discard fraction among retained vectors
    size_t dim_image = 0;        // dim span C_L(degree <= N-1)
    size_t rank_ng = 0;
    long dim_gaussian = 0;
    Real smallest_kept;          // relative to the largest singular value
    Real largest_dropped;
    Real rank_gap;               // smallest_kept (relative)
};

GaussianReport gaussian_rank(const GnsSpace& space, OqAlgebra& alg);

}  // namespace qsl
