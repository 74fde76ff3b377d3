#pragma once

#include "qsl/qcore.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace qsl {

// Spins are carried as twice-spin integers: tw = 2s, dim = tw + 1. Basis
// index k = 0..tw corresponds to the weight label i = -s + k (ascending).
inline size_t spin_dim(int tw) { return static_cast<size_t>(tw) + 1; }
// 2i for basis index k.
inline long twice_label(int tw, size_t k) { return 2 * static_cast<long>(k) - tw; }
Real label(int tw, size_t k);

struct SpinRep {
    int tw = 0;
    // U_q(su2) generators on xi_i.
    CMatrix k, kinv, e, f;
    CMatrix khalf, khalf_inv;  // pi(k)^(+-1/2)
    // Koornwinder generators on e_i (ascending i), i.e. t^s.
    CMatrix tA, tB, tC, tD;
    // The same operators transported to xi_i through e_{-i} = xi_i.
    CMatrix A, B, C, D;
};

SpinRep make_rep(int tw, const QContext& ctx);
// Reversal permutation implementing e_{-i} = xi_i.
CMatrix identification(int tw);

struct OpMatrices {
    CMatrix E;       // e - f k
    CMatrix Bt;      // q^{-1/2} E - i t/(q - q^-1)
    CMatrix Btilde;  // q^{-1/2} E - i t/(q - q^-1) k + i t/(q - q^-1)
    CMatrix X;       // X_{-a} on xi_i
    CMatrix tX;      // X_{-a} on e_i
    CMatrix W;       // i pi(B_t), Hermitian
    Complex eps_Bt;  // epsilon(B_t) = -i [a]
};

OpMatrices make_ops(const SpinRep& rep, const QContext& ctx);

// Relation residuals of both algebras and of the *-structure.
struct RelationReport {
    Real uq_max;     // k k^-1, ke, kf, [e,f]
    Real koorn_max;  // AD, AB, AC, [B,C]
    Real star_max;   // e^dag = f k, B^dag = C
    Real bridge_max; // A = k^{1/2}, B = k^{-1/2} e, C = f k^{1/2}, D = k^{-1/2} on xi_i
    Real worst() const;
};

RelationReport check_relations(const SpinRep& rep, const QContext& ctx);

// c_i^{s,-a}, i = -s..s, in ascending order; s = n integer.
CVec kernel_coeffs(int n, const QContext& ctx, const PrecisionContext& prec);
// sum_i q^{-i/2} c_i e_i in e-basis coordinates.
CVec kernel_vector_e(int n, const QContext& ctx, const PrecisionContext& prec);

enum class Convention { left, right };
const char* to_string(Convention c);
Convention parse_convention(const std::string& s);

// Unit vector; phase fixed so that the xi_s component (else the first nonzero
// one) is real positive.
CVec spherical_vector(int n, Convention conv, const QContext& ctx, const PrecisionContext& prec);

// Normalized closed-form n = 1 vector
// q^{1/2} xi_1 - i (q+q^-1)^{-1/2} t xi_0 + q^{-1/2} xi_{-1}, t = q^a - q^-a.
CVec closed_form_spherical_n1(const QContext& ctx);

// min over unit phases w of max_i |u_i - w v_i|, with w aligned on <v, u>.
Real phase_aligned_deviation(const CVec& u, const CVec& v);

struct WeightBasis {
    std::vector<Real> eigenvalues;  // ascending
    CMatrix vectors;                // columns
    size_t spherical = 0;           // index of the eigenvalue [a]
};

// Orthonormal eigenbasis of W_n = i pi_n(B_t).
WeightBasis weight_eigenbasis(int n, const QContext& ctx, const PrecisionContext& prec);

// First-slot weight basis for the left coideal. Y_n = [a] - pi(A) X_{-a}^dag
// is Hermitian with the X^dag kernel vector at eigenvalue [a]; the vectors
// v_i = k^{-1/2} zeta_i (zeta_i its orthonormal eigenvectors) are the
// eigenvectors of the adjoint of [a] - k^{1/2} X_{-a}, whose [a]-eigenvector
// is the spherical vector itself. Hence <v_i, eta> = 0 for i != spherical.
// The spherical column is scaled so that <v_sph, eta> = 1.
WeightBasis left_first_slot_basis(int n, const QContext& ctx, const PrecisionContext& prec);

struct CGDecomposition {
    int tn = 0, tm = 0;
    std::map<int, CMatrix> W;  // twice-spin k -> isometry H_k -> H_n (x) H_m
};

CGDecomposition cg_decompose(int tn, int tm, const QContext& ctx, const PrecisionContext& prec);

struct CGReport {
    Real isometry_max;
    Real completeness_max;
    Real intertwining_max;
};

CGReport check_cg(const CGDecomposition& cg, const QContext& ctx);

struct StarIntertwiner {
    CMatrix G;
    CMatrix Ginv;
    Real residual;
    size_t solution_rank = 0;
};

StarIntertwiner star_intertwiner(int tw, const QContext& ctx, const PrecisionContext& prec);

// Representation matrix of S(h) from the intertwiner: G^{-T} pi(h)^T G^T.
CMatrix antipode_matrix(const CMatrix& h, const StarIntertwiner& g);

struct RCandidate {
    std::string name;
    Real residual_plus;   // || i R(Btilde) - k^{-1/2} X ||
    Real residual_minus;  // || i R(Btilde) + k^{-1/2} X ||
    CVec spectrum;        // eigenvalues of i R(B_t)
    Real spectrum_deviation;
};

struct RReport {
    int tw = 0;
    std::vector<RCandidate> candidates;
    std::vector<Real> target;  // [a + 2i], ascending, integer spins only
    // [a] - k^{-1/2} X_{-a}: Hermitian, spectrum compared with the target.
    Real kx_hermitian_residual;
    std::vector<Real> kx_spectrum;
    Real kx_spectrum_deviation;
    // Left first-slot weight operator Y_n.
    std::vector<Real> first_slot_spectrum;
};

RReport validate_R_candidate(int tw, const QContext& ctx, const PrecisionContext& prec);

// Process-wide write-once cache of representations, CG isometries and star
// intertwiners keyed by (q, a, precision).
class RepCache {
public:
    RepCache(QContext ctx, PrecisionContext prec) : ctx_(std::move(ctx)), prec_(std::move(prec)) {}
    const QContext& ctx() const { return ctx_; }
    const PrecisionContext& prec() const { return prec_; }

    const SpinRep& rep(int tw);
    const OpMatrices& ops(int tw);
    const CGDecomposition& cg(int tn, int tm);
    const StarIntertwiner& star(int tw);
    const CVec& spherical(int n, Convention conv);
    const WeightBasis& slot_basis(int n, Convention conv);

private:
    QContext ctx_;
    PrecisionContext prec_;
    std::recursive_mutex mu_;
    std::map<int, std::unique_ptr<SpinRep>> reps_;
    std::map<int, std::unique_ptr<OpMatrices>> ops_;
    std::map<std::pair<int, int>, std::unique_ptr<CGDecomposition>> cgs_;
    std::map<int, std::unique_ptr<StarIntertwiner>> stars_;
    std::map<std::pair<int, int>, std::unique_ptr<CVec>> sph_;
    std::map<std::pair<int, int>, std::unique_ptr<WeightBasis>> bases_;
};

RepCache& shared_cache(const QContext& ctx, const PrecisionContext& prec);

}  // namespace qsl
