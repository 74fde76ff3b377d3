#pragma once

#include "qsl/oqalg.hpp"

#include <vector>

namespace qsl {

// Comparison of the Fourier-route Q_n against one closed-form reading on a
// theta grid. The constant is fitted first so that a pure normalization
// mismatch is told apart from a shape mismatch.
struct RouteComparison {
    AwForm form = AwForm::standard;
    Real residual;        // max |Q_n(cos t) - closed(t)| with the nominal constant
    Complex constant;     // least-squares fit Q_n ~ constant * awp_n
    Real shape_residual;  // max |Q_n - constant * awp_n|
    Real constant_deviation;  // |constant - nominal constant|
};

struct QPolyResult {
    Polynomial Q;
    Real alpha_sq;  // sum_i q^i |c_{-i}|^2
    std::vector<Real> c_abs_sq;  // |c_i|^2 for i = 0..n
    RouteComparison standard;
    RouteComparison displayed;
    Real cross_check_residual;  // standard.residual
};

// Midpoint grid theta_k = pi (2k+1) / (2 points) on (0, pi).
std::vector<Real> theta_grid(long points);

// |alpha_n|^-2 |c_n|^2 (q^{2n+2}; q^2)_n^-1, the constant in front of awp_n.
Real aw_constant(long n, const QContext& ctx, const PrecisionContext& prec);

QPolyResult q_poly(long n, const QContext& ctx, const PrecisionContext& prec, long theta_grid = 64);

// P_n(y) = Q_n(((q+q^-1+c')y - c')/2); throws std::runtime_error if P_n(1)
// misses 1 by more than tol_rank.
Polynomial p_poly(long n, const QContext& ctx, const PrecisionContext& prec);

// Argument of P_n at spectral parameter lambda.
Real omega_argument(const Real& lambda, const QContext& ctx);
// a_0^{lambda,n}; `in_range` is cleared when lambda lies outside (0, q+q^-1).
Real omega_value(const Real& lambda, const Polynomial& P, const QContext& ctx, bool* in_range = nullptr);

struct FdOracle {
    Real slope;  // d omega / d lambda at lambda = q+q^-1
    Real error_estimate;
};

// Central differences at h = 2^-j, j = 1..steps, Richardson extrapolated in h^2.
// Uses only point evaluations of omega.
FdOracle fd_oracle(const Polynomial& P, const QContext& ctx, long steps);

enum class LimitMode { derivative, paper_constant };
const char* to_string(LimitMode m);
LimitMode parse_limit_mode(const std::string& s);

struct GenFunctional {
    QContext ctx;
    LimitMode mode = LimitMode::derivative;
    std::vector<Polynomial> P;
    std::vector<Real> raw_derivative;      // -P_n'(1)/(q+q^-1+c')
    std::vector<Real> raw_paper_constant;  // -P_n'(1)
    std::vector<Real> raw_fd;              // -omega'(q+q^-1) from the oracle
    std::vector<Real> lambda;              // kappa * raw in the chosen mode, lambda_0 = 0
    long n_max() const { return static_cast<long>(lambda.size()) - 1; }
};

// Throws std::runtime_error when the oracle disagrees with derivative mode
// beyond tol_rank (relative).
GenFunctional build_functional(const QContext& ctx, const PrecisionContext& prec, long n_max, LimitMode mode,
                               long lambda_steps = 12);

// L(x) = sum_n lambda_n d_n(x), d_n the spherical coordinate of the degree-n
// block. Throws std::domain_error when x is not in the coideal.
Complex apply(const GenFunctional& F, const AlgElement& x, Convention conv, OqAlgebra& alg);

// P(u) for an algebra element u, via repeated products.
AlgElement polynomial_in(const Polynomial& P, const AlgElement& u, const OqAlgebra& alg);

}  // namespace qsl
