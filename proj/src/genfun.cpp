#include "qsl/genfun.hpp"

#include <stdexcept>

namespace qsl {

namespace {

// |alpha_n|^-2 |c_n|^2 (q^{2n+2}; q^2)_n^-1
Real nominal_constant(long n, const QContext& ctx, const std::vector<Real>& c_abs_sq, const Real& alpha_sq) {
    const Real q2 = ctx.q * ctx.q;
    Real poch = q_pochhammer(Complex(pow(ctx.q, 2 * n + 2)), q2, n).re;
    return c_abs_sq[static_cast<size_t>(n)] / alpha_sq / poch;
}

RouteComparison compare(long n, AwForm form, const Polynomial& Q, const Real& nominal, const QContext& ctx,
                        long grid) {
    std::vector<Complex> f, s;
    for (const Real& th : theta_grid(grid)) {
        Real x = cos(th);
        f.push_back(Q(Complex(x)));
        s.push_back(askey_wilson(n, x, ctx, form));
    }
    Complex num;
    Real den;
    for (size_t k = 0; k < f.size(); ++k) {
        num += conj(s[k]) * f[k];
        den += norm2(s[k]);
    }
    RouteComparison r;
    r.form = form;
    r.constant = num / den;
    for (size_t k = 0; k < f.size(); ++k) {
        r.residual = max(r.residual, abs(f[k] - Complex(nominal) * s[k]));
        r.shape_residual = max(r.shape_residual, abs(f[k] - r.constant * s[k]));
    }
    r.constant_deviation = abs(r.constant - Complex(nominal));
    return r;
}

}  // namespace

std::vector<Real> theta_grid(long points) {
    std::vector<Real> g;
    for (long k = 0; k < points; ++k) g.push_back(pi() * Real(2 * k + 1) / Real(2 * points));
    return g;
}

QPolyResult q_poly(long n, const QContext& ctx, const PrecisionContext& prec, long theta_grid) {
    if (n < 0) throw std::domain_error("negative degree");
    CVec c = kernel_coeffs(static_cast<int>(n), ctx, prec);
    QPolyResult r;
    for (long i = -n; i <= n; ++i) r.alpha_sq += pow(ctx.q, i) * norm2(c[static_cast<size_t>(n - i)]);
    std::vector<Real> even;
    for (long i = 0; i <= n; ++i) {
        r.c_abs_sq.push_back(norm2(c[static_cast<size_t>(n + i)]));
        even.push_back(r.c_abs_sq.back() / r.alpha_sq);
    }
    r.Q = fourier_to_chebyshev(even);
    const Real nominal = nominal_constant(n, ctx, r.c_abs_sq, r.alpha_sq);
    r.standard = compare(n, AwForm::standard, r.Q, nominal, ctx, theta_grid);
    r.displayed = compare(n, AwForm::displayed, r.Q, nominal, ctx, theta_grid);
    r.cross_check_residual = r.standard.residual;
    return r;
}

Real aw_constant(long n, const QContext& ctx, const PrecisionContext& prec) {
    CVec c = kernel_coeffs(static_cast<int>(n), ctx, prec);
    Real alpha_sq;
    std::vector<Real> abs_sq;
    for (long i = -n; i <= n; ++i) alpha_sq += pow(ctx.q, i) * norm2(c[static_cast<size_t>(n - i)]);
    for (long i = 0; i <= n; ++i) abs_sq.push_back(norm2(c[static_cast<size_t>(n + i)]));
    return nominal_constant(n, ctx, abs_sq, alpha_sq);
}

Polynomial p_poly(long n, const QContext& ctx, const PrecisionContext& prec) {
    Polynomial Q = q_poly(n, ctx, prec, 1).Q;
    const Real span = ctx.q_plus_qinv() + ctx.cprime;
    Polynomial P = affine_compose(Q, span / Real(2), -ctx.cprime / Real(2));
    if (abs(P.eval_real(Real(1)) - Real(1)) > prec.tol_rank)
        throw std::runtime_error("P_n(1) != 1 for n = " + std::to_string(n));
    return P;
}

Real omega_argument(const Real& lambda, const QContext& ctx) {
    return (lambda + ctx.cprime) / (ctx.q_plus_qinv() + ctx.cprime);
}

Real omega_value(const Real& lambda, const Polynomial& P, const QContext& ctx, bool* in_range) {
    if (in_range) *in_range = lambda > Real(0) && lambda < ctx.q_plus_qinv();
    return P.eval_real(omega_argument(lambda, ctx));
}

FdOracle fd_oracle(const Polynomial& P, const QContext& ctx, long steps) {
    const Real l0 = ctx.q_plus_qinv();
    std::vector<std::vector<Real>> R;
    for (long j = 1; j <= steps; ++j) {
        Real h = pow2(-j);
        std::vector<Real> row;
        row.push_back((omega_value(l0 + h, P, ctx) - omega_value(l0 - h, P, ctx)) / (Real(2) * h));
        Real f(4);
        for (size_t m = 1; m < static_cast<size_t>(j); ++m) {
            row.push_back((f * row[m - 1] - R.back()[m - 1]) / (f - Real(1)));
            f *= Real(4);
        }
        R.push_back(std::move(row));
    }
    FdOracle o;
    o.slope = R.back().back();
    if (R.size() > 1) o.error_estimate = abs(o.slope - R[R.size() - 2].back());
    return o;
}

const char* to_string(LimitMode m) { return m == LimitMode::derivative ? "derivative" : "paper_constant"; }

LimitMode parse_limit_mode(const std::string& s) {
    if (s == "derivative") return LimitMode::derivative;
    if (s == "paper_constant") return LimitMode::paper_constant;
    throw std::invalid_argument("limit mode must be derivative or paper_constant");
}

GenFunctional build_functional(const QContext& ctx, const PrecisionContext& prec, long n_max, LimitMode mode,
                               long lambda_steps) {
    if (n_max < 0) throw std::domain_error("negative n_max");
    GenFunctional F;
    F.ctx = ctx;
    F.mode = mode;
    const Real span = ctx.q_plus_qinv() + ctx.cprime;
    for (long n = 0; n <= n_max; ++n) {
        Polynomial P = p_poly(n, ctx, prec);
        Real d1 = derivative(P).eval_real(Real(1));
        Real raw_d = -d1 / span;
        Real raw_fd = -fd_oracle(P, ctx, lambda_steps).slope;
        Real scale = max(abs(raw_d), Real(1));
        if (abs(raw_fd - raw_d) > prec.tol_rank * scale)
            throw std::runtime_error("finite-difference oracle disagrees with the derivative at n = " +
                                     std::to_string(n));
        F.P.push_back(std::move(P));
        F.raw_derivative.push_back(raw_d);
        F.raw_paper_constant.push_back(-d1);
        F.raw_fd.push_back(raw_fd);
        F.lambda.push_back(n == 0 ? Real(0)
                                  : ctx.kappa * (mode == LimitMode::derivative ? raw_d : -d1));
    }
    return F;
}

Complex apply(const GenFunctional& F, const AlgElement& x, Convention conv, OqAlgebra& alg) {
    Real memb = coideal_membership(x, conv, alg);
    if (memb >= alg.prec().tol_rank) throw std::domain_error("element is not in the coideal");
    Complex s;
    for (const auto& [tw, B] : x.blocks()) {
        const int n = tw / 2;
        if (n == 0) continue;
        if (n > F.n_max()) throw std::domain_error("degree exceeds the functional's n_max");
        const WeightBasis& wb = alg.cache().slot_basis(n, conv);
        CVec d = podles_coordinates(x, n, conv, alg.cache());
        s += Complex(F.lambda[static_cast<size_t>(n)]) * d[wb.spherical];
    }
    return s;
}

AlgElement polynomial_in(const Polynomial& P, const AlgElement& u, const OqAlgebra& alg) {
    const CVec& c = P.coeffs();
    if (c.empty()) return AlgElement();
    AlgElement r = AlgElement::unit().scaled(c.back());
    for (size_t k = c.size() - 1; k-- > 0;) {
        r = alg.mul(r, u);
        r.add(AlgElement::unit(), c[k]);
    }
    r.prune(alg.prec().tol_residual);
    return r;
}

}  // namespace qsl
