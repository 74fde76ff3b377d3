#pragma once

#include "qsl/linalg.hpp"

#include <vector>

namespace qsl {

struct PrecisionContext {
    long bits = 256;
    Real tol_residual;  // 2^(-bits/2)
    Real tol_rank;      // 2^(-bits/4)

    // Sets the process-wide working precision and derives the tolerances.
    static PrecisionContext make(long bits);
};

struct QContext {
    Real q;
    Real a;
    Real t;          // q^a - q^-a
    Real bracket_a;  // [a]
    Real cprime;     // (q+q^-1)^-1 t^2
    Real kappa;      // {a+2}{a}^-1 ({2a+1}+q+q^-1)^-1

    static QContext make(const Real& q, const Real& a);
    Real qpow(const Real& x) const { return pow(q, x); }
    Real qpow(long n) const { return pow(q, n); }
    Real q_plus_qinv() const { return q + Real(1) / q; }
    Real q_minus_qinv() const { return q - Real(1) / q; }
};

enum class BracketKind { square, double_, curly };

Real bracket(BracketKind kind, const Real& x, const QContext& ctx);
inline Real qint(const Real& x, const QContext& ctx) { return bracket(BracketKind::square, x, ctx); }

// (b; base)_n, n finite.
Complex q_pochhammer(const Complex& b, const Real& base, long n);

struct InfiniteProduct {
    Complex value;
    long factors = 0;  // number of factors multiplied before truncation
};

// (b; base)_inf truncated once |b base^i| < 2^-bits.
InfiniteProduct q_pochhammer_inf(const Complex& b, const Real& base);

// Terminating r+1 phi r series; throws std::domain_error when no numerator
// parameter is 1 or base^-m.
Complex basic_hypergeometric(const CVec& num, const CVec& den, const Real& base, const Complex& z,
                             const PrecisionContext& prec);

// Index m at which a terminating series stops, or -1.
long termination_index(const CVec& num, const Real& base, const PrecisionContext& prec);

// Two readings of the Askey-Wilson polynomial attached to the spherical
// functions. `displayed` follows the printed base-q 4phi3 expansion with its
// prefactor; `standard` is p_n(x; -q^{-2a+1}, -q^{2a+1}, q, q | q^2) in the
// usual normalization A^{-n}(AB, AC, AD; Q)_n 4phi3(...; Q, Q) with Q = q^2.
enum class AwForm { displayed, standard };

Complex askey_wilson(long n, const Real& x, const QContext& ctx, AwForm form);

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(CVec coeffs);
    static Polynomial constant(const Complex& c);
    static Polynomial monomial(long degree);

    const CVec& coeffs() const { return c_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }

    Complex operator()(const Complex& x) const;
    Real eval_real(const Real& x) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Complex& s) const;

private:
    void trim();
    CVec c_;
};

Polynomial derivative(const Polynomial& p);
// X -> P(alpha X + beta)
Polynomial affine_compose(const Polynomial& p, const Real& alpha, const Real& beta);
// R with R(cos t) = c_0 + 2 sum_{i>=1} c_i cos(i t).
Polynomial fourier_to_chebyshev(const std::vector<Real>& even_coeffs);
// Chebyshev polynomial of the first kind.
Polynomial chebyshev_t(long n);

}  // namespace qsl
