#include "qsl/qcore.hpp"

#include <cmath>
#include <stdexcept>

namespace qsl {

PrecisionContext PrecisionContext::make(long bits) {
    set_working_bits(bits);
    PrecisionContext p;
    p.bits = bits;
    p.tol_residual = pow2(-bits / 2);
    p.tol_rank = pow2(-bits / 4);
    return p;
}

QContext QContext::make(const Real& q, const Real& a) {
    if (!(q > Real(0) && q < Real(1))) throw std::invalid_argument("q must lie in (0,1)");
    QContext c;
    c.q = q;
    c.a = a;
    c.t = pow(q, a) - pow(q, -a);
    c.bracket_a = c.t / (q - Real(1) / q);
    Real qq = q + Real(1) / q;
    c.cprime = c.t * c.t / qq;
    auto curly = [&](const Real& x) { return pow(q, x) + pow(q, -x); };
    c.kappa = curly(a + Real(2)) / curly(a) / (curly(Real(2) * a + Real(1)) + qq);
    return c;
}

Real bracket(BracketKind kind, const Real& x, const QContext& ctx) {
    Real up = pow(ctx.q, x), down = pow(ctx.q, -x);
    switch (kind) {
        case BracketKind::square: return (up - down) / ctx.q_minus_qinv();
        case BracketKind::double_: return up - down;
        case BracketKind::curly: return up + down;
    }
    return Real(0);
}

Complex q_pochhammer(const Complex& b, const Real& base, long n) {
    if (n < 0) throw std::domain_error("negative Pochhammer length");
    Complex r(1);
    Real p(1);
    for (long i = 0; i < n; ++i) {
        r *= Complex(1) - b * p;
        p *= base;
    }
    return r;
}

InfiniteProduct q_pochhammer_inf(const Complex& b, const Real& base) {
    if (!(base > Real(0) && base < Real(1))) throw std::domain_error("infinite Pochhammer needs 0 < base < 1");
    InfiniteProduct out{Complex(1), 0};
    const Real cutoff = pow2(-working_bits());
    Complex term = b;
    while (abs(term) >= cutoff) {
        out.value *= Complex(1) - term;
        term *= base;
        ++out.factors;
        if (out.factors > 1000000) throw std::runtime_error("infinite Pochhammer failed to converge");
    }
    return out;
}

long termination_index(const CVec& num, const Real& base, const PrecisionContext& prec) {
    long best = -1;
    const Real lb = log(base);
    for (const auto& p : num) {
        if (abs(p.im) > prec.tol_residual * max(abs(p.re), Real(1))) continue;
        if (!(p.re > Real(0))) continue;
        Real m = -log(p.re) / lb;
        long mi = std::lround(m.to_double());
        if (mi < 0) continue;
        Real target = pow(base, -mi);
        if (abs(p.re - target) <= prec.tol_residual * target) {
            if (best < 0 || mi < best) best = mi;
        }
    }
    return best;
}

Complex basic_hypergeometric(const CVec& num, const CVec& den, const Real& base, const Complex& z,
                             const PrecisionContext& prec) {
    if (num.size() != den.size() + 1) throw std::invalid_argument("basic_hypergeometric needs |num| = |den| + 1");
    long m = termination_index(num, base, prec);
    if (m < 0) throw std::domain_error("non-terminating basic hypergeometric series");
    Complex sum(1), term(1);
    Real bp(1);  // base^i
    for (long i = 0; i < m; ++i) {
        Complex ratio(1);
        for (const auto& a : num) ratio *= Complex(1) - a * bp;
        for (const auto& b : den) ratio /= Complex(1) - b * bp;
        ratio /= Complex(1) - Complex(base * bp);
        term *= ratio * z;
        sum += term;
        bp *= base;
    }
    return sum;
}

namespace {

// sum_k (n1, n2; Q)_k prod_j (1 - 2u Q^j x + u^2 Q^2j) Q^k / ((d1, d2, d3; Q)_k (Q; Q)_k)
Complex aw_series(long n, const Real& x, const Real& base, const Real& u, const Real& n2, const Real& d1,
                  const Real& d2, const Real& d3) {
    const Real n1 = pow(base, -n);
    Complex sum;
    Real term(1);
    Real bj(1);  // base^j
    for (long k = 0; k <= n; ++k) {
        if (k > 0) {
            Real f = (Real(1) - n1 * bj) * (Real(1) - n2 * bj);
            f *= Real(1) - Real(2) * u * bj * x + u * u * bj * bj;
            f /= (Real(1) - d1 * bj) * (Real(1) - d2 * bj) * (Real(1) - d3 * bj) * (Real(1) - base * bj);
            f *= base;
            term *= f;
            bj *= base;
        }
        sum += Complex(term);
    }
    return sum;
}

}  // namespace

Complex askey_wilson(long n, const Real& x, const QContext& ctx, AwForm form) {
    if (n < 0) throw std::domain_error("negative degree");
    const Real& q = ctx.q;
    const Real& a = ctx.a;
    if (form == AwForm::displayed) {
        Real u = -pow(q, -Real(2) * a + Real(1));
        Real d = -pow(q, -Real(2) * a + Real(2));
        Real pre = pow(q, Real(n) * (-Real(2) * a + Real(1)));
        if (n % 2) pre = -pre;
        Complex pf = Complex(pre) * q_pochhammer(Complex(q * q), q, n) * q_pochhammer(Complex(d), q, n) *
                     q_pochhammer(Complex(d), q, n);
        Real n2 = pow(q, 4) * pow(q, n - 1);
        return pf * aw_series(n, x, q, u, n2, q * q, d, d);
    }
    Real Q = q * q;
    Real A = -pow(q, -Real(2) * a + Real(1));
    Real B = -pow(q, Real(2) * a + Real(1));
    Real C = q, D = q;
    Complex pf = Complex(pow(A, -n)) * q_pochhammer(Complex(A * B), Q, n) * q_pochhammer(Complex(A * C), Q, n) *
                 q_pochhammer(Complex(A * D), Q, n);
    Real n2 = A * B * C * D * pow(Q, n - 1);
    return pf * aw_series(n, x, Q, A, n2, A * B, A * C, A * D);
}

Polynomial::Polynomial(CVec coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const Complex& c) { return Polynomial(CVec{c}); }

Polynomial Polynomial::monomial(long degree) {
    CVec c(static_cast<size_t>(degree) + 1);
    c.back() = Complex(1);
    return Polynomial(std::move(c));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back().re.is_zero() && c_.back().im.is_zero()) c_.pop_back();
}

Complex Polynomial::operator()(const Complex& x) const {
    Complex r;
    for (size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
    return r;
}

Real Polynomial::eval_real(const Real& x) const { return (*this)(Complex(x)).re; }

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial();
    CVec r(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(const Complex& s) const {
    CVec r(c_);
    for (auto& z : r) z = s * z;
    return Polynomial(std::move(r));
}

Polynomial derivative(const Polynomial& p) {
    const auto& c = p.coeffs();
    if (c.size() <= 1) return Polynomial();
    CVec d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * Real(static_cast<long>(k));
    return Polynomial(std::move(d));
}

Polynomial affine_compose(const Polynomial& p, const Real& alpha, const Real& beta) {
    const Polynomial lin(CVec{Complex(beta), Complex(alpha)});
    Polynomial out;
    const auto& c = p.coeffs();
    for (size_t k = c.size(); k-- > 0;) {
        out = out * lin;
        out += Polynomial::constant(c[k]);
    }
    return out;
}

Polynomial chebyshev_t(long n) {
    Polynomial t0 = Polynomial::constant(Complex(1));
    if (n == 0) return t0;
    Polynomial t1 = Polynomial::monomial(1);
    const Polynomial two_x(CVec{Complex(0), Complex(2)});
    for (long k = 1; k < n; ++k) {
        Polynomial t2 = two_x * t1;
        t2 += t0.scaled(Complex(-1));
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return t1;
}

Polynomial fourier_to_chebyshev(const std::vector<Real>& even_coeffs) {
    Polynomial r;
    for (size_t i = 0; i < even_coeffs.size(); ++i) {
        Real w = i == 0 ? even_coeffs[0] : Real(2) * even_coeffs[i];
        if (w.is_zero()) continue;
        r += chebyshev_t(static_cast<long>(i)).scaled(Complex(w));
    }
    return r;
}

}  // namespace qsl
