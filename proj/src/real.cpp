#include "qsl/real.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsl {

namespace {
std::atomic<long> g_bits{256};
}

void set_working_bits(long bits) {
    if (bits < 64) throw std::invalid_argument("precision below 64 bits");
    g_bits.store(bits);
}

long working_bits() { return g_bits.load(); }

Real::Real() {
    mpfr_init2(v_, g_bits.load());
    mpfr_set_zero(v_, 1);
}

Real::Real(int v) : Real(static_cast<long>(v)) {}

Real::Real(long v) {
    mpfr_init2(v_, g_bits.load());
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(double v) {
    mpfr_init2(v_, g_bits.load());
    mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(std::string_view decimal) {
    mpfr_init2(v_, g_bits.load());
    std::string s(decimal);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("not a decimal number: " + s);
}

Real::Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real& Real::operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

std::string Real::str() const {
    // Enough decimal digits to round-trip the binary mantissa.
    int digits = static_cast<int>(std::ceil(mpfr_get_prec(v_) * 0.30102999566398120)) + 1;
    return str(digits);
}

std::string Real::str(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    int n = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, v_);
    std::vector<char> buf(static_cast<size_t>(n) + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
    return std::string(buf.data(), static_cast<size_t>(n));
}

Real operator-(const Real& a) {
    Real r(a);
    mpfr_neg(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

Real operator+(Real a, const Real& b) { a += b; return a; }
Real operator-(Real a, const Real& b) { a -= b; return a; }
Real operator*(Real a, const Real& b) { a *= b; return a; }
Real operator/(Real a, const Real& b) { a /= b; return a; }

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.raw(), b.raw())) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.raw(), b.raw());
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

#define QSL_UNARY(name, fn)                     \
    Real name(const Real& x) {                  \
        Real r;                                 \
        fn(r.raw(), x.raw(), MPFR_RNDN);        \
        return r;                               \
    }

QSL_UNARY(sqrt, mpfr_sqrt)
QSL_UNARY(abs, mpfr_abs)
QSL_UNARY(exp, mpfr_exp)
QSL_UNARY(log, mpfr_log)
QSL_UNARY(log2, mpfr_log2)
QSL_UNARY(sin, mpfr_sin)
QSL_UNARY(cos, mpfr_cos)

#undef QSL_UNARY

Real atan2(const Real& y, const Real& x) {
    Real r;
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, const Real& y) {
    Real r;
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, long n) {
    Real r;
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}

Real ldexp(const Real& x, long e) {
    Real r;
    mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
    return r;
}

Real pow2(long e) { return ldexp(Real(1), e); }

Real pi() {
    Real r;
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

}  // namespace qsl
