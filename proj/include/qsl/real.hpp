#pragma once

#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace qsl {

// Thin RAII wrapper over mpfr_t. Every value is created at the process-wide
// working precision, which is set once at startup via set_working_bits.
class Real {
public:
    Real();
    Real(int v);
    Real(long v);
    Real(double v);
    explicit Real(std::string_view decimal);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Shortest round-trippable decimal representation at the current precision.
    std::string str() const;
    std::string str(int digits) const;

private:
    mpfr_t v_;
};

void set_working_bits(long bits);
long working_bits();

Real operator-(const Real& a);
Real operator+(Real a, const Real& b);
Real operator-(Real a, const Real& b);
Real operator*(Real a, const Real& b);
Real operator/(Real a, const Real& b);

bool operator==(const Real& a, const Real& b);
std::partial_ordering operator<=>(const Real& a, const Real& b);

Real sqrt(const Real& x);
Real abs(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real ldexp(const Real& x, long e);
Real pow2(long e);
Real pi();
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

}  // namespace qsl
