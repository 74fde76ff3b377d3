#include "qsl/complex.hpp"

namespace qsl {

Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Complex& Complex::operator/=(const Complex& o) {
    Real d = norm2(o);
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
Complex operator+(Complex a, const Complex& b) { a += b; return a; }
Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
Complex operator*(const Complex& a, const Complex& b) { Complex r(a); r *= b; return r; }
Complex operator/(const Complex& a, const Complex& b) { Complex r(a); r /= b; return r; }
Complex operator*(Complex a, const Real& s) { a *= s; return a; }
Complex operator*(const Real& s, Complex a) { a *= s; return a; }
Complex operator/(Complex a, const Real& s) { a /= s; return a; }

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z) { return sqrt(norm2(z)); }
Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex sqrt(const Complex& z) {
    if (z.im.is_zero()) {
        if (z.re.sign() >= 0) return Complex(sqrt(z.re), Real(0));
        return Complex(Real(0), sqrt(-z.re));
    }
    Real m = abs(z);
    Real r = sqrt((m + z.re) / Real(2));
    Real i = sqrt((m - z.re) / Real(2));
    if (z.im.sign() < 0) i = -i;
    return Complex(r, i);
}

Complex expi(const Real& theta) { return Complex(cos(theta), sin(theta)); }

Complex ipow(long n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return Complex(Real(1), Real(0));
        case 1: return Complex(Real(0), Real(1));
        case 2: return Complex(Real(-1), Real(0));
        default: return Complex(Real(0), Real(-1));
    }
}

}  // namespace qsl
