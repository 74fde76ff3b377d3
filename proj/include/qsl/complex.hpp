#pragma once

#include "qsl/real.hpp"

namespace qsl {

struct Complex {
    Real re;
    Real im;

    Complex() = default;
    Complex(const Real& r) : re(r) {}
    Complex(int r) : re(r) {}
    Complex(double r) : re(r) {}
    Complex(const Real& r, const Real& i) : re(r), im(i) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const Real& s) { re /= s; im /= s; return *this; }
};

inline Complex I() { return Complex(Real(0), Real(1)); }

Complex operator-(const Complex& a);
Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(Complex a, const Real& s);
Complex operator*(const Real& s, Complex a);
Complex operator/(Complex a, const Real& s);

Complex conj(const Complex& z);
Real norm2(const Complex& z);
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex sqrt(const Complex& z);
// e^{i theta}
Complex expi(const Real& theta);
// i^n for integer n
Complex ipow(long n);

}  // namespace qsl
