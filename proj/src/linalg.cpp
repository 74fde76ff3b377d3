#include "qsl/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsl {

CMatrix CMatrix::identity(size_t n) {
    CMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = Complex(1);
    return m;
}

CMatrix CMatrix::diagonal(const CVec& d) {
    CMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::column(const CVec& v) {
    CMatrix m(v.size(), 1);
    for (size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

CVec CMatrix::col(size_t j) const {
    CVec v(r_);
    for (size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

void CMatrix::set_col(size_t j, const CVec& v) {
    for (size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in +=");
    for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("shape mismatch in -=");
    for (size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(const Complex& s) {
    for (auto& z : d_) z *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { a += b; return a; }
CMatrix operator-(CMatrix a, const CMatrix& b) { a -= b; return a; }
CMatrix operator*(const Complex& s, CMatrix a) { a *= s; return a; }

namespace {

// acc += x * y without building a temporary Complex for the product.
inline void mul_add(Complex& acc, const Complex& x, const Complex& y, Real& t) {
    if (x.re.is_zero() && x.im.is_zero()) return;
    mpfr_mul(t.raw(), x.re.raw(), y.re.raw(), MPFR_RNDN);
    mpfr_add(acc.re.raw(), acc.re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), x.im.raw(), y.im.raw(), MPFR_RNDN);
    mpfr_sub(acc.re.raw(), acc.re.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), x.re.raw(), y.im.raw(), MPFR_RNDN);
    mpfr_add(acc.im.raw(), acc.im.raw(), t.raw(), MPFR_RNDN);
    mpfr_mul(t.raw(), x.im.raw(), y.re.raw(), MPFR_RNDN);
    mpfr_add(acc.im.raw(), acc.im.raw(), t.raw(), MPFR_RNDN);
}

}  // namespace

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in matrix product");
    CMatrix c(a.rows(), b.cols());
    Real t;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            const Complex& x = a(i, k);
            if (x.re.is_zero() && x.im.is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j) mul_add(c(i, j), x, b(k, j), t);
        }
    return c;
}

CVec operator*(const CMatrix& a, const CVec& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("shape mismatch in matrix-vector product");
    CVec r(a.rows());
    Real t;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) mul_add(r[i], a(i, k), v[k], t);
    return r;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix r(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(j, i) = conj(a(i, j));
    return r;
}

CMatrix transpose(const CMatrix& a) {
    CMatrix r(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

CMatrix conj(const CMatrix& a) {
    CMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = conj(a(i, j));
    return r;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            const Complex& x = a(i, j);
            if (x.re.is_zero() && x.im.is_zero()) continue;
            for (size_t k = 0; k < b.rows(); ++k)
                for (size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
    return r;
}

CMatrix outer(const CVec& u, const CVec& v) {
    CMatrix r(u.size(), v.size());
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * v[j];
    return r;
}

Complex trace(const CMatrix& a) {
    Complex t;
    for (size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

Real frobenius(const CMatrix& a) {
    Real s;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) s += norm2(a(i, j));
    return sqrt(s);
}

Real max_abs(const CMatrix& a) {
    Real m;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) m = max(m, abs(a(i, j)));
    return m;
}

CVec operator+(CVec a, const CVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

CVec operator-(CVec a, const CVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

CVec scaled(const Complex& s, CVec v) {
    for (auto& z : v) z = s * z;
    return v;
}

CVec conj(const CVec& v) {
    CVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = conj(v[i]);
    return r;
}

Complex inner(const CVec& x, const CVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("length mismatch in inner product");
    Complex s;
    Real t;
    for (size_t i = 0; i < x.size(); ++i) mul_add(s, conj(x[i]), y[i], t);
    return s;
}

Real norm(const CVec& v) {
    Real s;
    for (const auto& z : v) s += norm2(z);
    return sqrt(s);
}

Real max_abs(const CVec& v) {
    Real m;
    for (const auto& z : v) m = max(m, abs(z));
    return m;
}

CVec normalized(const CVec& v) {
    Real n = norm(v);
    if (n.is_zero()) throw std::invalid_argument("cannot normalize the zero vector");
    CVec r(v);
    for (auto& z : r) z /= n;
    return r;
}

CVec kron(const CVec& a, const CVec& b) {
    CVec r(a.size() * b.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    return r;
}

CVec basis_vector(size_t n, size_t i) {
    CVec v(n);
    v.at(i) = Complex(1);
    return v;
}

CVec fix_phase(const CVec& v, const Real& tiny) {
    for (const auto& z : v) {
        Real m = abs(z);
        if (m > tiny) {
            Complex ph = conj(z) / m;
            return scaled(ph, v);
        }
    }
    return v;
}

HermitianEigen eigh(const CMatrix& a0) {
    const size_t n = a0.rows();
    if (n != a0.cols()) throw std::invalid_argument("eigh: matrix not square");
    CMatrix a(a0);
    // Symmetrize so the rotations see an exactly Hermitian matrix.
    for (size_t i = 0; i < n; ++i) {
        a(i, i) = Complex(a(i, i).re);
        for (size_t j = i + 1; j < n; ++j) {
            Complex m = (a(i, j) + conj(a(j, i))) / Real(2);
            a(i, j) = m;
            a(j, i) = conj(m);
        }
    }
    CMatrix v = CMatrix::identity(n);
    const Real scale = max(frobenius(a), Real(1));
    const Real eps = ldexp(scale, -working_bits() + 2);

    for (int sweep = 0; sweep < 100; ++sweep) {
        Real off;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) off += norm2(a(p, q));
        if (sqrt(off) <= eps) break;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                Real g = abs(a(p, q));
                if (g <= ldexp(eps, -8)) {
                    a(p, q) = Complex();
                    a(q, p) = Complex();
                    continue;
                }
                Complex e = a(p, q) / g;
                Real tau = (a(q, q).re - a(p, p).re) / (Real(2) * g);
                Real t = Real(1) / (abs(tau) + sqrt(Real(1) + tau * tau));
                if (tau.sign() < 0) t = -t;
                Real c = Real(1) / sqrt(Real(1) + t * t);
                Real s = t * c;
                Complex ce = conj(e);
                // Columns: A <- A J with J_pp=c, J_pq=s, J_qp=-s conj(e), J_qq=c conj(e).
                for (size_t k = 0; k < n; ++k) {
                    Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * (ce * akq);
                    a(k, q) = s * akp + c * (ce * akq);
                    Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * (ce * vkq);
                    v(k, q) = s * vkp + c * (ce * vkq);
                }
                // Rows: A <- J^H A.
                for (size_t k = 0; k < n; ++k) {
                    Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * (e * aqk);
                    a(q, k) = s * apk + c * (e * aqk);
                }
                a(p, q) = Complex();
                a(q, p) = Complex();
                a(p, p) = Complex(a(p, p).re);
                a(q, q) = Complex(a(q, q).re);
            }
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return a(x, x).re < a(y, y).re; });
    HermitianEigen out;
    out.vectors = CMatrix(n, n);
    const Real tiny = ldexp(Real(1), -working_bits() / 4);
    for (size_t k = 0; k < n; ++k) {
        out.values.push_back(a(order[k], order[k]).re);
        out.vectors.set_col(k, fix_phase(v.col(order[k]), tiny));
    }
    return out;
}

std::vector<Real> singular_values(const CMatrix& a) {
    // The smaller Gram matrix carries the same nonzero spectrum.
    auto ev = eigh(a.rows() < a.cols() ? a * adjoint(a) : adjoint(a) * a);
    std::vector<Real> s;
    for (auto it = ev.values.rbegin(); it != ev.values.rend(); ++it) s.push_back(it->sign() > 0 ? sqrt(*it) : Real(0));
    return s;
}

CMatrix nullspace(const CMatrix& a, const Real& tol) {
    auto ev = eigh(adjoint(a) * a);
    Real scale = frobenius(a);
    Real thr = tol * scale;
    thr *= thr;
    std::vector<size_t> keep;
    for (size_t k = 0; k < ev.values.size(); ++k)
        if (ev.values[k] <= thr) keep.push_back(k);
    CMatrix n(a.cols(), keep.size());
    for (size_t j = 0; j < keep.size(); ++j) n.set_col(j, ev.vectors.col(keep[j]));
    return n;
}

size_t numerical_rank(const CMatrix& a, const Real& tol) {
    auto s = singular_values(a);
    if (s.empty() || s.front().is_zero()) return 0;
    size_t r = 0;
    for (const auto& x : s)
        if (x > tol * s.front()) ++r;
    return r;
}

CMatrix solve(const CMatrix& a0, const CMatrix& b0) {
    const size_t n = a0.rows();
    if (n != a0.cols() || b0.rows() != n) throw std::invalid_argument("solve: shape mismatch");
    CMatrix a(a0), b(b0);
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        Real best = abs(a(k, k));
        for (size_t i = k + 1; i < n; ++i) {
            Real m = abs(a(i, k));
            if (m > best) { best = m; piv = i; }
        }
        if (best.is_zero()) throw std::runtime_error("solve: singular matrix");
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
        }
        for (size_t i = k + 1; i < n; ++i) {
            Complex f = a(i, k) / a(k, k);
            if (f.re.is_zero() && f.im.is_zero()) continue;
            for (size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
        }
    }
    CMatrix x(n, b.cols());
    for (size_t jj = 0; jj < b.cols(); ++jj)
        for (size_t ii = n; ii-- > 0;) {
            Complex s = b(ii, jj);
            for (size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x(j, jj);
            x(ii, jj) = s / a(ii, ii);
        }
    return x;
}

CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

CVec characteristic_polynomial(const CMatrix& a) {
    const size_t n = a.rows();
    CVec c(n + 1);
    c[n] = Complex(1);
    CMatrix m(n, n);
    const CMatrix id = CMatrix::identity(n);
    for (size_t k = 1; k <= n; ++k) {
        m = a * m + c[n - k + 1] * id;
        Complex t = trace(a * m);
        c[n - k] = -t / Real(static_cast<long>(k));
    }
    return c;
}

CVec polynomial_roots(const CVec& coeffs) {
    size_t deg = coeffs.size() - 1;
    while (deg > 0 && coeffs[deg].re.is_zero() && coeffs[deg].im.is_zero()) --deg;
    if (deg == 0) return {};
    CVec c(coeffs.begin(), coeffs.begin() + static_cast<long>(deg) + 1);
    Real bound(0);
    for (size_t k = 0; k < deg; ++k) bound = max(bound, abs(c[k] / c[deg]));
    bound += Real(1);
    CVec z(deg);
    for (size_t k = 0; k < deg; ++k) {
        Real ang = Real(2) * pi() * Real(static_cast<long>(k)) / Real(static_cast<long>(deg)) + Real(0.4);
        z[k] = bound * expi(ang);
    }
    auto eval = [&](const Complex& x, Complex& p, Complex& dp) {
        p = c[deg];
        dp = Complex();
        for (size_t k = deg; k-- > 0;) {
            dp = dp * x + p;
            p = p * x + c[k];
        }
    };
    const Real stop = ldexp(bound, -working_bits() + 6);
    for (int it = 0; it < 2000; ++it) {
        Real worst;
        for (size_t k = 0; k < deg; ++k) {
            Complex p, dp;
            eval(z[k], p, dp);
            if (p.re.is_zero() && p.im.is_zero()) continue;
            Complex ratio = p / dp;
            Complex sum;
            for (size_t j = 0; j < deg; ++j)
                if (j != k) sum += Complex(1) / (z[k] - z[j]);
            Complex w = ratio / (Complex(1) - ratio * sum);
            z[k] -= w;
            worst = max(worst, abs(w));
        }
        if (worst <= stop) break;
    }
    std::stable_sort(z.begin(), z.end(), [](const Complex& x, const Complex& y) {
        if (x.re == y.re) return x.im < y.im;
        return x.re < y.re;
    });
    return z;
}

CVec eigenvalues_general(const CMatrix& a) { return polynomial_roots(characteristic_polynomial(a)); }

}  // namespace qsl
