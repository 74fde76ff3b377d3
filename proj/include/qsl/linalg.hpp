#pragma once

#include "qsl/complex.hpp"

#include <cstddef>
#include <vector>

namespace qsl {

using CVec = std::vector<Complex>;

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(size_t rows, size_t cols) : r_(rows), c_(cols), d_(rows * cols) {}

    static CMatrix identity(size_t n);
    static CMatrix diagonal(const CVec& d);
    static CMatrix column(const CVec& v);

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    bool empty() const { return d_.empty(); }

    Complex& operator()(size_t i, size_t j) { return d_[i * c_ + j]; }
    const Complex& operator()(size_t i, size_t j) const { return d_[i * c_ + j]; }

    CVec col(size_t j) const;
    void set_col(size_t j, const CVec& v);

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(const Complex& s);

private:
    size_t r_ = 0, c_ = 0;
    std::vector<Complex> d_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const Complex& s, CMatrix a);
CVec operator*(const CMatrix& a, const CVec& v);

CMatrix adjoint(const CMatrix& a);
CMatrix transpose(const CMatrix& a);
CMatrix conj(const CMatrix& a);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix outer(const CVec& u, const CVec& v);  // u v^T, no conjugation
Complex trace(const CMatrix& a);
Real frobenius(const CMatrix& a);
Real max_abs(const CMatrix& a);

CVec operator+(CVec a, const CVec& b);
CVec operator-(CVec a, const CVec& b);
CVec scaled(const Complex& s, CVec v);
CVec conj(const CVec& v);
Complex inner(const CVec& x, const CVec& y);  // sum conj(x_i) y_i
Real norm(const CVec& v);
Real max_abs(const CVec& v);
CVec normalized(const CVec& v);
CVec kron(const CVec& a, const CVec& b);
CVec basis_vector(size_t n, size_t i);

// Multiplies v by the unit phase making its first component with modulus
// above `tiny` real and positive.
CVec fix_phase(const CVec& v, const Real& tiny);

struct HermitianEigen {
    std::vector<Real> values;  // ascending
    CMatrix vectors;           // columns, phase-fixed
};

// Cyclic complex Jacobi at working precision. Input must be Hermitian up to
// rounding; only the upper triangle drives the rotations.
HermitianEigen eigh(const CMatrix& a);

// Descending, min(rows, cols) values.
std::vector<Real> singular_values(const CMatrix& a);
// Orthonormal basis (columns) of vectors with ||a v|| <= tol * ||a||_F.
CMatrix nullspace(const CMatrix& a, const Real& tol);
size_t numerical_rank(const CMatrix& a, const Real& tol);

// Solves a x = b by partial-pivot LU; throws on singular a.
CMatrix solve(const CMatrix& a, const CMatrix& b);
CMatrix inverse(const CMatrix& a);

// Characteristic polynomial coefficients c_0..c_n of det(x - a), monic.
CVec characteristic_polynomial(const CMatrix& a);
// All roots of sum c_k x^k via Aberth iteration.
CVec polynomial_roots(const CVec& coeffs);
// Eigenvalues of a general square matrix, sorted by real part.
CVec eigenvalues_general(const CMatrix& a);

}  // namespace qsl
