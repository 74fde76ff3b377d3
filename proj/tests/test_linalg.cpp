#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsl/qcore.hpp"

#include <random>

using namespace qsl;

namespace {

struct Fixture {
    PrecisionContext prec = PrecisionContext::make(256);
};

CMatrix random_matrix(size_t r, size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    CMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = Complex(Real(nd(rng)), Real(nd(rng)));
    return m;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "real string round trip keeps every bit") {
    Real x = Real(1) / Real(3);
    Real y(x.str());
    CHECK(x == y);
    CHECK(Real(0).str() == "0");
    CHECK(working_bits() == 256);
}

TEST_CASE_FIXTURE(Fixture, "complex arithmetic") {
    Complex z(Real(3), Real(4));
    CHECK(abs(z) == Real(5));
    CHECK(abs(z * conj(z) - Complex(Real(25))) < prec.tol_residual);
    CHECK(abs(ipow(3) - Complex(Real(0), Real(-1))) < prec.tol_residual);
    CHECK(abs(expi(pi()) + Complex(1)) < prec.tol_residual);
}

TEST_CASE_FIXTURE(Fixture, "hermitian eigensolver reconstructs the matrix") {
    std::mt19937_64 rng(7);
    CMatrix a = random_matrix(7, 7, rng);
    CMatrix h = a + adjoint(a);
    auto ev = eigh(h);
    for (size_t k = 1; k < ev.values.size(); ++k) CHECK(ev.values[k - 1] <= ev.values[k]);
    CMatrix v = ev.vectors;
    CHECK(max_abs(adjoint(v) * v - CMatrix::identity(7)) < prec.tol_residual);
    CMatrix d(7, 7);
    for (size_t k = 0; k < 7; ++k) d(k, k) = Complex(ev.values[k]);
    CHECK(max_abs(v * d * adjoint(v) - h) < prec.tol_residual);
}

TEST_CASE_FIXTURE(Fixture, "solve, inverse and nullspace") {
    std::mt19937_64 rng(11);
    CMatrix a = random_matrix(5, 5, rng);
    CMatrix b = random_matrix(5, 2, rng);
    CHECK(max_abs(a * solve(a, b) - b) < prec.tol_residual);
    CHECK(max_abs(a * inverse(a) - CMatrix::identity(5)) < prec.tol_residual);

    // Rank-3 matrix built from a 5x3 and 3x5 product has a 2-dimensional kernel.
    CMatrix r = random_matrix(5, 3, rng) * random_matrix(3, 5, rng);
    CMatrix ns = nullspace(r, prec.tol_rank);
    CHECK(ns.cols() == 2);
    CHECK(max_abs(r * ns) < prec.tol_rank);
    CHECK(numerical_rank(r, prec.tol_rank) == 3);
}

TEST_CASE_FIXTURE(Fixture, "singular values of a diagonal matrix") {
    CMatrix d = CMatrix::diagonal(CVec{Complex(Real(3)), Complex(Real(-5)), Complex(Real(0), Real(2))});
    auto sv = singular_values(d);
    REQUIRE(sv.size() == 3);
    CHECK(abs(sv[0] - Real(5)) < prec.tol_residual);
    CHECK(abs(sv[1] - Real(3)) < prec.tol_residual);
    CHECK(abs(sv[2] - Real(2)) < prec.tol_residual);
}

TEST_CASE_FIXTURE(Fixture, "polynomial roots and characteristic polynomial") {
    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6, coefficients in ascending order.
    CVec c{Complex(-6), Complex(11), Complex(-6), Complex(1)};
    CVec roots = polynomial_roots(c);
    REQUIRE(roots.size() == 3);
    for (int r = 1; r <= 3; ++r) {
        Real best(100);
        for (const auto& z : roots) best = min(best, abs(z - Complex(r)));
        CHECK(best < prec.tol_rank);
    }
    CMatrix m = CMatrix::diagonal(CVec{Complex(1), Complex(2), Complex(3)});
    CVec cp = characteristic_polynomial(m);
    REQUIRE(cp.size() == 4);
    for (size_t k = 0; k < 4; ++k) CHECK(abs(cp[k] - c[k]) < prec.tol_residual);
}

TEST_CASE_FIXTURE(Fixture, "kron and outer conventions") {
    CVec u{Complex(1), Complex(2)}, v{Complex(3), Complex(Real(0), Real(1))};
    CVec k = kron(u, v);
    CHECK(abs(k[1] - Complex(Real(0), Real(1))) < prec.tol_residual);
    CHECK(abs(k[2] - Complex(6)) < prec.tol_residual);
    CMatrix o = outer(u, v);
    CHECK(abs(o(1, 1) - Complex(Real(0), Real(2))) < prec.tol_residual);
    CHECK(abs(inner(v, v) - Complex(10)) < prec.tol_residual);
}
