#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsl/gnslab.hpp"

#include <map>
#include <random>
#include <stdexcept>

using namespace qsl;

namespace {

struct Fixture {
    PrecisionContext prec = PrecisionContext::make(256);
    QContext ctx = QContext::make(Real("0.5"), Real("0.3"));
    RepCache& cache = shared_cache(ctx, prec);
    OqAlgebra alg{cache};

    const GenFunctional& functional() {
        static GenFunctional F = build_functional(ctx, prec, 8, LimitMode::derivative, 12);
        return F;
    }
    const GnsSpace& left_space(int N) {
        static std::map<int, GnsSpace> spaces;
        auto it = spaces.find(N);
        if (it == spaces.end()) it = spaces.emplace(N, gram(N, functional(), Convention::left, alg, 2)).first;
        return it->second;
    }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "fast Gram equals the product-based Gram") {
    for (Convention conv : {Convention::left, Convention::right}) {
        CAPTURE(to_string(conv));
        GnsSpace s = gram(2, functional(), conv, alg);
        CMatrix direct = gram_direct(2, functional(), conv, alg);
        CHECK(max_abs(s.gram - direct) < prec.tol_rank);
    }
}

TEST_CASE_FIXTURE(Fixture, "thread count does not change the Gram") {
    GnsSpace a = gram(2, functional(), Convention::left, alg, 1);
    GnsSpace b = gram(2, functional(), Convention::left, alg, 3);
    CHECK(max_abs(a.gram - b.gram) == Real(0));
}

TEST_CASE_FIXTURE(Fixture, "left Gram is positive semidefinite with rank 2N") {
    for (int N = 1; N <= 4; ++N) {
        CAPTURE(N);
        const GnsSpace& s = left_space(N);
        CHECK(s.size() == size_t((N + 1) * (N + 1)));
        CHECK(s.hermitian_residual < prec.tol_rank);
        CHECK(s.psd);
        CHECK(s.min_eigenvalue > -prec.tol_rank);
        CHECK(s.rank == size_t(2 * N));
        CHECK(s.smallest_kept > Real("1e-4"));
        CHECK(s.largest_dropped < prec.tol_rank);
        CHECK(s.coords.rows() == s.rank);
        CHECK(s.coords.cols() == s.size());
        CHECK(s.index_of(2, 1) == 5u);
    }
}

TEST_CASE_FIXTURE(Fixture, "right convention has a negative direction") {
    GnsSpace s = gram(2, functional(), Convention::right, alg);
    CHECK(s.hermitian_residual < prec.tol_rank);
    CHECK_FALSE(s.psd);
    CHECK(s.min_eigenvalue < Real("-1e-3"));
}

TEST_CASE_FIXTURE(Fixture, "Gram counits and the unit row") {
    const GnsSpace& s = left_space(2);
    CHECK(abs(s.counits[0] - Complex(1)) < prec.tol_residual);
    // Subtracting the counit kills the unit.
    for (size_t j = 0; j < s.size(); ++j) CHECK(abs(s.gram(0, j)) < prec.tol_rank);
    CHECK(norm(cocycle_vector(AlgElement::unit(), s, alg)) < prec.tol_rank);
}

TEST_CASE_FIXTURE(Fixture, "extended functional agrees on the coideal") {
    std::mt19937_64 rng(41);
    for (Convention conv : {Convention::left, Convention::right}) {
        AlgElement x = random_coideal_element(2, conv, cache, rng);
        CHECK(coideal_membership(x, conv, alg) < prec.tol_rank);
        CHECK(abs(functional_value(functional(), x, conv, cache) - apply(functional(), x, conv, alg)) <
              prec.tol_rank);
    }
}

TEST_CASE_FIXTURE(Fixture, "basis coordinates") {
    const GnsSpace& s = left_space(2);
    CVec c = basis_coordinates(s.basis[4].element, s, alg);
    REQUIRE(c.size() == s.size());
    for (size_t i = 0; i < c.size(); ++i) CHECK(abs(c[i] - Complex(i == 4 ? 1 : 0)) < prec.tol_rank);
    AlgElement high = podles_basis(3, Convention::left, cache)[0].element;
    CHECK_THROWS_AS(basis_coordinates(high, s, alg), std::domain_error);
    CHECK_THROWS_AS(basis_coordinates(generators(ctx).alpha, s, alg), std::domain_error);
}

TEST_CASE_FIXTURE(Fixture, "cocycle identities") {
    const GnsSpace& s = left_space(3);
    CocycleReport r = check_cocycle(s, functional(), alg, 8, 1);
    CHECK(r.pairs == 8u);
    CHECK(r.identity_max < prec.tol_rank);
    CHECK(r.norm_max < prec.tol_rank);
    CHECK(r.star_max < prec.tol_rank);
    CHECK(r.spherical_max < prec.tol_rank);
}

TEST_CASE_FIXTURE(Fixture, "left multiplication on the image") {
    const GnsSpace& s = left_space(3);
    auto b1 = podles_basis(1, Convention::left, cache);
    for (const auto& b : b1) {
        PiL p = pi_L(b.element, s, alg);
        CHECK(p.source_degree == 2);
        CHECK(p.matrix.rows() == s.rank);
        CHECK(p.consistency_residual < prec.tol_rank);
    }
}

TEST_CASE_FIXTURE(Fixture, "growth table is diagonal with one zero per degree") {
    const GnsSpace& s = left_space(4);
    GrowthTable t = growth_table(s);
    REQUIRE(t.degrees.size() == 5u);
    for (const auto& d : t.degrees) {
        CAPTURE(d.n);
        CHECK(d.offdiag_max < prec.tol_rank);
        REQUIRE(d.zero_indices.size() == 1u);
        CHECK(d.zero_indices[0] == d.spherical);
        CHECK(d.diagonal.size() == size_t(2 * d.n + 1));
        if (d.n > 0) CHECK(d.min_nonspherical > Real(0));
    }
}

TEST_CASE_FIXTURE(Fixture, "no Gaussian part at low degree") {
    for (int N = 2; N <= 3; ++N) {
        CAPTURE(N);
        GaussianReport r = gaussian_rank(left_space(N), alg);
        CHECK(r.N == N);
        CHECK(r.dim_image == size_t(2 * (N - 1)));
        CHECK(r.dim_gaussian == 0);
        CHECK(r.rank_ng == r.dim_image);
        CHECK(r.max_discard <= Real("0.5"));
        CHECK(r.rank_gap > prec.tol_rank);
    }
}
