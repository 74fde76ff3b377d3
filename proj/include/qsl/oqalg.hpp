#pragma once

#include "qsl/uqrep.hpp"

#include <map>
#include <string>
#include <vector>

namespace qsl {

// x = sum_s sum_ij (F_s)_ij u^s_ij, blocks keyed by twice-spin. u_{v,w} has
// block conj(v) w^T.
class AlgElement {
public:
    AlgElement() = default;
    static AlgElement unit();
    static AlgElement block(int tw, CMatrix F);
    static AlgElement coefficient(int tw, const CVec& v, const CVec& w);

    const std::map<int, CMatrix>& blocks() const { return blocks_; }
    const CMatrix* find(int tw) const;
    int max_degree() const { return blocks_.empty() ? -1 : blocks_.rbegin()->first; }

    AlgElement& add(const AlgElement& o, const Complex& c = Complex(1));
    AlgElement scaled(const Complex& c) const;
    // Removes blocks with Frobenius norm below tol.
    void prune(const Real& tol);

private:
    std::map<int, CMatrix> blocks_;
};

AlgElement operator+(const AlgElement& x, const AlgElement& y);
AlgElement operator-(const AlgElement& x, const AlgElement& y);
// Sum of blockwise Frobenius norms.
Real norm(const AlgElement& x);

struct Generators {
    AlgElement alpha, gamma, alpha_star, gamma_star;
};

Generators generators(const QContext& ctx);

class OqAlgebra {
public:
    explicit OqAlgebra(RepCache& cache) : cache_(cache) {}
    RepCache& cache() const { return cache_; }
    const QContext& ctx() const { return cache_.ctx(); }
    const PrecisionContext& prec() const { return cache_.prec(); }

    AlgElement mul(const AlgElement& x, const AlgElement& y) const;
    AlgElement star(const AlgElement& x) const;
    AlgElement power(const AlgElement& x, int n) const;

    // Representation matrix of a word in the generators on spin tw.
    CMatrix word_matrix(const std::string& word, int tw) const;
    // h |> x (left) or x <| h (right) for h a word like "Bt", "k e", "Btilde".
    AlgElement act(Convention side, const std::string& word, const AlgElement& x) const;

    // Pairing x(h) = sum_s trace(F_s^T pi_s(h)) over a word h.
    Complex pair(const AlgElement& x, const std::string& word) const;

private:
    RepCache& cache_;
};

Complex counit(const AlgElement& x);
Complex haar(const AlgElement& x);
Complex eval_torus(const AlgElement& x, const Real& theta);

struct PodlesBasisIndex {
    int n = 0;
    size_t i = 0;
    Convention convention = Convention::left;
    bool is_spherical = false;
    Real eigenvalue;
};

struct PodlesElement {
    PodlesBasisIndex index;
    CVec first;   // first slot (conjugate-linear)
    CVec second;  // second slot
    AlgElement element;
};

// Right: {u_{eta_R, eta_i}} with eta_i the W_n eigenbasis. Left:
// {u_{v_i, eta_L}} with v_i the first-slot weight basis (see uqrep).
std::vector<PodlesElement> podles_basis(int n, Convention conv, RepCache& cache);

// The element with both slots at the spherical vector of the convention.
AlgElement bispherical(int n, Convention conv, RepCache& cache);

// Right: ||x <| B_t - eps(B_t) x||. Left: distance of every block from the
// form conj(v) eta_L^T, i.e. ||F - F conj(eta) eta^T|| summed over blocks;
// half-integer blocks count fully.
Real coideal_membership(const AlgElement& x, Convention conv, OqAlgebra& alg);

// Linear coefficients of x in the degree-n Podles basis (membership assumed).
CVec podles_coordinates(const AlgElement& x, int n, Convention conv, RepCache& cache);

std::string to_json(const AlgElement& x);

}  // namespace qsl
