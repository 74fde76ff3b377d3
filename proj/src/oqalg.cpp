#include "qsl/oqalg.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace qsl {

AlgElement AlgElement::unit() { return block(0, CMatrix::identity(1)); }

AlgElement AlgElement::block(int tw, CMatrix F) {
    if (F.rows() != spin_dim(tw) || F.cols() != spin_dim(tw)) throw std::invalid_argument("block shape mismatch");
    AlgElement x;
    x.blocks_.emplace(tw, std::move(F));
    return x;
}

AlgElement AlgElement::coefficient(int tw, const CVec& v, const CVec& w) { return block(tw, outer(conj(v), w)); }

const CMatrix* AlgElement::find(int tw) const {
    auto it = blocks_.find(tw);
    return it == blocks_.end() ? nullptr : &it->second;
}

AlgElement& AlgElement::add(const AlgElement& o, const Complex& c) {
    for (const auto& [tw, F] : o.blocks_) {
        auto it = blocks_.find(tw);
        if (it == blocks_.end())
            blocks_.emplace(tw, c * F);
        else
            it->second += c * F;
    }
    return *this;
}

AlgElement AlgElement::scaled(const Complex& c) const {
    AlgElement r;
    for (const auto& [tw, F] : blocks_) r.blocks_.emplace(tw, c * F);
    return r;
}

void AlgElement::prune(const Real& tol) {
    for (auto it = blocks_.begin(); it != blocks_.end();) {
        if (frobenius(it->second) < tol)
            it = blocks_.erase(it);
        else
            ++it;
    }
}

AlgElement operator+(const AlgElement& x, const AlgElement& y) {
    AlgElement r(x);
    r.add(y);
    return r;
}

AlgElement operator-(const AlgElement& x, const AlgElement& y) {
    AlgElement r(x);
    r.add(y, Complex(-1));
    return r;
}

Real norm(const AlgElement& x) {
    Real s;
    for (const auto& [tw, F] : x.blocks()) s += frobenius(F);
    return s;
}

Generators generators(const QContext& ctx) {
    auto e2 = [](size_t i, size_t j, const Complex& c) {
        CMatrix F(2, 2);
        F(i, j) = c;
        return AlgElement::block(1, std::move(F));
    };
    // Index 0 is xi_{-1/2}, index 1 is xi_{1/2}; the matrix [[alpha, -q gamma*], [gamma, alpha*]]
    // pairs with k, e, f as the fundamental representation.
    Generators g;
    g.alpha = e2(1, 1, Complex(1));
    g.alpha_star = e2(0, 0, Complex(1));
    g.gamma = e2(0, 1, Complex(1));
    g.gamma_star = e2(1, 0, Complex(-Real(1) / ctx.q));
    return g;
}

AlgElement OqAlgebra::mul(const AlgElement& x, const AlgElement& y) const {
    AlgElement out;
    for (const auto& [tn, Fx] : x.blocks()) {
        for (const auto& [tm, Fy] : y.blocks()) {
            const CGDecomposition& cg = cache_.cg(tn, tm);
            const size_t dn = spin_dim(tn), dm = spin_dim(tm);
            const CMatrix FyT = transpose(Fy);
            for (const auto& [tk, W] : cg.W) {
                const size_t dk = spin_dim(tk);
                // Column l of W^T (Fx (x) Fy) conj(W) is W^T vec(Fx M_l Fy^T), M_l = reshape(conj(W_l)).
                CMatrix V(dn * dm, dk);
                for (size_t l = 0; l < dk; ++l) {
                    CMatrix M(dn, dm);
                    for (size_t a = 0; a < dn; ++a)
                        for (size_t b = 0; b < dm; ++b) M(a, b) = conj(W(a * dm + b, l));
                    CMatrix P = Fx * M * FyT;
                    for (size_t a = 0; a < dn; ++a)
                        for (size_t b = 0; b < dm; ++b) V(a * dm + b, l) = P(a, b);
                }
                out.add(AlgElement::block(tk, transpose(W) * V));
            }
        }
    }
    out.prune(prec().tol_residual);
    return out;
}

AlgElement OqAlgebra::star(const AlgElement& x) const {
    AlgElement out;
    for (const auto& [tw, F] : x.blocks()) {
        const StarIntertwiner& g = cache_.star(tw);
        out.add(AlgElement::block(tw, transpose(g.G) * conj(F) * transpose(g.Ginv)));
    }
    return out;
}

AlgElement OqAlgebra::power(const AlgElement& x, int n) const {
    AlgElement r = AlgElement::unit();
    for (int k = 0; k < n; ++k) r = mul(r, x);
    return r;
}

CMatrix OqAlgebra::word_matrix(const std::string& word, int tw) const {
    const SpinRep& r = cache_.rep(tw);
    const OpMatrices& o = cache_.ops(tw);
    CMatrix m = CMatrix::identity(spin_dim(tw));
    std::istringstream in(word);
    std::string tok;
    while (in >> tok) {
        const CMatrix* g = nullptr;
        if (tok == "k") g = &r.k;
        else if (tok == "kinv") g = &r.kinv;
        else if (tok == "e") g = &r.e;
        else if (tok == "f") g = &r.f;
        else if (tok == "khalf") g = &r.khalf;
        else if (tok == "khalf_inv") g = &r.khalf_inv;
        else if (tok == "A") g = &r.A;
        else if (tok == "B") g = &r.B;
        else if (tok == "C") g = &r.C;
        else if (tok == "D") g = &r.D;
        else if (tok == "E") g = &o.E;
        else if (tok == "Bt") g = &o.Bt;
        else if (tok == "Btilde") g = &o.Btilde;
        else if (tok == "X") g = &o.X;
        else throw std::invalid_argument("unknown generator in word: " + tok);
        m = m * *g;
    }
    return m;
}

AlgElement OqAlgebra::act(Convention side, const std::string& word, const AlgElement& x) const {
    AlgElement out;
    for (const auto& [tw, F] : x.blocks()) {
        CMatrix hT = transpose(word_matrix(word, tw));
        out.add(AlgElement::block(tw, side == Convention::left ? F * hT : hT * F));
    }
    return out;
}

Complex OqAlgebra::pair(const AlgElement& x, const std::string& word) const {
    Complex s;
    for (const auto& [tw, F] : x.blocks()) s += trace(transpose(F) * word_matrix(word, tw));
    return s;
}

Complex counit(const AlgElement& x) {
    Complex s;
    for (const auto& [tw, F] : x.blocks()) s += trace(F);
    return s;
}

Complex haar(const AlgElement& x) {
    const CMatrix* F = x.find(0);
    return F ? (*F)(0, 0) : Complex();
}

Complex eval_torus(const AlgElement& x, const Real& theta) {
    Complex s;
    for (const auto& [tw, F] : x.blocks())
        for (size_t j = 0; j < F.rows(); ++j) s += F(j, j) * expi(label(tw, j) * theta);
    return s;
}

std::vector<PodlesElement> podles_basis(int n, Convention conv, RepCache& cache) {
    const WeightBasis& wb = cache.slot_basis(n, conv);
    const CVec& eta = cache.spherical(n, conv);
    std::vector<PodlesElement> out;
    for (size_t i = 0; i < wb.vectors.cols(); ++i) {
        PodlesElement pe;
        pe.index.n = n;
        pe.index.i = i;
        pe.index.convention = conv;
        pe.index.is_spherical = i == wb.spherical;
        pe.index.eigenvalue = wb.eigenvalues[i];
        if (conv == Convention::left) {
            pe.first = wb.vectors.col(i);
            pe.second = eta;
        } else {
            pe.first = eta;
            pe.second = wb.vectors.col(i);
        }
        pe.element = AlgElement::coefficient(2 * n, pe.first, pe.second);
        out.push_back(std::move(pe));
    }
    return out;
}

AlgElement bispherical(int n, Convention conv, RepCache& cache) {
    const CVec& eta = cache.spherical(n, conv);
    return AlgElement::coefficient(2 * n, eta, eta);
}

Real coideal_membership(const AlgElement& x, Convention conv, OqAlgebra& alg) {
    if (conv == Convention::right) {
        const Complex eps(Real(0), -alg.ctx().bracket_a);
        return norm(alg.act(Convention::right, "Bt", x) - x.scaled(eps));
    }
    Real r;
    for (const auto& [tw, F] : x.blocks()) {
        if (tw % 2) {
            r += frobenius(F);
            continue;
        }
        const CVec& eta = alg.cache().spherical(tw / 2, Convention::left);
        CVec u = F * conj(eta);
        r += frobenius(F - outer(u, eta));
    }
    return r;
}

CVec podles_coordinates(const AlgElement& x, int n, Convention conv, RepCache& cache) {
    const size_t d = spin_dim(2 * n);
    const CMatrix* F = x.find(2 * n);
    if (!F) return CVec(d);
    const WeightBasis& wb = cache.slot_basis(n, conv);
    const CVec& eta = cache.spherical(n, conv);
    if (conv == Convention::left) {
        // F = conj(sum_i conj(d_i) v_i) eta^T, so F conj(eta) = sum_i d_i conj(v_i).
        CVec u = *F * conj(eta);
        return solve(conj(wb.vectors), CMatrix::column(u)).col(0);
    }
    CVec u = transpose(*F) * eta;
    return adjoint(wb.vectors) * u;
}

std::string to_json(const AlgElement& x) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [tw, F] : x.blocks()) {
        nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
        for (size_t i = 0; i < F.rows(); ++i) {
            nlohmann::ordered_json rr = nlohmann::ordered_json::array(), ri = nlohmann::ordered_json::array();
            for (size_t j = 0; j < F.cols(); ++j) {
                rr.push_back(F(i, j).re.str());
                ri.push_back(F(i, j).im.str());
            }
            re.push_back(rr);
            im.push_back(ri);
        }
        nlohmann::ordered_json b;
        b["degree"] = tw % 2 ? std::to_string(tw) + "/2" : std::to_string(tw / 2);
        b["real"] = re;
        b["imag"] = im;
        arr.push_back(b);
    }
    return arr.dump();
}

}  // namespace qsl
