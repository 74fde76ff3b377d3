#include "qsl/gnslab.hpp"

#include <map>
#include <stdexcept>
#include <thread>

namespace qsl {

namespace {

int degree_of(const AlgElement& x) {
    int d = x.max_degree();
    return d < 0 ? 0 : (d + 1) / 2;
}

// Orthonormal basis of the column span of Y, dropping directions whose
// squared singular value is below tol * max(1, largest).
struct Span {
    CMatrix Q;  // columns
    std::vector<Real> values;
};

Span column_span(const CMatrix& Y, const Real& tol) {
    Span s;
    auto ev = eigh(Y * adjoint(Y));
    Real top = ev.values.empty() ? Real(0) : ev.values.back();
    Real thr = tol * max(Real(1), top);
    std::vector<size_t> keep;
    for (size_t k = 0; k < ev.values.size(); ++k)
        if (ev.values[k] > thr) keep.push_back(k);
    s.Q = CMatrix(Y.rows(), keep.size());
    for (size_t c = 0; c < keep.size(); ++c) {
        s.Q.set_col(c, ev.vectors.col(keep[c]));
        s.values.push_back(ev.values[keep[c]]);
    }
    return s;
}

// Pseudo-inverse of Y (r x m) through the eigendecomposition of Y^dag Y.
CMatrix pseudo_inverse(const CMatrix& Y, const Real& tol) {
    auto ev = eigh(adjoint(Y) * Y);
    Real top = ev.values.empty() ? Real(0) : ev.values.back();
    Real thr = tol * max(Real(1), top);
    const size_t m = Y.cols();
    CMatrix inv(m, m);
    for (size_t k = 0; k < ev.values.size(); ++k) {
        if (ev.values[k] <= thr) continue;
        CVec v = ev.vectors.col(k);
        Complex s(Real(1) / ev.values[k]);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) inv(i, j) += s * v[i] * conj(v[j]);
    }
    return inv * adjoint(Y);
}

Complex sesq(const CVec& x, const CVec& y) { return inner(x, y); }

}  // namespace

Complex functional_value(const GenFunctional& F, const AlgElement& x, Convention conv, RepCache& cache) {
    Complex s;
    for (const auto& [tw, B] : x.blocks()) {
        if (tw == 0) continue;
        if (tw % 2) continue;
        const int n = tw / 2;
        if (n > F.n_max()) throw std::domain_error("degree exceeds the functional's n_max");
        const CVec& eta = cache.spherical(n, conv);
        s += Complex(F.lambda[static_cast<size_t>(n)]) * inner(conj(eta), B * conj(eta));
    }
    return s;
}

size_t GnsSpace::index_of(int n, size_t i) const { return n == 0 ? 0 : static_cast<size_t>(n * n) + i; }

GnsSpace gram(int N, const GenFunctional& F, Convention conv, OqAlgebra& alg, int threads) {
    if (N < 1) throw std::domain_error("gram needs N >= 1");
    if (F.n_max() < 2 * N) throw std::domain_error("functional must cover degrees up to 2N");
    RepCache& cache = alg.cache();
    const PrecisionContext& prec = alg.prec();

    GnsSpace sp;
    sp.N = N;
    sp.convention = conv;
    {
        PodlesElement u;
        u.index.n = 0;
        u.index.convention = conv;
        u.index.is_spherical = true;
        u.first = CVec{Complex(1)};
        u.second = CVec{Complex(1)};
        u.element = AlgElement::unit();
        sp.basis.push_back(std::move(u));
        sp.degree.push_back(0);
    }
    for (int n = 1; n <= N; ++n)
        for (auto& pe : podles_basis(n, conv, cache)) {
            sp.basis.push_back(std::move(pe));
            sp.degree.push_back(n);
        }
    const size_t m = sp.basis.size();

    // Slots of b_i and of b_i^*.
    std::vector<CVec> a(m), c(m);
    std::vector<Complex> Lb(m), Lbs(m);
    for (size_t i = 0; i < m; ++i) {
        const PodlesElement& b = sp.basis[i];
        const StarIntertwiner& g = cache.star(2 * sp.degree[i]);
        a[i] = adjoint(g.G) * conj(b.first);
        c[i] = g.Ginv * conj(b.second);
        sp.counits.push_back(inner(b.first, b.second));
        const int n = sp.degree[i];
        if (n > 0) {
            const CVec& eta = cache.spherical(n, conv);
            const Complex lam(F.lambda[static_cast<size_t>(n)]);
            Lb[i] = lam * inner(b.first, eta) * inner(eta, b.second);
            Lbs[i] = lam * inner(a[i], eta) * inner(eta, c[i]);
        }
    }

    // W_k eta_k for every degree pair.
    std::map<std::pair<int, int>, std::vector<std::pair<Complex, CVec>>> wk;
    for (int n = 0; n <= N; ++n)
        for (int mm = 0; mm <= N; ++mm) {
            auto& list = wk[{n, mm}];
            const CGDecomposition& cg = cache.cg(2 * n, 2 * mm);
            for (const auto& [tk, W] : cg.W) {
                if (tk == 0 || tk % 2) continue;
                const int k = tk / 2;
                list.emplace_back(Complex(F.lambda[static_cast<size_t>(k)]), W * cache.spherical(k, conv));
            }
        }

    sp.gram = CMatrix(m, m);
    auto entry = [&](size_t i, size_t j) {
        const auto& list = wk.at({sp.degree[i], sp.degree[j]});
        const CVec& f = sp.basis[j].first;
        const CVec& g = sp.basis[j].second;
        CVec af = kron(a[i], f), cg2 = kron(c[i], g);
        Complex prod;
        for (const auto& [lam, w] : list) prod += lam * inner(af, w) * inner(w, cg2);
        return prod - sp.counits[j] * Lbs[i] - conj(sp.counits[i]) * Lb[j];
    };
    auto rows = [&](size_t start, size_t step) {
        for (size_t i = start; i < m; i += step)
            for (size_t j = 0; j < m; ++j) sp.gram(i, j) = entry(i, j);
    };
    const size_t nt = static_cast<size_t>(std::max(1, threads));
    if (nt == 1) {
        rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nt; ++t) pool.emplace_back(rows, t, nt);
        for (auto& th : pool) th.join();
    }

    sp.hermitian_residual = max_abs(sp.gram - adjoint(sp.gram));
    auto ev = eigh(sp.gram);
    sp.spectrum = ev.values;
    sp.min_eigenvalue = ev.values.front();
    sp.psd = sp.min_eigenvalue >= -prec.tol_rank;
    sp.tol_rank = prec.tol_rank;
    sp.rank_threshold = prec.tol_rank * max(Real(1), ev.values.back());
    std::vector<size_t> keep;
    for (size_t k = 0; k < m; ++k) {
        if (ev.values[k] > sp.rank_threshold)
            keep.push_back(k);
        else
            sp.largest_dropped = max(sp.largest_dropped, abs(ev.values[k]));
    }
    sp.rank = keep.size();
    sp.coords = CMatrix(sp.rank, m);
    for (size_t r = 0; r < keep.size(); ++r) {
        const Real& lam = ev.values[keep[r]];
        if (r == 0) sp.smallest_kept = lam;
        Complex s(sqrt(lam));
        for (size_t j = 0; j < m; ++j) sp.coords(r, j) = s * conj(ev.vectors(j, keep[r]));
    }
    return sp;
}

CMatrix gram_direct(int N, const GenFunctional& F, Convention conv, OqAlgebra& alg) {
    std::vector<AlgElement> xs{AlgElement()};
    for (int n = 1; n <= N; ++n)
        for (auto& pe : podles_basis(n, conv, alg.cache()))
            xs.push_back(pe.element - AlgElement::unit().scaled(counit(pe.element)));
    CMatrix G(xs.size(), xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        AlgElement si = alg.star(xs[i]);
        for (size_t j = 0; j < xs.size(); ++j) G(i, j) = apply(F, alg.mul(si, xs[j]), conv, alg);
    }
    return G;
}

CVec basis_coordinates(const AlgElement& x, const GnsSpace& space, OqAlgebra& alg) {
    if (degree_of(x) > space.N) throw std::domain_error("element degree exceeds the truncation");
    if (coideal_membership(x, space.convention, alg) >= alg.prec().tol_rank)
        throw std::domain_error("element is not in the coideal");
    CVec c(space.size());
    if (const CMatrix* B = x.find(0)) c[0] = (*B)(0, 0);
    for (int n = 1; n <= space.N; ++n) {
        if (!x.find(2 * n)) continue;
        CVec d = podles_coordinates(x, n, space.convention, alg.cache());
        for (size_t i = 0; i < d.size(); ++i) c[space.index_of(n, i)] = d[i];
    }
    return c;
}

CVec cocycle_vector(const AlgElement& x, const GnsSpace& space, OqAlgebra& alg) {
    return space.coords * basis_coordinates(x, space, alg);
}

PiL pi_L(const AlgElement& b, const GnsSpace& space, OqAlgebra& alg) {
    PiL p;
    p.source_degree = space.N - degree_of(b);
    if (p.source_degree < 0) throw std::domain_error("action exceeds the truncation");
    const size_t ms = static_cast<size_t>((p.source_degree + 1) * (p.source_degree + 1));
    const size_t r = space.rank;
    CMatrix Y(r, ms), Z(r, ms);
    const CVec Cb = cocycle_vector(b, space, alg);
    for (size_t j = 0; j < ms; ++j) {
        const AlgElement& y = space.basis[j].element;
        CVec z = cocycle_vector(alg.mul(b, y), space, alg) - scaled(space.counits[j], Cb);
        for (size_t k = 0; k < r; ++k) {
            Y(k, j) = space.coords(k, j);
            Z(k, j) = z[k];
        }
    }
    p.matrix = Z * pseudo_inverse(Y, alg.prec().tol_rank);
    p.consistency_residual = frobenius(Z - p.matrix * Y);
    return p;
}

AlgElement random_coideal_element(int max_degree, Convention conv, RepCache& cache, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    AlgElement x = AlgElement::unit().scaled(Complex(Real(nd(rng)), Real(nd(rng))));
    for (int n = 1; n <= max_degree; ++n)
        for (const auto& pe : podles_basis(n, conv, cache)) x.add(pe.element, Complex(Real(nd(rng)), Real(nd(rng))));
    return x;
}

CocycleReport check_cocycle(const GnsSpace& space, const GenFunctional& F, OqAlgebra& alg, size_t pairs,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RepCache& cache = alg.cache();
    const Convention conv = space.convention;
    CocycleReport rep;
    rep.pairs = pairs;
    const int da = std::max(1, space.N / 2);
    for (size_t p = 0; p < pairs; ++p) {
        AlgElement a = random_coideal_element(da, conv, cache, rng);
        AlgElement b = random_coideal_element(space.N - da, conv, cache, rng);
        PiL pa = pi_L(a, space, alg);
        CVec lhs = pa.matrix * cocycle_vector(b, space, alg);
        CVec rhs = cocycle_vector(alg.mul(a, b), space, alg) - scaled(counit(b), cocycle_vector(a, space, alg));
        rep.identity_max = max(rep.identity_max, norm(lhs - rhs));

        AlgElement x = random_coideal_element(space.N, conv, cache, rng);
        AlgElement xc = x - AlgElement::unit().scaled(counit(x));
        Complex direct = apply(F, alg.mul(alg.star(xc), xc), conv, alg);
        CVec Cx = cocycle_vector(x, space, alg);
        rep.norm_max = max(rep.norm_max, abs(Complex(inner(Cx, Cx)) - direct));

        AlgElement bb = random_coideal_element(1, conv, cache, rng);
        AlgElement u = random_coideal_element(space.N - 1, conv, cache, rng);
        AlgElement v = random_coideal_element(space.N - 1, conv, cache, rng);
        PiL pb = pi_L(bb, space, alg);
        PiL pbs = pi_L(alg.star(bb), space, alg);
        CVec Cu = cocycle_vector(u, space, alg), Cv = cocycle_vector(v, space, alg);
        rep.star_max = max(rep.star_max, abs(sesq(Cu, pb.matrix * Cv) - sesq(pbs.matrix * Cu, Cv)));
    }
    for (int n = 1; n <= space.N; ++n) {
        const size_t s = cache.slot_basis(n, conv).spherical;
        rep.spherical_max = max(rep.spherical_max, norm(space.coords.col(space.index_of(n, s))));
        rep.bispherical_max = max(rep.bispherical_max, norm(cocycle_vector(bispherical(n, conv, cache), space, alg)));
    }
    return rep;
}

GrowthTable growth_table(const GnsSpace& space) {
    GrowthTable t;
    const Real& tol = space.tol_rank;
    Real prev;
    for (int n = 0; n <= space.N; ++n) {
        GrowthDegree g;
        g.n = n;
        const size_t d = static_cast<size_t>(2 * n + 1);
        const size_t off = space.index_of(n, 0);
        g.block = CMatrix(d, d);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) g.block(i, j) = space.gram(off + i, off + j);
        g.spherical = n == 0 ? 0 : static_cast<size_t>(-1);
        for (size_t i = 0; i < d; ++i) {
            const PodlesElement& pe = space.basis[off + i];
            g.diagonal.push_back(g.block(i, i).re);
            g.labels.push_back(pe.index.eigenvalue);
            if (pe.index.is_spherical) g.spherical = i;
            if (abs(g.block(i, i)) < tol) g.zero_indices.push_back(i);
            for (size_t j = 0; j < d; ++j)
                if (i != j) g.offdiag_max = max(g.offdiag_max, abs(g.block(i, j)));
        }
        bool first = true;
        for (size_t i = 0; i < d; ++i) {
            if (i == g.spherical) continue;
            if (first || g.diagonal[i] < g.min_nonspherical) g.min_nonspherical = g.diagonal[i];
            first = false;
        }
        if (n >= 2 && g.min_nonspherical < prev) t.nondecreasing = false;
        if (n >= 1) prev = g.min_nonspherical;
        t.degrees.push_back(std::move(g));
    }
    return t;
}

GaussianReport gaussian_rank(const GnsSpace& space, OqAlgebra& alg) {
    GaussianReport rep;
    rep.N = space.N;
    const Real& tol = alg.prec().tol_rank;
    const size_t low = static_cast<size_t>(space.N * space.N);  // degrees <= N-1
    CMatrix S(space.rank, low);
    for (size_t j = 0; j < low; ++j)
        for (size_t k = 0; k < space.rank; ++k) S(k, j) = space.coords(k, j);
    Span span = column_span(S, tol);
    rep.dim_image = span.Q.cols();
    const CMatrix Qh = adjoint(span.Q);

    std::vector<CVec> kept;
    for (size_t i = 1; i < space.size(); ++i)
        for (size_t j = 1; j < space.size(); ++j) {
            if (space.degree[i] + space.degree[j] > space.N) continue;
            ++rep.generated;
            const AlgElement& b = space.basis[i].element;
            const AlgElement& c = space.basis[j].element;
            CVec v = cocycle_vector(alg.mul(b, c), space, alg) -
                     scaled(space.counits[i], space.coords.col(j)) - scaled(space.counits[j], space.coords.col(i));
            Real nv = norm(v);
            if (nv < tol) continue;
            CVec coeff = Qh * v;
            Real discard = norm(v - span.Q * coeff) / nv;
            if (discard > Real("0.5")) {
                ++rep.excluded;
                continue;
            }
            rep.max_discard = max(rep.max_discard, discard);
            kept.push_back(std::move(coeff));
        }
    if (!kept.empty() && rep.dim_image > 0) {
        CMatrix K(rep.dim_image, kept.size());
        for (size_t c = 0; c < kept.size(); ++c) K.set_col(c, kept[c]);
        std::vector<Real> sv = singular_values(K);
        const Real top = sv.front();
        for (const Real& s : sv) {
            Real rel = s / top;
            if (rel > tol) {
                ++rep.rank_ng;
                rep.smallest_kept = rel;
            } else {
                rep.largest_dropped = max(rep.largest_dropped, rel);
            }
        }
        rep.rank_gap = rep.smallest_kept;
    }
    rep.dim_gaussian = static_cast<long>(rep.dim_image) - static_cast<long>(rep.rank_ng);
    return rep;
}

}  // namespace qsl
