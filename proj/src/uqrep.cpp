#include "qsl/uqrep.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsl {

Real label(int tw, size_t k) { return Real(twice_label(tw, k)) / Real(2); }

namespace {

Real half_spin(int tw) { return Real(tw) / Real(2); }

Real max_of(std::initializer_list<Real> xs) {
    Real m;
    for (const auto& x : xs) m = max(m, x);
    return m;
}

CMatrix commutator(const CMatrix& x, const CMatrix& y) { return x * y - y * x; }

CMatrix scaled(const Complex& s, const CMatrix& m) { return s * m; }

// Phase rule for spherical vectors: the top component xi_s real positive when
// it is nonzero, else the first nonzero component.
CVec spherical_phase(const CVec& v, const Real& tiny) {
    const Complex& top = v.back();
    Real m = abs(top);
    if (m > tiny) return scaled(conj(top) / m, v);
    return fix_phase(v, tiny);
}

}  // namespace

CMatrix identification(int tw) {
    size_t d = spin_dim(tw);
    CMatrix p(d, d);
    for (size_t k = 0; k < d; ++k) p(k, d - 1 - k) = Complex(1);
    return p;
}

SpinRep make_rep(int tw, const QContext& ctx) {
    if (tw < 0) throw std::invalid_argument("negative spin");
    const size_t d = spin_dim(tw);
    const Real s = half_spin(tw);
    const Real& q = ctx.q;
    SpinRep r;
    r.tw = tw;
    r.k = CMatrix(d, d);
    r.kinv = CMatrix(d, d);
    r.khalf = CMatrix(d, d);
    r.khalf_inv = CMatrix(d, d);
    r.e = CMatrix(d, d);
    r.f = CMatrix(d, d);
    r.tA = CMatrix(d, d);
    r.tB = CMatrix(d, d);
    r.tC = CMatrix(d, d);
    r.tD = CMatrix(d, d);
    for (size_t k = 0; k < d; ++k) {
        Real i = label(tw, k);
        r.k(k, k) = Complex(pow(q, Real(2) * i));
        r.kinv(k, k) = Complex(pow(q, -Real(2) * i));
        r.khalf(k, k) = Complex(pow(q, i));
        r.khalf_inv(k, k) = Complex(pow(q, -i));
        if (k + 1 < d) r.e(k + 1, k) = Complex(pow(q, i + Real(1)) * sqrt(qint(s - i, ctx) * qint(s + i + Real(1), ctx)));
        if (k > 0) r.f(k - 1, k) = Complex(pow(q, -i) * sqrt(qint(s + i, ctx) * qint(s - i + Real(1), ctx)));
        r.tA(k, k) = Complex(pow(q, -i));
        r.tD(k, k) = Complex(pow(q, i));
        if (k > 0) r.tB(k - 1, k) = Complex(sqrt(qint(s - i + Real(1), ctx) * qint(s + i, ctx)));
        if (k + 1 < d) r.tC(k + 1, k) = Complex(sqrt(qint(s - i, ctx) * qint(s + i + Real(1), ctx)));
    }
    const CMatrix p = identification(tw);
    r.A = p * r.tA * p;
    r.B = p * r.tB * p;
    r.C = p * r.tC * p;
    r.D = p * r.tD * p;
    return r;
}

OpMatrices make_ops(const SpinRep& rep, const QContext& ctx) {
    const size_t d = spin_dim(rep.tw);
    const CMatrix id = CMatrix::identity(d);
    const Real& q = ctx.q;
    const Complex ic(Real(0), ctx.bracket_a);  // i t/(q - q^-1)
    const Real qmh = pow(q, Real(-0.5)), qph = pow(q, Real(0.5));
    OpMatrices o;
    o.E = rep.e - rep.f * rep.k;
    o.Bt = scaled(Complex(qmh), o.E) - scaled(ic, id);
    o.Btilde = scaled(Complex(qmh), o.E) - scaled(ic, rep.k) + scaled(ic, id);
    const Complex iq(Real(0), qph), iqm(Real(0), qmh);
    o.X = scaled(iq, rep.B) - scaled(iqm, rep.C) + scaled(Complex(ctx.bracket_a), rep.A - rep.D);
    o.tX = scaled(iq, rep.tB) - scaled(iqm, rep.tC) + scaled(Complex(ctx.bracket_a), rep.tA - rep.tD);
    o.W = scaled(I(), o.Bt);
    o.eps_Bt = Complex(Real(0), -ctx.bracket_a);
    return o;
}

Real RelationReport::worst() const { return max_of({uq_max, koorn_max, star_max, bridge_max}); }

RelationReport check_relations(const SpinRep& r, const QContext& ctx) {
    const size_t d = spin_dim(r.tw);
    const CMatrix id = CMatrix::identity(d);
    const Real& q = ctx.q;
    const Complex q2(q * q), qm2(Real(1) / (q * q));
    const Complex inv_qd(Real(1) / ctx.q_minus_qinv());
    RelationReport out;
    out.uq_max = max_of({
        max_abs(r.k * r.kinv - id),
        max_abs(r.kinv * r.k - id),
        max_abs(r.k * r.e - q2 * (r.e * r.k)),
        max_abs(r.k * r.f - qm2 * (r.f * r.k)),
        max_abs(commutator(r.e, r.f) - inv_qd * (r.k - r.kinv)),
    });
    out.koorn_max = max_of({
        max_abs(r.tA * r.tD - id),
        max_abs(r.tD * r.tA - id),
        max_abs(r.tA * r.tB - Complex(q) * (r.tB * r.tA)),
        max_abs(r.tA * r.tC - Complex(Real(1) / q) * (r.tC * r.tA)),
        max_abs(commutator(r.tB, r.tC) - inv_qd * (r.tA * r.tA - r.tD * r.tD)),
    });
    out.star_max = max_of({
        max_abs(adjoint(r.e) - r.f * r.k),
        max_abs(adjoint(r.tB) - r.tC),
        max_abs(adjoint(r.k) - r.k),
    });
    out.bridge_max = max_of({
        max_abs(r.A - r.khalf),
        max_abs(r.B - r.khalf_inv * r.e),
        max_abs(r.C - r.f * r.khalf),
        max_abs(r.D - r.khalf_inv),
    });
    return out;
}

CVec kernel_coeffs(int n, const QContext& ctx, const PrecisionContext& prec) {
    if (n < 0) throw std::domain_error("kernel coefficients need a nonnegative integer spin");
    const Real& q = ctx.q;
    const Real q2 = q * q;
    CVec c;
    for (long i = -n; i <= n; ++i) {
        Complex pre = ipow(i) * Complex(pow(q, -(Real(n) - ctx.a) * Real(i)) * pow(q, Real(i * i) / Real(2)));
        Real den = sqrt((q_pochhammer(Complex(q2), q2, n + i) * q_pochhammer(Complex(q2), q2, n - i)).re);
        CVec num{Complex(pow(q, -2 * n + 2 * i)), Complex(pow(q, -2 * n)),
                 Complex(-pow(q, Real(-2 * n) + Real(2) * ctx.a))};
        CVec dn{Complex(pow(q, -4 * n)), Complex(0)};
        Complex phi = basic_hypergeometric(num, dn, q2, Complex(q2), prec);
        c.push_back(pre / den * phi);
    }
    return c;
}

CVec kernel_vector_e(int n, const QContext& ctx, const PrecisionContext& prec) {
    CVec c = kernel_coeffs(n, ctx, prec);
    for (long i = -n; i <= n; ++i) c[static_cast<size_t>(i + n)] *= pow(ctx.q, -Real(i) / Real(2));
    return c;
}

const char* to_string(Convention c) { return c == Convention::left ? "left" : "right"; }

Convention parse_convention(const std::string& s) {
    if (s == "left") return Convention::left;
    if (s == "right") return Convention::right;
    throw std::invalid_argument("convention must be left or right");
}

WeightBasis weight_eigenbasis(int n, const QContext& ctx, const PrecisionContext& prec) {
    if (n < 0) throw std::domain_error("weight basis needs a nonnegative integer spin");
    const OpMatrices o = make_ops(make_rep(2 * n, ctx), ctx);
    auto ev = eigh(o.W);
    WeightBasis wb;
    wb.eigenvalues = ev.values;
    wb.vectors = ev.vectors;
    for (size_t k = 1; k < ev.values.size(); ++k)
        if (ev.values[k] - ev.values[k - 1] < prec.tol_rank)
            throw std::runtime_error("degenerate weight eigenvalues: raise precision_bits");
    size_t best = 0;
    for (size_t k = 1; k < ev.values.size(); ++k)
        if (abs(ev.values[k] - ctx.bracket_a) < abs(ev.values[best] - ctx.bracket_a)) best = k;
    if (!(abs(ev.values[best] - ctx.bracket_a) < prec.tol_rank))
        throw std::runtime_error("no W eigenvalue at [a]: convention bug");
    wb.spherical = best;
    return wb;
}

CVec spherical_vector(int n, Convention conv, const QContext& ctx, const PrecisionContext& prec) {
    if (n < 0) throw std::domain_error("spherical vectors need a nonnegative integer spin");
    const Real tiny = prec.tol_rank;
    if (conv == Convention::left) {
        CVec c = kernel_coeffs(n, ctx, prec);
        for (long j = -n; j <= n; ++j) c[static_cast<size_t>(j + n)] *= pow(ctx.q, Real(j) / Real(2));
        return spherical_phase(normalized(c), tiny);
    }
    WeightBasis wb = weight_eigenbasis(n, ctx, prec);
    return spherical_phase(normalized(wb.vectors.col(wb.spherical)), tiny);
}

CVec closed_form_spherical_n1(const QContext& ctx) {
    const Real& q = ctx.q;
    CVec v{Complex(pow(q, Real(-1) / Real(2))),
           Complex(Real(0), -ctx.t / sqrt(ctx.q_plus_qinv())),
           Complex(sqrt(q))};
    return normalized(v);
}

Real phase_aligned_deviation(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("length mismatch");
    Complex w = inner(v, u);
    Real m = abs(w);
    w = m.is_zero() ? Complex(1) : w / m;
    Real dev;
    for (size_t i = 0; i < u.size(); ++i) dev = max(dev, abs(u[i] - w * v[i]));
    return dev;
}

WeightBasis left_first_slot_basis(int n, const QContext& ctx, const PrecisionContext& prec) {
    if (n < 0) throw std::domain_error("first-slot basis needs a nonnegative integer spin");
    const SpinRep rep = make_rep(2 * n, ctx);
    const OpMatrices o = make_ops(rep, ctx);
    const size_t d = spin_dim(2 * n);
    CMatrix Y = Complex(ctx.bracket_a) * CMatrix::identity(d) - rep.A * adjoint(o.X);
    auto ev = eigh(Y);
    WeightBasis wb;
    wb.eigenvalues = ev.values;
    size_t best = 0;
    for (size_t k = 1; k < d; ++k)
        if (abs(ev.values[k] - ctx.bracket_a) < abs(ev.values[best] - ctx.bracket_a)) best = k;
    if (!(abs(ev.values[best] - ctx.bracket_a) < prec.tol_rank))
        throw std::runtime_error("no first-slot eigenvalue at [a]: convention bug");
    wb.spherical = best;
    wb.vectors = rep.khalf_inv * ev.vectors;
    const CVec eta = spherical_vector(n, Convention::left, ctx, prec);
    CVec vs = wb.vectors.col(best);
    wb.vectors.set_col(best, scaled(Complex(1) / inner(vs, eta), vs));
    return wb;
}

CGDecomposition cg_decompose(int tn, int tm, const QContext& ctx, const PrecisionContext& prec) {
    const SpinRep rn = make_rep(tn, ctx), rm = make_rep(tm, ctx);
    const size_t dn = spin_dim(tn), dm = spin_dim(tm), D = dn * dm;
    const CMatrix In = CMatrix::identity(dn), Im = CMatrix::identity(dm);
    const CMatrix De = kron(rn.e, Im) + kron(rn.k, rm.e);
    const CMatrix Df = kron(In, rm.f) + kron(rn.f, rm.kinv);
    CGDecomposition out;
    out.tn = tn;
    out.tm = tm;
    for (int tk = std::abs(tn - tm); tk <= tn + tm; tk += 2) {
        std::vector<size_t> idx;
        for (size_t a = 0; a < dn; ++a)
            for (size_t b = 0; b < dm; ++b)
                if (twice_label(tn, a) + twice_label(tm, b) == tk) idx.push_back(a * dm + b);
        CMatrix sub(D, idx.size());
        for (size_t c = 0; c < idx.size(); ++c)
            for (size_t r = 0; r < D; ++r) sub(r, c) = De(r, idx[c]);
        CMatrix ns = nullspace(sub, prec.tol_rank);
        if (ns.cols() != 1) throw std::runtime_error("highest-weight space is not one-dimensional");
        CVec hw(D);
        for (size_t c = 0; c < idx.size(); ++c) hw[idx[c]] = ns(c, 0);
        hw = fix_phase(normalized(hw), prec.tol_rank);
        const size_t dk = spin_dim(tk);
        const Real sk = half_spin(tk);
        CMatrix W(D, dk);
        W.set_col(dk - 1, hw);
        CVec cur = hw;
        for (size_t col = dk - 1; col > 0; --col) {
            Real i = label(tk, col);
            Real c = pow(ctx.q, -i) * sqrt(qint(sk + i, ctx) * qint(sk - i + Real(1), ctx));
            cur = scaled(Complex(Real(1) / c), Df * cur);
            W.set_col(col - 1, cur);
        }
        out.W.emplace(tk, std::move(W));
    }
    return out;
}

CGReport check_cg(const CGDecomposition& cg, const QContext& ctx) {
    const SpinRep rn = make_rep(cg.tn, ctx), rm = make_rep(cg.tm, ctx);
    const size_t dn = spin_dim(cg.tn), dm = spin_dim(cg.tm), D = dn * dm;
    const CMatrix In = CMatrix::identity(dn), Im = CMatrix::identity(dm);
    const CMatrix Dk = kron(rn.k, rm.k);
    const CMatrix De = kron(rn.e, Im) + kron(rn.k, rm.e);
    const CMatrix Df = kron(In, rm.f) + kron(rn.f, rm.kinv);
    CGReport rep;
    CMatrix sum(D, D);
    for (const auto& [tk, W] : cg.W) {
        const SpinRep rk = make_rep(tk, ctx);
        rep.isometry_max = max(rep.isometry_max, max_abs(adjoint(W) * W - CMatrix::identity(spin_dim(tk))));
        sum += W * adjoint(W);
        rep.intertwining_max = max_of({rep.intertwining_max, max_abs(Dk * W - W * rk.k), max_abs(De * W - W * rk.e),
                                       max_abs(Df * W - W * rk.f)});
    }
    rep.completeness_max = max_abs(sum - CMatrix::identity(D));
    return rep;
}

StarIntertwiner star_intertwiner(int tw, const QContext& ctx, const PrecisionContext& prec) {
    const SpinRep r = make_rep(tw, ctx);
    const size_t d = spin_dim(tw);
    // S(k)^T G = G k forces G onto the antidiagonal; solve the e and f
    // equations for the antidiagonal entries g_j = G(j, d-1-j).
    const CMatrix Se = Complex(-1) * (r.kinv * r.e);
    const CMatrix Sf = Complex(-1) * (r.f * r.k);
    const std::pair<const CMatrix*, const CMatrix*> eqs[] = {{&Se, &r.e}, {&Sf, &r.f}};
    CMatrix M(2 * d * d, d);
    size_t row = 0;
    for (const auto& [S, H] : eqs) {
        const CMatrix St = transpose(*S);
        for (size_t i = 0; i < d; ++i)
            for (size_t c = 0; c < d; ++c, ++row) {
                M(row, d - 1 - c) += St(i, d - 1 - c);
                M(row, i) -= (*H)(d - 1 - i, c);
            }
    }
    CMatrix ns = nullspace(M, prec.tol_rank);
    StarIntertwiner out;
    out.solution_rank = ns.cols();
    if (ns.cols() != 1) throw std::runtime_error("star intertwiner is not unique up to scalar");
    CVec g = ns.col(0);
    size_t big = 0;
    for (size_t j = 1; j < d; ++j)
        if (abs(g[j]) > abs(g[big])) big = j;
    const Complex scale = Complex(1) / g[big];
    out.G = CMatrix(d, d);
    for (size_t j = 0; j < d; ++j) out.G(j, d - 1 - j) = g[j] * scale;
    out.G(big, d - 1 - big) = Complex(1);
    out.Ginv = inverse(out.G);
    const CMatrix Sk = r.kinv;
    out.residual = max_of({max_abs(transpose(Sk) * out.G - out.G * r.k), max_abs(transpose(Se) * out.G - out.G * r.e),
                           max_abs(transpose(Sf) * out.G - out.G * r.f)});
    return out;
}

CMatrix antipode_matrix(const CMatrix& h, const StarIntertwiner& g) {
    return transpose(g.Ginv) * transpose(h) * transpose(g.G);
}

namespace {

Real sorted_deviation(CVec a, std::vector<Real> b) {
    std::sort(b.begin(), b.end(), [](const Real& x, const Real& y) { return x < y; });
    std::stable_sort(a.begin(), a.end(), [](const Complex& x, const Complex& y) { return x.re < y.re; });
    Real dev;
    for (size_t k = 0; k < std::min(a.size(), b.size()); ++k) dev = max(dev, abs(a[k] - Complex(b[k])));
    return dev;
}

}  // namespace

RReport validate_R_candidate(int tw, const QContext& ctx, const PrecisionContext& prec) {
    const SpinRep r = make_rep(tw, ctx);
    const OpMatrices o = make_ops(r, ctx);
    const StarIntertwiner g = star_intertwiner(tw, ctx, prec);
    const size_t d = spin_dim(tw);
    RReport rep;
    rep.tw = tw;
    for (size_t k = 0; k < d; ++k) rep.target.push_back(qint(ctx.a + Real(twice_label(tw, k)), ctx));
    const CMatrix kx = r.khalf_inv * o.X;

    struct Variant {
        const char* name;
        bool inverse_antipode;
        bool plus_half;
    };
    const Variant variants[] = {{"Ad(k^1/2) S", false, true},
                                {"Ad(k^-1/2) S", false, false},
                                {"Ad(k^1/2) S^-1", true, true},
                                {"Ad(k^-1/2) S^-1", true, false}};
    for (const auto& v : variants) {
        auto R = [&](const CMatrix& h) {
            // S^-2 = Ad(k), so S^-1(h) = S(k h k^-1).
            CMatrix s = v.inverse_antipode ? antipode_matrix(r.k * h * r.kinv, g) : antipode_matrix(h, g);
            return v.plus_half ? r.khalf * s * r.khalf_inv : r.khalf_inv * s * r.khalf;
        };
        RCandidate c;
        c.name = v.name;
        CMatrix iRt = I() * R(o.Btilde);
        c.residual_plus = max_abs(iRt - kx);
        c.residual_minus = max_abs(iRt + kx);
        c.spectrum = eigenvalues_general(I() * R(o.Bt));
        c.spectrum_deviation = sorted_deviation(c.spectrum, rep.target);
        rep.candidates.push_back(std::move(c));
    }
    CMatrix M = Complex(ctx.bracket_a) * CMatrix::identity(d) - kx;
    rep.kx_hermitian_residual = max_abs(M - adjoint(M));
    rep.kx_spectrum = eigh(M).values;
    CVec ks;
    for (const auto& x : rep.kx_spectrum) ks.push_back(Complex(x));
    rep.kx_spectrum_deviation = sorted_deviation(ks, rep.target);
    CMatrix Y = Complex(ctx.bracket_a) * CMatrix::identity(d) - r.A * adjoint(o.X);
    rep.first_slot_spectrum = eigh(Y).values;
    return rep;
}

const SpinRep& RepCache::rep(int tw) {
    std::lock_guard lock(mu_);
    auto& slot = reps_[tw];
    if (!slot) slot = std::make_unique<SpinRep>(make_rep(tw, ctx_));
    return *slot;
}

const OpMatrices& RepCache::ops(int tw) {
    std::lock_guard lock(mu_);
    auto& slot = ops_[tw];
    if (!slot) slot = std::make_unique<OpMatrices>(make_ops(rep(tw), ctx_));
    return *slot;
}

const CGDecomposition& RepCache::cg(int tn, int tm) {
    std::lock_guard lock(mu_);
    auto& slot = cgs_[{tn, tm}];
    if (!slot) slot = std::make_unique<CGDecomposition>(cg_decompose(tn, tm, ctx_, prec_));
    return *slot;
}

const StarIntertwiner& RepCache::star(int tw) {
    std::lock_guard lock(mu_);
    auto& slot = stars_[tw];
    if (!slot) slot = std::make_unique<StarIntertwiner>(star_intertwiner(tw, ctx_, prec_));
    return *slot;
}

const CVec& RepCache::spherical(int n, Convention conv) {
    std::lock_guard lock(mu_);
    auto& slot = sph_[{n, static_cast<int>(conv)}];
    if (!slot) slot = std::make_unique<CVec>(spherical_vector(n, conv, ctx_, prec_));
    return *slot;
}

const WeightBasis& RepCache::slot_basis(int n, Convention conv) {
    std::lock_guard lock(mu_);
    auto& slot = bases_[{n, static_cast<int>(conv)}];
    if (!slot)
        slot = std::make_unique<WeightBasis>(conv == Convention::left ? left_first_slot_basis(n, ctx_, prec_)
                                                                       : weight_eigenbasis(n, ctx_, prec_));
    return *slot;
}

RepCache& shared_cache(const QContext& ctx, const PrecisionContext& prec) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<RepCache>> caches;
    std::string key = ctx.q.str() + "|" + ctx.a.str() + "|" + std::to_string(prec.bits);
    std::lock_guard lock(mu);
    auto& slot = caches[key];
    if (!slot) slot = std::make_unique<RepCache>(ctx, prec);
    return *slot;
}

}  // namespace qsl
