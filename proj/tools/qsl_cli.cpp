#include "qsl/gnslab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifndef QSL_VERSION
#define QSL_VERSION "0.0.0"
#endif

using namespace qsl;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string q = "0.5";
    std::string a = "0.3";
    long precision = 256;
    int nmax = 8;
    int gram_n = 4;
    std::string convention = "left";
    long theta_grid = 64;
    long lambda_steps = 12;
    std::string format = "csv";
    std::string out = ".";
    int threads = 1;
    std::uint64_t seed = 1;
    std::string config;

    std::vector<std::pair<std::string, std::string>> echo() const {
        return {{"q", q},
                {"a", a},
                {"precision", std::to_string(precision)},
                {"nmax", std::to_string(nmax)},
                {"gram-n", std::to_string(gram_n)},
                {"convention", convention},
                {"theta-grid", std::to_string(theta_grid)},
                {"lambda-steps", std::to_string(lambda_steps)},
                {"format", format},
                {"threads", std::to_string(threads)},
                {"seed", std::to_string(seed)}};
    }
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

struct Check {
    std::string name;
    Real value;
    Real threshold;
    bool pass = false;
    std::string kind;  // "max" (value < threshold), "min" (value >= threshold) or "eq"
};

std::string s(const Real& x) { return x.str(); }
std::string s(long x) { return std::to_string(x); }
std::string s(size_t x) { return std::to_string(x); }
std::string s(int x) { return std::to_string(x); }

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {
        fs::create_directories(cfg_.out);
    }

    void write(const Table& t) const {
        const bool json = cfg_.format == "json";
        fs::path p = fs::path(cfg_.out) / (command_ + "_" + t.name + (json ? ".json" : ".csv"));
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        if (json) {
            nlohmann::ordered_json j;
            j["schema"] = t.name + "/1";
            j["tool"] = std::string("qsl ") + QSL_VERSION;
            nlohmann::ordered_json c;
            for (const auto& [k, v] : cfg_.echo()) c[k] = v;
            j["config"] = c;
            j["columns"] = t.columns;
            j["rows"] = t.rows;
            f << j.dump(1) << "\n";
        } else {
            f << "#schema=" << t.name << "/1\n";
            f << "#tool=qsl " << QSL_VERSION << "\n";
            f << "#config=";
            bool first = true;
            for (const auto& [k, v] : cfg_.echo()) {
                f << (first ? "" : ";") << k << "=" << v;
                first = false;
            }
            f << "\n";
            write_row(f, t.columns);
            for (const auto& r : t.rows) write_row(f, r);
        }
    }

    void check_max(const std::string& name, const Real& value, const Real& threshold) {
        checks_.push_back({name, value, threshold, value < threshold, "max"});
    }
    void check_min(const std::string& name, const Real& value, const Real& threshold) {
        checks_.push_back({name, value, threshold, value >= threshold, "min"});
    }
    void check_eq(const std::string& name, long value, long expected) {
        checks_.push_back({name, Real(value), Real(expected), value == expected, "eq"});
    }
    void fail(const std::string& name, const std::string& why) {
        notes_.push_back(name + ": " + why);
        checks_.push_back({name, Real(1), Real(0), false, "error"});
    }

    // Writes the check table, prints the summary and returns the exit code.
    int finish() const {
        Table t{"checks", {"name", "kind", "value", "threshold", "pass"}, {}};
        size_t failed = 0;
        for (const auto& c : checks_) {
            t.add({c.name, c.kind, s(c.value), s(c.threshold), c.pass ? "1" : "0"});
            if (!c.pass) ++failed;
        }
        write(t);
        for (const auto& c : checks_)
            if (!c.pass) std::cout << "FAIL " << c.name << " value=" << c.value.str(8) << " threshold=" << c.threshold.str(8) << "\n";
        for (const auto& n : notes_) std::cout << "NOTE " << n << "\n";
        std::cout << "summary command=" << command_ << " checks=" << checks_.size() << " failed=" << failed << "\n";
        return failed ? 1 : 0;
    }

private:
    static void write_row(std::ofstream& f, const std::vector<std::string>& r) {
        for (size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
        f << "\n";
    }

    const RunConfig& cfg_;
    std::string command_;
    std::vector<Check> checks_;
    std::vector<std::string> notes_;
};

struct Session {
    PrecisionContext prec;
    QContext ctx;
    Convention conv;
    std::unique_ptr<RepCache> cache;
    std::unique_ptr<OqAlgebra> alg;

    explicit Session(const RunConfig& cfg)
        : prec(PrecisionContext::make(cfg.precision)),
          ctx(QContext::make(Real(cfg.q), Real(cfg.a))),
          conv(parse_convention(cfg.convention)),
          cache(std::make_unique<RepCache>(ctx, prec)),
          alg(std::make_unique<OqAlgebra>(*cache)) {}
};

int cmd_spherical(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "spherical");
    Table vec{"vectors", {"n", "convention", "index", "twice_label", "re", "im"}, {}};
    Table ker{"kernel_coefficients", {"n", "i", "re", "im"}, {}};
    Table res{"kernel_residuals", {"n", "x_residual_e", "x_residual_xi", "symmetry"}, {}};
    Real worst_x, worst_sym;
    for (int n = 0; n <= cfg.nmax; ++n) {
        for (Convention c : {Convention::left, Convention::right}) {
            CVec v = S.cache->spherical(n, c);
            for (size_t k = 0; k < v.size(); ++k)
                vec.add({s(n), to_string(c), s(k), s(twice_label(2 * n, k)), s(v[k].re), s(v[k].im)});
        }
        CVec c = kernel_coeffs(n, S.ctx, S.prec);
        for (long i = -n; i <= n; ++i) ker.add({s(n), s(i), s(c[size_t(i + n)].re), s(c[size_t(i + n)].im)});
        CVec ve = kernel_vector_e(n, S.ctx, S.prec);
        const OpMatrices& o = S.cache->ops(2 * n);
        Real xe = norm(o.tX * ve) / norm(ve);
        Real xx = norm(o.X * S.cache->spherical(n, Convention::left));
        Real sym;
        for (long i = 0; i <= n; ++i) sym = max(sym, abs(c[size_t(n + i)] - c[size_t(n - i)]));
        res.add({s(n), s(xe), s(xx), s(sym)});
        worst_x = max(worst_x, max(xe, xx));
        worst_sym = max(worst_sym, sym);
    }
    em.write(vec);
    em.write(ker);
    em.write(res);
    em.check_max("kernel_residual", worst_x, S.prec.tol_residual);
    em.check_max("kernel_symmetry", worst_sym, S.prec.tol_residual);
    if (cfg.nmax >= 1) {
        Real dev = phase_aligned_deviation(S.cache->spherical(1, Convention::left), closed_form_spherical_n1(S.ctx));
        em.check_max("closed_form_n1_match", dev, pow2(-100));
    }
    return em.finish();
}

int cmd_awcheck(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "awcheck");
    Table grid{"grid", {"n", "k", "theta", "fourier", "standard", "displayed"}, {}};
    Table sum{"summary",
              {"n", "standard_residual", "standard_constant_fit", "standard_shape_residual", "displayed_residual",
               "displayed_constant_fit", "displayed_shape_residual", "nominal_constant"},
              {}};
    const std::vector<Real> thetas = theta_grid(cfg.theta_grid);
    Real worst;
    for (long n = 0; n <= cfg.nmax; ++n) {
        QPolyResult r = q_poly(n, S.ctx, S.prec, cfg.theta_grid);
        Real c = aw_constant(n, S.ctx, S.prec);
        for (size_t k = 0; k < thetas.size(); ++k) {
            Real x = cos(thetas[k]);
            grid.add({s(n), s(k), s(thetas[k]), s(r.Q.eval_real(x)),
                      s(c * askey_wilson(n, x, S.ctx, AwForm::standard).re),
                      s(c * askey_wilson(n, x, S.ctx, AwForm::displayed).re)});
        }
        sum.add({s(n), s(r.standard.residual), s(r.standard.constant.re), s(r.standard.shape_residual),
                 s(r.displayed.residual), s(r.displayed.constant.re), s(r.displayed.shape_residual), s(c)});
        worst = max(worst, r.standard.residual);
        if (r.standard.residual >= S.prec.tol_rank && r.standard.shape_residual < S.prec.tol_rank)
            em.fail("normalization_n" + std::to_string(n), "routes proportional, constant fit " + r.standard.constant.re.str(20));
    }
    em.write(grid);
    em.write(sum);
    em.check_max("two_route_residual", worst, S.prec.tol_rank);
    return em.finish();
}

GenFunctional functional_for(const Session& S, const RunConfig& cfg, int n_max) {
    return build_functional(S.ctx, S.prec, n_max, LimitMode::derivative, cfg.lambda_steps);
}

int cmd_genfun(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "genfun");
    GenFunctional F;
    try {
        F = functional_for(S, cfg, cfg.nmax);
    } catch (const std::exception& e) {
        em.fail("build_functional", e.what());
        return em.finish();
    }
    Table t{"functional",
            {"n", "raw_limit_derivative", "raw_limit_paper_constant", "finite_difference_oracle", "lambda",
             "lambda_paper_constant", "p_at_1"},
            {}};
    Table coef{"p_coefficients", {"n", "power", "coefficient"}, {}};
    Real p1, fdrel;
    for (long n = 0; n <= F.n_max(); ++n) {
        const size_t i = size_t(n);
        Real lp = n == 0 ? Real(0) : S.ctx.kappa * F.raw_paper_constant[i];
        Real at1 = F.P[i].eval_real(Real(1));
        t.add({s(n), s(F.raw_derivative[i]), s(F.raw_paper_constant[i]), s(F.raw_fd[i]), s(F.lambda[i]), s(lp), s(at1)});
        for (size_t k = 0; k < F.P[i].coeffs().size(); ++k) coef.add({s(n), s(k), s(F.P[i].coeffs()[k].re)});
        p1 = max(p1, abs(at1 - Real(1)));
        if (n >= 1) fdrel = max(fdrel, abs(F.raw_fd[i] - F.raw_derivative[i]) / abs(F.raw_derivative[i]));
    }
    em.write(t);
    em.write(coef);
    em.check_max("p_at_1", p1, S.prec.tol_residual);
    em.check_max("fd_relative_error", fdrel, pow2(-40));
    em.check_eq("lambda_0_is_zero", F.lambda[0].is_zero() ? 1 : 0, 1);
    return em.finish();
}

int cmd_gram(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "gram");
    GenFunctional F = functional_for(S, cfg, std::max(cfg.nmax, 2 * cfg.gram_n));
    Table spec{"spectra", {"N", "index", "eigenvalue"}, {}};
    Table sum{"summary", {"N", "size", "min_eigenvalue", "rank", "smallest_kept", "largest_dropped", "hermitian_residual"}, {}};
    for (int N = 1; N <= cfg.gram_n; ++N) {
        GnsSpace sp = gram(N, F, S.conv, *S.alg, cfg.threads);
        for (size_t k = 0; k < sp.spectrum.size(); ++k) spec.add({s(N), s(k), s(sp.spectrum[k])});
        sum.add({s(N), s(sp.size()), s(sp.min_eigenvalue), s(sp.rank), s(sp.smallest_kept), s(sp.largest_dropped),
                 s(sp.hermitian_residual)});
        em.check_min("psd_N" + std::to_string(N), sp.min_eigenvalue, -S.prec.tol_rank);
        em.check_max("hermitian_N" + std::to_string(N), sp.hermitian_residual, S.prec.tol_residual);
    }
    em.write(spec);
    em.write(sum);
    return em.finish();
}

int cmd_growth(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "growth");
    GenFunctional F = functional_for(S, cfg, std::max(cfg.nmax, 2 * cfg.gram_n));
    GnsSpace sp = gram(cfg.gram_n, F, S.conv, *S.alg, cfg.threads);
    GrowthTable gt = growth_table(sp);
    Table t{"table", {"n", "i", "eigenvalue_label", "g"}, {}};
    Table sum{"summary", {"n", "offdiag_max", "spherical_index", "zero_count", "zero_index", "min_nonspherical"}, {}};
    for (const auto& g : gt.degrees) {
        for (size_t i = 0; i < g.diagonal.size(); ++i) t.add({s(g.n), s(i), s(g.labels[i]), s(g.diagonal[i])});
        sum.add({s(g.n), s(g.offdiag_max), s(g.spherical), s(g.zero_indices.size()),
                 g.zero_indices.size() == 1 ? s(g.zero_indices[0]) : std::string("-"), s(g.min_nonspherical)});
        const std::string tag = "_n" + std::to_string(g.n);
        em.check_max("offdiag" + tag, g.offdiag_max, S.prec.tol_rank);
        em.check_eq("zero_count" + tag, long(g.zero_indices.size()), 1);
        if (g.zero_indices.size() == 1) em.check_eq("zero_at_spherical" + tag, long(g.zero_indices[0]), long(g.spherical));
    }
    sum.add({"trend", gt.nondecreasing ? "nondecreasing" : "not_monotone", "", "", "", ""});
    em.write(t);
    em.write(sum);
    return em.finish();
}

int cmd_gaussian(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "gaussian");
    GenFunctional F = functional_for(S, cfg, std::max(cfg.nmax, 2 * cfg.gram_n));
    Table t{"report",
            {"N", "dim_image", "rank_NG", "dim_gaussian_part", "max_discard_mass", "generated", "excluded", "rank_gap",
             "largest_dropped"},
            {}};
    for (int N = 2; N <= std::max(2, std::min(cfg.gram_n, 3)); ++N) {
        GnsSpace sp = gram(N, F, S.conv, *S.alg, cfg.threads);
        GaussianReport r = gaussian_rank(sp, *S.alg);
        t.add({s(N), s(r.dim_image), s(r.rank_ng), s(r.dim_gaussian), s(r.max_discard), s(r.generated),
               s(r.excluded), s(r.rank_gap), s(r.largest_dropped)});
        const std::string tag = "_N" + std::to_string(N);
        em.check_eq("dim_gaussian" + tag, r.dim_gaussian, 0);
        em.check_min("rank_gap" + tag, r.rank_gap, pow2(-40));
    }
    em.write(t);
    return em.finish();
}

int cmd_validate(const RunConfig& cfg) {
    Session S(cfg);
    Emitter em(cfg, "validate");
    const int twmax = 2 * std::min(cfg.nmax, 6);
    Table rel{"relations", {"twice_spin", "uq", "koornwinder", "star", "bridge", "x_rank_deficiency"}, {}};
    Real worst;
    for (int tw = 0; tw <= twmax; ++tw) {
        RelationReport r = check_relations(S.cache->rep(tw), S.ctx);
        size_t def = nullspace(S.cache->ops(tw).tX, S.prec.tol_rank).cols();
        rel.add({s(tw), s(r.uq_max), s(r.koorn_max), s(r.star_max), s(r.bridge_max), s(def)});
        worst = max(worst, r.worst());
        em.check_eq("x_rank_deficiency_tw" + std::to_string(tw), long(def), tw % 2 ? 0 : 1);
    }
    em.check_max("relations", worst, S.prec.tol_residual);

    Table cgt{"clebsch_gordan", {"tn", "tm", "isometry", "completeness", "intertwining"}, {}};
    Real cgw;
    for (int tn = 0; tn <= 4; ++tn)
        for (int tm = 0; tm <= 4; ++tm) {
            CGReport r = check_cg(S.cache->cg(tn, tm), S.ctx);
            cgt.add({s(tn), s(tm), s(r.isometry_max), s(r.completeness_max), s(r.intertwining_max)});
            cgw = max(cgw, max(r.isometry_max, max(r.completeness_max, r.intertwining_max)));
        }
    em.check_max("clebsch_gordan", cgw, S.prec.tol_residual);

    Table alg{"algebra", {"relation", "residual"}, {}};
    const Generators g = generators(S.ctx);
    const OqAlgebra& A = *S.alg;
    const AlgElement one = AlgElement::unit();
    const Complex q(S.ctx.q), q2(S.ctx.q * S.ctx.q);
    std::vector<std::pair<std::string, Real>> rels = {
        {"a*a+g*g=1", norm(A.mul(g.alpha_star, g.alpha) + A.mul(g.gamma_star, g.gamma) - one)},
        {"aa*+q2gg*=1", norm(A.mul(g.alpha, g.alpha_star) + A.mul(g.gamma, g.gamma_star).scaled(q2) - one)},
        {"gg*=g*g", norm(A.mul(g.gamma, g.gamma_star) - A.mul(g.gamma_star, g.gamma))},
        {"ag=qga", norm(A.mul(g.alpha, g.gamma) - A.mul(g.gamma, g.alpha).scaled(q))},
        {"ag*=qg*a", norm(A.mul(g.alpha, g.gamma_star) - A.mul(g.gamma_star, g.alpha).scaled(q))},
        {"star(a)=a*", norm(A.star(g.alpha) - g.alpha_star)},
        {"star(g)=g*", norm(A.star(g.gamma) - g.gamma_star)},
    };
    Real aw;
    for (const auto& [name, r] : rels) {
        alg.add({name, s(r)});
        aw = max(aw, r);
    }
    em.check_max("algebra_relations", aw, S.prec.tol_residual);

    Table rc{"r_candidates", {"twice_spin", "name", "residual_plus", "residual_minus", "spectrum_deviation"}, {}};
    Table kx{"kx_spectrum", {"twice_spin", "index", "eigenvalue", "target", "first_slot_eigenvalue"}, {}};
    for (int tw = 2; tw <= 4; tw += 2) {
        RReport r = validate_R_candidate(tw, S.ctx, S.prec);
        for (const auto& c : r.candidates)
            rc.add({s(tw), c.name, s(c.residual_plus), s(c.residual_minus), s(c.spectrum_deviation)});
        for (size_t k = 0; k < r.kx_spectrum.size(); ++k)
            kx.add({s(tw), s(k), s(r.kx_spectrum[k]), k < r.target.size() ? s(r.target[k]) : std::string("-"),
                    k < r.first_slot_spectrum.size() ? s(r.first_slot_spectrum[k]) : std::string("-")});
    }
    em.write(rel);
    em.write(cgt);
    em.write(alg);
    em.write(rc);
    em.write(kx);
    return em.finish();
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string x) {
            x.erase(0, x.find_first_not_of(" \t\r"));
            x.erase(x.find_last_not_of(" \t\r") + 1);
            return x;
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-deformed Podles sphere generating functional lab"};
    app.set_version_flag("--version", std::string("qsl ") + QSL_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::map<std::string, CLI::Option*> opts;
    opts["q"] = app.add_option("--q", cfg.q, "deformation parameter in (0,1)")->capture_default_str();
    opts["a"] = app.add_option("--a", cfg.a, "series parameter a")->capture_default_str();
    opts["precision"] = app.add_option("--precision", cfg.precision, "working precision in bits")->capture_default_str();
    opts["nmax"] = app.add_option("--nmax", cfg.nmax, "largest degree for per-degree tables")->capture_default_str();
    opts["gram-n"] = app.add_option("--gram-n", cfg.gram_n, "Gram truncation degree")->capture_default_str();
    opts["convention"] = app.add_option("--convention", cfg.convention, "coideal convention")
                             ->check(CLI::IsMember({"left", "right"}))
                             ->capture_default_str();
    opts["theta-grid"] = app.add_option("--theta-grid", cfg.theta_grid, "theta grid points")->capture_default_str();
    opts["lambda-steps"] = app.add_option("--lambda-steps", cfg.lambda_steps, "Richardson steps")->capture_default_str();
    opts["out"] = app.add_option("--out", cfg.out, "output directory")->capture_default_str();
    opts["format"] = app.add_option("--format", cfg.format, "output format")
                         ->check(CLI::IsMember({"csv", "json"}))
                         ->capture_default_str();
    opts["threads"] = app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    opts["seed"] = app.add_option("--seed", cfg.seed, "seed for sampled checks")->capture_default_str();
    app.add_option("--config", cfg.config, "key=value file; flags win");

    std::map<std::string, int (*)(const RunConfig&)> commands = {
        {"spherical", cmd_spherical}, {"awcheck", cmd_awcheck}, {"genfun", cmd_genfun}, {"gram", cmd_gram},
        {"growth", cmd_growth},       {"gaussian", cmd_gaussian}, {"validate", cmd_validate}};
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, fn] : commands) subs[name] = app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!cfg.config.empty()) {
            for (const auto& [k, v] : read_config(cfg.config)) {
                auto it = opts.find(k);
                if (it == opts.end()) throw std::runtime_error("unknown config key " + k);
                if (it->second->count() == 0) {
                    it->second->clear();
                    it->second->add_result(v);
                    it->second->run_callback();
                }
            }
        }
        Real q(cfg.q), a(cfg.a);
        if (!(q > Real(0) && q < Real(1))) throw std::invalid_argument("q must lie in (0,1)");
        if (a < Real(0) || a > Real("0.5")) std::cerr << "warning: a outside [0, 1/2]\n";
        if (cfg.precision < 128) {
            std::cerr << "advisory: rank decisions need at least 128 bits; raise precision_bits\n";
            return 3;
        }
        if (cfg.nmax < 0 || cfg.gram_n < 1 || cfg.theta_grid < 1 || cfg.lambda_steps < 2)
            throw std::invalid_argument("nmax >= 0, gram-n >= 1, theta-grid >= 1, lambda-steps >= 2 required");
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) return commands.at(name)(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
