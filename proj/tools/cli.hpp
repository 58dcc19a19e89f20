#pragma once

// Command-line front end: asymptotic evaluation, weak tail dependence,
// verification sweeps and oracle calls, all printing CSV.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "risk_spec.hpp"
#include "tailkit/tailkit.hpp"

namespace tailkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Args {
    std::string config;
    std::string tail1, tail2, tail;
    std::string grid;
    std::vector<double> xs;
    int m = 2;
    double rho = 0.0;
    double theta = 0.0;
    double p1 = 0.0, p2 = 0.0;
    double tau = 0.0;
    double tolerance = 1e-2;
    std::string variant = "theta";
    std::string oracle = "product";
    std::string kind = "product";
    long n = 0;
    std::uint64_t seed = 0;
};

inline unsigned sweep_threads() {
    if (const char* env = std::getenv("TAILKIT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ConfigError("TAILKIT_THREADS: expected a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

class Runner {
public:
    Runner(const Args& a, CLI::App& app, std::ostream& out, std::ostream& err)
        : a_(a), app_(app), out_(out), err_(err) {}

    void load() {
        if (a_.config.empty()) return;
        std::ifstream in(a_.config);
        if (!in) throw ConfigError("cannot read config file '" + a_.config + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        doc_ = parse_risk_spec(ss.str());
    }

    std::vector<double> grid() const {
        if (!a_.xs.empty() && !a_.grid.empty()) throw ConfigError("--x and --grid are mutually exclusive");
        if (!a_.xs.empty()) {
            for (double x : a_.xs) {
                if (!(x > 0.0)) throw ConfigError("--x: values must be positive");
            }
            return a_.xs;
        }
        if (a_.grid.empty()) throw ConfigError("an evaluation grid is required (--x or --grid)");
        const auto it = doc_.grids.find(a_.grid);
        if (it == doc_.grids.end()) throw ConfigError("unknown grid '" + a_.grid + "'");
        return it->second;
    }

    const TailEntry& entry(const std::string& name, const char* flag) const {
        if (name.empty()) throw ConfigError(std::string(flag) + " is required");
        return doc_.tail(name);
    }

    const WeibullTypeTail& first() const { return entry(a_.tail1, "--tail1").tail; }
    const WeibullTypeTail& second() const { return entry(a_.tail2, "--tail2").tail; }

    const OracleDistribution& law(const std::string& name, const char* flag) const {
        if (name.empty()) throw ConfigError(std::string(flag) + " is required");
        return doc_.law(name);
    }

    bool used(const char* flag) const { return app_.get_option(flag)->count() > 0; }

    DependenceSpec dependence() const {
        return used("--tau") ? DependenceSpec::fgm(a_.tau) : doc_.dependence;
    }

    void write_asym(const AsymptoticForm& form, const char* column) {
        const auto xs = grid();
        out_ << "x," << column << ",pre_asymptotic_flag\n";
        for (double x : xs) {
            const auto r = eval_log_survival(form, x);
            out_ << fmt(x) << ',' << fmt(r.log_prob) << ',' << (r.pre_asymptotic ? 1 : 0) << '\n';
        }
    }

    AsymptoticForm asym_form(const std::string& which) const {
        if (which == "product") {
            const auto& t1 = first();
            return product_tail_polynomial(t1, second());
        }
        if (which == "fgm") {
            const auto& t1 = first();
            return product_tail_dependent(t1, second(), dependence());
        }
        if (which == "mfold") return m_fold_product_tail(entry(a_.tail, "--tail").tail, a_.m);
        if (which == "pdf") {
            const auto& t1 = first();
            return product_pdf_asymptotic(t1, second());
        }
        if (which == "gaussian") return gaussian_product_tail(a_.rho);
        if (which == "bm-sup") return bm_sup_tail(entry(a_.tail, "--tail").tail);
        if (which == "elliptical") {
            if (!doc_.elliptical) throw ConfigError("elliptical: section missing from config");
            const auto& e = *doc_.elliptical;
            const auto& radial = doc_.tail(e.radial).tail;
            if (!e.scale) return elliptical_joint_tail(radial, e.rho);
            return scaled_elliptical_joint_tail({e.rho, radial, doc_.tail(*e.scale).tail, e.tau});
        }
        // eghd
        if (!doc_.gig) throw ConfigError("gig: section missing from config");
        return eghd_joint_tail(*doc_.gig, a_.rho);
    }

    void asym(const std::string& which) {
        write_asym(asym_form(which), which == "pdf" ? "log_density" : "log_survival");
    }

    void chi() {
        TailDependenceVariant v;
        if (a_.variant == "theta") {
            v = ThetaForm{a_.rho, a_.theta};
        } else if (a_.variant == "product") {
            v = ProductForm{a_.rho, a_.p1, a_.p2};
        } else if (a_.variant == "eghd") {
            v = EghdForm{a_.rho};
        } else {
            throw ConfigError("--variant: expected theta, product or eghd");
        }
        out_ << "variant,rho,chi\n" << a_.variant << ',' << fmt(a_.rho) << ',' << fmt(weak_tail_dependence(v)) << '\n';
    }

    std::pair<AsymptoticForm, LogOracle> oracle_pair(const std::string& kind) const {
        const auto opts = doc_.quadrature;
        if (kind == "product") {
            const auto& d1 = law(a_.tail1, "--tail1");
            const auto& d2 = law(a_.tail2, "--tail2");
            const auto dep = dependence();
            return {product_tail_dependent(d1.asymptotic_tail(), d2.asymptotic_tail(), dep),
                    [d1, d2, dep, opts](double x) { return survival_product_quadrature(d1, d2, dep, x, opts); }};
        }
        if (kind == "density") {
            const auto& d1 = law(a_.tail1, "--tail1");
            const auto& d2 = law(a_.tail2, "--tail2");
            return {product_pdf_asymptotic(d1.asymptotic_tail(), d2.asymptotic_tail()),
                    [d1, d2, opts](double x) { return density_product_quadrature(d1, d2, x, opts); }};
        }
        if (kind == "gaussian") {
            const double rho = a_.rho;
            return {gaussian_product_tail(rho), [rho, opts](double x) { return gaussian_product_quadrature(rho, x, opts); }};
        }
        if (kind == "bm-sup") {
            const auto& d = law(a_.tail, "--tail");
            return {bm_sup_tail(d.asymptotic_tail()), [d, opts](double x) { return bm_sup_quadrature(d, x, opts); }};
        }
        throw ConfigError("expected one of product, density, gaussian, bm-sup; got '" + kind + "'");
    }

    int sweep() {
        const auto xs = grid();
        const auto [form, oracle] = oracle_pair(a_.oracle);
        const auto rows = ratio_sweep(form, oracle, xs, sweep_threads());
        out_ << "x,log_exact,log_asym,ratio,abs_log_gap,pre_asymptotic_flag\n";
        int status = kExitOk;
        for (const auto& r : rows) {
            if (r.error) {
                err_ << "x=" << fmt(r.x) << ": " << *r.error << '\n';
                out_ << fmt(r.x) << ",,,,,\n";
                status = kExitNumerical;
                continue;
            }
            out_ << fmt(r.x) << ',' << fmt(r.log_exact) << ',' << fmt(r.log_asymptotic) << ',' << fmt(r.ratio) << ','
                 << fmt(r.abs_log_gap) << ',' << (r.pre_asymptotic ? 1 : 0) << '\n';
        }
        return status;
    }

    void laplace() {
        const auto& t1 = first();
        const auto& t2 = second();
        const auto report = laplace_consistency_check(t1, t2, grid(), doc_.quadrature);
        out_ << "x,log_quadrature,log_asym,abs_log_gap\n";
        for (const auto& r : report.rows) {
            out_ << fmt(r.x) << ',' << fmt(r.log_quadrature) << ',' << fmt(r.log_asymptotic) << ',' << fmt(r.gap)
                 << '\n';
        }
    }

    void depcond() {
        const auto& e1 = entry(a_.tail1, "--tail1");
        const auto& e2 = entry(a_.tail2, "--tail2");
        DependenceCheckOptions opts;
        if (e1.law) opts.cdf1 = [d = *e1.law](double u) { return d.cdf(u); };
        if (e2.law) opts.cdf2 = [d = *e2.law](double u) { return d.cdf(u); };
        const auto report = check_dependence_condition(dependence(), e1.tail, e2.tail, grid(), a_.tolerance, opts);
        out_ << "x,max_deviation\n";
        for (std::size_t i = 0; i < report.x_grid.size(); ++i) {
            out_ << fmt(report.x_grid[i]) << ',' << fmt(report.max_deviation[i]) << '\n';
        }
        out_ << "verdict," << (report.verdict ? "true" : "false") << '\n';
    }

    void quad() {
        const auto [form, oracle] = oracle_pair(a_.kind);
        (void)form;
        out_ << "x,log_prob\n";
        for (double x : grid()) out_ << fmt(x) << ',' << fmt(oracle(x)) << '\n';
    }

    void mc() {
        const auto& d1 = law(a_.tail1, "--tail1");
        const auto& d2 = law(a_.tail2, "--tail2");
        const long n = used("--n") ? a_.n : doc_.mc_samples;
        const std::uint64_t seed = used("--seed") ? a_.seed : doc_.mc_seed;
        if (n < kMinMcSamples) throw ConfigError("--n: must be at least 1000");
        const auto dep = dependence();
        out_ << "x,estimate,standard_error\n";
        for (double x : grid()) {
            const auto est = mc_product_tail(d1, d2, dep, x, n, seed);
            out_ << fmt(x) << ',' << fmt(est.estimate) << ',' << fmt(est.standard_error) << '\n';
        }
    }

private:
    const Args& a_;
    CLI::App& app_;
    std::ostream& out_;
    std::ostream& err_;
    RiskSpecDocument doc_;
};

}  // namespace detail

/// Runs one command line (without the program name). Returns the process exit code.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Args a;
    CLI::App app{"Weibull-type product tails: asymptotics, oracles and checks", "tailkit"};
    app.require_subcommand(1);

    const auto common = [&a](CLI::App* sub) {
        sub->add_option("--config", a.config, "risk-spec JSON file");
        sub->add_option("--x", a.xs, "evaluation points")->expected(1, -1);
        sub->add_option("--grid", a.grid, "named grid from the config");
    };
    const auto pair = [&a](CLI::App* sub) {
        sub->add_option("--tail1", a.tail1, "first tail name");
        sub->add_option("--tail2", a.tail2, "second tail name");
    };

    auto* asym = app.add_subcommand("asym", "evaluate a closed-form tail");
    asym->require_subcommand(1);
    for (const char* name : {"product", "mfold", "fgm", "gaussian", "pdf", "bm-sup", "elliptical", "eghd"}) {
        auto* sub = asym->add_subcommand(name);
        common(sub);
        const std::string n = name;
        if (n == "product" || n == "fgm" || n == "pdf") pair(sub);
        if (n == "mfold" || n == "bm-sup") sub->add_option("--tail", a.tail, "tail name");
        if (n == "mfold") sub->add_option("--m", a.m, "number of factors");
        if (n == "gaussian" || n == "eghd") sub->add_option("--rho", a.rho, "correlation");
        if (n == "fgm") sub->add_option("--tau", a.tau, "FGM parameter (overrides the config)");
    }

    auto* chi = app.add_subcommand("chi", "weak tail dependence coefficient");
    chi->add_option("--variant", a.variant, "theta, product or eghd");
    chi->add_option("--rho", a.rho, "correlation")->required();
    chi->add_option("--theta", a.theta, "theta for the theta variant");
    chi->add_option("--p1", a.p1, "first Weibull index");
    chi->add_option("--p2", a.p2, "second Weibull index");

    auto* verify = app.add_subcommand("verify", "compare closed forms with oracles");
    verify->require_subcommand(1);
    auto* sweep = verify->add_subcommand("sweep", "ratio sweep against quadrature");
    common(sweep);
    pair(sweep);
    sweep->add_option("--tail", a.tail, "horizon tail for bm-sup");
    sweep->add_option("--oracle", a.oracle, "product, density, gaussian or bm-sup");
    sweep->add_option("--rho", a.rho, "correlation for gaussian");
    sweep->add_option("--tau", a.tau, "FGM parameter (overrides the config)");
    auto* laplace = verify->add_subcommand("laplace", "Laplace consistency check");
    common(laplace);
    pair(laplace);
    auto* depcond = verify->add_subcommand("depcond", "dependence limit condition check");
    common(depcond);
    pair(depcond);
    depcond->add_option("--tau", a.tau, "FGM parameter (overrides the config)");
    depcond->add_option("--tolerance", a.tolerance, "tolerance on the last deviation");

    auto* oracle = app.add_subcommand("oracle", "numerical reference values");
    oracle->require_subcommand(1);
    auto* quad = oracle->add_subcommand("quad", "log probability by quadrature");
    common(quad);
    pair(quad);
    quad->add_option("--tail", a.tail, "horizon tail for bm-sup");
    quad->add_option("--kind", a.kind, "product, density, gaussian or bm-sup");
    quad->add_option("--rho", a.rho, "correlation for gaussian");
    quad->add_option("--tau", a.tau, "FGM parameter (overrides the config)");
    auto* mc = oracle->add_subcommand("mc", "Monte Carlo estimate of the product tail");
    common(mc);
    pair(mc);
    mc->add_option("--n", a.n, "sample size");
    mc->add_option("--seed", a.seed, "random seed");
    mc->add_option("--tau", a.tau, "FGM parameter (overrides the config)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    CLI::App* active = nullptr;
    for (auto* group : {asym, verify, oracle}) {
        if (group->parsed()) active = group->get_subcommands().front();
    }
    if (chi->parsed()) active = chi;

    try {
        detail::Runner run(a, *active, out, err);
        run.load();
        if (active == chi) {
            run.chi();
            return kExitOk;
        }
        if (asym->parsed()) {
            run.asym(active->get_name());
            return kExitOk;
        }
        if (active == sweep) return run.sweep();
        if (active == laplace) run.laplace();
        if (active == depcond) run.depcond();
        if (active == quad) run.quad();
        if (active == mc) run.mc();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const QuadratureFailure& e) {
        const auto& d = e.diagnostics();
        err << "quadrature failure: " << e.what() << " (panels=" << d.panels
            << ", estimated_rel_error=" << detail::fmt(d.estimated_rel_error) << ")\n";
        return kExitNumerical;
    } catch (const std::logic_error& e) {
        // domain errors, degenerate coefficients, missing evaluators
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace tailkit::cli
