// gmix command line harness.
//
//   gmix [--config f.json] [--seed N] [--out DIR] [--threads N] <command> ...
//
// Data goes to CSV, verdicts to JSON; both carry schema_version and every CSV
// row carries the hash of the effective config.
#include "gmix/harness.hpp"
#include "gmix/io.hpp"
#include "gmix/kernels.hpp"
#include "gmix/rates.hpp"
#include "gmix/sieve.hpp"
#include "gmix/validators.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using gmix::Json;
using gmix::fmt_double;

struct Globals {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out = ".";
    unsigned threads = 1;
    Json config = Json::object();
};

// value from the config section, else the fallback
template <class T>
T cfg(const Json& section, const char* key, T fallback) {
    if (section.is_object() && section.contains(key)) return section.at(key).get<T>();
    return fallback;
}

Json section(const Globals& g, const char* name) {
    return g.config.contains(name) ? g.config.at(name) : Json::object();
}

std::string hash_of(const Globals& g, const std::string& command, const Json& effective) {
    Json h;
    h["command"] = command;
    h["seed"] = g.seed;
    h["config"] = effective;
    return gmix::config_hash(h);
}

std::filesystem::path out_path(const Globals& g, const std::string& file) { return std::filesystem::path(g.out) / file; }

void emit(const Globals& g, const std::string& file, const std::string& text) {
    gmix::write_text(out_path(g, file), text);
    std::cerr << "wrote " << out_path(g, file).string() << '\n';
}

std::string num(double v) { return fmt_double(v); }

// ---- kernel build ----

int cmd_kernel(const Globals& g, std::optional<double> width, std::size_t stride) {
    const Json sec = section(g, "kernel");
    gmix::KernelConfig kc;
    kc.mollifier_width = width.value_or(cfg(sec, "mollifier_width", kc.mollifier_width));
    kc.sharpness = cfg(sec, "sharpness", kc.sharpness);
    kc.half_range = cfg(sec, "half_range", kc.half_range);
    kc.nodes = cfg(sec, "nodes", kc.nodes);
    kc.tol = cfg(sec, "tol", kc.tol);
    Json eff{{"mollifier_width", kc.mollifier_width}, {"sharpness", kc.sharpness}, {"half_range", kc.half_range},
             {"nodes", kc.nodes},                     {"tol", kc.tol},              {"stride", stride}};
    const std::string hash = hash_of(g, "kernel build", eff);

    const gmix::DualKernelTable k = gmix::build_kernel(kc);
    const gmix::CutoffCheck cc = gmix::check_cutoff(*k.cutoff);

    gmix::CsvWriter csv({"config_hash", "x", "chi", "eta"});
    for (std::size_t i = 0; i < k.x_grid.size(); i += std::max<std::size_t>(stride, 1))
        csv.row({hash, num(k.x_grid[i]), num(k.chi_values[i]), num(k.eta_values[i])});
    emit(g, "kernel.csv", csv.str());

    Json moments = Json::array();
    double worst = 0.0;
    for (int q = 1; q <= 4; ++q) {
        moments.push_back({{"q", q}, {"chi_moment", k.chi_moment(q)}});
        worst = std::max(worst, std::abs(k.chi_moment(q)));
    }
    const bool pass = cc.ok() && std::abs(k.chi_moment(0) - 1.0) <= 1e-8 && worst <= 1e-7;
    Json j = gmix::versioned({{"command", "kernel build"},
                              {"config_hash", hash},
                              {"config", eff},
                              {"pass", pass},
                              {"plateau_exact", cc.plateau_exact},
                              {"support_exact", cc.support_exact},
                              {"bounded", cc.bounded},
                              {"even", cc.even},
                              {"chi_mass", k.chi_moment(0)},
                              {"moments", moments},
                              {"quadrature_tol", k.quadrature_tol},
                              {"eta_norm_0", k.eta_norm(0)},
                              {"eta_norm_2", k.eta_norm(2)},
                              {"eta_l1", k.eta_l1()}});
    emit(g, "kernel.json", j.dump(2) + "\n");
    return pass ? 0 : 1;
}

// ---- approx location / hybrid ----

struct SweepArgs {
    std::vector<double> betas, ps;
    std::vector<int> levels;
    std::string test_function, design;
    std::optional<double> h_max;
};

gmix::ExperimentConfig sweep_config(const Globals& g, gmix::Scheme scheme, const SweepArgs& a) {
    const Json sec = section(g, scheme == gmix::Scheme::location ? "location" : "hybrid");
    gmix::ExperimentConfig c;
    c.scheme = scheme;
    if (scheme == gmix::Scheme::hybrid) c.levels = {4, 5, 6, 7, 8};
    c.betas = !a.betas.empty() ? a.betas : cfg(sec, "betas", c.betas);
    c.ps = !a.ps.empty() ? a.ps : cfg(sec, "ps", c.ps);
    c.levels = !a.levels.empty() ? a.levels : cfg(sec, "levels", c.levels);
    c.test_function = !a.test_function.empty() ? a.test_function : cfg(sec, "test_function", c.test_function);
    c.design = !a.design.empty() ? a.design : cfg(sec, "design", c.design);
    if (scheme == gmix::Scheme::location) c.h_max = a.h_max.value_or(cfg(sec, "h_max", c.h_max));
    else c.hybrid_h_max = a.h_max.value_or(cfg(sec, "h_max", 0.0));  // 0 keeps h_J
    c.noise_s = cfg(sec, "noise_s", c.noise_s);
    c.mc_draws = cfg(sec, "mc_draws", c.mc_draws);
    c.seed = g.seed;
    c.threads = g.threads;
    for (double b : c.betas)
        if (!(b > 0.0)) throw std::invalid_argument("beta must be positive");
    for (double p : c.ps)
        if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    for (int l : c.levels)
        if (l < 1) throw std::invalid_argument("levels must be at least 1");
    if (c.betas.empty() || c.ps.empty() || c.levels.empty()) throw std::invalid_argument("beta, p and levels need at least one value");
    return c;
}

Json to_json(const gmix::ExperimentConfig& c) {
    return {{"scheme", c.scheme == gmix::Scheme::location ? "location" : "hybrid"},
            {"test_function", c.test_function},
            {"design", c.design},
            {"betas", c.betas},
            {"ps", c.ps},
            {"levels", c.levels},
            {"h_max", c.scheme == gmix::Scheme::location ? c.h_max : c.hybrid_h_max},
            {"noise_s", c.noise_s},
            {"mc_draws", c.mc_draws}};
}

int cmd_approx(const Globals& g, gmix::Scheme scheme, const SweepArgs& a) {
    const gmix::ExperimentConfig c = sweep_config(g, scheme, a);
    const Json eff = to_json(c);
    const std::string name = scheme == gmix::Scheme::location ? "location" : "hybrid";
    const std::string hash = hash_of(g, "approx " + name, eff);
    gmix::SweepReport rep = gmix::run_sweep(c);

    // rows sorted by cell key
    std::sort(rep.rows.begin(), rep.rows.end(), [](const gmix::SweepRow& x, const gmix::SweepRow& y) {
        return std::tie(x.beta, x.p, x.level) < std::tie(y.beta, y.p, y.level);
    });
    gmix::CsvWriter csv({"config_hash", "scheme", "beta", "p", "level", "sigma", "lambda", "core_error", "global_error",
                         "design_error", "design_bound", "seconds", "ok", "failure"});
    for (const auto& r : rep.rows)
        csv.row({hash, name, num(r.beta), num(r.p), std::to_string(r.level), num(r.sigma), std::to_string(r.lambda),
                 num(r.core_error), num(r.global_error), num(r.design_error), num(r.design_bound), num(r.seconds),
                 r.ok ? "1" : "0", r.failure});
    emit(g, name + "_sweep.csv", csv.str());

    if (scheme == gmix::Scheme::hybrid) {
        gmix::CsvWriter an({"config_hash", "J", "beta", "p", "j", "zeta_j", "sup_error_on_Ij", "atoms_at_level_j", "inner", "normalized"});
        for (const auto& r : rep.rows)
            for (const auto& e : r.annuli)
                an.row({hash, std::to_string(r.level), num(r.beta), num(r.p), std::to_string(e.j), num(e.outer), num(e.sup_error),
                        std::to_string(e.atoms), num(e.inner), num(e.normalized)});
        emit(g, "hybrid_annuli.csv", an.str());
    }

    Json fits = Json::array();
    for (const auto& f : rep.fits)
        fits.push_back({{"beta", f.beta},
                        {"p", f.p},
                        {"cells", f.cells},
                        {"count_slope", f.count_slope},
                        {"error_slope", f.error_slope},
                        {"frontier_slope", f.frontier_slope},
                        {"predicted_count_slope", f.predicted_count_slope},
                        {"predicted_frontier", f.predicted_frontier}});
    std::size_t failed = 0;
    for (const auto& r : rep.rows) failed += r.ok ? 0 : 1;
    Json j = gmix::versioned({{"command", "approx " + name}, {"config_hash", hash}, {"config", eff}, {"failed_cells", failed}, {"fits", fits}});
    emit(g, name + "_fits.json", j.dump(2) + "\n");
    return failed == 0 ? 0 : 1;
}

// ---- prior sample ----

gmix::PriorKind parse_prior_kind(const std::string& s) {
    if (s == "location") return gmix::PriorKind::location;
    if (s == "location_scale" || s == "location-scale") return gmix::PriorKind::location_scale;
    if (s == "hybrid") return gmix::PriorKind::hybrid;
    throw std::invalid_argument("unknown prior kind: " + s);
}

int cmd_prior(const Globals& g, std::string kind, std::optional<std::size_t> draws) {
    const Json sec = section(g, "prior");
    gmix::PriorSpec p;
    if (kind.empty()) kind = cfg<std::string>(sec, "kind", "location");
    p.kind = parse_prior_kind(kind);
    p.ig_mean = cfg(sec, "ig_mean", p.ig_mean);
    p.ig_shape = cfg(sec, "ig_shape", p.ig_shape);
    p.dp_alpha = cfg(sec, "dp_alpha", p.dp_alpha);
    p.alpha_bar = cfg(sec, "alpha_bar", p.alpha_bar);
    p.jump_floor = cfg(sec, "jump_floor", p.jump_floor);
    const std::size_t nd = draws.value_or(cfg<std::size_t>(sec, "draws", 10));
    Json eff{{"kind", kind},           {"ig_mean", p.ig_mean},       {"ig_shape", p.ig_shape}, {"dp_alpha", p.dp_alpha},
             {"alpha_bar", p.alpha_bar}, {"jump_floor", p.jump_floor}, {"draws", nd}};
    const std::string hash = hash_of(g, "prior sample", eff);

    gmix::Rng rng = gmix::make_stream(g.seed, 11);
    const gmix::ParetoLocationBase loc;
    gmix::CsvWriter csv({"config_hash", "draw", "mass", "sigma", "mu"});
    Json summary = Json::array();
    for (std::size_t d = 0; d < nd; ++d) {
        const gmix::PriorDraw draw = gmix::sample_prior(p, loc, rng);
        double net = 0.0;
        for (const auto& a : draw.measure.atoms) {
            csv.row({hash, std::to_string(d), num(a.mass), num(a.sigma), num(a.mu)});
            net += a.mass;
        }
        summary.push_back({{"draw", d},
                           {"atoms", draw.measure.atoms.size()},
                           {"total_variation", draw.measure.total_variation()},
                           {"net_mass", net},
                           {"discarded_bound", draw.measure.discarded_bound}});
    }
    emit(g, "prior_atoms.csv", csv.str());
    emit(g, "prior_summary.json", gmix::versioned({{"command", "prior sample"}, {"config_hash", hash}, {"config", eff}, {"draws", summary}}).dump(2) + "\n");
    return 0;
}

// ---- rates table ----

int cmd_rates(const Globals& g, std::vector<double> betas, std::vector<double> ps, std::string format, bool exact) {
    const Json sec = section(g, "rates");
    if (betas.empty()) betas = cfg<std::vector<double>>(sec, "betas", {0.5, 1.0, 2.0});
    if (ps.empty()) ps = cfg<std::vector<double>>(sec, "ps", {0.5, 1.0, 2.0, 4.0, 8.0});
    if (format.empty()) format = cfg<std::string>(sec, "format", "markdown");
    const Json eff{{"betas", betas}, {"ps", ps}, {"format", format}, {"exact", exact}};
    const std::string hash = hash_of(g, "rates table", eff);
    if (format == "markdown") {
        std::string t = "## Table 1\n\n" + gmix::render_symbolic_table() + "\n" + gmix::render_table(betas, ps, gmix::TableFormat::markdown, exact);
        std::cout << t;
        emit(g, "rates.md", t);
    } else if (format == "csv") {
        gmix::CsvWriter csv({"config_hash", "kind", "beta", "p", "q", "log_power", "regime", "formula", "column", "attained"});
        for (auto k : {gmix::RateKind::location, gmix::RateKind::location_scale, gmix::RateKind::hybrid})
            for (double b : betas)
                for (double p : ps) {
                    const gmix::RateResult r = gmix::rate_exponent({k, b, p});
                    csv.row({hash, gmix::to_string(k), num(b), num(p), exact ? gmix::format_q(r.q, true) : num(r.q), num(r.log_power), r.regime,
                             r.formula, std::to_string(r.column), r.attained});
                }
        std::cout << csv.str();
        emit(g, "rates.csv", csv.str());
    } else {
        throw std::invalid_argument("rates table format must be markdown or csv");
    }
    return 0;
}

// ---- sieve check ----

Json clause_json(const gmix::ClauseFrequency& c) {
    Json j{{"name", c.name},
           {"hits", c.hits},
           {"empirical_freq", c.empirical},
           {"ci_hi", c.ci_hi},
           {"analytic_bound", c.analytic_bound}};
    if (c.simplified_bound >= 0.0) j["simplified_bound"] = c.simplified_bound;
    j["verdict"] = c.below_resolution ? "below_resolution" : (c.consistent ? "consistent" : "violated");
    return j;
}

int cmd_sieve(const Globals& g, std::optional<double> n, std::optional<double> eps, std::string kind, std::optional<std::size_t> trials,
              std::optional<std::size_t> mc_trials) {
    const Json sec = section(g, "sieve");
    gmix::SieveSpec s;
    s.n = n.value_or(cfg(sec, "n", s.n));
    s.epsilon = eps.value_or(cfg(sec, "epsilon", s.epsilon));
    s.H = cfg(sec, "H", s.H);
    s.b1 = cfg(sec, "b1", s.b1);
    s.b2 = cfg(sec, "b2", s.b2);
    if (kind.empty()) kind = cfg<std::string>(sec, "prior", "location");
    const gmix::PriorKind pk = parse_prior_kind(kind);
    s.kind = pk == gmix::PriorKind::location ? gmix::SieveKind::location : gmix::SieveKind::location_scale;
    const std::size_t nt = trials.value_or(cfg<std::size_t>(sec, "covering_trials", 1000));
    const std::size_t mt = mc_trials.value_or(cfg<std::size_t>(sec, "complement_trials", 10000));
    s.validate();
    const Json eff{{"n", s.n}, {"epsilon", s.epsilon}, {"H", s.H}, {"b1", s.b1}, {"b2", s.b2}, {"prior", kind},
                   {"covering_trials", nt}, {"complement_trials", mt}};
    const std::string hash = hash_of(g, "sieve check", eff);

    gmix::Rng rng = gmix::make_stream(g.seed, 21);
    std::vector<double> xs;
    for (int i = 0; i < static_cast<int>(s.n); ++i) xs.push_back(std::normal_distribution<double>(0.0, 1.0)(rng));
    const gmix::CoveringReport cov = gmix::net_covering_check(s, xs, nt, rng);
    const gmix::NetCardinality nc = gmix::net_log_cardinality(s, xs);
    gmix::PriorSpec prior;
    prior.kind = pk;
    const gmix::ComplementReport comp = gmix::mc_sieve_complement(prior, s, mt, rng);

    const auto count_json = [](const gmix::NetCount& k) {
        return Json{{"radius", k.radius}, {"sieve_epsilon", k.sieve_epsilon}, {"max_atoms", k.max_atoms},
                    {"log_card_bound", k.log_card_bound}, {"log_card_exact", k.log_card_exact}};
    };
    Json clauses = Json::array();
    for (const auto& c : comp.clauses) clauses.push_back(clause_json(c));
    const bool pass = cov.failures == 0 && cov.non_members == 0 &&
                      std::none_of(comp.clauses.begin(), comp.clauses.end(), [](const auto& c) { return !c.below_resolution && !c.consistent; });
    Json j = gmix::versioned({{"command", "sieve check"},
                              {"config_hash", hash},
                              {"config", eff},
                              {"pass", pass},
                              {"covering",
                               {{"trials", cov.trials},
                                {"failures", cov.failures},
                                {"budget_failures", cov.budget_failures},
                                {"non_members", cov.non_members},
                                {"max_distance", cov.max_distance},
                                {"limit", cov.limit}}},
                              {"cardinality",
                               {{"C", nc.C},
                                {"headline", nc.headline},
                                {"log_R_n", nc.log_R_n},
                                {"raw", count_json(nc.raw)},
                                {"at_eps", count_json(nc.at_eps)},
                                {"at_eps_18", count_json(nc.at_eps_18)}}},
                              {"complement",
                               {{"prior", kind},
                                {"trials", comp.trials},
                                {"jump_floor", comp.jump_floor},
                                {"clauses", clauses},
                                {"total", clause_json(comp.total)},
                                {"log_total_estimate", comp.log_total_estimate}}}});
    emit(g, "sieve.json", j.dump(2) + "\n");
    return pass ? 0 : 1;
}

// ---- validate ----

int cmd_validate(const Globals& g, std::vector<std::string> which) {
    if (which.empty()) which = cfg<std::vector<std::string>>(section(g, "validate"), "validators", gmix::validator_names());
    const gmix::ValidationBundle b = gmix::run_validators(which, g.seed);
    emit(g, "validate.json", gmix::to_json(b, g.seed).dump(2) + "\n");
    if (!b.pass()) {
        std::cerr << "validation failed: " << b.first_failure() << '\n';
        return 1;
    }
    std::cerr << "all validators pass\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian mixture approximation and prior diagnostics"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

    auto* kernel = app.add_subcommand("kernel", "dual kernel tables")->require_subcommand(1);
    auto* kbuild = kernel->add_subcommand("build", "tabulate chi and eta and check them");
    std::optional<double> kwidth;
    std::size_t kstride = 64;
    kbuild->add_option("--mollifier-width", kwidth);
    kbuild->add_option("--stride", kstride, "write every n-th node");

    auto* approx = app.add_subcommand("approx", "mixture approximation sweeps")->require_subcommand(1);
    SweepArgs la, ha;
    const auto sweep_opts = [](CLI::App* c, SweepArgs& a) {
        c->add_option("--beta", a.betas, "smoothness values")->delimiter(',');
        c->add_option("--p", a.ps, "moment indices")->delimiter(',');
        c->add_option("--levels", a.levels, "sigma = 2^-e (location) or J (hybrid)")->delimiter(',');
        c->add_option("--test-function", a.test_function);
        c->add_option("--design", a.design);
        c->add_option("--h-max", a.h_max);
    };
    auto* aloc = approx->add_subcommand("location", "single-scale location scheme");
    sweep_opts(aloc, la);
    auto* ahyb = approx->add_subcommand("hybrid", "multiscale hybrid scheme");
    sweep_opts(ahyb, ha);

    auto* prior = app.add_subcommand("prior", "random measure priors")->require_subcommand(1);
    auto* psample = prior->add_subcommand("sample", "draw mixing measures");
    std::string pkind;
    std::optional<std::size_t> pdraws;
    psample->add_option("--kind", pkind, "location | location_scale | hybrid");
    psample->add_option("--draws", pdraws);

    auto* rates = app.add_subcommand("rates", "posterior rate exponents")->require_subcommand(1);
    auto* rtable = rates->add_subcommand("table", "render the rate table");
    std::vector<double> rbetas, rps;
    std::string rformat;
    bool rexact = false;
    rtable->add_option("--beta", rbetas)->delimiter(',');
    rtable->add_option("--p", rps)->delimiter(',');
    rtable->add_option("--format", rformat, "markdown | csv");
    rtable->add_flag("--exact", rexact, "rational exponents");

    auto* sieve = app.add_subcommand("sieve", "sieve diagnostics")->require_subcommand(1);
    auto* scheck = sieve->add_subcommand("check", "net covering, cardinality and prior complement");
    std::optional<double> sn, seps;
    std::string sprior;
    std::optional<std::size_t> strials, smc;
    scheck->add_option("--n", sn);
    scheck->add_option("--epsilon", seps);
    scheck->add_option("--prior", sprior, "location | location_scale | hybrid");
    scheck->add_option("--trials", strials, "covering trials");
    scheck->add_option("--mc-trials", smc, "complement Monte Carlo trials (>= 1e4)");

    auto* validate = app.add_subcommand("validate", "run the invariant suites");
    std::vector<std::string> vwhich;
    validate->add_option("--only", vwhich, "subset of kernels, sga, ig, dp, sieve, rates")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!g.config_path.empty()) g.config = Json::parse(gmix::read_text(g.config_path));
        if (g.config.contains("seed") && app.count("--seed") == 0) g.seed = g.config.at("seed").get<std::uint64_t>();
        if (g.config.contains("threads") && app.count("--threads") == 0) g.threads = g.config.at("threads").get<unsigned>();
        if (*kbuild) return cmd_kernel(g, kwidth, kstride);
        if (*aloc) return cmd_approx(g, gmix::Scheme::location, la);
        if (*ahyb) return cmd_approx(g, gmix::Scheme::hybrid, ha);
        if (*psample) return cmd_prior(g, pkind, pdraws);
        if (*rtable) return cmd_rates(g, rbetas, rps, rformat, rexact);
        if (*scheck) return cmd_sieve(g, sn, seps, sprior, strials, smc);
        if (*validate) return cmd_validate(g, vwhich);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
