#include "logschroed/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "logschroed/config.hpp"
#include "logschroed/diagnostics.hpp"
#include "logschroed/errors.hpp"
#include "logschroed/io.hpp"
#include "logschroed/parallel.hpp"
#include "logschroed/powerlaw.hpp"
#include "logschroed/shooting.hpp"
#include "logschroed/spectrum.hpp"
#include "logschroed/variational.hpp"

namespace logschroed::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const std::set<std::string> kPotentialKeys{
    "potential.kind", "potential.dim",   "potential.alpha1",      "potential.alpha2",       "potential.alpha3",
    "potential.alpha4", "potential.mu",    "potential.c",           "potential.table",        "perturbation.delta",
    "perturbation.plateau", "perturbation.support", "perturbation.amplitude"};
const std::set<std::string> kSolverKeys{
    "solver.epsilon0", "solver.rel_tol",   "solver.abs_tol",        "solver.r_max",       "solver.grow_factor",
    "solver.tol",      "solver.depth_max", "solver.refine_samples", "solver.reliable_rel"};
const std::set<std::string> kRunKeys{"output.dir", "run.deterministic"};
const std::set<std::string> kScanKeys{"scan.beta_lo", "scan.beta_hi", "scan.points", "solve.root"};

std::set<std::string> allowed_keys(const std::string& sub) {
    std::set<std::string> k = kRunKeys;
    auto add = [&](const std::set<std::string>& s) { k.insert(s.begin(), s.end()); };
    if (sub == "checkv2") {
        add(kPotentialKeys);
        add({"checkv2.r_min", "checkv2.r_max", "checkv2.points", "checkv2.origin_margin"});
        return k;
    }
    add(kSolverKeys);
    if (sub == "powerlimit") {
        add({"powerlimit.alpha", "powerlimit.sigmas", "powerlimit.dim", "powerlimit.window", "powerlimit.grid",
             "powerlimit.r_max_v", "powerlimit.beta_lo", "powerlimit.beta_hi", "powerlimit.points",
             "powerlimit.cache"});
        return k;
    }
    add(kPotentialKeys);
    add(kScanKeys);
    if (sub == "solve") add({"solve.grid"});
    if (sub == "energy") add({"energy.cells"});
    if (sub == "diagnose") add({"diagnose.r_min", "diagnose.h"});
    if (sub == "spectrum")
        add({"spectrum.R", "spectrum.h", "spectrum.eps", "spectrum.levels", "spectrum.k", "spectrum.tol_zero",
             "spectrum.scheme"});
    return k;
}

/// Reads config values and remembers every effective value, defaults included.
struct Ctx {
    const Config& cfg;
    int threads = 0;
    Json resolved = Json::object();

    double num(const std::string& key, double fallback) {
        const double x = cfg.get_double(key, fallback);
        resolved[key] = x;
        return x;
    }
    int integer(const std::string& key, int fallback) {
        const int x = cfg.get_int(key, fallback);
        resolved[key] = x;
        return x;
    }
    std::string str(const std::string& key, const std::string& fallback) {
        auto s = cfg.get_string(key, fallback);
        resolved[key] = s;
        return s;
    }
    bool flag(const std::string& key, bool fallback) {
        const bool b = cfg.get_bool(key, fallback);
        resolved[key] = b;
        return b;
    }
    std::vector<double> list(const std::string& key, const std::vector<double>& fallback) {
        auto v = cfg.get_list(key, fallback);
        resolved[key] = v;
        return v;
    }
    ConfigError error(const std::string& key, const std::string& what) const {
        return ConfigError(key + ": " + what, cfg.line_of(key));
    }
};

Potential make_potential(Ctx& c) {
    const int dim = c.integer("potential.dim", 3);
    const std::string kind = c.str("potential.kind", "constant");
    if (kind == "log_power")
        return Potential::log_power(dim, c.num("potential.alpha1", 0.0), c.num("potential.alpha2", 0.0),
                                    c.num("potential.alpha3", 0.0), c.num("potential.alpha4", 0.0));
    if (kind == "inverted_harmonic") return Potential::inverted_harmonic(dim, c.num("potential.mu", 0.0));
    if (kind == "constant") return Potential::constant(dim, c.num("potential.c", 0.0));
    if (kind == "table") {
        const auto path = c.str("potential.table", "");
        if (path.empty()) throw c.error("potential.table", "required for kind = table");
        return Potential::table_from_csv(dim, path);
    }
    throw c.error("potential.kind", "unknown kind '" + kind + "'");
}

RadialModel make_model(Ctx& c) {
    auto pot = make_potential(c);
    const double delta = c.num("perturbation.delta", 0.0);
    if (delta == 0.0) return RadialModel::logarithmic(std::move(pot));
    const PerturbationPair pair(delta, c.num("perturbation.plateau", 1.0), c.num("perturbation.support", 2.0),
                                c.num("perturbation.amplitude", 0.0));
    return RadialModel::logarithmic(std::move(pot), pair);
}

ShootingOptions make_shooting(Ctx& c) {
    ShootingOptions o;
    o.ivp.epsilon0 = c.num("solver.epsilon0", o.ivp.epsilon0);
    o.ivp.rel_tol = c.num("solver.rel_tol", o.ivp.rel_tol);
    o.ivp.abs_tol = c.num("solver.abs_tol", o.ivp.abs_tol);
    o.ivp.r_max = c.num("solver.r_max", o.ivp.r_max);
    o.ivp.grow_factor = c.num("solver.grow_factor", o.ivp.grow_factor);
    o.tol = c.num("solver.tol", o.tol);
    o.depth_max = c.num("solver.depth_max", o.depth_max);
    o.refine_samples = c.integer("solver.refine_samples", o.refine_samples);
    o.reliable_rel = c.num("solver.reliable_rel", o.reliable_rel);
    o.threads = c.threads;
    o.ivp.validate();
    return o;
}

struct Shot {
    RadialModel model;
    ShootingOptions opts;
    ShootingResult result;
};

Shot run_scan(Ctx& c) {
    auto model = make_model(c);
    auto opts = make_shooting(c);
    const double lo = c.num("scan.beta_lo", 0.5), hi = c.num("scan.beta_hi", 50.0);
    const int n = c.integer("scan.points", 32);
    auto res = shoot(model, lo, hi, n, opts);
    return {std::move(model), opts, std::move(res)};
}

/// The selected decaying solution of the scan (solve.root, default the first).
std::shared_ptr<const RadialSolution> pick_root(Ctx& c, const Shot& s) {
    const int idx = c.integer("solve.root", 0);
    if (s.result.roots.empty()) throw SolverError("no decaying solution in the scan window");
    if (idx < 0 || idx >= static_cast<int>(s.result.roots.size()))
        throw c.error("solve.root", "index outside the " + std::to_string(s.result.roots.size()) + " roots found");
    return std::make_shared<const RadialSolution>(s.model, s.result.roots[static_cast<std::size_t>(idx)], s.opts);
}

Json root_json(const RootInfo& r) {
    return Json{{"beta", r.beta},       {"lo", r.lo},
                {"hi", r.hi},           {"tangent", r.tangent},
                {"depth", r.depth},     {"r_reliable", r.r_reliable},
                {"residual", r.residual}, {"tail_mismatch", r.tail_mismatch}};
}

Json classification_table(const ShootingResult& res) {
    Json t = Json::array();
    for (const auto& s : res.scan)
        t.push_back(Json{{"beta", s.beta}, {"event", to_string(s.event.tag)}, {"radius", s.event.radius}});
    return t;
}

struct Output {
    fs::path dir;
    Json results = Json::object();
    std::vector<std::string> warnings;
    std::vector<std::string> files;
    int status = kPass;

    void csv(const std::string& name, const CsvTable& t) {
        write_file_atomic(dir / name, to_csv(t));
        files.push_back(name);
    }
    void warn(const std::vector<std::string>& w) { warnings.insert(warnings.end(), w.begin(), w.end()); }
};

// --- subcommands -----------------------------------------------------------

void cmd_solve(Ctx& c, Output& o) {
    const auto shot = run_scan(c);
    const auto sol = pick_root(c, shot);
    const double grid = c.num("solve.grid", 0.01);
    if (!(grid > 0.0)) throw c.error("solve.grid", "must be positive");
    CsvTable t{{"r", "u", "du"}, {{}, {}, {}}};
    const auto n = static_cast<std::size_t>(std::floor(sol->r_max() / grid + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        const double r = static_cast<double>(i) * grid;
        t.columns[0].push_back(r);
        t.columns[1].push_back(sol->u(r));
        t.columns[2].push_back(sol->du(r));
    }
    o.csv("profile.csv", t);
    const auto& root = shot.result.roots[static_cast<std::size_t>(c.cfg.get_int("solve.root", 0))];
    o.results["beta_star"] = sol->beta();
    o.results["bracket"] = {root.lo, root.hi};
    o.results["residual"] = root.residual;
    o.results["classification_table"] = classification_table(shot.result);
    o.results["roots"] = Json::array();
    for (const auto& r : shot.result.roots) o.results["roots"].push_back(root_json(r));
    o.results["r_reliable"] = sol->r_reliable();
    o.results["r_max"] = sol->r_max();
    o.results["tail_mismatch"] = sol->tail_mismatch();
    o.results["tail_sup"] = sol->tail_sup();
    o.results["verdict"] = "pass";
    o.warn(shot.result.warnings);
}

void cmd_scan(Ctx& c, Output& o) {
    const auto shot = run_scan(c);
    const auto& res = shot.result;
    CsvTable scan{{"beta", "event", "turning", "radius", "depth"}, {{}, {}, {}, {}, {}}};
    for (const auto& s : res.scan) {
        scan.columns[0].push_back(s.beta);
        scan.columns[1].push_back(static_cast<double>(s.event.tag));
        scan.columns[2].push_back(s.event.turning ? 1.0 : 0.0);
        scan.columns[3].push_back(s.event.radius);
        scan.columns[4].push_back(s.depth);
    }
    o.csv("scan.csv", scan);
    CsvTable roots{{"beta", "lo", "hi", "tangent", "depth"}, {{}, {}, {}, {}, {}}};
    for (const auto& r : res.roots) {
        roots.columns[0].push_back(r.beta);
        roots.columns[1].push_back(r.lo);
        roots.columns[2].push_back(r.hi);
        roots.columns[3].push_back(r.tangent ? 1.0 : 0.0);
        roots.columns[4].push_back(r.depth);
    }
    o.csv("roots.csv", roots);
    o.results["event_codes"] = Json{{"0", "crosses-zero"}, {"1", "grows"}, {"2", "undetermined"}};
    o.results["multiplicity"] = res.multiplicity;
    o.results["roots"] = Json::array();
    for (const auto& r : res.roots) o.results["roots"].push_back(root_json(r));
    o.results["rejected"] = Json::array();
    for (const auto& b : res.rejected) o.results["rejected"].push_back(Json{{"lo", b.lo}, {"hi", b.hi}});
    o.results["verdict"] = "pass";
    o.warn(res.warnings);
}

void cmd_energy(Ctx& c, Output& o) {
    const auto shot = run_scan(c);
    const auto sol = pick_root(c, shot);
    const auto f = RadialFunction::from_solution(*sol);
    const int cells = c.integer("energy.cells", 400);
    if (cells < 1) throw c.error("energy.cells", "must be positive");
    const auto p = RadialProfile::build(f, cells, f.r_max);
    const auto fr = functionals(p, shot.model);
    const auto once = nehari_project(p, shot.model);
    const auto twice = nehari_project(once.profile, shot.model);
    const double level_residual = std::abs(2 * fr.I - fr.mass) / fr.mass;
    o.results["beta"] = sol->beta();
    o.results["I"] = fr.I;
    o.results["J"] = fr.J;
    o.results["t_u"] = fr.t_u;
    o.results["level_residual"] = level_residual;
    o.results["mass"] = fr.mass;
    o.results["tail_bound"] = fr.tail_bound;
    o.results["second_pass_t"] = twice.t;
    o.warn(fr.warnings);
    const bool pass = level_residual <= 1e-5;
    o.results["verdict"] = pass ? "pass" : "fail";
    if (!pass) o.status = kFail;
}

void cmd_diagnose(Ctx& c, Output& o) {
    const auto shot = run_scan(c);
    const auto sol = pick_root(c, shot);
    const auto f = RadialFunction::from_solution(*sol);
    const double r_min = c.num("diagnose.r_min", 10 * shot.opts.ivp.epsilon0);
    const auto mesh = energy_mesh(r_min, f.r_max, c.num("diagnose.h", 0.01));
    const auto e = energy_E(f, shot.model, mesh);
    o.csv("diagnose.csv", CsvTable{{"r", "v", "E", "dE_formula", "dE_diff", "dG"},
                                   {e.r, e.v, e.E, e.dE_formula, e.dE_diff, e.dG}});
    const auto pat = lemma31_pattern(e, shot.model);
    const auto tail = tail_checks(f);
    double max_e = 0.0, mismatch = 0.0;
    bool positive = true;
    for (std::size_t i = 0; i < e.r.size(); ++i) {
        max_e = std::max(max_e, e.E[i]);
        positive = positive && e.E[i] > 0.0;
        mismatch = std::max(mismatch, std::abs(e.dE_formula[i] - e.dE_diff[i]));
    }
    const double tol = 1e-5 * (1 + e.max_abs_E());
    const bool end_ok = std::abs(e.E.back()) <= 1e-6 * max_e;
    o.results["beta"] = sol->beta();
    o.results["multiplicity"] = shot.result.multiplicity;
    o.results["pattern"] = to_string(pat.verdict);
    if (!pat.reason.empty()) o.results["pattern_reason"] = pat.reason;
    if (pat.witness) o.results["pattern_witness_r"] = e.r[*pat.witness];
    o.results["max_E"] = max_e;
    o.results["E_end"] = e.E.back();
    o.results["E_positive"] = positive;
    o.results["E_end_ok"] = end_ok;
    o.results["dE_mismatch"] = mismatch;
    o.results["dE_tolerance"] = tol;
    o.results["tail"] = Json{{"barrier_decreasing", tail.barrier_decreasing},
                             {"barrier_final", tail.barrier_final},
                             {"flux_max", tail.flux_max},
                             {"monotone_from", tail.monotone_from},
                             {"pass", tail.pass()}};
    if (shot.result.roots.size() >= 2) {
        // The first two decaying solutions: intersection count and the
        // quantity whose monotonicity drives the uniqueness argument.
        const RadialSolution other(shot.model, shot.result.roots[1], shot.opts);
        const auto f0 = RadialFunction::from_solution(RadialSolution(shot.model, shot.result.roots[0], shot.opts));
        const auto f1 = RadialFunction::from_solution(other);
        const double hi = std::min({8.0, f0.r_max, f1.r_max});
        const auto rep = ratio_monotonicity(f0, f1, energy_mesh(1e-3, hi));
        const auto d = contradiction_quantity(f0, f1, shot.model, energy_mesh(r_min, hi));
        o.results["pair"] = Json{{"crossings", rep.crossings},
                                 {"crossing_radii", rep.crossing_radii},
                                 {"ratio_monotone", rep.monotone},
                                 {"ratio_constant", rep.constant},
                                 {"contradiction_decreasing", d.decreasing}};
        if (d.first_increase) o.results["pair"]["contradiction_first_increase"] = *d.first_increase;
    }
    o.warn(shot.result.warnings);
    // Positivity, the end limit and the Gaussian tail are only promised when
    // the monotonicity condition holds; otherwise they are reported, not judged.
    const bool applicable = pat.verdict != Verdict::NotApplicable;
    const bool pass = mismatch <= tol && pat.verdict != Verdict::Fail &&
                      (!applicable || (positive && end_ok && tail.pass()));
    o.results["verdict"] = pass ? "pass" : "fail";
    if (!pass) o.status = kFail;
}

void cmd_spectrum(Ctx& c, Output& o) {
    const auto shot = run_scan(c);
    const auto sol = pick_root(c, shot);
    const auto f = RadialFunction::from_solution(*sol);
    MeshParams mp;
    mp.R = c.num("spectrum.R", std::min(mp.R, f.r_max));
    mp.h = c.num("spectrum.h", mp.h);
    mp.eps = c.num("spectrum.eps", mp.eps);
    mp.levels = c.integer("spectrum.levels", mp.levels);
    mp.threads = c.threads;
    const std::string scheme = c.str("spectrum.scheme", "auto");
    if (scheme == "auto") mp.scheme = Scheme::Auto;
    else if (scheme == "liouville") mp.scheme = Scheme::Liouville;
    else if (scheme == "finite_volume") mp.scheme = Scheme::FiniteVolume;
    else throw c.error("spectrum.scheme", "expected auto, liouville or finite_volume");
    const int k = c.integer("spectrum.k", 3);
    const double tol_zero = c.num("spectrum.tol_zero", 1e-2);
    const auto s = lowest_eigenvalues(f, shot.model, mp, k);
    const auto nd = nondegeneracy_check(s, tol_zero);
    const auto rq = ground_state_rayleigh(f, shot.model, mp);
    CsvTable t;
    t.header = {"level", "h"};
    for (int j = 0; j < k; ++j) t.header.push_back("lambda_" + std::to_string(j));
    t.columns.resize(t.header.size());
    for (std::size_t l = 0; l < s.by_level.size(); ++l) {
        t.columns[0].push_back(static_cast<double>(l));
        t.columns[1].push_back(s.h[l]);
        for (int j = 0; j < k; ++j) t.columns[2 + j].push_back(s.by_level[l][j]);
    }
    o.csv("spectrum.csv", t);
    o.results["beta"] = sol->beta();
    o.results["eigenvalues_by_level"] = s.by_level;
    o.results["extrapolated"] = s.extrapolated;
    o.results["converged"] = s.converged;
    o.results["gap"] = nd.gap;
    o.results["rayleigh_by_level"] = rq.by_level;
    o.results["rayleigh"] = rq.extrapolated;
    o.results["verdict"] = nd.nondegenerate ? "nondegenerate" : "degenerate";
    if (!nd.nondegenerate) {
        o.results["lambda"] = nd.lambda;
        o.results["reason"] = nd.reason;
        o.status = kFail;
    }
    o.warn(s.warnings);
}

void cmd_powerlimit(Ctx& c, Output& o) {
    LimitConfig lc;
    lc.reference = make_shooting(c);
    lc.power.shooting = lc.reference;
    lc.power.beta_lo = c.num("powerlimit.beta_lo", lc.power.beta_lo);
    lc.power.beta_hi = c.num("powerlimit.beta_hi", lc.power.beta_hi);
    lc.power.scan_points = c.integer("powerlimit.points", lc.power.scan_points);
    lc.power.r_max_v = c.num("powerlimit.r_max_v", lc.power.r_max_v);
    lc.window = c.num("powerlimit.window", lc.window);
    lc.grid = c.num("powerlimit.grid", lc.grid);
    lc.cache_dir = c.str("powerlimit.cache", (o.dir / "cache").string());
    lc.threads = c.threads;
    const double alpha = c.num("powerlimit.alpha", 0.0);
    const int dim = c.integer("powerlimit.dim", 3);
    const auto sigmas = c.list("powerlimit.sigmas", {0.5, 0.25, 0.1, 0.05});
    const auto st = limit_study(alpha, sigmas, dim, lc);
    CsvTable t{{"sigma", "sup_error", "tail_rate", "beta", "v0", "h1_error", "footnote_gap"},
               std::vector<std::vector<double>>(7)};
    o.results["rows"] = Json::array();
    for (const auto& r : st.rows) {
        const std::vector<double> row{r.sigma, r.sup_error, r.tail_rate, r.beta, r.v0, r.h1_error, r.footnote_gap};
        for (std::size_t j = 0; j < row.size(); ++j) t.columns[j].push_back(row[j]);
        o.results["rows"].push_back(Json{{"sigma", r.sigma}, {"sup_error", r.sup_error}, {"tail_rate", r.tail_rate}});
    }
    o.csv("powerlimit.csv", t);
    const auto iq = inequality_grid();
    o.results["reference_beta"] = st.reference_beta;
    o.results["reference_cache"] = resolve_cache_dir(lc).string();
    o.results["decreasing"] = st.decreasing;
    o.results["inequality_violations"] = iq.violations;
    o.warn(st.warnings);
    const bool pass = st.decreasing && iq.violations == 0;
    o.results["verdict"] = pass ? "pass" : "fail";
    if (!pass) o.status = kFail;
}

void cmd_checkv2(Ctx& c, Output& o) {
    const auto pot = make_potential(c);
    const double lo = c.num("checkv2.r_min", 1e-3), hi = c.num("checkv2.r_max", 100.0);
    const int n = c.integer("checkv2.points", 400);
    if (n < 2) throw c.error("checkv2.points", "need at least two points");
    const auto grid = geometric_grid(lo, hi, static_cast<std::size_t>(n));
    const auto res = check_V2(pot, grid, c.num("checkv2.origin_margin", 1e-3));
    CsvTable t{{"r", "G", "dG"}, {{}, {}, {}}};
    for (double r : grid) {
        t.columns[0].push_back(r);
        t.columns[1].push_back(eval_G(pot, r));
        t.columns[2].push_back(eval_dG(pot, r));
    }
    o.csv("checkv2.csv", t);
    const auto adv = advise_V1(pot);
    o.results["potential"] = pot.describe();
    o.results["verdict"] = res.pass ? "pass" : "fail";
    if (res.witness) o.results["witness"] = *res.witness;
    if (!res.reason.empty()) o.results["reason"] = res.reason;
    o.results["v1_growth_ok"] = adv.growth_ok;
    o.results["v1_integrable_ok"] = adv.integrable_ok;
    if (!res.pass) o.status = kFail;
}

const std::map<std::string, std::function<void(Ctx&, Output&)>>& table() {
    static const std::map<std::string, std::function<void(Ctx&, Output&)>> t{
        {"solve", cmd_solve},       {"scan", cmd_scan},         {"energy", cmd_energy},   {"diagnose", cmd_diagnose},
        {"spectrum", cmd_spectrum}, {"powerlimit", cmd_powerlimit}, {"checkv2", cmd_checkv2}};
    return t;
}

void require_finite(const Json& j, const std::string& path) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) throw SolverError("non-finite value at " + path);
    if (j.is_object())
        for (const auto& [k, v] : j.items()) require_finite(v, path + "." + k);
    if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i) require_finite(j[i], path + "[" + std::to_string(i) + "]");
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s{"solve", "scan", "energy", "diagnose", "spectrum", "powerlimit", "checkv2"};
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial solver for the logarithmic Schroedinger equation"};
    std::string sub, config_path, out_dir;
    int threads = 0;
    bool quiet = false;
    app.add_option("subcommand", sub, "solve | scan | energy | diagnose | spectrum | powerlimit | checkv2")
        ->required()
        ->check(CLI::IsMember(subcommands()));
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--out", out_dir, "output directory (default output.dir or ./out)");
    app.add_option("--threads", threads, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    app.add_flag("--quiet", quiet, "print nothing on success");
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }

    try {
        const Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
        cfg.require_known(allowed_keys(sub));
        set_default_threads(threads);
        Ctx ctx{cfg, threads};
        Output o;
        const std::string cfg_dir = ctx.str("output.dir", "out");
        o.dir = out_dir.empty() ? fs::path(cfg_dir) : fs::path(out_dir);
        ctx.flag("run.deterministic", true);
        fs::create_directories(o.dir);
        table().at(sub)(ctx, o);

        Json rec;
        rec["subcommand"] = sub;
        rec["config_file"] = config_path;
        rec["config"] = ctx.resolved;
        rec["threads"] = threads;
        rec["results"] = o.results;
        rec["files"] = o.files;
        rec["warnings"] = o.warnings;
        rec["exit_status"] = o.status;
        require_finite(rec, "record");
        write_file_atomic(o.dir / (sub + ".json"), rec.dump(2) + "\n");
        if (!quiet) {
            out << sub << ": " << o.results.value("verdict", std::string("done"));
            if (o.results.contains("beta_star")) out << ", beta_star = " << format_double(o.results["beta_star"]);
            if (o.results.contains("multiplicity")) out << ", multiplicity = " << o.results["multiplicity"].dump();
            out << "\n" << "record: " << (o.dir / (sub + ".json")).string() << "\n";
            for (const auto& w : o.warnings) out << "warning: " << w << "\n";
        }
        return o.status;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

}  // namespace logschroed::cli
