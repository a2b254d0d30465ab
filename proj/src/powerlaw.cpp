#include "logschroed/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <boost/math/interpolators/cubic_hermite.hpp>

#include "logschroed/errors.hpp"
#include "logschroed/io.hpp"
#include "logschroed/parallel.hpp"

namespace logschroed {

double length_scale(double alpha, double sigma) { return std::pow(sigma, -1.0 / (2.0 + alpha * sigma)); }

double amplitude_scale(double alpha, double sigma) { return std::pow(sigma, alpha / (4.0 + 2.0 * alpha * sigma)); }

RadialFunction rescale_v(const RadialFunction& u, double alpha, double sigma) {
    const double a = amplitude_scale(alpha, sigma), b = length_scale(alpha, sigma);
    RadialFunction v;
    v.dim = u.dim;
    v.r_max = u.r_max / b;
    auto u0 = u.u, du0 = u.du;
    v.u = [=](double r) { return a * u0(b * r); };
    v.du = [=](double r) { return a * b * du0(b * r); };
    return v;
}

double ode_residual(const RadialModel& model, const RadialFunction& f, double r_lo, double r_hi, int n) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || n < 2) throw DomainError("invalid residual window");
    const double h = 1e-3;
    if (r_lo <= 2 * h || r_hi + 2 * h > f.r_max) throw DomainError("residual window leaves the profile");
    const int N = f.dim;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / (n - 1);
        const double d2 = (f.du(r - 2 * h) - 8 * f.du(r - h) + 8 * f.du(r + h) - f.du(r + 2 * h)) / (12 * h);
        const double u = f.u(r);
        worst = std::max(worst, std::abs(d2 + (N - 1) / r * f.du(r) - model.V(r) * u + model.g(r, u)));
    }
    return worst;
}

PowerRun solve_power(double alpha, double sigma, int dim, const PowerConfig& cfg) {
    PowerRun run;
    run.alpha = alpha;
    run.sigma = sigma;
    run.dim = dim;
    run.admissible = check_power_admissible(alpha, sigma, dim);
    if (!run.admissible.pass) throw DomainError("inadmissible power parameters: " + run.admissible.reason);
    const auto model = RadialModel::power(dim, alpha, sigma);
    ShootingOptions opts = cfg.shooting;
    opts.ivp.r_max = cfg.r_max_v * length_scale(alpha, sigma);
    const auto res = shoot(model, cfg.beta_lo, cfg.beta_hi, cfg.scan_points, opts);
    if (res.roots.empty()) {
        std::ostringstream os;
        os << "no decaying initial value in [" << cfg.beta_lo << ", " << cfg.beta_hi << "] for " << model.describe();
        throw SolverError(os.str());
    }
    if (res.roots.size() > 1) run.warnings.push_back("several decaying initial values; using the smallest");
    run.beta = res.roots.front().beta;
    run.solution = std::make_shared<const RadialSolution>(model, res.roots.front(), opts);
    run.u = RadialFunction::from_solution(*run.solution);
    run.v = rescale_v(run.u, alpha, sigma);
    run.du0 = run.u.du(0.0);
    for (double r = 0.0; r < run.u.r_max; r += 0.01) {
        if (!(run.u.u(r) > 0.0)) {
            std::ostringstream os;
            os << "profile not positive at r = " << r;
            run.warnings.push_back(os.str());
            break;
        }
    }
    const double r_hi = std::min(run.solution->r_reliable(), run.u.r_max - 0.01);
    run.residual = ode_residual(model, run.u, 0.05, r_hi);
    return run;
}

DecayFit decay_fit(const RadialFunction& f, double p) {
    if (!(p > 0.0)) throw DomainError("decay exponent must be positive");
    const double u0 = f.u(0.0);
    DecayFit fit;
    fit.exponent = p;
    for (double r = 0.0; r <= f.r_max; r += 0.01) {
        const double q = f.u(r) / u0;
        if (fit.r_lo == 0.0 && q <= 1e-4) fit.r_lo = r;
        if (q >= 1e-10) fit.r_hi = r;
    }
    if (!(fit.r_lo > 0.0) || fit.r_hi - fit.r_lo < 0.5) throw SolverError("tail window for the decay fit is too short");
    const int n = 200;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
        const double r = fit.r_lo + (fit.r_hi - fit.r_lo) * i / (n - 1);
        const double x = std::pow(r, p), y = std::log(f.u(r));
        xs.push_back(x);
        ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.rate = -slope;
    fit.intercept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = ys[i] - (fit.intercept + slope * xs[i]);
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

DecayFit decay_bound_check(const PowerRun& run) { return decay_fit(run.u, 0.5 * (run.alpha * run.sigma + 2.0)); }

RadialBound radial_bound_check(const RadialFunction& f, double alpha, double sigma) {
    const double as = alpha * sigma;
    const auto prof = RadialProfile::build(f, 400, f.r_max);
    double n2 = 0.0;
    for (std::size_t i = 0; i < prof.nodes().size(); ++i) {
        const double r = prof.nodes()[i], u = prof.values()[i], du = prof.slopes()[i];
        n2 += prof.weights()[i] * (du * du + std::pow(r, as) * u * u);
    }
    RadialBound b;
    b.norm = std::sqrt(n2);
    if (!(b.norm > 0.0)) throw DomainError("zero profile");
    const double e = 0.5 * (f.dim - 1) + 0.25 * as;
    for (double r = 0.1; r <= f.r_max; r += 0.01) {
        const double c = std::abs(f.u(r)) * std::pow(r, e) / b.norm;
        if (c > b.constant) {
            b.constant = c;
            b.argmax = r;
        }
    }
    if (!std::isfinite(b.constant)) throw SolverError("radial bound constant is not finite");
    return b;
}

RadialBound radial_bound_check(const PowerRun& run) { return radial_bound_check(run.u, run.alpha, run.sigma); }

TwoFormResidual two_form_residuals(const PowerRun& run, double r_lo, double r_hi, int n) {
    const double s = run.sigma, as = run.alpha * s, h = 1e-3;
    const auto& v = run.v;
    if (r_hi + 2 * h > v.r_max || r_lo <= 2 * h) throw DomainError("residual window leaves the profile");
    TwoFormResidual out;
    for (int i = 0; i < n; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / (n - 1);
        const double lap = (v.du(r - 2 * h) - 8 * v.du(r - h) + 8 * v.du(r + h) - v.du(r + 2 * h)) / (12 * h) +
                           (run.dim - 1) / r * v.du(r);
        const double x = v.u(r), w = std::pow(r, as), p = std::pow(std::abs(x), 2 * s);
        const double plain = -lap + w * x / s - p * x / s;
        const double shifted = -lap + (w - 1.0) * x / s - (p - 1.0) * x / s;
        out.plain = std::max(out.plain, std::abs(plain));
        out.shifted = std::max(out.shifted, std::abs(shifted));
        out.max_diff = std::max(out.max_diff, std::abs(plain - shifted));
    }
    return out;
}

InequalityReport inequality_grid() {
    InequalityReport rep;
    auto lin = [](double a, double b, int i) { return a + (b - a) * i / 9.0; };
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k) {
                const double t = lin(0.1, 4.0, i), s = lin(0.1, 10.0, j), sg = lin(0.01, 1.0, k);
                const double d = std::expm1(t * sg * std::log(s)) / sg - t * std::log(s);
                ++rep.samples;
                rep.worst = std::min(rep.worst, d);
                if (d < -1e-12) ++rep.violations;
            }
    return rep;
}

RadialFunction hermite_profile(int dim, std::vector<double> r, std::vector<double> u, std::vector<double> du) {
    if (r.size() < 2 || r.size() != u.size() || r.size() != du.size()) throw DomainError("bad profile samples");
    const double lo = r.front(), hi = r.back();
    using Spline = boost::math::interpolators::cubic_hermite<std::vector<double>>;
    const Spline spline(std::move(r), std::move(u), std::move(du));
    RadialFunction f;
    f.dim = dim;
    f.r_max = hi;
    f.u = [=](double x) { return spline(std::clamp(x, lo, hi)); };
    f.du = [=](double x) { return spline.prime(std::clamp(x, lo, hi)); };
    return f;
}

std::filesystem::path resolve_cache_dir(const LimitConfig& cfg) {
    if (const char* env = std::getenv("LOGSCHROED_CACHE"); env && *env) return env;
    return cfg.cache_dir;
}

ReferenceProfile reference_profile(double alpha, int dim, const LimitConfig& cfg) {
    ReferenceProfile ref;
    const auto& ivp = cfg.reference.ivp;
    const auto dir = resolve_cache_dir(cfg);
    if (!dir.empty()) {
        std::ostringstream name;
        name.precision(10);
        name << "reference_N" << dim << "_alpha" << alpha << "_rtol" << ivp.rel_tol << "_atol" << ivp.abs_tol << "_eps"
             << ivp.epsilon0 << "_rmax" << ivp.r_max << "_grid" << cfg.grid << ".csv";
        ref.file = dir / name.str();
    }
    CsvTable table;
    if (!ref.file.empty() && std::filesystem::exists(ref.file)) {
        table = parse_csv(read_file(ref.file));
        ref.from_cache = true;
    } else {
        const auto model = RadialModel::logarithmic(Potential::log_power(dim, alpha));
        const auto res = shoot(model, 0.5, 50.0, 32, cfg.reference);
        if (res.roots.size() != 1) {
            std::ostringstream os;
            os << "reference solve found " << res.roots.size() << " decaying initial values";
            throw SolverError(os.str());
        }
        const RadialSolution sol(model, res.roots[0], cfg.reference);
        table.header = {"r", "u", "du"};
        table.columns.resize(3);
        const auto n = static_cast<std::size_t>(std::floor(sol.r_max() / cfg.grid + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) {
            const double r = static_cast<double>(i) * cfg.grid;
            table.columns[0].push_back(r);
            table.columns[1].push_back(sol.u(r));
            table.columns[2].push_back(sol.du(r));
        }
        const auto text = to_csv(table);
        if (!ref.file.empty()) write_file_atomic(ref.file, text);
        // round-trip so fresh and cached runs use identical samples
        table = parse_csv(text);
    }
    ref.w = hermite_profile(dim, table.column("r"), table.column("u"), table.column("du"));
    ref.beta = table.column("u").front();
    return ref;
}

LimitStudy limit_study(double alpha, const std::vector<double>& sigma_list, int dim, const LimitConfig& cfg) {
    if (sigma_list.empty()) throw DomainError("empty sigma list");
    for (std::size_t i = 0; i < sigma_list.size(); ++i) {
        if (i > 0 && !(sigma_list[i] < sigma_list[i - 1])) throw DomainError("sigma list must be strictly decreasing");
        const auto adm = check_power_admissible(alpha, sigma_list[i], dim);
        if (!adm.pass) throw DomainError("inadmissible sigma: " + adm.reason);
    }
    LimitStudy st;
    st.alpha = alpha;
    st.dim = dim;
    const auto ref = reference_profile(alpha, dim, cfg);
    st.reference_beta = ref.beta;
    st.reference_cached = ref.from_cache;
    const auto m = static_cast<std::size_t>(std::floor(cfg.window / cfg.grid + 1e-9));
    if (cfg.window > ref.w.r_max) throw DomainError("distance window exceeds the reference profile");

    st.rows.resize(sigma_list.size());
    std::vector<std::vector<std::string>> notes(sigma_list.size());
    parallel_for(sigma_list.size(), cfg.threads, [&](std::size_t k) {
        PowerConfig pc = cfg.power;
        pc.shooting.threads = 1;
        const double s = sigma_list[k];
        const auto run = solve_power(alpha, s, dim, pc);
        notes[k] = run.warnings;
        LimitRow row;
        row.sigma = s;
        row.beta = run.beta;
        row.v0 = run.v.u(0.0);
        const double omega = sphere_area(dim);
        double h1 = 0.0, prev = 0.0;
        const double c = std::pow(s, 0.25 * alpha), b = 1.0 / std::sqrt(s);
        for (std::size_t j = 0; j <= m; ++j) {
            const double r = static_cast<double>(j) * cfg.grid;
            row.sup_error = std::max(row.sup_error, std::abs(run.v.u(r) - ref.w.u(r)));
            const double d = run.v.du(r) - ref.w.du(r);
            const double cur = omega * std::pow(r, dim - 1) * d * d;
            if (j > 0) h1 += 0.5 * cfg.grid * (prev + cur);
            prev = cur;
            row.footnote_gap = std::max(row.footnote_gap, std::abs(c * run.u.u(b * r) - run.v.u(r)));
        }
        row.h1_error = std::sqrt(h1);
        row.tail_rate = decay_bound_check(run).rate;
        st.rows[k] = row;
    });
    for (std::size_t k = 0; k < notes.size(); ++k)
        for (const auto& n : notes[k]) st.warnings.push_back("sigma = " + format_double(sigma_list[k]) + ": " + n);
    st.decreasing = true;
    for (std::size_t k = 1; k < st.rows.size(); ++k)
        if (!(st.rows[k].sup_error < st.rows[k - 1].sup_error)) st.decreasing = false;
    if (!st.decreasing) st.warnings.push_back("sup-norm distances are not strictly decreasing");
    return st;
}

}  // namespace logschroed
