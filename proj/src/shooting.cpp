#include "logschroed/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "logschroed/errors.hpp"
#include "logschroed/parallel.hpp"

namespace logschroed {

namespace {

int side(EventTag tag) {
    switch (tag) {
        case EventTag::CrossesZero: return +1;
        case EventTag::Grows: return -1;
        case EventTag::Undetermined: return 0;
    }
    return 0;
}

// Sign of d r_event / d beta from the first variation at the event.
int event_drift(const IVPSolution& s) {
    const auto& ev = s.event();
    const IVPState y = s.eval(ev.radius);
    double v = 0.0;
    if (ev.tag == EventTag::CrossesZero) {
        v = y[kPhi];  // u(r_e) = 0 with u' < 0
    } else if (ev.tag == EventTag::Grows && ev.turning) {
        v = -y[kPhip];  // u'(r_e) = 0 with u'' > 0
    } else if (ev.tag == EventTag::Grows) {
        v = 10.0 - y[kPhi];  // u(r_e) = grow_factor beta with u' > 0
    }
    return (v > 0) - (v < 0);
}

}  // namespace

std::vector<ScanSample> scan_beta(const RadialModel& model, double lo, double hi, int n,
                                  const ShootingOptions& opts) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("scan needs 0 < beta_lo < beta_hi");
    if (n < 8) throw DomainError("scan needs at least 8 samples");
    opts.ivp.validate();
    std::vector<ScanSample> out(static_cast<std::size_t>(n));
    const double q = std::log(hi / lo) / (n - 1);
    parallel_for(out.size(), opts.threads, [&](std::size_t i) {
        const double beta = i + 1 == out.size() ? hi : lo * std::exp(q * static_cast<double>(i));
        const auto sol = integrate(model, beta, opts.ivp);
        out[i] = ScanSample{beta, sol.event(), sol.depth()};
    });
    return out;
}

std::vector<Bracket> brackets_from_scan(const std::vector<ScanSample>& scan) {
    std::vector<Bracket> out;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
        const int a = side(scan[i].event.tag), b = side(scan[i + 1].event.tag);
        if (a != 0 && b != 0 && a != b) out.push_back({scan[i].beta, scan[i + 1].beta, false});
    }
    for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
        const auto& l = scan[i - 1].event;
        const auto& m = scan[i].event;
        const auto& r = scan[i + 1].event;
        if (m.tag == EventTag::Undetermined) continue;
        if (l.tag != m.tag || r.tag != m.tag || l.turning != m.turning || r.turning != m.turning) continue;
        if (m.radius > l.radius && m.radius > r.radius)
            out.push_back({scan[i - 1].beta, scan[i + 1].beta, true});
    }
    std::sort(out.begin(), out.end(), [](const Bracket& x, const Bracket& y) { return x.lo < y.lo; });
    return out;
}

RootInfo find_ground(const RadialModel& model, const Bracket& bracket, const ShootingOptions& opts) {
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo)) throw DomainError("invalid bracket");
    RootInfo info;
    info.tangent = bracket.tangent;
    double lo = bracket.lo, hi = bracket.hi;

    if (!bracket.tangent) {
        const auto slo = integrate(model, lo, opts.ivp);
        const auto shi = integrate(model, hi, opts.ivp);
        const int s_lo = side(slo.event().tag), s_hi = side(shi.event().tag);
        if (s_lo == 0 || s_hi == 0 || s_lo == s_hi)
            throw PreconditionError("bracket ends do not classify differently");
        double d_lo = slo.depth(), d_hi = shi.depth();
        int iter = 0;
        while (hi - lo > opts.tol * 0.5 * (lo + hi)) {
            if (++iter > 200) throw SolverError("classification bisection did not contract; refine the scan");
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const auto sm = integrate(model, mid, opts.ivp);
            const int s = side(sm.event().tag);
            if (s == 0) {
                lo = hi = mid;
                d_lo = d_hi = sm.depth();
                break;
            }
            if (s == s_lo) {
                lo = mid;
                d_lo = sm.depth();
            } else {
                hi = mid;
                d_hi = sm.depth();
            }
        }
        info.depth = std::max(d_lo, d_hi);
    } else {
        // the event radius has a cusp at a double root; tighter tolerances push
        // the noise floor of the drift sign further in
        IVPConfig tight = opts.ivp;
        tight.rel_tol *= 1e-3;
        tight.abs_tol *= 1e-4;
        auto drift = [&](double beta) { return event_drift(integrate(model, beta, tight, true)); };
        if (drift(lo) <= 0 || drift(hi) >= 0)
            throw PreconditionError("event radius has no interior maximum in the bracket");
        // the drift sign is trustworthy down to about 1e-8 relative; below
        // that, compare event radii of a symmetric pair beta (1 -+ h), whose
        // difference changes sign at the cusp with an error of order h times
        // the cusp asymmetry
        constexpr double h = 1e-6;
        const double drift_tol = std::max(opts.tol, 0.1 * h);
        for (int iter = 0; iter < 200 && hi - lo > drift_tol * 0.5 * (lo + hi); ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const int d = drift(mid);
            if (d == 0) {
                lo = hi = mid;
                break;
            }
            (d > 0 ? lo : hi) = mid;
        }
        auto radius = [&](double beta) {
            const auto s = integrate(model, beta, tight);
            return s.event().tag == EventTag::Undetermined ? -1.0 : s.event().radius;
        };
        for (int iter = 0; iter < 200 && hi - lo > opts.tol * 0.5 * (lo + hi); ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double rl = radius(mid * (1.0 - h)), rr = radius(mid * (1.0 + h));
            if (rl < 0.0 || rr < 0.0) break;
            (rl < rr ? lo : hi) = mid;
        }
        info.depth = integrate(model, 0.5 * (lo + hi), tight).depth();
    }
    info.lo = lo;
    info.hi = hi;
    info.beta = 0.5 * (lo + hi);
    return info;
}

ShootingResult shoot(const RadialModel& model, double lo, double hi, int n, const ShootingOptions& opts) {
    ShootingResult res;
    res.scan = scan_beta(model, lo, hi, n, opts);
    if (std::all_of(res.scan.begin(), res.scan.end(),
                    [](const ScanSample& s) { return s.event.tag == EventTag::Undetermined; }))
        res.warnings.push_back("every scan sample is Undetermined; increase r_max or tighten tolerances");
    // narrow windows of the other class can hide inside one scan cell
    const auto coarse = brackets_from_scan(res.scan);
    std::vector<std::vector<Bracket>> sub(coarse.size());
    ShootingOptions inner = opts;
    inner.threads = 1;
    parallel_for(coarse.size(), opts.threads, [&](std::size_t i) {
        if (opts.refine_samples < 8) {
            sub[i] = {coarse[i]};
            return;
        }
        const auto fine = scan_beta(model, coarse[i].lo, coarse[i].hi, opts.refine_samples, inner);
        sub[i] = brackets_from_scan(fine);
    });
    for (auto& v : sub) res.brackets.insert(res.brackets.end(), v.begin(), v.end());
    std::sort(res.brackets.begin(), res.brackets.end(),
              [](const Bracket& x, const Bracket& y) { return x.lo < y.lo; });
    res.brackets.erase(std::unique(res.brackets.begin(), res.brackets.end(),
                                   [](const Bracket& x, const Bracket& y) {
                                       return x.lo == y.lo && x.hi == y.hi && x.tangent == y.tangent;
                                   }),
                       res.brackets.end());

    const std::size_t m = res.brackets.size();
    std::vector<std::optional<RootInfo>> found(m);
    std::vector<std::string> notes(m);
    parallel_for(m, opts.threads, [&](std::size_t i) {
        try {
            RootInfo info = find_ground(model, res.brackets[i], opts);
            if (info.depth > opts.depth_max) {
                std::ostringstream os;
                os.precision(10);
                os << "flip near beta = " << info.beta << " rejected: decay depth " << info.depth;
                notes[i] = os.str();
                return;
            }
            const RadialSolution sol(model, info, opts);
            info.r_reliable = sol.r_reliable();
            info.residual = sol.tail_sup();
            info.tail_mismatch = sol.tail_mismatch();
            found[i] = info;
        } catch (const PreconditionError& e) {
            notes[i] = std::string("candidate dropped: ") + e.what();
        }
    });
    for (std::size_t i = 0; i < m; ++i) {
        if (found[i]) {
            res.roots.push_back(*found[i]);
        } else {
            res.rejected.push_back(res.brackets[i]);
            if (!notes[i].empty()) res.warnings.push_back(notes[i]);
        }
    }
    std::sort(res.roots.begin(), res.roots.end(),
              [](const RootInfo& a, const RootInfo& b) { return a.beta < b.beta; });
    // a tangent candidate can land on a root already found from a sign flip
    std::vector<RootInfo> unique;
    for (const auto& r : res.roots) {
        if (!unique.empty() && std::abs(r.beta - unique.back().beta) <= 1e-6 * r.beta) {
            if (unique.back().tangent && !r.tangent) unique.back() = r;
            continue;
        }
        unique.push_back(r);
    }
    res.roots = std::move(unique);
    res.multiplicity = static_cast<int>(res.roots.size());
    if (!res.roots.empty())
        res.warnings.push_back("roots closer than one scan cell can be missed");
    return res;
}

// ---------------------------------------------------------------------------
// RadialSolution

namespace {

struct TailRhs {
    const RadialModel* model;
    double N1;
    void operator()(double r, const ode::State<2>& y, ode::State<2>& dy) const {
        dy[0] = y[1];
        dy[1] = -N1 / r * y[1] + model->V(r) - model->ratio(r, y[0]) - y[1] * y[1];
    }
};

// Backward integration of (log u, u'/u) from R down to rc.
bool integrate_tail(const RadialModel& model, double R, double rc, double Y, const ode::Tolerances& tol,
                    ode::DenseTrajectory<2>* traj, ode::State<2>& out) {
    TailRhs rhs{&model, model.dim() - 1.0};
    const double k = model.V(R) - model.ratio(R, Y);
    ode::Dopri5<2, TailRhs> stepper(rhs, tol);
    stepper.reset(R, {Y, -std::sqrt(std::max(k, 0.0))}, -1.0);
    ode::DenseStep<2> step;
    while (stepper.x() > rc) {
        if (stepper.step(rc, step) != ode::StepStatus::Ok) return false;
        if (traj) traj->push(step);
        if (std::abs(stepper.y()[1]) > 1e8) return false;
    }
    out = stepper.y();
    return std::isfinite(out[0]) && std::isfinite(out[1]);
}

}  // namespace

RadialSolution::RadialSolution(const RadialModel& model, const RootInfo& root, const ShootingOptions& opts)
    : model_(model), beta_(root.beta), r_c_(0.0), r_max_(opts.ivp.r_max) {
    const IVPConfig& cfg = opts.ivp;
    IVPConfig tight = cfg;
    tight.rel_tol *= 1e-2;
    tight.abs_tol *= 1e-2;
    fwd_ = integrate(model, beta_, cfg);
    const auto fine = integrate(model, beta_, tight);
    const double lo = root.lo > 0 && root.lo < beta_ ? root.lo : beta_ * (1 - 1e-12);
    const double hi = root.hi > beta_ ? root.hi : beta_ * (1 + 1e-12);
    const auto slo = integrate(model, lo, cfg);
    const auto shi = integrate(model, hi, cfg);

    const double r_lim = std::min({fwd_.r_end(), fine.r_end(), slo.r_end(), shi.r_end()});
    const double h = 5e-3;
    double r_c = fwd_.r_begin();
    for (double r = fwd_.r_begin() + h; r <= r_lim; r += h) {
        const double u = fwd_.u_at(r);
        if (!(u > 0.0)) break;
        const double spread = std::max(std::abs(slo.u_at(r) - shi.u_at(r)), std::abs(fine.u_at(r) - u));
        if (spread > opts.reliable_rel * u) break;
        r_c = r;
    }
    // attach the tail where the forward trajectory is decreasing
    while (r_c > fwd_.r_begin() + h && fwd_.eval(r_c)[kUp] >= 0.0) r_c -= h;
    r_c_ = r_c;
    u_c_ = fwd_.u_at(r_c_);
    if (r_c_ >= r_max_ - h) {
        r_c_ = std::min(r_c_, r_max_);
        tail_sup_ = std::abs(fwd_.u_at(r_max_));
        return;
    }

    const double yc = std::log(u_c_);
    const double pc = fwd_.eval(r_c_)[kUp] / u_c_;
    ode::Tolerances tol;
    tol.rel = cfg.rel_tol;
    tol.abs = cfg.abs_tol;
    // The start slope -sqrt(V - g/u) is only asymptotic; its error relaxes
    // like exp(-2 int |p|) going inward, so start far enough beyond r_max.
    const double b_fit = std::max(-pc / (2 * r_c_), 1e-3);
    const double y_R = yc - b_fit * (r_max_ * r_max_ - r_c_ * r_c_);
    const double k_R = std::max(model_.V(r_max_) - model_.ratio(r_max_, y_R), 1.0);
    const double R_ext = r_max_ + std::clamp(30.0 / std::sqrt(k_R), 1.0, 20.0);
    // Gaussian extrapolation y = yc - b (r^2 - rc^2) with b from the slope at r_c
    const double Y0 = yc - b_fit * (R_ext * R_ext - r_c_ * r_c_);
    // y(r_c; Y) increases with Y on the decaying branch; past it the backward
    // run overshoots (u' >= 0 at r_c) or blows up, both counted as too large.
    auto F = [&](double Y) {
        ode::State<2> end{};
        if (!integrate_tail(model_, R_ext, r_c_, Y, tol, nullptr, end) || end[1] >= 0.0) return 1e6;
        return end[0] - yc;
    };

    const double f0 = F(Y0);
    double step = 1.0 + 0.05 * std::abs(Y0);
    double a = Y0, fa = f0, b = Y0, fb = f0;
    for (int i = 0; i < 60 && (fa > 0) == (fb > 0); ++i) {
        if (f0 > 0) {
            b = a;
            fb = fa;
            a -= step;
            fa = F(a);
        } else {
            a = b;
            fa = fb;
            b += step;
            fb = F(b);
        }
        step *= 2;
    }
    if ((fa > 0) == (fb > 0)) throw SolverError("tail reconstruction could not bracket log u(r_max)");
    std::uintmax_t iters = 200;
    const auto bounds = boost::math::tools::toms748_solve(
        F, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(50), iters);
    const double Y = 0.5 * (bounds.first + bounds.second);
    ode::State<2> end{};
    if (!integrate_tail(model_, R_ext, r_c_, Y, tol, &tail_, end))
        throw SolverError("tail reconstruction failed at the matched value");
    has_tail_ = true;
    mismatch_ = std::abs(end[1] - pc) / std::max(std::abs(pc), 1e-300);
    tail_sup_ = 0.0;
    for (const auto& s : tail_.steps())
        if (s.x0 <= r_max_) tail_sup_ = std::max(tail_sup_, std::exp(s.rcont[0][0]));
    tail_sup_ = std::max(tail_sup_, std::exp(end[0]));
}

double RadialSolution::envelope(double r, double tau) const {
    if (r <= r_c_) return u(r);
    return u_c_ * std::exp(-tau * (r * r - r_c_ * r_c_));
}

double RadialSolution::u(double r) const {
    if (r < 0.0) throw DomainError("radius must be non-negative");
    const double eps = fwd_.r_begin();
    if (r < eps) return beta_ + (fwd_.u().front() - beta_) * (r / eps) * (r / eps);
    if (!has_tail_ || r <= r_c_) return fwd_.u_at(std::min(r, r_max_));
    return std::exp(tail_.eval(std::min(r, r_max_))[0]);
}

double RadialSolution::du(double r) const {
    if (r < 0.0) throw DomainError("radius must be non-negative");
    const double eps = fwd_.r_begin();
    if (r < eps) return fwd_.du().front() * (r / eps);
    if (!has_tail_ || r <= r_c_) return fwd_.eval(std::min(r, r_max_))[kUp];
    const auto s = tail_.eval(std::min(r, r_max_));
    return s[1] * std::exp(s[0]);
}

std::vector<double> RadialSolution::nodes() const {
    std::vector<double> out;
    for (double r : fwd_.nodes())
        if (r < r_c_) out.push_back(r);
    out.push_back(r_c_);
    if (has_tail_) {
        std::vector<double> t;
        for (const auto& s : tail_.steps()) t.push_back(s.x0);
        std::sort(t.begin(), t.end());
        for (double r : t)
            if (r > r_c_ && r < r_max_) out.push_back(r);
        out.push_back(r_max_);
    }
    return out;
}

// ---------------------------------------------------------------------------

LargeBetaReport large_beta_check(const RadialModel& model, double beta, const IVPConfig& cfg) {
    if (!(beta >= 10.0)) throw DomainError("large_beta_check needs beta >= 10");
    LargeBetaReport rep;
    rep.beta = beta;
    const BesselProfile w(model.dim(), 2.0 * model.B(0.0));
    rep.bessel_zero = w.first_zero();
    const double s = std::sqrt(std::log(beta));

    IVPConfig c = cfg;
    c.r_max = std::max(2.0, 1.5 * w.r_max() / s);
    const auto sol = integrate(model, beta, c, false, false);
    const auto& r = sol.nodes();
    const auto& u = sol.u();
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if (u[i] > 0.0 && u[i + 1] <= 0.0) {
            rep.first_zero = polish_root([&](double x) { return sol.u_at(x); }, r[i], r[i + 1], 1e-14);
            break;
        }
    }
    rep.scaled_zero = rep.first_zero * s;
    const int n = 2000;
    for (int k = 0; k <= n; ++k) {
        const double x = rep.bessel_zero * k / n;
        const double rr = x / s;
        const double v = (rr < sol.r_begin() ? sol.u().front() : sol.u_at(rr)) / beta;
        rep.deviation = std::max(rep.deviation, std::abs(v - w(x)));
    }
    return rep;
}

}  // namespace logschroed
