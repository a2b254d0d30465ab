#include "logschroed/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "logschroed/errors.hpp"

namespace logschroed {

namespace {

struct Point {
    double v, dv, E;
};

Point energy_point(const RadialFunction& f, const RadialModel& model, double r) {
    const int N = f.dim;
    const auto& pair = model.pair();
    const double K = pair.K(r, 0), dK = pair.K(r, 1);
    const double u = f.u(r), du = f.du(r);
    const double s = std::pow(r, 0.5 * (N - 1));
    const double k = std::pow(K, -0.25);
    const double v = k * s * u;
    const double dv = k * (-0.25 * dK / K * s * u + 0.5 * (N - 1) * s / r * u + s * du);
    const double G = eval_G_delta(model.potential(), pair, r);
    const double v2 = v * v;
    const double E = 0.5 * K * dv * dv - 0.5 * G * v2 + 0.5 * (v2 > 0.0 ? v2 * std::log(v2) - v2 : 0.0);
    return {v, dv, E};
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "fail";
}

LiouvilleProfile liouville_transform(const RadialFunction& f, const PerturbationPair& pair,
                                     const std::vector<double>& radii) {
    LiouvilleProfile out;
    const int N = f.dim;
    for (double r : radii) {
        if (!(r > 0.0)) throw DomainError("Liouville transform needs r > 0");
        const double K = pair.K(r, 0), dK = pair.K(r, 1);
        const double u = f.u(r), du = f.du(r);
        const double s = std::pow(r, 0.5 * (N - 1)), k = std::pow(K, -0.25);
        out.r.push_back(r);
        out.v.push_back(k * s * u);
        out.dv.push_back(k * (-0.25 * dK / K * s * u + 0.5 * (N - 1) * s / r * u + s * du));
    }
    return out;
}

double EnergyProfile::max_abs_E() const {
    double m = 0.0;
    for (double e : E) m = std::max(m, std::abs(e));
    return m;
}

std::vector<double> energy_mesh(double r_min, double r_max, double h) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !(h > 0.0)) throw DomainError("invalid energy mesh");
    std::vector<double> r;
    const double knee = std::min(0.5, r_max);
    if (r_min < knee) {
        const int n = std::max(2, static_cast<int>(std::ceil(std::log(knee / r_min) / std::log(1.05))));
        for (int i = 0; i < n; ++i) r.push_back(r_min * std::pow(knee / r_min, static_cast<double>(i) / n));
    }
    const int m = static_cast<int>(std::floor((r_max - knee) / h + 1e-9));
    for (int i = 0; i <= m; ++i) r.push_back(knee + i * h);
    if (r.back() < r_max - 1e-12) r.push_back(r_max);
    return r;
}

EnergyProfile energy_E(const RadialFunction& f, const RadialModel& model, const std::vector<double>& radii) {
    if (!model.is_logarithmic()) throw DomainError("the energy diagnostic is defined for the logarithmic model");
    if (model.dim() != f.dim) throw DomainError("profile and model dimensions differ");
    EnergyProfile e;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        if (!(r > 0.0)) throw DomainError("energy radii must be positive");
        const auto p = energy_point(f, model, r);
        const double dG = eval_dG_delta(model.potential(), model.pair(), r);
        e.r.push_back(r);
        e.v.push_back(p.v);
        e.dv.push_back(p.dv);
        e.E.push_back(p.E);
        e.dG.push_back(dG);
        e.dE_formula.push_back(-0.5 * dG * p.v * p.v);
        // one-sided near r_max so the stencil stays inside the profile
        const double h = std::min(1e-3, 0.05 * r);
        auto E = [&](double x) { return energy_point(f, model, x).E; };
        double d;
        if (r + 2 * h <= f.r_max) {
            d = (E(r - 2 * h) - 8 * E(r - h) + 8 * E(r + h) - E(r + 2 * h)) / (12 * h);
        } else {
            d = (25 * E(r) - 48 * E(r - h) + 36 * E(r - 2 * h) - 16 * E(r - 3 * h) + 3 * E(r - 4 * h)) / (12 * h);
        }
        e.dE_diff.push_back(d);
    }
    return e;
}

PatternResult lemma31_pattern(const EnergyProfile& e, const RadialModel& model) {
    PatternResult res;
    const auto v2 = check_V2(model.potential(), geometric_grid(1e-3, 100.0, 400));
    if (!v2.pass) {
        res.verdict = Verdict::NotApplicable;
        res.reason = "potential fails the G' sign condition: " + v2.reason;
        return res;
    }
    if (e.E.size() < 3) throw DomainError("energy profile too short");
    const double slack = 1e-9 * e.max_abs_E();
    res.argmax = static_cast<std::size_t>(std::max_element(e.E.begin(), e.E.end()) - e.E.begin());
    const std::size_t peak = model.dim() <= 3 ? 0 : res.argmax;
    if (model.dim() >= 4 && (peak == 0 || peak + 1 == e.E.size())) {
        res.witness = peak;
        res.reason = "no interior maximum";
        return res;
    }
    for (std::size_t i = 0; i + 1 < e.E.size(); ++i) {
        const bool ok = i < peak ? e.E[i + 1] > e.E[i] - slack : e.E[i + 1] < e.E[i] + slack;
        if (!ok) {
            res.witness = i + 1;
            res.reason = i < peak ? "E not increasing before its maximum" : "E not decreasing";
            return res;
        }
    }
    res.verdict = Verdict::Pass;
    return res;
}

TailReport tail_checks(const RadialFunction& f, double flux_tol) {
    const double R = f.r_max;
    TailReport t;
    t.barrier_decreasing = true;
    double prev = INFINITY;
    const int n = 40;
    for (int i = 0; i <= n; ++i) {
        const double r = 0.9 * R + 0.1 * R * i / n;
        const double u = f.u(r);
        if (!(u > 0.0)) {
            t.barrier_decreasing = false;
            break;
        }
        const double w = std::log(u) + 0.45 * r * r;
        if (!(w < prev)) t.barrier_decreasing = false;
        prev = w;
        t.flux_max = std::max(t.flux_max, std::abs(std::pow(r, f.dim - 1) * f.du(r)));
    }
    t.barrier_final = std::isfinite(prev) ? std::exp(prev) : INFINITY;
    t.flux_ok = t.flux_max <= flux_tol;
    const double h = 0.01;
    t.monotone_from = 0.0;
    for (double r = R; r > h; r -= h) {
        if (!(f.du(r) < 0.0)) {
            t.monotone_from = r;
            break;
        }
    }
    return t;
}

RatioReport ratio_monotonicity(const RadialFunction& u1, const RadialFunction& u2, const std::vector<double>& radii) {
    RatioReport rep;
    if (radii.size() < 2) throw DomainError("ratio check needs at least two radii");
    rep.monotone = true;
    double lo = INFINITY, hi = -INFINITY;
    double prev = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double a = u1.u(r), b = u2.u(r);
        if (!(a > 0.0) || !(b > 0.0)) throw DomainError("ratio check needs positive profiles");
        const double q = a / b;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
        if (!((u1.du(r) * b - a * u2.du(r)) > 0.0)) rep.monotone = false;
        const double d = a - b;
        if (i > 0 && (d > 0.0) != (prev > 0.0)) {
            ++rep.crossings;
            rep.crossing_radii.push_back(polish_root(
                [&](double x) { return u1.u(x) - u2.u(x); }, radii[i - 1], r, 1e-12));
        }
        prev = d;
    }
    rep.constant = hi - lo <= 1e-12 * std::abs(hi);
    if (rep.constant) rep.monotone = false;
    return rep;
}

ContradictionReport contradiction_quantity(const RadialFunction& u1, const RadialFunction& u2,
                                           const RadialModel& model, const std::vector<double>& radii) {
    ContradictionReport rep;
    rep.decreasing = true;
    for (double r : radii) {
        const auto p1 = energy_point(u1, model, r), p2 = energy_point(u2, model, r);
        const double q = p2.v / p1.v;
        const double D = q * q * p1.E - p2.E;
        if (!rep.D.empty() && !(D < rep.D.back())) {
            if (!rep.first_increase) rep.first_increase = r;
            rep.decreasing = false;
        }
        rep.r.push_back(r);
        rep.D.push_back(D);
    }
    return rep;
}

}  // namespace logschroed
