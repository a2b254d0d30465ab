#include "logschroed/variational.hpp"

#include <cmath>
#include <memory>
#include <sstream>

// pchip.hpp in Boost 1.74 calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "logschroed/errors.hpp"

namespace logschroed {

namespace {

constexpr int kGraded = 12;  // geometric sub-cells in the first cell

struct Rule {
    double x[5], w[5];
};

Rule gauss5() {
    using G = boost::math::quadrature::gauss<double, 5>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    return {{-a[2], -a[1], a[0], a[1], a[2]}, {wt[2], wt[1], wt[0], wt[1], wt[2]}};
}

void require_log(const RadialModel& m) {
    if (!m.is_logarithmic()) throw DomainError("functionals are defined for the logarithmic model");
}

}  // namespace

double sphere_area(int dim) { return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim); }

RadialFunction RadialFunction::from_solution(const RadialSolution& sol) {
    auto s = std::make_shared<const RadialSolution>(sol);
    RadialFunction f;
    f.dim = sol.model().dim();
    f.r_max = sol.r_max();
    f.u = [s](double r) { return s->u(r); };
    f.du = [s](double r) { return s->du(r); };
    return f;
}

RadialFunction RadialFunction::scaled(double s) const {
    RadialFunction f = *this;
    auto u0 = u, du0 = du;
    f.u = [u0, s](double r) { return s * u0(r); };
    f.du = [du0, s](double r) { return s * du0(r); };
    return f;
}

void RadialProfile::make_mesh(int cells) {
    if (cells < 2) throw DomainError("profile mesh needs at least two cells");
    if (!(R_ > 0.0)) throw DomainError("profile radius must be positive");
    const double h = R_ / cells;
    std::vector<std::pair<double, double>> parts;
    double a = h * std::ldexp(1.0, -kGraded);
    parts.push_back({0.0, a});
    for (int k = 0; k < kGraded; ++k) {
        parts.push_back({a, 2 * a});
        a *= 2;
    }
    for (int c = 1; c < cells; ++c) parts.push_back({c * h, (c + 1) * h});

    const Rule g = gauss5();
    const double omega = sphere_area(dim_);
    r_.clear();
    w_.clear();
    for (const auto& [lo, hi] : parts) {
        const double m = 0.5 * (lo + hi), l = 0.5 * (hi - lo);
        for (int i = 0; i < 5; ++i) {
            const double r = m + l * g.x[i];
            r_.push_back(r);
            w_.push_back(g.w[i] * l * omega * std::pow(r, dim_ - 1));
        }
    }
    // exactness for r^k r^(N-1), k <= 4, on the graded cell and one regular cell
    for (const auto& [lo, hi] : {parts[0], parts.back()}) {
        for (int k = 0; k <= 4; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < r_.size(); ++i)
                if (r_[i] > lo && r_[i] < hi) sum += w_[i] * std::pow(r_[i], k);
            const int p = k + dim_;
            const double exact = omega * (std::pow(hi, p) - std::pow(lo, p)) / p;
            if (std::abs(sum - exact) > 1e-12 * std::abs(exact))
                throw SolverError("profile quadrature failed its exactness check");
        }
    }
}

RadialProfile RadialProfile::build(const RadialFunction& f, int cells, double R) {
    if (f.dim < 2) throw DomainError("dimension must be at least 2");
    RadialProfile p;
    p.dim_ = f.dim;
    p.R_ = R > 0.0 ? R : f.r_max;
    p.make_mesh(cells);
    p.u_.reserve(p.r_.size());
    p.du_.reserve(p.r_.size());
    for (double r : p.r_) {
        p.u_.push_back(f.u(r));
        p.du_.push_back(f.du(r));
    }
    p.u_R_ = f.u(p.R_);
    return p;
}

RadialProfile RadialProfile::from_samples(int dim, const std::vector<double>& r, const std::vector<double>& u,
                                          int cells, double R) {
    if (dim < 2) throw DomainError("dimension must be at least 2");
    if (r.size() != u.size() || r.size() < 4) throw DomainError("need at least four matching samples");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw DomainError("sample radii must increase");
    RadialProfile p;
    p.dim_ = dim;
    p.R_ = R > 0.0 ? R : r.back();
    if (p.R_ > r.back() || r.front() > 0.0) throw DomainError("samples must cover [0, R]");
    p.make_mesh(cells);
    // left slope 0 encodes the radial symmetry at the origin
    auto x = r, y = u;
    boost::math::interpolators::pchip<std::vector<double>> spline(std::move(x), std::move(y), 0.0);
    for (double q : p.r_) {
        p.u_.push_back(spline(q));
        p.du_.push_back(spline.prime(q));
    }
    p.u_R_ = spline(p.R_);
    return p;
}

RadialProfile RadialProfile::scaled(double s) const {
    RadialProfile p = *this;
    for (auto& v : p.u_) v *= s;
    for (auto& v : p.du_) v *= s;
    p.u_R_ *= s;
    return p;
}

FunctionalReport functionals(const RadialProfile& p, const RadialModel& model) {
    require_log(model);
    if (model.dim() != p.dim()) throw DomainError("profile and model dimensions differ");
    FunctionalReport rep;
    double grad = 0.0, pot = 0.0, mass = 0.0, logt = 0.0;
    int skipped = 0;
    const auto& r = p.nodes();
    const auto& w = p.weights();
    const auto& u = p.values();
    const auto& du = p.slopes();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double V = model.V(r[i]), B = model.B(r[i]);
        if (!std::isfinite(V)) {
            ++skipped;
            continue;
        }
        const double u2 = u[i] * u[i];
        grad += w[i] * du[i] * du[i];
        pot += w[i] * V * u2;
        mass += w[i] * B * u2;
        if (std::abs(u[i]) > 1e-150) logt += w[i] * B * u2 * std::log(u2);
    }
    rep.I = 0.5 * (grad + pot + mass) - 0.5 * logt;
    rep.J = grad + pot - logt;
    rep.mass = mass;
    rep.t_u = mass > 0.0 ? rep.J / mass : 0.0;

    const double R = p.R(), uR = std::abs(p.u_at_R());
    if (uR > 1e-12) {
        std::ostringstream os;
        os << "profile has not decayed at R = " << R << " (u = " << uR << ")";
        rep.warnings.push_back(os.str());
    }
    if (skipped > 0) rep.warnings.push_back(std::to_string(skipped) + " nodes skipped: V not finite");
    if (uR > 0.0) {
        const double VR = model.V(R);
        const double scale = 1.0 + std::abs(std::isfinite(VR) ? VR : 0.0) + std::abs(2.0 * std::log(uR)) +
                             model.B(R);
        rep.tail_bound = sphere_area(p.dim()) * std::pow(R, p.dim() - 2) * uR * uR / 1.8 * scale;
    }
    return rep;
}

double energy_I(const RadialProfile& p, const RadialModel& model) { return functionals(p, model).I; }
double nehari_J(const RadialProfile& p, const RadialModel& model) { return functionals(p, model).J; }
double weighted_mass(const RadialProfile& p, const RadialModel& model) { return functionals(p, model).mass; }

NehariProjection nehari_project(const RadialProfile& p, const RadialModel& model) {
    const auto rep = functionals(p, model);
    if (!(rep.mass > 0.0)) throw DomainError("cannot project the zero profile");
    return {rep.t_u, p.scaled(std::exp(0.5 * rep.t_u))};
}

}  // namespace logschroed
