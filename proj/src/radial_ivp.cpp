#include "logschroed/radial_ivp.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "logschroed/errors.hpp"

namespace logschroed {

RadialModel RadialModel::logarithmic(Potential pot, PerturbationPair pair) {
    RadialModel m;
    m.log_ = true;
    m.dim_ = pot.dim();
    m.pot_ = std::move(pot);
    m.pair_ = pair;
    return m;
}

RadialModel RadialModel::power(int dim, double alpha, double sigma) {
    if (dim < 2) throw DomainError("dimension N must be >= 2");
    if (!(alpha > 1.0 - dim)) throw DomainError("power family requires alpha > 1 - N");
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    RadialModel m;
    m.log_ = false;
    m.dim_ = dim;
    m.alpha_ = alpha;
    m.sigma_ = sigma;
    return m;
}

double RadialModel::V(double r) const {
    if (!log_) return std::pow(r, alpha_ * sigma_);
    if (pair_.delta() == 0.0) return pot_->V(r);
    return pot_->V(r) + pair_.delta() * pair_.a(r);
}

double RadialModel::B(double r) const { return log_ ? pair_.B(r) : 1.0; }

double RadialModel::g(double r, double u, double floor_u) const {
    const double au = std::abs(u);
    if (au < floor_u) return 0.0;
    if (log_) return B(r) * u * 2.0 * std::log(au);
    return std::pow(au, 2 * sigma_) * u;
}

double RadialModel::dg(double r, double u) const {
    const double au = std::max(std::abs(u), 1e-300);
    if (log_) return B(r) * (2.0 * std::log(au) + 2.0);
    return (2 * sigma_ + 1) * std::pow(au, 2 * sigma_);
}

double RadialModel::ratio(double r, double y) const {
    if (log_) return 2.0 * B(r) * y;
    return std::exp(2 * sigma_ * y);
}

std::string RadialModel::describe() const {
    if (log_) {
        std::ostringstream os;
        os << "log[" << pot_->describe();
        if (pair_.delta() != 0.0) os << ", delta=" << pair_.delta();
        os << "]";
        return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << "power[N=" << dim_ << ", alpha=" << alpha_ << ", sigma=" << sigma_ << "]";
    return os.str();
}

void IVPConfig::validate() const {
    if (!(epsilon0 > 0.0 && epsilon0 < 1e-2)) throw DomainError("solver.epsilon0 must lie in (0, 1e-2)");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("solver tolerances must be positive");
    if (!(r_max > 1.0)) throw DomainError("solver.r_max must exceed 1");
    if (!(grow_factor > 1.0)) throw DomainError("solver.grow_factor must exceed 1");
    if (!(floor_u > 0.0)) throw DomainError("solver.floor_u must be positive");
}

std::string to_string(EventTag tag) {
    switch (tag) {
        case EventTag::CrossesZero: return "CrossesZero";
        case EventTag::Grows: return "Grows";
        case EventTag::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

IVPState IVPSolution::eval(double r) const {
    r = std::clamp(r, r_.front(), r_end_);
    return traj_.eval(r);
}

// ---------------------------------------------------------------------------
// startup

namespace {

using Gauss = boost::math::quadrature::gauss<double, 15>;

// t^{N-1} * int_t^r s^{1-N} ds
double kernel(int N, double t, double r) {
    if (t >= r) return 0.0;
    if (N == 2) return t * std::log(r / t);
    return t * (1.0 - std::pow(t / r, N - 2)) / (N - 2);
}

// Integral over [0, r] on geometric panels; panel bounds go into the error.
template <typename F>
double graded_integral(F&& f, double r, int panels) {
    double sum = 0.0;
    double hi = r;
    for (int k = 0; k <= panels; ++k) {
        const double lo = k == panels ? 0.0 : 0.5 * hi;
        const double part = Gauss::integrate(f, lo, hi);
        if (!std::isfinite(part)) {
            std::ostringstream os;
            os << "startup quadrature failed on [" << lo << ", " << hi << "]";
            throw StartupError(os.str(), lo, hi);
        }
        sum += part;
        hi = lo;
    }
    return sum;
}

}  // namespace

std::pair<double, double> startup(const RadialModel& model, double beta, double eps) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(eps > 0.0)) throw DomainError("startup radius must be positive");
    const int N = model.dim();
    auto f = [&](double t, double u) { return model.V(t) * u - model.g(t, u); };
    auto u1 = [&](double t) {
        if (t <= 0.0) return beta;
        return beta + graded_integral([&](double s) { return kernel(N, s, t) * f(s, beta); }, t, 4);
    };
    const double u2 =
        beta + graded_integral([&](double t) { return kernel(N, t, eps) * f(t, u1(t)); }, eps, 8);
    const double du2 =
        graded_integral([&](double t) { return std::pow(t / eps, N - 1) * f(t, u1(t)); }, eps, 8);
    return {u2, du2};
}

// ---------------------------------------------------------------------------
// integrate

IVPSolution integrate(const RadialModel& model, double beta, const IVPConfig& cfg, bool variational,
                      bool events) {
    cfg.validate();
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    const double N1 = model.dim() - 1.0;
    const double floor_u = cfg.floor_u;

    auto rhs = [&model, N1, floor_u, variational](double r, const IVPState& y, IVPState& dy) {
        const double v = model.V(r);
        dy[kU] = y[kUp];
        dy[kUp] = -N1 / r * y[kUp] + v * y[kU] - model.g(r, y[kU], floor_u);
        if (variational) {
            dy[kPhi] = y[kPhip];
            dy[kPhip] = -N1 / r * y[kPhip] + (v - model.dg(r, y[kU])) * y[kPhi];
        } else {
            dy[kPhi] = 0.0;
            dy[kPhip] = 0.0;
        }
    };

    const double eps = cfg.epsilon0;
    IVPState y0{};
    const auto [ue, upe] = startup(model, beta, eps);
    y0[kU] = ue;
    y0[kUp] = upe;
    if (variational) {
        // phi = du/dbeta at eps by central differencing of the startup map
        const double hb = 1e-6 * beta;
        const auto p = startup(model, beta + hb, eps);
        const auto m = startup(model, beta - hb, eps);
        y0[kPhi] = (p.first - m.first) / (2 * hb);
        y0[kPhip] = (p.second - m.second) / (2 * hb);
    }

    ode::Tolerances tol;
    tol.rel = cfg.rel_tol;
    tol.abs = cfg.abs_tol;
    ode::Dopri5<4, decltype(rhs)> stepper(rhs, tol);
    stepper.reset(eps, y0, +1.0);

    IVPSolution sol;
    sol.beta_ = beta;
    sol.variational_ = variational;
    sol.r_.push_back(eps);
    sol.u_.push_back(ue);
    sol.up_.push_back(upe);
    sol.min_ratio_ = ue / beta;

    const double grow_level = cfg.grow_factor * beta;
    const double descent = -1e-6 * beta;
    bool descended = upe < descent;
    ode::DenseStep<4> step;

    while (true) {
        const IVPState prev = stepper.y();
        const auto status = stepper.step(cfg.r_max, step);
        if (status != ode::StepStatus::Ok) {
            std::ostringstream os;
            os.precision(17);
            os << "integration failed ("
               << (status == ode::StepStatus::StepUnderflow  ? "step-size underflow"
                   : status == ode::StepStatus::NonFinite    ? "non-finite state"
                                                             : "too many steps")
               << ") at r = " << stepper.x() << ", u = " << prev[kU] << ", u' = " << prev[kUp]
               << ", beta = " << beta;
            throw SolverError(os.str());
        }
        sol.traj_.push(step);
        const IVPState cur = stepper.y();
        const double x0 = step.x0, x1 = step.x1();
        const double ptol = std::max(cfg.abs_tol, 1e-14 * x1);

        std::optional<Classification> ev;
        auto consider = [&ev, events](EventTag tag, double r, bool turning) {
            if (!events) return;
            if (!ev || r < ev->radius) ev = Classification{tag, r, turning};
        };
        if (cur[kU] <= 0.0) {
            consider(EventTag::CrossesZero,
                     polish_root([&](double x) { return step.eval(x)[kU]; }, x0, x1, ptol), false);
        }
        if (descended && prev[kUp] < 0.0 && cur[kUp] >= 0.0) {
            const double rm = polish_root([&](double x) { return step.eval(x)[kUp]; }, x0, x1, ptol);
            if (step.eval(rm)[kU] > 0.0) consider(EventTag::Grows, rm, true);
        }
        if (cur[kU] > grow_level && cur[kUp] > 0.0) {
            const double rg =
                prev[kU] > grow_level
                    ? x0
                    : polish_root([&](double x) { return step.eval(x)[kU] - grow_level; }, x0, x1, ptol);
            consider(EventTag::Grows, rg, false);
        }

        if (ev) {
            sol.event_ = *ev;
            sol.r_end_ = ev->radius;
            const IVPState ye = step.eval(ev->radius);
            if (ev->radius > sol.r_.back()) {
                sol.r_.push_back(ev->radius);
                sol.u_.push_back(ye[kU]);
                sol.up_.push_back(ye[kUp]);
            }
            sol.min_ratio_ = std::min(sol.min_ratio_, std::max(ye[kU], 0.0) / beta);
            if (ev->tag == EventTag::CrossesZero)
                sol.depth_ = std::abs(ye[kUp]) / beta;
            else if (ev->turning)
                sol.depth_ = ye[kU] / beta;
            else
                sol.depth_ = sol.min_ratio_;
            return sol;
        }

        sol.r_.push_back(x1);
        sol.u_.push_back(cur[kU]);
        sol.up_.push_back(cur[kUp]);
        sol.min_ratio_ = std::min(sol.min_ratio_, cur[kU] / beta);
        if (cur[kUp] < descent) descended = true;
        if (x1 >= cfg.r_max) {
            sol.event_ = Classification{EventTag::Undetermined, cfg.r_max, false};
            sol.r_end_ = cfg.r_max;
            sol.depth_ = std::abs(cur[kU]) / beta;
            return sol;
        }
    }
}

// ---------------------------------------------------------------------------
// Bessel-type profile

BesselProfile::BesselProfile(int dim, double b0) : dim_(dim), b0_(b0) {
    if (dim < 2) throw DomainError("dimension N must be >= 2");
    if (!(b0 > 0.0)) throw DomainError("b0 must be positive");
    r_series_ = 1.0 / std::sqrt(b0);

    const double N1 = dim - 1.0;
    auto rhs = [N1, b0](double r, const ode::State<2>& y, ode::State<2>& dy) {
        dy[0] = y[1];
        dy[1] = -N1 / r * y[1] - b0 * y[0];
    };
    ode::Tolerances tol;
    tol.rel = 1e-13;
    tol.abs = 1e-15;
    ode::Dopri5<2, decltype(rhs)> stepper(rhs, tol);

    // start value and slope from the series
    double w = 0.0, dw = 0.0, c = 1.0;
    const double rs = r_series_;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) c *= -b0 / (2.0 * k * (2.0 * k + dim - 2));
        const double term = c * std::pow(rs, 2 * k);
        w += term;
        if (k > 0) dw += 2.0 * k * term / rs;
        if (k > 2 && std::abs(term) < 1e-20) break;
    }
    stepper.reset(rs, {w, dw}, +1.0);

    ode::DenseStep<2> step;
    double stop = 1e300;
    while (stepper.x() < stop) {
        const double w_prev = stepper.y()[0];
        const double target = std::isfinite(stop) && stop < 1e299 ? stop : 1e3 / std::sqrt(b0);
        if (stepper.step(target, step) != ode::StepStatus::Ok)
            throw SolverError("Bessel continuation failed");
        traj_.push(step);
        if (r1_ == 0.0 && w_prev > 0.0 && stepper.y()[0] <= 0.0) {
            r1_ = polish_root([&](double x) { return step.eval(x)[0]; }, step.x0, step.x1(), 1e-15);
            stop = r1_ + 1.0;
        }
    }
}

double BesselProfile::series(double r) const {
    double w = 0.0, c = 1.0;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) c *= -b0_ / (2.0 * k * (2.0 * k + dim_ - 2));
        const double term = c * std::pow(r, 2 * k);
        w += term;
        if (k > 2 && std::abs(term) < 1e-20) break;
    }
    return w;
}

double BesselProfile::operator()(double r) const {
    if (r < 0.0) throw DomainError("radius must be non-negative");
    if (r <= r_series_) return series(r);
    return traj_.eval(std::min(r, r_max()))[0];
}

BesselProfile bessel_w(int dim, double b0) { return BesselProfile(dim, b0); }

}  // namespace logschroed
