#include "logschroed/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "logschroed/errors.hpp"

namespace logschroed {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::LogPower: return "log-power";
        case PotentialKind::InvertedHarmonic: return "inverted-harmonic";
        case PotentialKind::Constant: return "constant";
        case PotentialKind::Table: return "table";
    }
    return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& s) {
    if (s == "log-power") return PotentialKind::LogPower;
    if (s == "inverted-harmonic") return PotentialKind::InvertedHarmonic;
    if (s == "constant") return PotentialKind::Constant;
    if (s == "table") return PotentialKind::Table;
    throw DomainError("unknown potential kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw DomainError("spline needs at least 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("spline abscissae must be strictly increasing");
    // tridiagonal system for natural spline second derivatives
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        const double a = h0 / 6, b = (h0 + h1) / 3, cc = h1 / 6;
        const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double x) const {
    if (x < x_.front()) return y_.front() + derivative(x_.front()) * (x - x_.front());
    if (x > x_.back()) return y_.back() + derivative(x_.back()) * (x - x_.back());
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6;
}

double CubicSpline::derivative(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h - (3 * A * A - 1) / 6 * h * m_[i] + (3 * B * B - 1) / 6 * h * m_[i + 1];
}

double CubicSpline::second_derivative(double x) const {
    if (x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(PotentialKind kind, int dim, std::vector<double> params)
    : kind_(kind), dim_(dim), params_(std::move(params)) {
    if (dim_ < 2) throw DomainError("dimension N must be >= 2");
}

Potential Potential::log_power(int dim, double a1, double a2, double a3, double a4) {
    if (!(a1 > 1.0 - dim))
        throw DomainError("log-power family requires alpha1 > 1 - N (alpha1 = " + std::to_string(a1) + ")");
    Potential p(PotentialKind::LogPower, dim, {a1, a2, a3, a4});
    p.singular_ = a1 != 0.0 || (a2 != 0.0 && a3 < 0.0);
    return p;
}

Potential Potential::inverted_harmonic(int dim, double mu) {
    return Potential(PotentialKind::InvertedHarmonic, dim, {mu});
}

Potential Potential::constant(int dim, double c) { return Potential(PotentialKind::Constant, dim, {c}); }

Potential Potential::table(int dim, std::vector<double> r, std::vector<double> v) {
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!(r[i] > 0.0) || !std::isfinite(v[i])) throw DomainError("table potential needs r > 0 and finite V");
    Potential p(PotentialKind::Table, dim, {});
    p.spline_ = std::make_shared<const CubicSpline>(std::move(r), std::move(v));
    return p;
}

Potential Potential::table_from_csv(int dim, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open potential table '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0, b = 0;
        if (!(ss >> a >> b)) {
            if (r.empty()) continue;  // header
            throw ConfigError("malformed row in potential table '" + path + "'", lineno);
        }
        r.push_back(a);
        v.push_back(b);
    }
    return table(dim, std::move(r), std::move(v));
}

Potential Potential::shifted(double c) const {
    Potential p = *this;
    p.shift_ += c;
    return p;
}

double Potential::V(double r) const {
    switch (kind_) {
        case PotentialKind::LogPower: {
            const auto& a = params_;
            double v = a[0] * std::log(r) + a[3];
            if (a[1] != 0.0) v += a[1] * std::pow(r, a[2]);
            return v + shift_;
        }
        case PotentialKind::InvertedHarmonic: return -params_[0] * r * r + shift_;
        case PotentialKind::Constant: return params_[0] + shift_;
        case PotentialKind::Table: return (*spline_)(r) + shift_;
    }
    return 0.0;
}

double Potential::dV(double r) const {
    switch (kind_) {
        case PotentialKind::LogPower: {
            const auto& a = params_;
            double d = a[0] / r;
            if (a[1] != 0.0 && a[2] != 0.0) d += a[1] * a[2] * std::pow(r, a[2] - 1);
            return d;
        }
        case PotentialKind::InvertedHarmonic: return -2 * params_[0] * r;
        case PotentialKind::Constant: return 0.0;
        case PotentialKind::Table: return spline_->derivative(r);
    }
    return 0.0;
}

double Potential::d2V(double r) const {
    switch (kind_) {
        case PotentialKind::LogPower: {
            const auto& a = params_;
            double d = -a[0] / (r * r);
            if (a[1] != 0.0 && a[2] != 0.0 && a[2] != 1.0)
                d += a[1] * a[2] * (a[2] - 1) * std::pow(r, a[2] - 2);
            return d;
        }
        case PotentialKind::InvertedHarmonic: return -2 * params_[0];
        case PotentialKind::Constant: return 0.0;
        case PotentialKind::Table: return spline_->second_derivative(r);
    }
    return 0.0;
}

std::string Potential::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_) << "(N=" << dim_;
    for (double p : params_) os << ", " << p;
    if (shift_ != 0.0) os << ", shift=" << shift_;
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// PerturbationPair

PerturbationPair::PerturbationPair(double delta, double plateau, double support, double a_amplitude)
    : delta_(delta), plateau_(plateau), support_(support), a_amp_(a_amplitude) {
    if (!(delta >= 0.0)) throw DomainError("delta must be >= 0");
    if (!(plateau > 0.0) || !(support > plateau))
        throw DomainError("perturbation needs 0 < plateau < support");
}

namespace {

// 1 - S(x), S the C^4 polynomial step 126x^5 - 420x^6 + 540x^7 - 315x^8 + 70x^9.
constexpr double kStep[10] = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};

double step_derivative(double x, int order) {
    double sum = 0.0;
    for (int k = 9; k >= order; --k) {
        double c = kStep[k];
        for (int j = 0; j < order; ++j) c *= (k - j);
        sum = sum * x + c;
    }
    return sum;
}

}  // namespace

double PerturbationPair::b(double r, int order) const {
    if (r <= plateau_) return order == 0 ? 1.0 : 0.0;
    if (r >= support_) return 0.0;
    const double L = support_ - plateau_;
    const double x = (r - plateau_) / L;
    if (order == 0) return 1.0 - step_derivative(x, 0);
    return -step_derivative(x, order) / std::pow(L, order);
}

double PerturbationPair::K(double r, int order) const {
    const double B0 = 1.0 + delta_ * b(r);
    if (order == 0) return 1.0 / B0;
    const double B1 = delta_ * b(r, 1), B2 = delta_ * b(r, 2), B3 = delta_ * b(r, 3);
    const double i1 = 1.0 / B0, i2 = i1 * i1, i3 = i2 * i1, i4 = i3 * i1;
    switch (order) {
        case 1: return -B1 * i2;
        case 2: return -B2 * i2 + 2 * B1 * B1 * i3;
        case 3: return -B3 * i2 + 6 * B1 * B2 * i3 - 6 * B1 * B1 * B1 * i4;
        default: throw DomainError("K derivative order must be <= 3");
    }
}

// ---------------------------------------------------------------------------
// G and friends

namespace {

void require_positive(double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive (r = " + std::to_string(r) + ")");
}

double curvature_term(int dim) { return (dim - 1.0) * (dim - 3.0) / 4.0; }

}  // namespace

double eval_G(const Potential& pot, double r) {
    require_positive(r);
    const int N = pot.dim();
    return pot.V(r) + curvature_term(N) / (r * r) + (N - 1) * std::log(r);
}

double eval_dG(const Potential& pot, double r) {
    require_positive(r);
    const int N = pot.dim();
    if (pot.analytic_derivatives())
        return pot.dV(r) - 2 * curvature_term(N) / (r * r * r) + (N - 1) / r;
    const double h = std::min(std::max(1e-5, 1e-4 * r), 0.25 * r);
    return (eval_G(pot, r - 2 * h) - 8 * eval_G(pot, r - h) + 8 * eval_G(pot, r + h) -
            eval_G(pot, r + 2 * h)) /
           (12 * h);
}

double eval_G_delta(const Potential& pot, const PerturbationPair& pair, double r) {
    require_positive(r);
    const int N = pot.dim();
    const double K = pair.K(r), K1 = pair.K(r, 1), K2 = pair.K(r, 2);
    const double Vd = pot.V(r) + pair.delta() * pair.a(r);
    return K * Vd - K2 / 4 + 3 * K1 * K1 / (16 * K) + curvature_term(N) * K / (r * r) - std::log(K) / 2 +
           (N - 1) * std::log(r);
}

double eval_dG_delta(const Potential& pot, const PerturbationPair& pair, double r) {
    require_positive(r);
    if (pair.delta() == 0.0) return eval_dG(pot, r);
    const int N = pot.dim();
    const double K = pair.K(r), K1 = pair.K(r, 1), K2 = pair.K(r, 2), K3 = pair.K(r, 3);
    const double Vd = pot.V(r) + pair.delta() * pair.a(r);
    double dV = 0.0;
    if (pot.analytic_derivatives()) {
        dV = pot.dV(r);
    } else {
        const double h = std::min(std::max(1e-5, 1e-4 * r), 0.25 * r);
        dV = (pot.V(r - 2 * h) - 8 * pot.V(r - h) + 8 * pot.V(r + h) - pot.V(r + 2 * h)) / (12 * h);
    }
    const double dVd = dV + pair.delta() * pair.a(r, 1);
    const double c = curvature_term(N);
    return K1 * Vd + K * dVd - K3 / 4 + 3.0 / 16.0 * (2 * K1 * K2 / K - K1 * K1 * K1 / (K * K)) +
           c * (K1 / (r * r) - 2 * K / (r * r * r)) - K1 / (2 * K) + (N - 1) / r;
}

std::vector<double> geometric_grid(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n < 2) throw DomainError("invalid geometric grid");
    std::vector<double> g(n);
    const double q = std::log(r_max / r_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = r_min * std::exp(q * static_cast<double>(i));
    g.back() = r_max;
    return g;
}

CheckResult check_V2(const Potential& pot, const std::vector<double>& r_grid, double origin_margin) {
    if (r_grid.size() < 64) throw DomainError("check_V2 grid too coarse (need at least 64 points)");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1]) || !(r_grid[0] > 0))
            throw DomainError("check_V2 grid must be positive and strictly increasing");
    const int N = pot.dim();
    CheckResult res;
    if (N <= 3) {
        const double near = 10.0 * r_grid.front();
        for (double r : r_grid) {
            const double g = eval_dG(pot, r);
            if (!(g > 0.0)) {
                res.witness = r;
                res.reason = "G' <= 0";
                return res;
            }
            if (r <= near && g < origin_margin) {
                res.witness = r;
                res.reason = "G' not bounded away from 0 near the origin";
                return res;
            }
        }
        res.pass = true;
        return res;
    }

    std::vector<double> s(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double r = r_grid[i];
        s[i] = r * r * r * eval_dG(pot, r);
    }
    if (!(s.front() < 0.0)) {
        res.witness = r_grid.front();
        res.reason = "r^3 G' not negative near the origin";
        return res;
    }
    std::optional<std::size_t> crossing;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const bool change = (s[i] < 0.0) != (s[i + 1] < 0.0) || s[i + 1] == 0.0;
        if (!change) continue;
        if (crossing) {
            res.witness = r_grid[i + 1];
            res.reason = "r^3 G' changes sign more than once";
            return res;
        }
        crossing = i;
        const double slope = (s[i + 1] - s[i]) / (r_grid[i + 1] - r_grid[i]);
        if (!(slope > 1e-8)) {
            res.witness = r_grid[i];
            res.reason = "zero of r^3 G' is not simple";
            return res;
        }
    }
    if (!crossing) {
        res.witness = r_grid.back();
        res.reason = "r^3 G' has no zero on the grid";
        return res;
    }
    if (!(s.back() > 0.0)) {
        res.witness = r_grid.back();
        res.reason = "r^3 G' not positive after its zero";
        return res;
    }
    res.pass = true;
    return res;
}

CheckResult check_power_admissible(double alpha, double sigma, int dim) {
    if (dim < 2) throw DomainError("dimension N must be >= 2");
    if (!(alpha > 1.0 - dim)) throw DomainError("power family requires alpha > 1 - N");
    const double sigma_max = dim > 2 ? 2.0 / (dim - 2) : std::numeric_limits<double>::infinity();
    if (!(sigma > 0.0) || !(sigma < sigma_max)) throw DomainError("sigma outside (0, 2/(N-2)^+)");
    CheckResult res;
    const double lhs = -sigma * alpha;
    if (!(lhs < 2.0 * std::min(1.0, dim - 1.0 + alpha))) {
        res.reason = "-sigma alpha < 2 min{1, N-1+alpha} violated";
        return res;
    }
    if (!(lhs < 1.0)) {
        res.reason = "-sigma alpha < 1 violated";
        return res;
    }
    res.pass = true;
    return res;
}

V1Advisory advise_V1(const Potential& pot) {
    V1Advisory adv;
    const int N = pot.dim();
    double lim = std::numeric_limits<double>::infinity();
    for (double r : geometric_grid(1e2, 1e6, 64)) lim = std::min(lim, pot.V(r) / std::log(r));
    adv.liminf_ratio = lim;
    adv.growth_ok = lim > 1.0 - N;
    const double q = N + 1.0;
    auto f = [&](double r) { return std::pow(std::abs(pot.V(r)), q) * std::pow(r, N - 1); };
    double err = 0.0;
    double total = 0.0;
    // geometric panels resolve an integrable singularity at the origin
    double hi = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double lo = hi * 0.5;
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 8, 1e-10, &err);
        hi = lo;
    }
    adv.origin_integral = total;
    adv.integrable_ok = std::isfinite(total);
    return adv;
}

}  // namespace logschroed
