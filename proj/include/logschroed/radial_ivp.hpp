#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logschroed/ode.hpp"
#include "logschroed/potential.hpp"

namespace logschroed {

/// Coefficients of u'' + (N-1)/r u' - V(r) u + g(r, u) = 0.
///
/// Logarithmic model: V = V + delta a, g = (1 + delta b) u log u^2.
/// Power model:       V = r^(alpha sigma), g = |u|^(2 sigma) u.
class RadialModel {
public:
    static RadialModel logarithmic(Potential pot, PerturbationPair pair = {});
    static RadialModel power(int dim, double alpha, double sigma);

    bool is_logarithmic() const { return log_; }
    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    double sigma() const { return sigma_; }
    const Potential& potential() const { return *pot_; }
    const PerturbationPair& pair() const { return pair_; }

    double V(double r) const;
    double B(double r) const;
    /// Nonlinear source; zero for |u| < floor_u.
    double g(double r, double u, double floor_u = 1e-300) const;
    /// d g / d u.
    double dg(double r, double u) const;
    /// g(r, e^y) / e^y as a function of y = log u.
    double ratio(double r, double y) const;

    std::string describe() const;

private:
    RadialModel() = default;
    bool log_ = true;
    int dim_ = 3;
    double alpha_ = 0.0, sigma_ = 0.0;
    std::optional<Potential> pot_;
    PerturbationPair pair_;
};

struct IVPConfig {
    double epsilon0 = 1e-6;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double r_max = 20.0;
    double grow_factor = 10.0;
    double floor_u = 1e-300;

    /// Throws DomainError when a field is outside its admissible range.
    void validate() const;
};

enum class EventTag { CrossesZero, Grows, Undetermined };
std::string to_string(EventTag tag);

struct Classification {
    EventTag tag = EventTag::Undetermined;
    double radius = 0.0;
    /// Grows was triggered by u' turning non-negative after a descent,
    /// rather than by u exceeding grow_factor * beta.
    bool turning = false;
};

/// Column layout of the integrated state.
enum : std::size_t { kU = 0, kUp = 1, kPhi = 2, kPhip = 3 };
using IVPState = ode::State<4>;

/// Dense radial trajectory on [epsilon0, r_end].
class IVPSolution {
public:
    double beta() const { return beta_; }
    double r_begin() const { return r_.front(); }
    double r_end() const { return r_end_; }
    const Classification& event() const { return event_; }
    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& du() const { return up_; }
    bool has_variation() const { return variational_; }
    /// Smallest value of u / beta reached before r_end.
    double min_ratio() const { return min_ratio_; }
    /// How far the trajectory decayed before its event, relative to beta:
    /// |u'|/beta at a zero crossing, u/beta at a turning point or at r_max,
    /// min u/beta otherwise. Tiny values mean the trajectory shadowed a
    /// decaying solution.
    double depth() const { return depth_; }

    /// (u, u', phi, phi') at r, clamped to [r_begin, r_end].
    IVPState eval(double r) const;
    double u_at(double r) const { return eval(r)[kU]; }

private:
    friend IVPSolution integrate(const RadialModel&, double, const IVPConfig&, bool, bool);
    double beta_ = 0.0, r_end_ = 0.0, min_ratio_ = 1.0, depth_ = 1.0;
    bool variational_ = false;
    Classification event_;
    std::vector<double> r_, u_, up_;
    ode::DenseTrajectory<4> traj_;
};

/// Two Picard iterations of the integral form at r = eps; returns (u, u').
std::pair<double, double> startup(const RadialModel& model, double beta, double eps);

/// Integrates from epsilon0 until the first classification event or r_max.
/// With `variational` the first variation phi = du/dbeta is carried along.
/// With `events` false the run ignores events and always ends at r_max.
IVPSolution integrate(const RadialModel& model, double beta, const IVPConfig& cfg,
                      bool variational = false, bool events = true);

/// Normalized regular solution of w'' + (N-1)/r w' + b0 w = 0 and its first zero.
class BesselProfile {
public:
    BesselProfile(int dim, double b0);
    double first_zero() const { return r1_; }
    double b0() const { return b0_; }
    int dim() const { return dim_; }
    /// Defined on [0, r1 + 1].
    double operator()(double r) const;
    double r_max() const { return r1_ + 1.0; }

private:
    double series(double r) const;
    int dim_;
    double b0_, r_series_, r1_ = 0.0;
    ode::DenseTrajectory<2> traj_;
};

BesselProfile bessel_w(int dim, double b0);

/// Dense-output root polishing: bisection then Illinois secant, to `tol` in x.
template <typename F>
double polish_root(F&& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b);
    for (int i = 0; i < 24 && std::abs(b - a) > tol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    int side = 0;
    for (int i = 0; i < 100 && std::abs(b - a) > tol; ++i) {
        double c = (fb - fa) != 0.0 ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
        if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
        const double fc = f(c);
        if (fc == 0.0) return c;
        if ((fc > 0) == (fb > 0)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb *= 0.5;
            side = 1;
        }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace logschroed
