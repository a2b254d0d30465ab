#pragma once

#include <functional>
#include <string>
#include <vector>

#include "logschroed/radial_ivp.hpp"
#include "logschroed/shooting.hpp"

namespace logschroed {

/// A radial profile given by callables for u and u' on [0, r_max].
struct RadialFunction {
    int dim = 3;
    double r_max = 0.0;
    std::function<double(double)> u, du;

    static RadialFunction from_solution(const RadialSolution& sol);
    /// s * u.
    RadialFunction scaled(double s) const;
};

/// Surface area of the unit sphere in R^N.
double sphere_area(int dim);

/// Samples of u and u' on a composite 5-point Gauss-Legendre mesh of [0, R].
/// The first cell is split geometrically toward the origin. Weights include
/// omega_N r^(N-1), so sum_i w_i f(r_i) approximates the integral of f over
/// the ball of radius R.
class RadialProfile {
public:
    static RadialProfile build(const RadialFunction& f, int cells = 400, double R = 0.0);
    /// Monotone cubic (PCHIP) resampling of tabulated values.
    static RadialProfile from_samples(int dim, const std::vector<double>& r, const std::vector<double>& u,
                                      int cells = 400, double R = 0.0);

    int dim() const { return dim_; }
    double R() const { return R_; }
    double u_at_R() const { return u_R_; }
    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& values() const { return u_; }
    const std::vector<double>& slopes() const { return du_; }

    RadialProfile scaled(double s) const;

private:
    RadialProfile() = default;
    void make_mesh(int cells);
    int dim_ = 3;
    double R_ = 0.0, u_R_ = 0.0;
    std::vector<double> r_, w_, u_, du_;
};

struct FunctionalReport {
    double I = 0.0;
    double J = 0.0;
    double mass = 0.0;        // integral of B u^2
    double t_u = 0.0;         // J / mass
    double tail_bound = 0.0;  // Gaussian-envelope estimate of the truncated part
    std::vector<std::string> warnings;
};

/// 1/2 int |u'|^2 + (V + B) u^2 - 1/2 int B u^2 log u^2.
double energy_I(const RadialProfile& p, const RadialModel& model);
/// int |u'|^2 + V u^2 - int B u^2 log u^2.
double nehari_J(const RadialProfile& p, const RadialModel& model);
/// int B u^2.
double weighted_mass(const RadialProfile& p, const RadialModel& model);
/// All of the above plus truncation and node warnings.
FunctionalReport functionals(const RadialProfile& p, const RadialModel& model);

struct NehariProjection {
    double t = 0.0;
    RadialProfile profile;
};

/// t_u = J(u) / int B u^2 and the rescaled profile e^(t_u/2) u.
NehariProjection nehari_project(const RadialProfile& p, const RadialModel& model);

}  // namespace logschroed
