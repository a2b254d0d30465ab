#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "logschroed/potential.hpp"
#include "logschroed/shooting.hpp"
#include "logschroed/variational.hpp"

namespace logschroed {

// Power family -Delta u + |x|^(alpha sigma) u = |u|^(2 sigma) u and its
// rescaling v(r) = sigma^(alpha/(4 + 2 alpha sigma)) u(sigma^(-1/(2 + alpha sigma)) r),
// which tends to the logarithmic solution with V = alpha log r as sigma -> 0+.

struct PowerConfig {
    ShootingOptions shooting;
    double beta_lo = 1e-3, beta_hi = 1e3;
    int scan_points = 64;
    /// r_max in rescaled units; the solve uses r_max_v * sigma^(-1/(2 + alpha sigma)).
    double r_max_v = 20.0;
};

struct PowerRun {
    double alpha = 0.0, sigma = 0.0;
    int dim = 3;
    double beta = 0.0;
    CheckResult admissible;
    std::shared_ptr<const RadialSolution> solution;
    RadialFunction u;      // u_sigma
    RadialFunction v;      // rescaled profile
    double du0 = 0.0;      // u'(0)
    double residual = 0.0; // sup of the ODE residual of u on [0.05, r_reliable]
    std::vector<std::string> warnings;
};

double length_scale(double alpha, double sigma);     // sigma^(-1/(2 + alpha sigma))
double amplitude_scale(double alpha, double sigma);  // sigma^(alpha/(4 + 2 alpha sigma))

/// v(r) = amplitude_scale * u(length_scale * r).
RadialFunction rescale_v(const RadialFunction& u, double alpha, double sigma);

/// Throws DomainError when the parameters are inadmissible (including N < 2)
/// and SolverError when [beta_lo, beta_hi] holds no decaying initial value.
PowerRun solve_power(double alpha, double sigma, int dim, const PowerConfig& cfg = {});

/// sup |u'' + (N-1)/r u' - V u + g(u)| over n points of [r_lo, r_hi], with u''
/// from a 5-point difference of u'.
double ode_residual(const RadialModel& model, const RadialFunction& f, double r_lo, double r_hi, int n = 400);

struct DecayFit {
    double exponent = 0.0;   // p in log u ~ c0 - rate r^p
    double rate = 0.0;
    double intercept = 0.0;
    double rms = 0.0;        // residual of the linear fit
    double r_lo = 0.0, r_hi = 0.0;
};

/// Least-squares fit of log u against r^p where u / u(0) runs from 1e-4 to 1e-10.
DecayFit decay_fit(const RadialFunction& f, double p);
/// p = (alpha sigma + 2) / 2.
DecayFit decay_bound_check(const PowerRun& run);

struct RadialBound {
    double constant = 0.0;   // sup over r >= 0.1 of |u| r^((N-1)/2 + alpha sigma/4) / ||u||
    double norm = 0.0;       // (int |u'|^2 + r^(alpha sigma) u^2)^(1/2)
    double argmax = 0.0;
};

RadialBound radial_bound_check(const RadialFunction& f, double alpha, double sigma);
RadialBound radial_bound_check(const PowerRun& run);

struct TwoFormResidual {
    double plain = 0.0;     // -Delta v + s^-1 r^(as) v - s^-1 v^(2s+1)
    double shifted = 0.0;   // -Delta v + s^-1 (r^(as) - 1) v - s^-1 (v^(2s) - 1) v
    double max_diff = 0.0;  // sup of their pointwise difference
};

TwoFormResidual two_form_residuals(const PowerRun& run, double r_lo = 0.05, double r_hi = 8.0, int n = 400);

/// sigma^-1 (s^(t sigma) - 1) >= t log s on a 10 x 10 x 10 grid over
/// [0.1, 4] x [0.1, 10] x [0.01, 1]; the left side uses expm1.
struct InequalityReport {
    int samples = 0;
    int violations = 0;     // beyond 1e-12
    double worst = 0.0;     // most negative lhs - rhs
};

InequalityReport inequality_grid();

struct LimitConfig {
    PowerConfig power;
    ShootingOptions reference;      // the logarithmic solve
    double window = 8.0;            // distances are taken on [0, window]
    double grid = 0.01;             // sampling step for distances and the cache
    std::filesystem::path cache_dir;  // empty: no cache. LOGSCHROED_CACHE overrides
    int threads = 0;
};

struct LimitRow {
    double sigma = 0.0;
    double beta = 0.0;
    double v0 = 0.0;
    double sup_error = 0.0;     // sup |v_sigma - w| on [0, window]
    double h1_error = 0.0;      // (int |v' - w'|^2 dx)^(1/2) on the ball of radius window
    double tail_rate = 0.0;     // decay_bound_check rate of u_sigma
    double footnote_gap = 0.0;  // sup |sigma^(alpha/4) u(sigma^(-1/2) r) - v(r)|
};

struct LimitStudy {
    double alpha = 0.0;
    int dim = 3;
    double reference_beta = 0.0;
    bool reference_cached = false;  // true when the reference came from the cache
    std::vector<LimitRow> rows;
    bool decreasing = false;        // sup_error strictly decreasing along the rows
    std::vector<std::string> warnings;
};

/// Reference logarithmic profile (V = alpha log r) as samples of (r, u, u')
/// on a uniform grid, read from or written to the cache. The returned
/// function is always rebuilt from the samples, so cached and fresh runs
/// agree bit for bit.
struct ReferenceProfile {
    RadialFunction w;
    double beta = 0.0;
    bool from_cache = false;
    std::filesystem::path file;
};

ReferenceProfile reference_profile(double alpha, int dim, const LimitConfig& cfg);
std::filesystem::path resolve_cache_dir(const LimitConfig& cfg);

/// Piecewise cubic Hermite interpolant through (r, u, u').
RadialFunction hermite_profile(int dim, std::vector<double> r, std::vector<double> u, std::vector<double> du);

/// sigma_list must be strictly decreasing and every entry admissible.
LimitStudy limit_study(double alpha, const std::vector<double>& sigma_list, int dim, const LimitConfig& cfg = {});

}  // namespace logschroed
