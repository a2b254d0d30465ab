#pragma once

#include <string>
#include <vector>

#include "logschroed/radial_ivp.hpp"

namespace logschroed {

struct ShootingOptions {
    IVPConfig ivp;
    double tol = 1e-12;        // relative bracket width for classification bisection
    double depth_max = 1e-5;   // decay depth the refined bracket must reach to count as a root
    int refine_samples = 48;   // sub-scan of every candidate cell before bisection
    double reliable_rel = 1e-6;  // relative disagreement that ends the reliable range
    int threads = 0;
};

struct ScanSample {
    double beta = 0.0;
    Classification event;
    double depth = 1.0;
};

/// Interval [lo, hi] believed to hold one decaying initial value. `tangent`
/// marks a double root: both ends classify alike and the event radius peaks
/// inside.
struct Bracket {
    double lo = 0.0, hi = 0.0;
    bool tangent = false;
};

struct RootInfo {
    double beta = 0.0;
    double lo = 0.0, hi = 0.0;  // final bracket
    bool tangent = false;
    double depth = 1.0;         // worst decay depth of the final bracket ends
    double r_reliable = 0.0;    // forward integration trusted up to here
    double residual = 0.0;      // sup |u| over [r_reliable, r_max] from the tail
    double tail_mismatch = 0.0; // relative jump of u'/u where the tail is attached
};

struct ShootingResult {
    std::vector<ScanSample> scan;
    std::vector<Bracket> brackets;
    std::vector<RootInfo> roots;
    std::vector<Bracket> rejected;  // flips that did not shadow a decaying solution
    int multiplicity = 0;
    std::vector<std::string> warnings;
};

/// Classifies beta on a geometric grid of n points in [lo, hi].
std::vector<ScanSample> scan_beta(const RadialModel& model, double lo, double hi, int n,
                                  const ShootingOptions& opts);

/// Adjacent CrossesZero/Grows pairs plus interior peaks of the event radius
/// inside runs of one class.
std::vector<Bracket> brackets_from_scan(const std::vector<ScanSample>& scan);

/// Bisection on the classification (or, for tangent brackets, on the sign of
/// d r_event / d beta) down to relative width opts.tol.
RootInfo find_ground(const RadialModel& model, const Bracket& bracket, const ShootingOptions& opts);

/// Scan, bracket, sub-scan each candidate cell, refine; roots are ordered by
/// beta. Brackets whose refined trajectories never decay below depth_max are
/// jumps of the event type, not roots, and go to `rejected`.
ShootingResult shoot(const RadialModel& model, double lo, double hi, int n, const ShootingOptions& opts);

/// Decaying solution on [0, r_max]: forward trajectory up to the reliable
/// radius, then a tail integrated backward in (log u, u'/u) from r_max and
/// matched to the forward value.
class RadialSolution {
public:
    RadialSolution(const RadialModel& model, const RootInfo& root, const ShootingOptions& opts);

    const RadialModel& model() const { return model_; }
    double beta() const { return beta_; }
    double r_reliable() const { return r_c_; }
    double r_max() const { return r_max_; }
    double tail_mismatch() const { return mismatch_; }
    /// sup of u on the reconstructed tail.
    double tail_sup() const { return tail_sup_; }
    /// Gaussian barrier u(r_c) exp(-tau (r^2 - r_c^2)) reported next to the tail.
    double envelope(double r, double tau = 0.45) const;

    double u(double r) const;
    double du(double r) const;
    /// Forward nodes below r_reliable followed by the tail nodes.
    std::vector<double> nodes() const;

private:
    RadialModel model_;
    double beta_, r_c_, r_max_, u_c_ = 0.0;
    double mismatch_ = 0.0, tail_sup_ = 0.0;
    IVPSolution fwd_;
    bool has_tail_ = false;
    ode::DenseTrajectory<2> tail_;  // (log u, u'/u), integrated from r_max down to r_c
};

struct LargeBetaReport {
    double beta = 0.0;
    double deviation = 0.0;          // sup |v - w| on [0, r1]
    double first_zero = 0.0;         // first zero of u(.; beta)
    double scaled_zero = 0.0;        // first_zero * sqrt(log beta)
    double bessel_zero = 0.0;        // r1 of w
};

/// Compares v(r) = u(r / sqrt(log beta); beta) / beta with the Bessel-type
/// profile for b0 = 2 B(0).
LargeBetaReport large_beta_check(const RadialModel& model, double beta, const IVPConfig& cfg);

}  // namespace logschroed
