#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace logschroed {

enum class PotentialKind { LogPower, InvertedHarmonic, Constant, Table };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& s);

/// Natural cubic spline through (x_i, y_i); extrapolates linearly.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

/// Radial potential V(r) on r > 0 with its first two derivatives.
///
/// Families:
///   LogPower          a1 log r + a2 r^a3 + a4      (a1 > 1 - N)
///   InvertedHarmonic  -mu r^2
///   Constant          c
///   Table             cubic spline through user samples (r, V)
class Potential {
public:
    static Potential log_power(int dim, double a1, double a2 = 0.0, double a3 = 0.0, double a4 = 0.0);
    static Potential inverted_harmonic(int dim, double mu);
    static Potential constant(int dim, double c);
    static Potential table(int dim, std::vector<double> r, std::vector<double> v);
    /// Reads a two-column CSV (r, V) with strictly increasing r.
    static Potential table_from_csv(int dim, const std::string& path);

    PotentialKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::vector<double>& params() const { return params_; }
    bool singular_at_origin() const { return singular_; }
    /// Whether V' and V'' are available in closed form.
    bool analytic_derivatives() const { return kind_ != PotentialKind::Table; }

    double V(double r) const;
    double dV(double r) const;
    double d2V(double r) const;

    /// Same potential shifted by a constant: V + c.
    Potential shifted(double c) const;
    std::string describe() const;

private:
    Potential(PotentialKind kind, int dim, std::vector<double> params);

    PotentialKind kind_;
    int dim_;
    std::vector<double> params_;
    double shift_ = 0.0;
    bool singular_ = false;
    std::shared_ptr<const CubicSpline> spline_;
};

/// Compactly supported perturbation pair (a, b) scaled by delta:
/// V_delta = V + delta a, B_delta = 1 + delta b, K_delta = 1 / B_delta.
///
/// b equals 1 on [0, plateau], decays through a C^4 polynomial step and
/// vanishes beyond `support`; a = a_amplitude * b.
class PerturbationPair {
public:
    PerturbationPair() = default;
    PerturbationPair(double delta, double plateau, double support, double a_amplitude);

    static PerturbationPair none() { return {}; }

    double delta() const { return delta_; }
    double plateau() const { return plateau_; }
    double support() const { return support_; }
    double a_amplitude() const { return a_amp_; }

    /// b and its derivatives up to order 4 (order in [0, 4]).
    double b(double r, int order = 0) const;
    double a(double r, int order = 0) const { return a_amp_ * b(r, order); }

    double B(double r) const { return 1.0 + delta_ * b(r); }
    /// K_delta and its derivatives up to order 3.
    double K(double r, int order = 0) const;

private:
    double delta_ = 0.0;
    double plateau_ = 1.0;
    double support_ = 2.0;
    double a_amp_ = 0.0;
};

/// V(r) + (N-1)(N-3)/(4 r^2) + (N-1) log r.
double eval_G(const Potential& pot, double r);
/// d/dr of eval_G. Closed form when the family provides V', else a
/// 5-point central difference with h = max(1e-5, 1e-4 r).
double eval_dG(const Potential& pot, double r);

/// K V_delta - K''/4 + 3 K'^2/(16 K) + (N-1)(N-3) K/(4 r^2) - log(K)/2 + (N-1) log r.
double eval_G_delta(const Potential& pot, const PerturbationPair& pair, double r);
double eval_dG_delta(const Potential& pot, const PerturbationPair& pair, double r);

struct CheckResult {
    bool pass = false;
    std::optional<double> witness;  // violating radius on failure
    std::string reason;
};

/// Sign-pattern condition on G' (N = 2, 3) or r^3 G' (N >= 4) on a sampled grid.
/// `origin_margin` is the positive lower bound demanded of G' on the first
/// decade of the grid for N = 2, 3.
CheckResult check_V2(const Potential& pot, const std::vector<double>& r_grid,
                     double origin_margin = 1e-3);
/// Geometric grid helper for check_V2.
std::vector<double> geometric_grid(double r_min, double r_max, std::size_t n);

/// Inequalities -sigma alpha < 2 min{1, N-1+alpha} and -sigma alpha < 1.
CheckResult check_power_admissible(double alpha, double sigma, int dim);

/// Advisory (never blocking) sampling of the growth and local integrability conditions.
struct V1Advisory {
    double liminf_ratio = 0.0;   // min of V(r)/log r over the far geometric samples
    bool growth_ok = false;      // liminf_ratio > 1 - N
    double origin_integral = 0;  // int_0^1 |V|^q r^{N-1} dr with q = N + 1
    bool integrable_ok = false;
};
V1Advisory advise_V1(const Potential& pot);

}  // namespace logschroed
