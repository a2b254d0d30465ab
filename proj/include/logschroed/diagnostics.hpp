#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logschroed/potential.hpp"
#include "logschroed/radial_ivp.hpp"
#include "logschroed/variational.hpp"

namespace logschroed {

struct LiouvilleProfile {
    std::vector<double> r, v, dv;
};

/// v = K^(-1/4) r^((N-1)/2) u and v' by the product rule.
LiouvilleProfile liouville_transform(const RadialFunction& f, const PerturbationPair& pair,
                                     const std::vector<double>& radii);

struct EnergyProfile {
    std::vector<double> r, v, dv, E, dE_formula, dE_diff, dG;
    double max_abs_E() const;
};

/// Geometric from r_min to 0.5, then uniform with step `h` up to r_max.
std::vector<double> energy_mesh(double r_min, double r_max, double h = 0.01);

/// E = K v'^2 / 2 - G_delta v^2 / 2 + (v^2 log v^2 - v^2) / 2, with E' both
/// as -G_delta' v^2 / 2 and by a 5-point difference of E.
EnergyProfile energy_E(const RadialFunction& f, const RadialModel& model, const std::vector<double>& radii);

enum class Verdict { Pass, Fail, NotApplicable };
std::string to_string(Verdict v);

struct PatternResult {
    Verdict verdict = Verdict::Fail;
    std::optional<std::size_t> witness;  // first index violating the pattern
    std::size_t argmax = 0;              // index of the largest E
    std::string reason;
};

/// N = 2, 3: E decreasing. N >= 4: increasing up to one interior maximum,
/// then decreasing. Slack 1e-9 max|E|. NotApplicable when check_V2 fails.
PatternResult lemma31_pattern(const EnergyProfile& e, const RadialModel& model);

struct TailReport {
    bool barrier_decreasing = false;  // u e^(0.45 r^2) decreasing on [0.9 R, R]
    double barrier_final = 0.0;       // u(R) e^(0.45 R^2)
    double flux_max = 0.0;            // max |r^(N-1) u'| on [0.9 R, R]
    bool flux_ok = false;             // flux_max <= flux_tol
    double monotone_from = 0.0;       // u' < 0 on [monotone_from, R]
    bool pass() const { return barrier_decreasing && barrier_final < 1e-6 && flux_ok; }
};

TailReport tail_checks(const RadialFunction& f, double flux_tol = 1e-6);

struct RatioReport {
    int crossings = 0;
    std::vector<double> crossing_radii;
    bool monotone = false;  // d/dr (u1/u2) > 0 at every mesh point
    bool constant = false;  // u1/u2 constant to 1e-12 relative
};

RatioReport ratio_monotonicity(const RadialFunction& u1, const RadialFunction& u2, const std::vector<double>& radii);

struct ContradictionReport {
    std::vector<double> r, D;  // D = (v2/v1)^2 E1 - E2
    bool decreasing = false;
    std::optional<double> first_increase;  // first radius where D grows
};

/// The quantity of the uniqueness argument for two solutions of one model.
ContradictionReport contradiction_quantity(const RadialFunction& u1, const RadialFunction& u2,
                                           const RadialModel& model, const std::vector<double>& radii);

}  // namespace logschroed
