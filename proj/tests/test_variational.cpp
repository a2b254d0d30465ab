#include <cmath>
#include <vector>

#include "doctest.h"
#include "logschroed/errors.hpp"
#include "logschroed/variational.hpp"

using namespace logschroed;

namespace {

RadialFunction gausson(int N, double s = 1.0) {
    RadialFunction f;
    f.dim = N;
    f.r_max = 10.0;
    f.u = [N, s](double r) { return s * std::exp(N / 2.0 - r * r / 2); };
    f.du = [N, s](double r) { return -s * r * std::exp(N / 2.0 - r * r / 2); };
    return f;
}

RadialModel free_model(int N) { return RadialModel::logarithmic(Potential::constant(N, 0.0)); }

// Composite Simpson on a fine uniform grid, an independent check of the
// Gauss-Legendre profile weights.
double simpson_ball(int N, double R, const std::function<double(double)>& f) {
    const int n = 20000;
    const double h = R / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += c * f(r) * std::pow(r, N - 1);
    }
    return s * h / 3.0 * sphere_area(N);
}

}  // namespace

TEST_CASE("sphere areas") {
    CHECK(sphere_area(2) == doctest::Approx(2 * M_PI));
    CHECK(sphere_area(3) == doctest::Approx(4 * M_PI));
    CHECK(sphere_area(4) == doctest::Approx(2 * M_PI * M_PI));
}

TEST_CASE("profile weights are positive and integrate the ball volume") {
    for (int N : {2, 3, 5}) {
        const auto p = RadialProfile::build(gausson(N), 40, 6.0);
        for (double w : p.weights()) CHECK(w > 0.0);
        double vol = 0.0;
        for (double w : p.weights()) vol += w;
        CHECK(vol == doctest::Approx(sphere_area(N) * std::pow(6.0, N) / N).epsilon(1e-13));
    }
}

TEST_CASE("Gausson level") {
    const auto model = free_model(3);
    const auto p = RadialProfile::build(gausson(3), 400);
    const auto rep = functionals(p, model);
    const double level = 0.5 * std::exp(3.0) * std::pow(M_PI, 1.5);
    CHECK(std::abs(rep.I / level - 1.0) < 1e-10);
    CHECK(std::abs(rep.J) < 1e-6 * rep.mass);
    CHECK(std::abs(2 * rep.I - rep.mass) < 1e-10 * rep.mass);
    CHECK(rep.warnings.empty());
    // independent quadrature oracle for the mass
    const double m = simpson_ball(3, 10.0, [](double r) { return std::exp(3.0 - r * r); });
    CHECK(std::abs(rep.mass / m - 1.0) < 1e-10);
}

TEST_CASE("zero profile has zero functionals and cannot be projected") {
    const auto model = free_model(3);
    const auto p = RadialProfile::build(gausson(3, 0.0), 50);
    CHECK(energy_I(p, model) == 0.0);
    CHECK(nehari_J(p, model) == 0.0);
    CHECK_THROWS_AS(nehari_project(p, model), DomainError);
}

TEST_CASE("J under scalar multiples of the Gausson") {
    const auto model = free_model(3);
    for (double s : {2.0, 0.5}) {
        const auto p = RadialProfile::build(gausson(3, s), 400);
        const double mass = weighted_mass(p, model);
        CHECK(std::abs(nehari_J(p, model) + std::log(s * s) * mass) < 1e-8 * mass);
    }
}

TEST_CASE("rescaled Gausson lies below the level and the map t -> I has its maximum at 0") {
    const auto model = free_model(3);
    const double I0 = energy_I(RadialProfile::build(gausson(3), 400), model);
    const double I02 = energy_I(RadialProfile::build(gausson(3, std::exp(0.1)), 400), model);
    CHECK(I02 < I0 * std::exp(0.2));
    double best_t = 99, best = -1e300;
    for (int k = -50; k <= 50; ++k) {
        const double t = 0.02 * k;
        const double I = energy_I(RadialProfile::build(gausson(3, std::exp(t / 2)), 200), model);
        if (I > best) {
            best = I;
            best_t = t;
        }
    }
    CHECK(best_t == doctest::Approx(0.0));
}

TEST_CASE("Nehari projection") {
    const auto model = free_model(3);
    SUBCASE("Gausson is a fixed point") {
        const auto pr = nehari_project(RadialProfile::build(gausson(3), 400), model);
        CHECK(std::abs(pr.t) < 1e-9);
    }
    SUBCASE("3 times the Gausson projects back") {
        const auto pr = nehari_project(RadialProfile::build(gausson(3, 3.0), 400), model);
        CHECK(pr.t == doctest::Approx(-std::log(9.0)).epsilon(1e-9));
        const auto ref = RadialProfile::build(gausson(3), 400);
        for (std::size_t i = 0; i < ref.values().size(); i += 97)
            CHECK(pr.profile.values()[i] == doctest::Approx(ref.values()[i]).epsilon(1e-9));
    }
    SUBCASE("arbitrary bump: J vanishes and I is maximal along the ray") {
        RadialFunction bump;
        bump.dim = 3;
        bump.r_max = 12.0;
        bump.u = [](double r) { return (1 + r * r) * std::exp(-r * r / 3); };
        bump.du = [](double r) { return (2 * r - 2 * r * (1 + r * r) / 3) * std::exp(-r * r / 3); };
        const auto p = RadialProfile::build(bump, 300);
        const auto pr = nehari_project(p, model);
        const auto rep = functionals(pr.profile, model);
        CHECK(std::abs(rep.J) <= 1e-8 * rep.mass);
        for (int k = -50; k <= 50; ++k) {
            const double t = 0.1 * k;
            CHECK(energy_I(p.scaled(std::exp(t / 2)), model) <= rep.I + 1e-12 * std::abs(rep.I));
        }
        const auto again = nehari_project(pr.profile, model);
        CHECK(std::abs(again.t) < 1e-10);
        for (double s : {-1.0, -0.1, 0.1, 1.0}) {
            const double ts = nehari_project(p.scaled(std::exp(s / 2)), model).t;
            CHECK(std::abs(ts - (pr.t - s)) < 1e-9);
        }
    }
}

TEST_CASE("mesh refinement converges at high order") {
    const auto model = RadialModel::logarithmic(Potential::log_power(3, 1.0));
    RadialFunction f;
    f.dim = 3;
    f.r_max = 8.0;
    f.u = [](double r) { return std::exp(1.0 - r * r / 2) * (1 + 0.3 * std::sin(r)); };
    f.du = [](double r) {
        return std::exp(1.0 - r * r / 2) * (0.3 * std::cos(r) - r * (1 + 0.3 * std::sin(r)));
    };
    double prev = energy_I(RadialProfile::build(f, 4), model), prev_diff = INFINITY;
    for (int cells : {8, 16, 32}) {
        const double I = energy_I(RadialProfile::build(f, cells), model);
        const double diff = std::abs(I - prev);
        CHECK((diff * 8 <= prev_diff || diff < 1e-12 * std::abs(I)));
        prev = I;
        prev_diff = diff;
    }
}

TEST_CASE("PCHIP resampling keeps positivity and reproduces the level") {
    std::vector<double> r, u;
    for (int i = 0; i <= 2000; ++i) {
        r.push_back(0.005 * i);
        u.push_back(std::exp(1.5 - r.back() * r.back() / 2));
    }
    const auto p = RadialProfile::from_samples(3, r, u, 200);
    for (double v : p.values()) CHECK(v > 0.0);
    const double level = 0.5 * std::exp(3.0) * std::pow(M_PI, 1.5);
    CHECK(std::abs(energy_I(p, free_model(3)) / level - 1.0) < 1e-4);
    CHECK_THROWS_AS(RadialProfile::from_samples(3, {0.0, 1.0}, {1.0, 0.5}), DomainError);
}

TEST_CASE("truncation and power-model guards") {
    const auto model = free_model(3);
    const auto rep = functionals(RadialProfile::build(gausson(3), 50, 3.0), model);
    REQUIRE_FALSE(rep.warnings.empty());
    CHECK(rep.tail_bound > 0.0);
    CHECK_THROWS_AS(energy_I(RadialProfile::build(gausson(3), 50), RadialModel::power(3, 0.0, 1.0)),
                    DomainError);
}

TEST_CASE("level identity on shooting solutions") {
    ShootingOptions opts;
    opts.threads = 1;
    for (const auto& pot : {Potential::constant(3, 0.0), Potential::log_power(3, 1.0),
                            Potential::log_power(3, -1.5), Potential::constant(2, 0.0)}) {
        const auto model = RadialModel::logarithmic(pot);
        const auto res = shoot(model, 0.5, 50.0, 32, opts);
        REQUIRE(res.roots.size() == 1);
        const auto sol = RadialSolution(model, res.roots[0], opts);
        const auto rep = functionals(RadialProfile::build(RadialFunction::from_solution(sol), 400), model);
        CHECK(std::abs(2 * rep.I - rep.mass) <= 1e-5 * rep.mass);
        CHECK(std::abs(rep.t_u) < 1e-5);
    }
}
