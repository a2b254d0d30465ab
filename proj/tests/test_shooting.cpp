#include <cmath>
#include <vector>

#include "doctest.h"
#include "logschroed/errors.hpp"
#include "logschroed/shooting.hpp"

using namespace logschroed;

namespace {

RadialModel log_model(Potential p) { return RadialModel::logarithmic(std::move(p)); }

ShootingOptions serial() {
    ShootingOptions o;
    o.threads = 1;
    return o;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

// Gaussian ansatz for V = -mu r^2: u = exp(N lambda - lambda r^2) with
// 4 lambda^2 - 2 lambda + mu = 0.
std::pair<double, double> ansatz_roots(double mu, int N) {
    const double s = std::sqrt(1.0 - 4.0 * mu);
    return {std::exp(N * (1.0 - s) / 4.0), std::exp(N * (1.0 + s) / 4.0)};
}

}  // namespace

TEST_CASE("free equation has the Gausson as its only decaying height") {
    const auto res = shoot(log_model(Potential::constant(3, 0.0)), 0.5, 50.0, 32, serial());
    REQUIRE(res.roots.size() == 1);
    CHECK(res.multiplicity == 1);
    const auto& r = res.roots[0];
    CHECK(rel(r.beta, std::exp(1.5)) < 1e-10);
    CHECK(r.lo <= std::exp(1.5) * (1 + 1e-10));
    CHECK(r.hi >= std::exp(1.5) * (1 - 1e-10));
    CHECK(r.hi - r.lo <= 1e-12 * r.beta);
    CHECK_FALSE(r.tangent);
}

TEST_CASE("Gausson heights in other dimensions") {
    for (int N : {2, 4}) {
        const auto res = shoot(log_model(Potential::constant(N, 0.0)), 0.5, 50.0, 32, serial());
        REQUIRE(res.roots.size() == 1);
        CHECK(rel(res.roots[0].beta, std::exp(N / 2.0)) < 1e-10);
    }
}

TEST_CASE("inverted harmonic mu = 3/16 has two Gaussian roots") {
    const auto [b_lo, b_hi] = ansatz_roots(3.0 / 16.0, 3);
    const auto res = shoot(log_model(Potential::inverted_harmonic(3, 3.0 / 16.0)), 1.0, 5.0, 64, serial());
    REQUIRE(res.roots.size() == 2);
    CHECK(rel(res.roots[0].beta, b_lo) < 1e-9);
    CHECK(rel(res.roots[1].beta, b_hi) < 1e-10);
    CHECK(res.roots[0].tangent);
    // the classification jump near beta = 2.33 is not a root
    CHECK_FALSE(res.rejected.empty());
}

TEST_CASE("log r potential has exactly one root") {
    const auto res = shoot(log_model(Potential::log_power(3, 1.0)), 0.5, 50.0, 32, serial());
    CHECK(res.roots.size() == 1);
    CHECK(res.multiplicity == 1);
}

TEST_CASE("constant potential log 4 doubles the Gausson height") {
    const auto res = shoot(log_model(Potential::constant(3, std::log(4.0))), 0.5, 50.0, 32, serial());
    REQUIRE(res.roots.size() == 1);
    CHECK(rel(res.roots[0].beta, 2.0 * std::exp(1.5)) < 1e-10);
}

TEST_CASE("shift covariance of the decaying heights") {
    for (double c : {-0.8, 0.3, 1.1}) {
        const auto base = shoot(log_model(Potential::log_power(3, 1.0, 0.5, 1.0)), 0.5, 50.0, 32, serial());
        const auto shifted =
            shoot(log_model(Potential::log_power(3, 1.0, 0.5, 1.0, c)), 0.5, 50.0, 32, serial());
        REQUIRE(base.roots.size() == 1);
        REQUIRE(shifted.roots.size() == 1);
        CHECK(rel(shifted.roots[0].beta, base.roots[0].beta * std::exp(c / 2)) < 1e-10);
    }
}

TEST_CASE("multiplicity on the inverted harmonic family") {
    CHECK(shoot(log_model(Potential::inverted_harmonic(3, 0.0)), 0.5, 20.0, 64, serial()).multiplicity == 1);
    for (double mu : {0.1, 3.0 / 16.0, 0.24}) {
        CAPTURE(mu);
        const auto res = shoot(log_model(Potential::inverted_harmonic(3, mu)), 0.5, 20.0, 64, serial());
        CHECK(res.multiplicity == 2);
        const auto [b_lo, b_hi] = ansatz_roots(mu, 3);
        int hits = 0;
        for (const auto& r : res.roots) hits += rel(r.beta, b_lo) < 1e-7 || rel(r.beta, b_hi) < 1e-7;
        CHECK(hits == 2);
    }
}

TEST_CASE("ratio of the two mu = 3/16 solutions increases and crosses once") {
    const auto model = log_model(Potential::inverted_harmonic(3, 3.0 / 16.0));
    const auto opts = serial();
    const auto res = shoot(model, 1.0, 5.0, 64, opts);
    REQUIRE(res.roots.size() == 2);
    const RadialSolution u1(model, res.roots[0], opts), u2(model, res.roots[1], opts);
    const double r_end = std::min(u1.r_reliable(), u2.r_reliable());
    REQUIRE(r_end > 3.0);
    int crossings = 0;
    double prev = u1.u(0.01) - u2.u(0.01), r_cross = 0.0;
    for (double r = 0.01; r <= r_end; r += 0.01) {
        const double a = u1.u(r), b = u2.u(r);
        const double dratio = (u1.du(r) * b - a * u2.du(r)) / (b * b);
        CHECK_MESSAGE(dratio > 0.0, "r = " << r);
        const double d = a - b;
        if ((d > 0) != (prev > 0)) {
            ++crossings;
            r_cross = r;
        }
        prev = d;
    }
    CHECK(crossings == 1);
    CHECK(std::abs(r_cross - std::sqrt(3.0)) < 0.011);
}

TEST_CASE("found solutions decay faster than the 0.45 Gaussian barrier on the final decade") {
    const auto opts = serial();
    for (const auto& pot : {Potential::constant(3, 0.0), Potential::log_power(3, 1.0),
                            Potential::log_power(3, -1.5), Potential::log_power(2, 1.0, 1.0, 0.5)}) {
        const auto model = log_model(pot);
        const auto res = shoot(model, 0.5, 50.0, 32, opts);
        REQUIRE(res.roots.size() == 1);
        const RadialSolution sol(model, res.roots[0], opts);
        CHECK(sol.r_reliable() > 3.0);
        CHECK(res.roots[0].tail_mismatch < 1e-4);
        const double R = sol.r_max();
        double prev = INFINITY;
        for (double r = 0.9 * R; r <= R + 1e-12; r += 0.02 * R) {
            const double w = std::log(sol.u(r)) + 0.45 * r * r;
            CHECK_MESSAGE(w < prev, "r = " << r);
            prev = w;
        }
    }
}

TEST_CASE("reconstructed Gausson matches the closed form") {
    const auto model = log_model(Potential::constant(3, 0.0));
    const auto opts = serial();
    const auto res = shoot(model, 0.5, 50.0, 32, opts);
    REQUIRE(res.roots.size() == 1);
    const RadialSolution sol(model, res.roots[0], opts);
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0}) CHECK(rel(sol.u(r), std::exp(1.5 - r * r / 2)) < 1e-8);
    // the tail in log form stays accurate in relative terms far out
    for (double r : {6.0, 10.0, 15.0, 20.0})
        CHECK(std::abs(std::log(sol.u(r)) - (1.5 - r * r / 2)) < 1e-3 * r * r);
    CHECK(std::abs(sol.du(1.0) + std::exp(1.0)) < 1e-7);
}

TEST_CASE("results do not depend on the worker count") {
    const auto model = log_model(Potential::inverted_harmonic(3, 0.24));
    ShootingOptions o1 = serial(), o4 = serial();
    o4.threads = 4;
    const auto a = shoot(model, 0.5, 20.0, 64, o1);
    const auto b = shoot(model, 0.5, 20.0, 64, o4);
    REQUIRE(a.roots.size() == b.roots.size());
    for (std::size_t i = 0; i < a.roots.size(); ++i) {
        CHECK(a.roots[i].beta == b.roots[i].beta);
        CHECK(a.roots[i].residual == b.roots[i].residual);
    }
    REQUIRE(a.scan.size() == b.scan.size());
    for (std::size_t i = 0; i < a.scan.size(); ++i) CHECK(a.scan[i].event.radius == b.scan[i].event.radius);
}

TEST_CASE("scan and bracket preconditions") {
    const auto model = log_model(Potential::constant(3, 0.0));
    CHECK_THROWS_AS(scan_beta(model, 0.0, 2.0, 16, serial()), DomainError);
    CHECK_THROWS_AS(scan_beta(model, 1.0, 2.0, 4, serial()), DomainError);
    CHECK_THROWS_AS(find_ground(model, Bracket{5.0, 6.0, false}, serial()), PreconditionError);
    CHECK_THROWS_AS(find_ground(model, Bracket{2.0, 1.0, false}, serial()), DomainError);
}

TEST_CASE("adjacent opposite classes become brackets") {
    std::vector<ScanSample> scan(4);
    const EventTag tags[] = {EventTag::Grows, EventTag::Grows, EventTag::CrossesZero, EventTag::Undetermined};
    for (int i = 0; i < 4; ++i) {
        scan[i].beta = 1.0 + i;
        scan[i].event.tag = tags[i];
        scan[i].event.radius = 1.0;
    }
    const auto b = brackets_from_scan(scan);
    REQUIRE(b.size() == 1);
    CHECK(b[0].lo == 2.0);
    CHECK(b[0].hi == 3.0);
}

TEST_CASE("large beta profiles approach the Bessel profile") {
    const auto model = log_model(Potential::constant(3, 0.0));
    IVPConfig cfg;
    double prev = INFINITY;
    for (double beta : {1e3, 1e4, 1e5, 1e6}) {
        const auto rep = large_beta_check(model, beta, cfg);
        CHECK(rep.deviation < prev);
        prev = rep.deviation;
    }
    CHECK(prev < 0.05);
    for (const auto& pot : {Potential::constant(3, 0.0), Potential::log_power(3, 1.0),
                            Potential::inverted_harmonic(3, 3.0 / 16.0)}) {
        const auto rep = large_beta_check(log_model(pot), 1e6, cfg);
        CHECK(std::abs(rep.scaled_zero / (M_PI / std::sqrt(2.0)) - 1.0) < 0.05);
        CHECK(rep.bessel_zero == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(large_beta_check(model, 5.0, cfg), DomainError);
}
