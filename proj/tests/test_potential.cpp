#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "logschroed/errors.hpp"
#include "logschroed/potential.hpp"

using namespace logschroed;

namespace {

double fd1(auto&& f, double r, double h) {
    return (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h);
}

double fd2(auto&& f, double r, double h) {
    return (-f(r - 2 * h) + 16 * f(r - h) - 30 * f(r) + 16 * f(r + h) - f(r + 2 * h)) / (12 * h * h);
}

}  // namespace

TEST_CASE("G closed-form values") {
    CHECK(eval_G(Potential::constant(3, 0.0), 2.0) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
    CHECK(eval_G(Potential::constant(2, 0.0), 1.0) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(eval_G(Potential::inverted_harmonic(3, 3.0 / 16), 4.0) ==
          doctest::Approx(-3.0 + 2 * std::log(4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(eval_G(Potential::constant(3, 0.0), 0.0), DomainError);
    CHECK_THROWS_AS(eval_G(Potential::constant(3, 0.0), -1.0), DomainError);
}

TEST_CASE("log-power family rejects alpha1 <= 1 - N") {
    CHECK_THROWS_AS(Potential::log_power(3, -2.0), DomainError);
    CHECK_THROWS_AS(Potential::log_power(4, -3.5), DomainError);
    CHECK_NOTHROW(Potential::log_power(3, -1.5));
    CHECK(Potential::log_power(3, 1.0).singular_at_origin());
    CHECK_FALSE(Potential::constant(3, 1.0).singular_at_origin());
}

TEST_CASE("potential derivatives agree with central differences") {
    const std::vector<Potential> pots = {
        Potential::log_power(3, 1.0, 0.5, 1.5, -0.3), Potential::log_power(2, -0.5, 2.0, 0.7),
        Potential::inverted_harmonic(3, 0.2), Potential::constant(4, 2.5)};
    for (const auto& p : pots) {
        for (double r : {0.3, 1.0, 2.7, 7.0}) {
            const double h = 1e-3 * r;
            auto V = [&](double x) { return p.V(x); };
            auto dV = [&](double x) { return p.dV(x); };
            CHECK(p.dV(r) == doctest::Approx(fd1(V, r, h)).epsilon(1e-6).scale(1.0));
            CHECK(p.d2V(r) == doctest::Approx(fd1(dV, r, h)).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("G_delta reduces to G when delta = 0") {
    const auto pot = Potential::log_power(3, 1.0);
    const PerturbationPair pair(0.0, 1.0, 2.0, 0.7);
    for (double r : {0.01, 0.5, 1.5, 3.0, 10.0}) {
        CHECK(eval_G_delta(pot, pair, r) == eval_G(pot, r));
        CHECK(eval_dG_delta(pot, pair, r) == eval_dG(pot, r));
    }
}

TEST_CASE("G_delta on the plateau") {
    const auto pot = Potential::log_power(3, 1.0);
    const PerturbationPair pair(0.1, 1.0, 2.0, 0.5);
    const double r = 0.6, K = 1.0 / 1.1, N = 3;
    const double Vd = pot.V(r) + 0.1 * 0.5;
    const double expected = K * Vd - std::log(K) / 2 + (N - 1) * (N - 3) * K / (4 * r * r) + (N - 1) * std::log(r);
    CHECK(eval_G_delta(pot, pair, r) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("G_delta in the transition band matches a finite-difference reconstruction") {
    const PerturbationPair pair(0.1, 1.0, 2.0, 0.5);
    for (int N : {2, 3, 5}) {
        const auto pot = Potential::log_power(N, 1.0, 0.3, 2.0);
        for (double r : {1.2, 1.5, 1.8}) {
            const double h = 1e-3;
            auto K = [&](double x) { return 1.0 / (1.0 + 0.1 * pair.b(x)); };
            const double k0 = K(r), k1 = fd1(K, r, h), k2 = fd2(K, r, h);
            const double Vd = pot.V(r) + 0.1 * pair.a(r);
            const double oracle = k0 * Vd - k2 / 4 + 3 * k1 * k1 / (16 * k0) +
                                  (N - 1.0) * (N - 3.0) * k0 / (4 * r * r) - std::log(k0) / 2 +
                                  (N - 1) * std::log(r);
            CHECK(eval_G_delta(pot, pair, r) == doctest::Approx(oracle).epsilon(1e-6));
            auto Gd = [&](double x) { return eval_G_delta(pot, pair, x); };
            CHECK(eval_dG_delta(pot, pair, r) == doctest::Approx(fd1(Gd, r, 1e-4)).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("perturbation pair invariants") {
    const PerturbationPair pair(0.3, 0.8, 2.5, -0.4);
    for (int i = 0; i <= 400; ++i) {
        const double r = 0.01 * i;
        const double b = pair.b(r);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(pair.B(r) >= 1.0);
        CHECK(pair.K(r) > 0.0);
        CHECK(pair.K(r) <= 1.0);
        if (r <= 0.8) CHECK(b == 1.0);
        if (r >= 2.5) {
            CHECK(b == 0.0);
            CHECK(pair.a(r) == 0.0);
        }
    }
    for (double r : {1.0, 1.6, 2.2}) {
        for (int k = 1; k <= 3; ++k) {
            auto bk = [&](double x) { return pair.b(x, k - 1); };
            CHECK(pair.b(r, k) == doctest::Approx(fd1(bk, r, 1e-4)).epsilon(1e-6).scale(1.0));
            auto Kk = [&](double x) { return pair.K(x, k - 1); };
            CHECK(pair.K(r, k) == doctest::Approx(fd1(Kk, r, 1e-4)).epsilon(1e-6).scale(1.0));
        }
    }
    CHECK_THROWS_AS(PerturbationPair(-0.1, 1.0, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(PerturbationPair(0.1, 2.0, 1.0, 0.0), DomainError);
}

TEST_CASE("check_V2 examples") {
    const auto grid = geometric_grid(1e-3, 1e3, 400);
    CHECK(check_V2(Potential::log_power(3, 1.0), grid).pass);
    CHECK(check_V2(Potential::constant(3, 0.0), grid).pass);
    const auto fail = check_V2(Potential::inverted_harmonic(3, 3.0 / 16), grid);
    CHECK_FALSE(fail.pass);
    REQUIRE(fail.witness.has_value());
    CHECK(*fail.witness > 4.0 / std::sqrt(3.0));
    CHECK_THROWS_AS(check_V2(Potential::constant(3, 0.0), geometric_grid(1e-3, 1e3, 63)), DomainError);
}

TEST_CASE("check_V2 agrees with the closed-form sign analysis of the log family") {
    // G'(r) = ((alpha1 + N - 1) r^2 - (N-1)(N-3)/2) / r^3
    for (int N : {2, 3, 4, 5, 6}) {
        for (double a1 : {-0.9, -0.5, 0.0, 1.0, 3.0}) {
            const double a = a1 + 1 - N + 1.0;  // keep alpha1 > 1 - N for every N
            const auto pot = Potential::log_power(N, a);
            for (std::size_t n : {200u, 400u, 800u}) {
                const auto grid = geometric_grid(1e-3, 1e3, n);
                const double c = (N - 1.0) * (N - 3.0) / 2.0;
                bool expect = true;
                if (N >= 4) {
                    const double r0 = std::sqrt(c / (a + N - 1));
                    expect = r0 > grid.front() && r0 < grid.back();
                }
                for (double r : grid) {
                    const double ana = ((a + N - 1) * r * r - c) / (r * r * r);
                    CHECK(eval_dG(pot, r) == doctest::Approx(ana).epsilon(1e-10).scale(1.0));
                }
                CHECK(check_V2(pot, grid).pass == expect);
            }
        }
    }
}

TEST_CASE("check_V2 on a table potential uses finite differences") {
    std::vector<double> r, v;
    for (int i = 1; i <= 400; ++i) {
        r.push_back(0.05 * i);
        v.push_back(std::log(0.05 * i));
    }
    const auto pot = Potential::table(3, r, v);
    CHECK_FALSE(pot.analytic_derivatives());
    CHECK(eval_dG(pot, 1.0) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(check_V2(pot, geometric_grid(0.1, 15.0, 128)).pass);
}

TEST_CASE("table potential from CSV") {
    const auto path = std::filesystem::temp_directory_path() / "logschroed_table_test.csv";
    {
        std::ofstream out(path);
        out << "r,V\n";
        for (int i = 1; i <= 50; ++i) out << 0.1 * i << "," << -0.2 * (0.1 * i) * (0.1 * i) << "\n";
    }
    const auto pot = Potential::table_from_csv(3, path.string());
    CHECK(pot.V(1.05) == doctest::Approx(-0.2 * 1.05 * 1.05).epsilon(1e-4));
    CHECK(pot.dV(2.0) == doctest::Approx(-0.8).epsilon(1e-3));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Potential::table_from_csv(3, "/nonexistent/table.csv"), DomainError);
}

TEST_CASE("power admissibility") {
    CHECK(check_power_admissible(-1.0, 0.5, 3).pass);
    const auto f = check_power_admissible(-1.9, 0.3, 3);
    CHECK_FALSE(f.pass);
    CHECK(f.reason.find("2 min") != std::string::npos);
    CHECK(check_power_admissible(2.0, 1.0, 3).pass);
    CHECK_THROWS_AS(check_power_admissible(-2.0, 0.5, 3), DomainError);
    CHECK_THROWS_AS(check_power_admissible(0.0, 2.5, 3), DomainError);
}

TEST_CASE("growth and integrability advisory") {
    const auto adv = advise_V1(Potential::log_power(3, 1.0));
    CHECK(adv.growth_ok);
    CHECK(adv.liminf_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(adv.integrable_ok);
    const auto harm = advise_V1(Potential::inverted_harmonic(3, 0.1));
    CHECK_FALSE(harm.growth_ok);
}
