#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "logschroed/errors.hpp"
#include "logschroed/io.hpp"
#include "logschroed/powerlaw.hpp"

using namespace logschroed;
namespace fs = std::filesystem;

namespace {

// Fixed-step RK4 shooting for u'' + 2/r u' = u - u^3, bisecting on
// "crosses zero" versus "turns upward".
double cubic_oracle() {
    auto classify = [](double beta) {
        const double h = 1e-3;
        double r = 1e-4;
        double u = beta + (beta - beta * beta * beta) * r * r / 6, p = (beta - beta * beta * beta) * r / 3;
        auto f = [](double r, double u, double p, double& du, double& dp) {
            du = p;
            dp = -2 / r * p + u - u * u * u;
        };
        while (r < 14.0) {
            double k1u, k1p, k2u, k2p, k3u, k3p, k4u, k4p;
            f(r, u, p, k1u, k1p);
            f(r + h / 2, u + h / 2 * k1u, p + h / 2 * k1p, k2u, k2p);
            f(r + h / 2, u + h / 2 * k2u, p + h / 2 * k2p, k3u, k3p);
            f(r + h, u + h * k3u, p + h * k3p, k4u, k4p);
            u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
            p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
            r += h;
            if (u < 0) return +1;
            if (p > 0) return -1;
        }
        return 0;
    };
    double lo = 3.0, hi = 6.0;
    REQUIRE(classify(lo) == -1);
    REQUIRE(classify(hi) == +1);
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (lo + hi);
        const int c = classify(m);
        if (c == 0) return m;
        (c < 0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

fs::path scratch_dir(const char* tag) {
    auto d = fs::temp_directory_path() / ("logschroed_" + std::string(tag) + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("cubic ground state matches the RK4 oracle") {
    const double oracle = cubic_oracle();
    CHECK(oracle == doctest::Approx(4.3373877).epsilon(1e-7));
    const auto run = solve_power(0.0, 1.0, 3);
    CHECK(std::abs(run.beta - oracle) <= 1e-6 * oracle);
    CHECK(run.admissible.pass);
}

TEST_CASE("solve_power preconditions") {
    CHECK_THROWS_AS(solve_power(0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(solve_power(-1.0, 1.5, 3), DomainError);  // -sigma alpha = 1.5 >= 1
    CHECK_THROWS_AS(solve_power(0.0, 2.0, 3), DomainError);   // energy-critical
    PowerConfig narrow;
    narrow.beta_lo = 10.0;
    narrow.beta_hi = 20.0;
    narrow.scan_points = 8;
    CHECK_THROWS_AS(solve_power(0.0, 1.0, 3, narrow), SolverError);
}

TEST_CASE("alpha = 2, sigma = 1/2 solution") {
    const auto run = solve_power(2.0, 0.5, 3);
    CHECK(run.warnings.empty());
    CHECK(std::abs(run.du0) < 1e-12);
    CHECK(run.residual <= 1e-6);
    for (double r = 0.0; r < run.u.r_max; r += 0.25) CHECK(run.u.u(r) > 0.0);
}

TEST_CASE("decay fit") {
    SUBCASE("cubic case decays like exp(-r)") {
        const auto fit = decay_bound_check(solve_power(0.0, 1.0, 3));
        CHECK(fit.exponent == 1.0);
        CHECK(fit.rate == doctest::Approx(1.0).epsilon(0.1));
    }
    SUBCASE("alpha sigma = 2 decays like exp(-c r^2)") {
        const auto fit = decay_bound_check(solve_power(2.0, 1.0, 3));
        CHECK(fit.exponent == 2.0);
        CHECK(fit.rate > 0.0);
    }
    SUBCASE("synthetic Gaussian") {
        RadialFunction g;
        g.dim = 3;
        g.r_max = 10;
        g.u = [](double r) { return std::exp(1.0 - 0.7 * r * r); };
        g.du = [](double r) { return -1.4 * r * std::exp(1.0 - 0.7 * r * r); };
        const auto fit = decay_fit(g, 2.0);
        CHECK(fit.rate == doctest::Approx(0.7).epsilon(1e-3));
        CHECK(fit.rms < 1e-10);
    }
}

TEST_CASE("radial bound constant") {
    const auto run = solve_power(0.0, 1.0, 3);
    const auto b = radial_bound_check(run);
    CHECK(std::isfinite(b.constant));
    CHECK(b.constant > 0.0);
    for (double r = 0.1; r < run.u.r_max; r += 0.37)
        CHECK(run.u.u(r) <= b.constant * b.norm * std::pow(r, -1.0) * (1 + 1e-12));
    const auto b2 = radial_bound_check(run.u.scaled(2.0), 0.0, 1.0);
    CHECK(b2.constant == doctest::Approx(b.constant).epsilon(1e-12));
    CHECK(b2.norm == doctest::Approx(2 * b.norm).epsilon(1e-12));
    const auto neg = radial_bound_check(solve_power(-1.0, 0.5, 3));
    CHECK(std::isfinite(neg.constant));
}

TEST_CASE("rescaled profile") {
    const auto run = solve_power(1.0, 0.5, 3);
    const double a = std::pow(0.5, 1.0 / 5.0), b = std::pow(0.5, -1.0 / 2.5);
    CHECK(amplitude_scale(1.0, 0.5) == doctest::Approx(a).epsilon(1e-15));
    CHECK(length_scale(1.0, 0.5) == doctest::Approx(b).epsilon(1e-15));
    for (double r : {0.0, 0.5, 1.7, 4.0}) CHECK(run.v.u(r) == doctest::Approx(a * run.u.u(b * r)).epsilon(1e-15));
    const auto res = two_form_residuals(run);
    CHECK(res.plain < 1e-5);
    CHECK(res.shifted < 1e-5);
    CHECK(res.max_diff <= 1e-10 * (1 + res.plain / 1e-7));
}

TEST_CASE("utility inequality on the sample grid") {
    const auto rep = inequality_grid();
    CHECK(rep.samples == 1000);
    CHECK(rep.violations == 0);
    CHECK(rep.worst >= -1e-12);
    // s = 4, t = 1
    for (double sg : {1.0, 0.5, 0.1, 0.01}) CHECK(std::expm1(sg * std::log(4.0)) / sg >= std::log(4.0));
}

TEST_CASE("CSV and atomic files") {
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.0) == "0");
    CHECK_THROWS_AS(format_double(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(format_double(INFINITY), DomainError);
    CsvTable t{{"r", "u"}, {{0.0, 0.01, 1.0 / 3}, {std::exp(1.0), -1e-300, 5e300}}};
    const auto back = parse_csv(to_csv(t));
    CHECK(back.header == t.header);
    CHECK(back.columns == t.columns);
    CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), ConfigError);
    const auto dir = scratch_dir("csv");
    write_file_atomic(dir / "t.csv", to_csv(t));
    CHECK(read_file(dir / "t.csv") == to_csv(t));
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
    CHECK(files == 1);
    fs::remove_all(dir);
}

TEST_CASE("limit study toward the Gausson") {
    LimitConfig cfg;
    cfg.cache_dir = scratch_dir("cache");
    const std::vector<double> sigmas{0.5, 0.25, 0.1, 0.05};
    const auto st = limit_study(0.0, sigmas, 3, cfg);
    REQUIRE(st.rows.size() == 4);
    CHECK(st.decreasing);
    CHECK(st.reference_beta == doctest::Approx(std::exp(1.5)).epsilon(1e-8));
    CHECK_FALSE(st.reference_cached);
    // regression value of the first validated run
    CHECK(st.rows.back().sup_error == doctest::Approx(0.112464).epsilon(1e-4));
    CHECK(st.rows.back().sup_error <= 0.05);
    for (const auto& r : st.rows) CHECK(r.footnote_gap < 1e-14);

    const auto again = limit_study(0.0, sigmas, 3, cfg);
    CHECK(again.reference_cached);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(again.rows[k].sup_error == st.rows[k].sup_error);
        CHECK(again.rows[k].h1_error == st.rows[k].h1_error);
    }
    fs::remove_all(cfg.cache_dir);
}

TEST_CASE("limit study toward the log r solution") {
    LimitConfig cfg;
    const auto st = limit_study(1.0, {0.5, 0.25, 0.1, 0.05}, 3, cfg);
    CHECK(st.decreasing);
    CHECK_FALSE(st.reference_cached);
    for (const auto& r : st.rows) CHECK(r.tail_rate > 0.0);
}

TEST_CASE("footnote scaling gap shrinks") {
    LimitConfig cfg;
    cfg.threads = 1;
    const auto st = limit_study(1.0, {0.05, 0.02, 0.01, 0.005}, 3, cfg);
    for (std::size_t k = 1; k < st.rows.size(); ++k) CHECK(st.rows[k].footnote_gap < st.rows[k - 1].footnote_gap);
    cfg.threads = 4;
    const auto par = limit_study(1.0, {0.05, 0.02, 0.01, 0.005}, 3, cfg);
    for (std::size_t k = 0; k < st.rows.size(); ++k) {
        CHECK(par.rows[k].sup_error == st.rows[k].sup_error);
        CHECK(par.rows[k].footnote_gap == st.rows[k].footnote_gap);
    }
}

TEST_CASE("cache location from the environment") {
    const auto dir = scratch_dir("env");
    ::setenv("LOGSCHROED_CACHE", dir.c_str(), 1);
    LimitConfig cfg;
    cfg.cache_dir = "/nonexistent/should/not/be/used";
    CHECK(resolve_cache_dir(cfg) == dir);
    const auto ref = reference_profile(0.0, 3, cfg);
    CHECK(ref.file.parent_path() == dir);
    CHECK(fs::exists(ref.file));
    const auto table = parse_csv(read_file(ref.file));
    CHECK(table.header == std::vector<std::string>{"r", "u", "du"});
    CHECK(table.column("r")[1] == 0.01);
    ::unsetenv("LOGSCHROED_CACHE");
    fs::remove_all(dir);
}

TEST_CASE("limit study preconditions") {
    CHECK_THROWS_AS(limit_study(0.0, {0.1, 0.25}, 3), DomainError);
    CHECK_THROWS_AS(limit_study(0.0, {}, 3), DomainError);
    CHECK_THROWS_AS(limit_study(-1.0, {1.5}, 3), DomainError);
}
