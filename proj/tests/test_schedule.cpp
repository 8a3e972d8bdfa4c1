#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vjump/numerics.hpp"
#include "vjump/schedule.hpp"

using namespace vjump;

TEST_SUITE_BEGIN("schedule");

TEST_CASE("parse round trips") {
    auto c = CoolingSchedule::parse("const:0.05");
    CHECK(c.is_constant());
    CHECK(c.eps(12.0) == doctest::Approx(0.05));

    auto l = CoolingSchedule::parse("log:c=2,t0=e");
    CHECK(l.kind() == CoolingSchedule::Kind::Logarithmic);
    CHECK(l.eps(0.0) == doctest::Approx(2.0));  // c / ln(e)
    CHECK(l.spec_string() == "log:c=2,t0=e");

    CHECK_THROWS_AS(CoolingSchedule::parse("const:-1"), InputError);
    CHECK_THROWS_AS(CoolingSchedule::parse("log:c=2;t0=e"), InputError);
    CHECK_THROWS_AS(CoolingSchedule::parse("linear:0.1"), InputError);
}

TEST_CASE("table schedule from file") {
    const char* path = "sched_table_test.txt";
    {
        std::ofstream out(path);
        out << "# t eps\n0 1.0\n10 0.5\n100 0.25\n";
    }
    auto s = CoolingSchedule::parse(std::string("table:") + path);
    CHECK(s.eps(0.0) == doctest::Approx(1.0));
    CHECK(s.eps(5.0) == doctest::Approx(0.75));
    CHECK(s.eps(1e6) == doctest::Approx(0.25));  // clamped
    s.validate_monotone(0.0, 1e4);
    std::remove(path);
}

TEST_CASE("monotone validation rejects increasing tables") {
    CHECK_THROWS_AS(CoolingSchedule::table({{0.0, 0.5}, {1.0, 0.6}}), InputError);
    CHECK_THROWS_AS(CoolingSchedule::table({{0.0, 0.5}, {1.0, -0.1}}), InputError);
}

TEST_CASE("beta integral matches a composite Simpson oracle") {
    auto check_against_simpson = [](const CoolingSchedule& s, double a, double b) {
        const int n = 20000;
        const double h = (b - a) / n;
        double acc = s.inv_eps(a) + s.inv_eps(b);
        for (int i = 1; i < n; ++i)
            acc += (i % 2 ? 4.0 : 2.0) * s.inv_eps(a + i * h);
        acc *= h / 3.0;
        CHECK(s.beta_integral(a, b) == doctest::Approx(acc).epsilon(1e-9));
    };
    check_against_simpson(CoolingSchedule::constant(0.2), 1.0, 7.5);
    check_against_simpson(CoolingSchedule::logarithmic(2.0, std::exp(1.0)), 0.5, 40.0);
    check_against_simpson(
        CoolingSchedule::table({{0.0, 1.0}, {3.0, 0.4}, {9.0, 0.4}, {20.0, 0.1}}), 0.5,
        30.0);
}

TEST_CASE("divergence test: log family flips exactly at E = c") {
    auto s = CoolingSchedule::logarithmic(1.0, std::exp(1.0));
    CHECK(divergence_test(s, 0.5) == Divergence::Diverges);
    CHECK(divergence_test(s, 2.0) == Divergence::Converges);
    CHECK(divergence_test(s, 1.0) == Divergence::Diverges);  // boundary included

    for (double c : {0.3, 1.0, 2.0, 5.0}) {
        auto sc = CoolingSchedule::logarithmic(c, std::exp(1.0));
        CHECK(divergence_test(sc, c * (1.0 - 1e-3)) == Divergence::Diverges);
        CHECK(divergence_test(sc, c * (1.0 + 1e-3)) == Divergence::Converges);
    }
}

TEST_CASE("divergence test: E = 0 and constant schedules always diverge") {
    CHECK(divergence_test(CoolingSchedule::constant(0.3), 0.0) == Divergence::Diverges);
    CHECK(divergence_test(CoolingSchedule::constant(0.3), 9.0) == Divergence::Diverges);
    CHECK(divergence_test(CoolingSchedule::logarithmic(2.0, 1.0), 0.0) ==
          Divergence::Diverges);
    CHECK(divergence_test(CoolingSchedule::table({{0.0, 1.0}, {1.0, 0.9}}), 0.0) ==
          Divergence::Diverges);
}

TEST_CASE("divergence test: table heuristic") {
    // clamped table becomes constant: window integrals grow, diverges
    auto flat = CoolingSchedule::table({{0.0, 0.4}, {1.0, 0.2}});
    CHECK(divergence_test(flat, 1.0) == Divergence::Diverges);

    // dense sample of the log family out to 3e6; verdicts should match the
    // analytic answers away from the boundary, and be cautious at it
    std::vector<std::pair<double, double>> knots;
    const double c = 3.0;
    for (double t = 0.0; t < 3.2e6; t = (t + 1.0) * 1.15)
        knots.emplace_back(t, c / std::log(std::exp(1.0) + t));
    auto tab = CoolingSchedule::table(knots);
    CHECK(divergence_test(tab, 1.0) == Divergence::Diverges);
    CHECK(divergence_test(tab, 9.0) == Divergence::Converges);
    CHECK(divergence_test(tab, 3.0) != Divergence::Converges);
}

TEST_CASE("inverse beta growth check") {
    const double theta = 1.0, eta = 0.5;
    // eps_t = (theta+eta)/ln t: equality case passes
    auto s = CoolingSchedule::logarithmic(theta + eta, 0.0);
    CHECK(inverse_beta_growth_check(s, theta, eta, 3.0, 1e6));
    // schedule cooled faster than the bound allows: fails
    auto fast = CoolingSchedule::logarithmic(theta + eta / 2.0, 0.0);
    CHECK_FALSE(inverse_beta_growth_check(fast, theta, eta, 3.0, 1e6));
    // constant schedule has zero growth
    CHECK(inverse_beta_growth_check(CoolingSchedule::constant(0.3), theta, eta));
}

TEST_SUITE_END();
