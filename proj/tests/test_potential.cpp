#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vjump/numerics.hpp"
#include "vjump/potential.hpp"
#include "vjump/rng.hpp"

using namespace vjump;

TEST_SUITE_BEGIN("potential");

TEST_CASE("quartic double well critical points") {
    auto p = Potential1D::quartic_double_well();
    const auto& c = p.critical_points();
    REQUIRE(c.size() == 3);
    CHECK(c[0].x == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(c[0].kind == CritKind::Minimum);
    CHECK(c[0].value == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(c[1].x == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(c[1].kind == CritKind::Maximum);
    CHECK(c[1].value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c[2].x == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c[2].kind == CritKind::Minimum);
}

TEST_CASE("single parabola and monotone line") {
    auto p = Potential1D::from_functions([](double x) { return x * x; },
                                         [](double x) { return 2.0 * x; },
                                         [](double) { return 2.0; }, -1.0, 1.0, 1000);
    REQUIRE(p.critical_points().size() == 1);
    CHECK(p.critical_points()[0].x == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(p.critical_points()[0].kind == CritKind::Minimum);

    auto line = Potential1D::from_functions([](double x) { return x; },
                                            [](double) { return 1.0; },
                                            [](double) { return 0.0; }, 0.0, 1.0, 100);
    CHECK(line.critical_points().empty());
}

TEST_CASE("Morse violation and colliding roots are reported") {
    // U = x^4: stationary point with vanishing curvature
    CHECK_THROWS_AS(Potential1D::from_functions(
                        [](double x) { return x * x * x * x; },
                        [](double x) { return 4.0 * x * x * x; },
                        [](double x) { return 12.0 * x * x; }, -1.0, 1.0, 1000),
                    NumericError);
    // two stationary points 1e-3 apart on a grid with h = 0.02
    const double r = 5e-4;
    CHECK_THROWS_AS(
        locate_critical_points(
            [r](double x) { return x * x * x / 3.0 - r * r * x; },
            [r](double x) { return (x - r) * (x + r); }, [](double x) { return 2.0 * x; },
            -1.0, 1.0, 100),
        NumericError);
}

TEST_CASE("derivatives match centered finite differences") {
    auto check = [](const Potential1D& p) {
        Rng rng(1234);
        const double h = 1e-5;
        for (int i = 0; i < 100; ++i) {
            const double x = p.lo() + (p.hi() - p.lo()) * rng.uniform01();
            const double fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            CHECK(std::fabs(p.slope(x) - fd) < 1e-8);
        }
    };
    check(Potential1D::quartic_double_well());
    check(Potential1D::piecewise_cubic(
        {{-2.0, 1.0}, {-1.0, -0.3}, {0.0, 0.8}, {1.0, -1.0}, {2.0, 2.0}}));
}

TEST_CASE("critical point invariants: alternation, Morse, monotone stretches") {
    for (const auto& p :
         {Potential1D::quartic_double_well(-0.1),
          Potential1D::piecewise_cubic(
              {{-2.0, 2.0}, {-1.0, -0.3}, {0.0, 0.6}, {1.0, -1.2}, {2.0, 2.5}})}) {
        const auto& crit = p.critical_points();
        REQUIRE(!crit.empty());
        for (std::size_t i = 0; i < crit.size(); ++i) {
            CHECK(std::fabs(p.slope(crit[i].x)) <= 1e-10);
            CHECK(std::fabs(p.curvature(crit[i].x)) >= 1e-8);
            if (i > 0) CHECK(crit[i].kind != crit[i - 1].kind);
        }
        // strict monotonicity between consecutive critical points
        std::vector<double> knots{p.lo()};
        for (const auto& c : crit) knots.push_back(c.x);
        knots.push_back(p.hi());
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            double prev = p.value(knots[k] + 1e-9);
            const int dir = p.value(knots[k + 1]) > p.value(knots[k]) ? +1 : -1;
            for (int j = 1; j <= 200; ++j) {
                const double x = knots[k] + (knots[k + 1] - knots[k]) * j / 200.0;
                const double v = p.value(x - 1e-9);
                CHECK(dir * (v - prev) >= -1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("piecewise linear potentials") {
    auto w = Potential1D::named("wwell");
    REQUIRE(w.is_piecewise_linear());
    const auto& c = w.critical_points();
    REQUIRE(c.size() == 3);
    CHECK(c[0].x == 1.0);
    CHECK(c[0].kind == CritKind::Minimum);
    CHECK(c[1].x == 2.0);
    CHECK(c[1].kind == CritKind::Maximum);
    CHECK(c[2].x == 3.0);
    CHECK(w.value(2.5) == doctest::Approx(0.25));  // on the segment (2,1.5)-(3,-1)
    CHECK(w.value(-1.0) == doctest::Approx(2.0));  // left tail extends the first slope

    // the scanning locator rejects piecewise-linear data (zero curvature)
    CHECK_THROWS_AS(
        locate_critical_points([&w](double x) { return w.value(x); },
                               [&w](double x) { return w.slope(x); },
                               [&w](double x) { return w.curvature(x); }, 0.0, 4.0, 500),
        NumericError);

    CHECK_THROWS_AS(Potential1D::piecewise_linear({{0.0, 1.0}}), InputError);
    CHECK_THROWS_AS(Potential1D::piecewise_linear({{0.0, 1.0}, {1.0, 1.0}}),
                    InputError);
    CHECK_THROWS_AS(Potential1D::piecewise_linear({{1.0, 1.0}, {0.0, 0.0}}),
                    InputError);
}

TEST_CASE("text format parsing") {
    auto q = Potential1D::parse("kind=quartic\ntilt=-0.1\ndomain=-3 3\n");
    CHECK(q.value(1.0) == doctest::Approx(0.25 - 0.5 - 0.1));
    auto pl = Potential1D::parse("# comment\nkind=piecewise_linear\n0 1\n1 0\n2 1.5\n");
    CHECK(pl.is_piecewise_linear());
    CHECK(pl.value(0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Potential1D::parse("0 1\n1 0\n"), InputError);
    CHECK_THROWS_AS(Potential1D::parse("kind=banana\n"), InputError);

    auto t = PotentialTorus::parse("kind=torus_trig\ndim=2\n0.5 0 1 0\n0.5 0 0 1\n");
    CHECK(t.dim() == 2);
    std::vector<double> x{0.0, 0.0};
    CHECK(t.value(x) == doctest::Approx(1.0));
}

TEST_CASE("torus potential: periodicity, gradient, sup bound") {
    auto p = PotentialTorus::named("cos", 2);
    Rng rng(77);
    std::vector<double> x(2), xs(2), g(2);
    for (int i = 0; i < 50; ++i) {
        x[0] = rng.uniform01();
        x[1] = rng.uniform01();
        for (int axis = 0; axis < 2; ++axis) {
            xs = x;
            xs[axis] = std::fmod(xs[axis] + 1.0, 1.0);
            CHECK(std::fabs(p.value(x) - p.value(xs)) <= 1e-10);
        }
        // gradient vs centered differences
        const double h = 1e-6;
        p.gradient(x, g);
        double gn2 = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            xs = x;
            xs[axis] = x[axis] + h;
            const double up = p.value(xs);
            xs[axis] = x[axis] - h;
            const double dn = p.value(xs);
            CHECK(std::fabs(g[axis] - (up - dn) / (2.0 * h)) < 1e-6);
            gn2 += g[axis] * g[axis];
        }
        CHECK(std::sqrt(gn2) <= p.grad_sup() + 1e-12);
    }
    // coefficient bound for (cos(2pi x1)+cos(2pi x2))/2 is pi + pi
    CHECK(p.grad_sup() == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("grid-scan gradient bound") {
    auto f = [](std::span<const double> x) {
        return 0.5 * (std::cos(2 * std::numbers::pi * x[0]) +
                      std::cos(2 * std::numbers::pi * x[1]));
    };
    auto gf = [](std::span<const double> x, std::span<double> g) {
        g[0] = -std::numbers::pi * std::sin(2 * std::numbers::pi * x[0]);
        g[1] = -std::numbers::pi * std::sin(2 * std::numbers::pi * x[1]);
    };
    auto p = PotentialTorus::from_functions(2, f, gf);
    const double truth = std::numbers::pi * std::sqrt(2.0);
    CHECK(p.grad_sup() >= truth);
    CHECK(p.grad_sup() <= truth * 1.11);

    CHECK_THROWS_AS(PotentialTorus::from_functions(4, f, gf), InputError);
}

TEST_CASE("directional profile") {
    // zero potential
    auto z = PotentialTorus::trig(2, {});
    std::vector<double> x{0.3, 0.4}, y{1.0, 0.0};
    auto prof = directional_profile(z, x, y);
    CHECK(prof.value(0.7) == 0.0);
    CHECK(prof.slope(0.7) == 0.0);

    // d=1 torus, U(x) = cos(2 pi x)/(2 pi): slope along +1 is -sin(2 pi s)
    TrigTerm t;
    t.cos_coef = 1.0 / (2.0 * std::numbers::pi);
    t.wave = {1};
    auto c1 = PotentialTorus::trig(1, {t});
    std::vector<double> x0{0.0}, e1{1.0};
    auto pr = directional_profile(c1, x0, e1);
    CHECK(pr.value(0.25) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pr.slope(0.25) == doctest::Approx(-1.0).epsilon(1e-12));

    // periodic wrap: from 0.9 moving 0.2 lands at 0.1
    std::vector<double> x9{0.9};
    auto pw = directional_profile(c1, x9, e1);
    std::vector<double> x01{0.1};
    CHECK(pw.value(0.2) == doctest::Approx(c1.value(x01)).epsilon(1e-12));

    // non-unit direction rejected
    std::vector<double> bad{0.5, 0.5};
    CHECK_THROWS_AS(directional_profile(z, x, bad), InputError);
}

TEST_CASE("directional profile slope integrates back to the value difference") {
    auto p = PotentialTorus::named("cos", 2);
    std::vector<double> x{0.15, 0.85};
    std::vector<double> y{3.0 / 5.0, 4.0 / 5.0};
    auto prof = directional_profile(p, x, y);
    const double s_max = 0.8;
    const int n = 10000;
    double acc = 0.5 * (prof.slope(0.0) + prof.slope(s_max));
    for (int i = 1; i < n; ++i) acc += prof.slope(s_max * i / n);
    acc *= s_max / n;
    CHECK(std::fabs(acc - (prof.value(s_max) - prof.value(0.0))) < 1e-6);
}

TEST_SUITE_END();
