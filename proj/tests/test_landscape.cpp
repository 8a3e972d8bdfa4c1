#include <doctest.h>

#include <cmath>
#include <vector>

#include "vjump/landscape.hpp"
#include "vjump/numerics.hpp"
#include "vjump/rng.hpp"

using namespace vjump;

namespace {

// random piecewise-linear potential with dyadic breakpoint data (multiples of
// 1/64) so shift/scale identities hold bit-exactly; ends rise so the tails
// conform
Potential1D random_pwl(Rng& rng, int max_breaks = 9) {
    const int k = 4 + int(rng.uniform01() * (max_breaks - 4 + 1e-9));
    std::vector<std::pair<double, double>> pts;
    double x = 0.0;
    for (int i = 0; i < k; ++i) {
        double u;
        if (i == 0 || i == k - 1) {
            u = 2.0 + std::floor(rng.uniform01() * 64.0) / 64.0;
        } else {
            u = -2.0 + std::floor(rng.uniform01() * 256.0) / 64.0;
        }
        if (!pts.empty() && u == pts.back().second) u += 1.0 / 64.0;
        pts.emplace_back(x, u);
        x += 0.5 + std::floor(rng.uniform01() * 64.0) / 64.0;
    }
    return Potential1D::piecewise_linear(std::move(pts));
}

}  // namespace

TEST_SUITE_BEGIN("landscape");

TEST_CASE("reachable_at_height on the quartic double well") {
    auto q = Potential1D::quartic_double_well();
    CHECK(reachable_at_height(q, -1.0, 1.0, 0.0));       // barrier is exactly 0
    CHECK_FALSE(reachable_at_height(q, -1.0, 1.0, -0.1));
    CHECK(reachable_at_height(q, 0.5, 0.5, q.value(0.5)));  // empty path
}

TEST_CASE("depth examples") {
    // W-shaped potential: minimum at 1 has depth 1.5, minimum at 3 is global
    auto w = Potential1D::named("wwell");
    CHECK(depth_of_minimum(w, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(std::isinf(depth_of_minimum(w, 3.0)));
    CHECK(critical_depth(w) == doctest::Approx(1.5));

    // symmetric quartic: both minima attain the global value
    auto q = Potential1D::quartic_double_well();
    CHECK(std::isinf(depth_of_minimum(q, -1.0)));
    CHECK(std::isinf(depth_of_minimum(q, 1.0)));
    CHECK(critical_depth(q) == 0.0);

    // tilted example: right barrier 1, left side never goes lower
    auto t = Potential1D::piecewise_linear(
        {{0, 2}, {1, 0}, {2, 1}, {3, -0.5}, {4, 3}});
    CHECK(depth_of_minimum(t, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    // three-well: depths 2.5, 1, global; E* = 2.5
    auto th = Potential1D::piecewise_linear(
        {{0, 3}, {1, 0}, {2, 2}, {3, 1}, {4, 2.5}, {5, -1}, {6, 3}});
    CHECK(depth_of_minimum(th, 1.0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(depth_of_minimum(th, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::isinf(depth_of_minimum(th, 5.0)));
    CHECK(critical_depth(th) == doctest::Approx(2.5));

    CHECK_THROWS_AS(depth_of_minimum(w, 2.0), InputError);  // 2.0 is a maximum
}

TEST_CASE("cusps") {
    auto w = Potential1D::named("wwell");
    auto cw = cusp_of(w, 1.0);
    CHECK(cw.clipped_left);  // U(0)=1 < level 1.5: the domain truncates the cusp
    CHECK(cw.z_l == 0.0);
    CHECK_FALSE(cw.clipped_right);
    CHECK(cw.z_r == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(cw.bottom.size() == 1);
    CHECK(cw.bottom[0] == 1.0);

    auto t = Potential1D::piecewise_linear(
        {{0, 2}, {1, 0}, {2, 1}, {3, -0.5}, {4, 3}});
    auto ct = cusp_of(t, 1.0);
    CHECK(ct.z_l == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ct.z_r == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_FALSE(ct.clipped_left);

    // V-well queried at level 1: the whole domain, bottom {1}
    auto v = Potential1D::piecewise_linear({{0, 1}, {1, 0}, {2, 1}});
    auto cv = cusp_at_level(v, 1.0, 1.0);
    CHECK(cv.z_l == doctest::Approx(0.0));
    CHECK(cv.z_r == doctest::Approx(2.0));
    CHECK_FALSE(cv.clipped_left);
    REQUIRE(cv.bottom.size() == 1);
    CHECK(cv.bottom[0] == 1.0);

    // boundary values agree for unclipped cusps
    CHECK(std::fabs(t.value(ct.z_l) - t.value(ct.z_r)) <= 1e-9);
    CHECK(std::fabs(v.value(cv.z_l) - v.value(cv.z_r)) <= 1e-9);

    auto q = Potential1D::quartic_double_well();
    CHECK_THROWS_AS(cusp_of(q, -1.0), InputError);  // global minimum
}

TEST_CASE("cusp interior stays below the boundary level") {
    auto t = Potential1D::piecewise_linear(
        {{0, 2}, {1, 0}, {2, 1}, {3, -0.5}, {4, 3}});
    auto c = cusp_of(t, 1.0);
    CHECK(std::fabs(t.value(c.z_l) - t.value(c.z_r)) <= 1e-9);
    for (int i = 1; i < 200; ++i) {
        const double x = c.z_l + (c.z_r - c.z_l) * i / 200.0;
        CHECK(t.value(x) < c.level + 1e-12);
    }
}

TEST_CASE("oracle reproduces the hand-derived examples") {
    auto near = [](const LandscapeReport& rep, double x, double depth, double tol) {
        for (const auto& m : rep.minima)
            if (std::fabs(m.x - x) < 0.01)
                return std::isinf(depth) ? m.global : std::fabs(m.depth - depth) < tol;
        return false;
    };
    const int n = 10000;

    auto w = Potential1D::named("wwell");
    auto rw = landscape_oracle(w, n);
    const double tol_w = 2.0 * (4.0 / n) * 3.0;
    CHECK(near(rw, 1.0, 1.5, tol_w));
    CHECK(near(rw, 3.0, kInf, tol_w));
    CHECK(rw.critical_depth == doctest::Approx(1.5).epsilon(1e-3));

    auto th = Potential1D::piecewise_linear(
        {{0, 3}, {1, 0}, {2, 2}, {3, 1}, {4, 2.5}, {5, -1}, {6, 3}});
    auto rt = landscape_oracle(th, n);
    const double tol_t = 2.0 * (6.0 / n) * 4.0;
    CHECK(near(rt, 1.0, 2.5, tol_t));
    CHECK(near(rt, 3.0, 1.0, tol_t));
    CHECK(rt.critical_depth == doctest::Approx(2.5).epsilon(1e-3));

    // degenerate cases
    auto flat = landscape_oracle([](double) { return 1.0; }, 0.0, 1.0, 100);
    CHECK(flat.minima.empty());
    CHECK(flat.critical_depth == 0.0);
    auto single = landscape_oracle([](double x) { return x * x; }, -1.0, 1.0, 1000);
    REQUIRE(single.minima.size() == 1);
    CHECK(single.minima[0].global);
    CHECK(single.critical_depth == 0.0);
}

TEST_CASE("randomized corpus: oracle equivalence, shift/scale, R_E exclusion") {
    Rng rng(20240817);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = random_pwl(rng);
        const int grid_n = 10000;
        double max_slope = 0.0;
        const auto& pts = p.breakpoints();
        for (std::size_t i = 1; i < pts.size(); ++i)
            max_slope = std::max(max_slope,
                                 std::fabs((pts[i].second - pts[i - 1].second) /
                                           (pts[i].first - pts[i - 1].first)));
        const double spacing = (p.hi() - p.lo()) / (grid_n - 1);
        const double tol = 2.0 * spacing * max_slope;

        auto oracle = landscape_oracle(p, grid_n);
        CHECK(std::fabs(critical_depth(p) - oracle.critical_depth) <= tol);

        // adding a constant changes nothing (bit-exact for dyadic data)
        std::vector<std::pair<double, double>> shifted = pts, scaled = pts;
        for (auto& q : shifted) q.second += 2.0;
        for (auto& q : scaled) q.second *= 2.0;
        auto ps = Potential1D::piecewise_linear(shifted);
        auto p2 = Potential1D::piecewise_linear(scaled);
        for (const auto& c : p.critical_points()) {
            if (c.kind != CritKind::Minimum) continue;
            const double d = depth_of_minimum(p, c.x);
            const double ds = depth_of_minimum(ps, c.x);
            const double d2 = depth_of_minimum(p2, c.x);
            if (std::isinf(d)) {
                CHECK(std::isinf(ds));
                CHECK(std::isinf(d2));
            } else {
                CHECK(ds == d);
                CHECK(d2 == 2.0 * d);
            }
        }
        CHECK(critical_depth(ps) == critical_depth(p));
        CHECK(critical_depth(p2) == 2.0 * critical_depth(p));

        // no minimum of depth exactly E belongs to R_E
        for (const auto& c : p.critical_points()) {
            if (c.kind != CritKind::Minimum) continue;
            const double d = depth_of_minimum(p, c.x);
            if (!std::isfinite(d)) continue;
            CHECK_FALSE(in_reachable_set(p, d, c.x));
        }
    }
}

TEST_SUITE_END();
