#include "vjump/landscape.hpp"

#include <algorithm>
#include <cmath>

#include "vjump/numerics.hpp"

namespace vjump {

namespace {

const CriticalPoint* find_minimum(const Potential1D& p, double x) {
    for (const auto& c : p.critical_points()) {
        if (std::fabs(c.x - x) <= 1e-9 * (1.0 + std::fabs(x)) &&
            c.kind == CritKind::Minimum)
            return &c;
    }
    return nullptr;
}

// Directional depth scan.  Walks the critical points on one side of the
// minimum, tracking the running barrier until the potential first drops
// strictly below the minimum's value.  Returns the barrier height (absolute
// energy), or +inf when the potential never goes lower on that side.
double side_barrier(const Potential1D& p, double x0, double u0, int dir) {
    const auto& crit = p.critical_points();
    double run_max = u0;
    if (dir > 0) {
        for (const auto& c : crit) {
            if (c.x <= x0) continue;
            if (strictly_lower(c.value, u0)) return run_max;
            run_max = std::max(run_max, c.value);
        }
        const double edge = p.value(p.hi());
        if (strictly_lower(edge, u0)) return run_max;
        if (p.slope(p.hi()) > 0.0) return kInf;  // rising tail
        return std::max(run_max, edge);          // declared tail goes down: crossing past the edge
    }
    for (auto it = crit.rbegin(); it != crit.rend(); ++it) {
        if (it->x >= x0) continue;
        if (strictly_lower(it->value, u0)) return run_max;
        run_max = std::max(run_max, it->value);
    }
    const double edge = p.value(p.lo());
    if (strictly_lower(edge, u0)) return run_max;
    if (p.slope(p.lo()) < 0.0) return kInf;
    return std::max(run_max, edge);
}

// Solve U(t) = level on a monotone stretch [a,b] (exact segment interpolation
// for piecewise-linear potentials).
double level_cross(const Potential1D& p, double a, double b, double level) {
    if (p.is_piecewise_linear()) {
        const auto& pts = p.breakpoints();
        const bool up = p.value(b) >= p.value(a);
        // walk the breakpoints inside [min,max] in path order
        const double xa = std::min(a, b), xb = std::max(a, b);
        std::vector<std::pair<double, double>> nodes;
        nodes.emplace_back(a, p.value(a));
        if (a < b) {
            for (const auto& q : pts)
                if (q.first > xa && q.first < xb) nodes.push_back(q);
        } else {
            for (auto it = pts.rbegin(); it != pts.rend(); ++it)
                if (it->first > xa && it->first < xb) nodes.push_back(*it);
        }
        nodes.emplace_back(b, p.value(b));
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const auto [x1, u1] = nodes[i - 1];
            const auto [x2, u2] = nodes[i];
            const bool bracket = up ? (u1 <= level && level <= u2)
                                    : (u2 <= level && level <= u1);
            if (bracket && u1 != u2)
                return x1 + (level - u1) / (u2 - u1) * (x2 - x1);
        }
        return b;
    }
    auto f = [&](double t) { return p.value(t) - level; };
    auto df = [&](double t) { return p.slope(t); };
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (f(lo) == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    if ((f(lo) > 0.0) == (f(hi) > 0.0)) return b;  // crossing sits at the far end
    return solve_monotone(f, df, lo, hi, 1e-12);
}

}  // namespace

bool reachable_at_height(const Potential1D& p, double x, double z, double V) {
    const double tol = 1e-12 * (1.0 + std::fabs(V));
    double path_max = std::max(p.value(x), p.value(z));
    const double a = std::min(x, z), b = std::max(x, z);
    for (const auto& c : p.critical_points())
        if (c.x > a && c.x < b) path_max = std::max(path_max, c.value);
    return path_max <= V + tol;
}

double depth_of_minimum(const Potential1D& p, double x_min) {
    const CriticalPoint* c = find_minimum(p, x_min);
    if (!c) throw InputError("depth_of_minimum: x is not a listed local minimum");
    const double left = side_barrier(p, c->x, c->value, -1);
    const double right = side_barrier(p, c->x, c->value, +1);
    const double barrier = std::min(left, right);
    if (!std::isfinite(barrier)) return kInf;
    return barrier - c->value;
}

double critical_depth(const Potential1D& p) {
    if (p.critical_points().empty())
        throw InputError("critical_depth: potential has no critical points");
    double best = 0.0;
    for (const auto& c : p.critical_points()) {
        if (c.kind != CritKind::Minimum) continue;
        const double d = depth_of_minimum(p, c.x);
        if (std::isfinite(d)) best = std::max(best, d);
    }
    return best;
}

Cusp cusp_at_level(const Potential1D& p, double x, double E) {
    if (!(E > 0.0)) throw InputError("cusp_at_level: E must be > 0");
    const double level = p.value(x) + E;
    const auto& crit = p.critical_points();

    Cusp cusp;
    cusp.level = level;

    // right boundary
    {
        double inside = x;
        bool found = false;
        for (const auto& c : crit) {
            if (c.x <= x) continue;
            if (c.value < level - 1e-15 * (1.0 + std::fabs(level))) {
                inside = c.x;
                continue;
            }
            cusp.z_r = level_cross(p, inside, c.x, level);
            found = true;
            break;
        }
        if (!found) {
            if (p.value(p.hi()) >= level) {
                cusp.z_r = level_cross(p, inside, p.hi(), level);
            } else {
                cusp.z_r = p.hi();
                cusp.clipped_right = true;
            }
        }
    }
    // left boundary
    {
        double inside = x;
        bool found = false;
        for (auto it = crit.rbegin(); it != crit.rend(); ++it) {
            if (it->x >= x) continue;
            if (it->value < level - 1e-15 * (1.0 + std::fabs(level))) {
                inside = it->x;
                continue;
            }
            cusp.z_l = level_cross(p, inside, it->x, level);
            found = true;
            break;
        }
        if (!found) {
            if (p.value(p.lo()) >= level) {
                cusp.z_l = level_cross(p, inside, p.lo(), level);
            } else {
                cusp.z_l = p.lo();
                cusp.clipped_left = true;
            }
        }
    }

    // bottom: minima attaining the lowest value inside (z_l, z_r)
    double low = p.value(x);
    for (const auto& c : crit)
        if (c.kind == CritKind::Minimum && c.x > cusp.z_l && c.x < cusp.z_r)
            low = std::min(low, c.value);
    for (const auto& c : crit)
        if (c.kind == CritKind::Minimum && c.x > cusp.z_l && c.x < cusp.z_r &&
            !strictly_lower(low, c.value))
            cusp.bottom.push_back(c.x);
    if (cusp.bottom.empty()) cusp.bottom.push_back(x);
    return cusp;
}

Cusp cusp_of(const Potential1D& p, double x_min) {
    const double d = depth_of_minimum(p, x_min);
    if (!std::isfinite(d))
        throw InputError("cusp_of: minimum is global (infinite depth)");
    return cusp_at_level(p, x_min, d);
}

LandscapeReport analyze_landscape(const Potential1D& p) {
    LandscapeReport rep;
    for (const auto& c : p.critical_points()) {
        if (c.kind != CritKind::Minimum) continue;
        const double d = depth_of_minimum(p, c.x);
        rep.minima.push_back({c.x, c.value, d, !std::isfinite(d)});
        if (std::isfinite(d)) {
            rep.critical_depth = std::max(rep.critical_depth, d);
            rep.cusps.push_back(cusp_of(p, c.x));
        }
    }
    return rep;
}

LandscapeReport landscape_oracle(const Potential1D& p, int grid_n) {
    return landscape_oracle([&p](double x) { return p.value(x); }, p.lo(), p.hi(),
                            grid_n);
}

LandscapeReport landscape_oracle(const std::function<double(double)>& f, double lo,
                                 double hi, int grid_n) {
    if (grid_n < 10) throw InputError("landscape_oracle: grid_n must be >= 10");
    std::vector<double> u(grid_n);
    for (int i = 0; i < grid_n; ++i) u[i] = f(lo + (hi - lo) * i / (grid_n - 1));

    LandscapeReport rep;
    for (int i = 1; i + 1 < grid_n; ++i) {
        if (!(u[i] < u[i - 1] && u[i] < u[i + 1])) continue;
        double right = kInf, left = kInf, run = u[i];
        for (int j = i + 1; j < grid_n; ++j) {
            if (u[j] < u[i]) {
                right = run;
                break;
            }
            run = std::max(run, u[j]);
        }
        run = u[i];
        for (int j = i - 1; j >= 0; --j) {
            if (u[j] < u[i]) {
                left = run;
                break;
            }
            run = std::max(run, u[j]);
        }
        const double barrier = std::min(left, right);
        const double depth = std::isfinite(barrier) ? barrier - u[i] : kInf;
        rep.minima.push_back(
            {lo + (hi - lo) * i / (grid_n - 1), u[i], depth, !std::isfinite(depth)});
        if (std::isfinite(depth))
            rep.critical_depth = std::max(rep.critical_depth, depth);
    }
    return rep;
}

std::vector<double> minima_deeper_than(const Potential1D& p, double E) {
    std::vector<double> out;
    for (const auto& c : p.critical_points()) {
        if (c.kind != CritKind::Minimum) continue;
        if (depth_of_minimum(p, c.x) > E) out.push_back(c.x);
    }
    return out;
}

bool in_reachable_set(const Potential1D& p, double E, double z) {
    for (double y : minima_deeper_than(p, E))
        if (reachable_at_height(p, y, z, p.value(y) + E)) return true;
    return false;
}

}  // namespace vjump
